#include <cmath>
#include <string>
#include <vector>

#include "lienav/alignment/alignment.hpp"
#include "lienav/error.hpp"

namespace lienav::alignment {

namespace {

// Running sums over a sample range.
struct Prefix {
  std::vector<double> gn, gn2, an, an2;
  std::vector<Vec3> g, a;

  explicit Prefix(std::span<const ImuSample> imu)
      : gn(imu.size() + 1, 0.0), gn2(imu.size() + 1, 0.0), an(imu.size() + 1, 0.0),
        an2(imu.size() + 1, 0.0), g(imu.size() + 1, Vec3::Zero()), a(imu.size() + 1, Vec3::Zero()) {
    for (std::size_t i = 0; i < imu.size(); ++i) {
      const double wg = imu[i].gyro.norm();
      const double wa = imu[i].accel.norm();
      gn[i + 1] = gn[i] + wg;
      gn2[i + 1] = gn2[i] + wg * wg;
      an[i + 1] = an[i] + wa;
      an2[i + 1] = an2[i] + wa * wa;
      g[i + 1] = g[i] + imu[i].gyro;
      a[i + 1] = a[i] + imu[i].accel;
    }
  }

  static double stdev(const std::vector<double>& s, const std::vector<double>& s2, std::size_t b,
                      std::size_t e) {
    const double n = static_cast<double>(e - b);
    const double m = (s[e] - s[b]) / n;
    return std::sqrt(std::max(0.0, (s2[e] - s2[b]) / n - m * m));
  }
  Vec3 mean_g(std::size_t b, std::size_t e) const { return (g[e] - g[b]) / double(e - b); }
  Vec3 mean_a(std::size_t b, std::size_t e) const { return (a[e] - a[b]) / double(e - b); }
};

}  // namespace

StaticInterval detect_static(std::span<const ImuSample> imu, double window_s,
                             const StaticThresholds& th) {
  if (imu.size() < 2) {
    throw Error(ErrorKind::kAlignmentImpossible, "detect_static: IMU stream too short");
  }
  const double dt = (imu.back().t - imu.front().t) / static_cast<double>(imu.size() - 1);
  const auto w = static_cast<std::size_t>(std::llround(window_s / dt));
  if (w < 2 || w > imu.size()) {
    throw Error(ErrorKind::kAlignmentImpossible, "detect_static: stream shorter than one window");
  }

  const Prefix pre(imu);
  const Vec3 ref_g = pre.mean_g(0, w);
  const Vec3 ref_a = pre.mean_a(0, w);
  std::size_t end = 0;  // exclusive end of the passing prefix
  bool moved = false;
  for (std::size_t b = 0; b + w <= imu.size(); b += w) {
    const std::size_t e = b + w;
    const bool quiet = Prefix::stdev(pre.gn, pre.gn2, b, e) < th.gyro_std &&
                       Prefix::stdev(pre.an, pre.an2, b, e) < th.accel_std &&
                       (pre.mean_g(b, e) - ref_g).norm() < th.gyro_mean_drift &&
                       (pre.mean_a(b, e) - ref_a).norm() < th.accel_mean_drift;
    if (!quiet) {
      moved = true;
      break;
    }
    end = e;
  }
  if (!moved) {
    end = imu.size();  // stationary throughout; keep the trailing partial window
  } else if (end >= w) {
    end -= w;
  }
  if (end < th.min_samples) {
    throw Error(ErrorKind::kAlignmentImpossible,
                "detect_static: stationary prefix has " + std::to_string(end) +
                    " samples, need " + std::to_string(th.min_samples));
  }

  StaticInterval out;
  out.first = 0;
  out.last = end - 1;
  out.t_start = imu.front().t;
  out.t_end = imu[end - 1].t;
  out.sample_count = end;
  out.mean_accel = pre.mean_a(0, end);
  out.mean_gyro = pre.mean_g(0, end);
  return out;
}

}  // namespace lienav::alignment
