#include "lienav/pipeline/pipeline.hpp"

#include <cmath>
#include <cstdio>
#include <string>
#include <utility>

#include "lienav/error.hpp"

namespace lienav::pipeline {

namespace {

constexpr double kTimeTolerance = 1e-6;

template <typename F>
auto stage(const char* name, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(name) + ": " + e.what());
  }
}

std::span<const GnssFix> fixes_from(std::span<const GnssFix> gnss, double t0) {
  std::size_t i = 0;
  while (i < gnss.size() && gnss[i].t < t0 - kTimeTolerance) ++i;
  return gnss.subspan(i);
}

}  // namespace

AlignmentResult run_alignment(std::span<const ImuSample> imu, std::span<const GnssFix> gnss,
                              const PipelineOptions& options) {
  if (imu.empty()) throw Error(ErrorKind::kData, "ingestion: no IMU samples");
  if (gnss.empty()) throw Error(ErrorKind::kInsufficientFixes, "ingestion: no measurements");

  AlignmentResult out;
  out.stat = stage("static detection", [&] {
    return alignment::detect_static(imu, options.static_window_s, options.static_thresholds);
  });
  out.start_index = out.stat.last + 1;
  if (out.start_index + 1 >= imu.size()) {
    throw Error(ErrorKind::kAlignmentImpossible, "static detection: no motion after the static interval");
  }
  out.level = stage("leveling", [&] { return alignment::leveling(out.stat.mean_accel); });

  if (options.fixed_heading) {
    out.psi0 = *options.fixed_heading;
  } else {
    alignment::HeadingProblem problem;
    problem.imu = imu.subspan(out.start_index);
    problem.gnss = gnss;
    problem.stat = out.stat;
    problem.noise = options.noise;
    problem.lever = options.lever;
    problem.p0 = options.p0;
    problem.prefix_s = options.prefix_s;
    problem.sigma_psi = options.sigma_psi;
    problem.prior_mean = options.prior_mean;
    out.heading = stage("heading alignment", [&] {
      return alignment::heading_align(problem, options.guesses, options.allow_extrapolation);
    });
    out.psi0 = out.heading->psi_star;
  }
  out.initial = stage("initialization", [&] {
    return alignment::init_state(out.stat, gnss, out.psi0, options.lever, options.p0);
  });
  return out;
}

PipelineResult run_pipeline(std::span<const ImuSample> imu, std::span<const GnssFix> gnss,
                            const PipelineOptions& options, bool smooth) {
  PipelineResult out;
  out.alignment = run_alignment(imu, gnss, options);

  const std::span<const ImuSample> flight = imu.subspan(out.alignment.start_index);
  estimation::FilterOptions fopt;
  fopt.gate = options.gate;
  fopt.lever = options.lever;
  fopt.keep_history = true;
  const estimation::InsProcessModel model(options.noise);
  estimation::FilterRun run = stage("filter", [&] {
    return estimation::run_filter(out.alignment.initial, flight, fixes_from(gnss, flight.front().t),
                                  model, fopt);
  });
  out.stats = run.stats;
  if (smooth) {
    out.smoothed = stage("smoother", [&] { return estimation::rts_smooth(run.history); });
  }
  out.t.reserve(run.history.size());
  out.filtered.reserve(run.history.size());
  for (estimation::FilterEpoch& e : run.history) {
    out.t.push_back(e.t);
    out.filtered.push_back(std::move(e.updated));
  }
  return out;
}

void accumulate_errors(const PipelineResult& result, std::span<const TimedState> truth,
                       double skip_seconds, ErrorAccumulator& filtered,
                       ErrorAccumulator& smoothed) {
  if (result.t.empty()) return;
  const double t_eval = result.t.front() + skip_seconds - kTimeTolerance;
  std::size_t j = 0;
  for (std::size_t k = 0; k < result.t.size(); ++k) {
    const double t = result.t[k];
    if (t < t_eval) continue;
    while (j < truth.size() && truth[j].t < t - kTimeTolerance) ++j;
    if (j == truth.size() || std::abs(truth[j].t - t) > kTimeTolerance) {
      throw Error(ErrorKind::kMisaligned, "evaluation: no truth epoch at t=" + std::to_string(t));
    }
    filtered.add(result.filtered[k].mean, truth[j].x);
    if (!result.smoothed.empty()) smoothed.add(result.smoothed[k].mean, truth[j].x);
  }
}

void write_rmse_report(const std::filesystem::path& path, const RmseReport& report) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw Error(ErrorKind::kData, "cannot write " + path.string());
  std::fprintf(f, "trials,%zu\nepochs,%zu\nchannel,filtered,smoothed\n", report.trials, report.epochs);
  for (std::size_t i = 0; i < kChannels; ++i) {
    std::fprintf(f, "%s,%.12g,%.12g\n", std::string(kChannelNames[i]).c_str(), report.filtered[i],
                 report.smoothed[i]);
  }
  std::fprintf(f, "smoothed_above_filtered,%s\n",
               dominance_violations(report.filtered, report.smoothed).c_str());
  const bool ok = std::ferror(f) == 0;
  if (std::fclose(f) != 0 || !ok) throw Error(ErrorKind::kData, "write failed: " + path.string());
}

std::optional<RmseReport> run_pipeline_files(const PipelineConfig& cfg, bool smooth) {
  const auto imu = stage("ingestion", [&] {
    return parse_imu_csv(cfg.imu_path, cfg.gyro_unit, cfg.accel_unit);
  });
  const auto gnss = stage("ingestion", [&] { return parse_gnss_csv(cfg.gnss_path, cfg.default_gnss_sigma); });
  std::vector<TimedState> truth;
  if (!cfg.truth_path.empty()) {
    truth = stage("ingestion", [&] { return parse_truth_csv(cfg.truth_path); });
  }

  const PipelineResult result = run_pipeline(imu, gnss, cfg.options, smooth);

  std::vector<std::filesystem::path> written;
  try {
    std::filesystem::create_directories(cfg.output_dir);
    const auto filtered_path = cfg.output_dir / "filtered.csv";
    written.push_back(filtered_path);
    stage("export", [&] { write_trajectory_csv(filtered_path, result.t, result.filtered); });
    if (smooth) {
      const auto smoothed_path = cfg.output_dir / "smoothed.csv";
      written.push_back(smoothed_path);
      stage("export", [&] { write_trajectory_csv(smoothed_path, result.t, result.smoothed); });
    }
    if (truth.empty()) return std::nullopt;

    ErrorAccumulator f, s;
    accumulate_errors(result, truth, cfg.options.skip_seconds, f, s);
    RmseReport report;
    report.filtered = f.rmse();
    report.smoothed = s.rmse();
    report.epochs = f.count();
    const auto report_path = cfg.output_dir / "rmse_report.txt";
    written.push_back(report_path);
    stage("export", [&] { write_rmse_report(report_path, report); });
    return report;
  } catch (...) {
    std::error_code ec;
    for (const auto& p : written) std::filesystem::remove(p, ec);
    throw;
  }
}

}  // namespace lienav::pipeline
