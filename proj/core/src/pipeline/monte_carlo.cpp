#include "lienav/pipeline/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include "lienav/error.hpp"
#include "lienav/ins/earth.hpp"

namespace lienav::pipeline {

namespace {

double wrap_pi(double a) {
  a = std::remainder(a, 2.0 * std::numbers::pi);
  return a <= -std::numbers::pi ? a + 2.0 * std::numbers::pi : a;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

}  // namespace

std::size_t resolve_thread_count(std::size_t requested) {
  std::size_t n = requested;
  if (n == 0) n = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("LIE_NAV_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap > 0) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
  }
  return n;
}

TrialResult run_trial(const MonteCarloConfig& cfg, std::size_t index) {
  TrialResult r;
  r.index = index;
  r.seed = cfg.seed + index;
  try {
    sim::SimConfig sc = cfg.sim;
    sc.noise.seed = r.seed;
    const sim::SimDataset data = sim::simulate(sc);
    const PipelineResult res = run_pipeline(data.imu, data.gnss, cfg.options, cfg.smooth);

    const std::size_t start = res.alignment.start_index;
    r.psi0 = res.alignment.psi0;
    const GroupElement& x0 = data.truth[start];
    r.heading_error = wrap_pi(r.psi0 - ins::euler_from_attitude_ecef(x0.rot(), x0.pos()).z());
    r.stats = res.stats;

    std::vector<TimedState> truth(data.imu.size());
    for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = {data.imu[i].t, data.truth[i]};
    accumulate_errors(res, truth, cfg.options.skip_seconds, r.filtered, r.smoothed);

    if (cfg.compute_nees) {
      const double t_eval = res.t.front() + cfg.options.skip_seconds - 1e-6;
      std::size_t first = 0;
      while (first < res.t.size() && res.t[first] < t_eval) ++first;
      const std::span<const GroupElement> tr(data.truth.data() + start + first, res.t.size() - first);
      r.nees_filtered = mean(estimation::nees(std::span(res.filtered).subspan(first), tr));
      if (!res.smoothed.empty()) {
        r.nees_smoothed = mean(estimation::nees(std::span(res.smoothed).subspan(first), tr));
      }
    }
    r.ok = true;
  } catch (const Error& e) {
    r.ok = false;
    r.failure = std::string(to_string(e.kind())) + ": " + e.what();
  }
  return r;
}

MonteCarloReport run_monte_carlo(const MonteCarloConfig& cfg,
                                 const std::function<void(const TrialResult&)>& progress) {
  if (cfg.trials == 0) throw Error(ErrorKind::kInvalidArgument, "monte carlo: zero trials");
  std::vector<TrialResult> results(cfg.trials);
  const std::size_t workers = std::min(resolve_thread_count(cfg.threads), cfg.trials);

  std::atomic<std::size_t> next{0};
  std::mutex progress_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < cfg.trials; i = next++) {
      results[i] = run_trial(cfg, i);
      if (progress) {
        std::lock_guard lock(progress_mutex);
        progress(results[i]);
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  MonteCarloReport report;
  report.trials = cfg.trials;
  ErrorAccumulator f, s;
  std::size_t ok = 0;
  for (const TrialResult& r : results) {
    if (!r.ok) {
      ++report.failed;
      continue;
    }
    ++ok;
    f.merge(r.filtered);
    s.merge(r.smoothed);
    report.nees_filtered += r.nees_filtered;
    report.nees_smoothed += r.nees_smoothed;
  }
  if (static_cast<double>(report.failed) >
      cfg.max_failure_fraction * static_cast<double>(cfg.trials)) {
    std::string first;
    for (const TrialResult& r : results) {
      if (!r.ok) {
        first = "trial " + std::to_string(r.index) + ": " + r.failure;
        break;
      }
    }
    throw Error(ErrorKind::kDivergence, "monte carlo: " + std::to_string(report.failed) + " of " +
                                            std::to_string(cfg.trials) + " trials failed (" +
                                            first + ")");
  }
  report.filtered = f.rmse();
  report.smoothed = s.rmse();
  report.epochs = f.count();
  if (ok > 0) {
    report.nees_filtered /= static_cast<double>(ok);
    report.nees_smoothed /= static_cast<double>(ok);
  }
  report.per_trial = std::move(results);
  return report;
}

void write_monte_carlo_report(const std::filesystem::path& path, const MonteCarloReport& report) {
  std::FILE* f = std::fopen(path.string().c_str(), "w");
  if (!f) throw Error(ErrorKind::kData, "cannot write " + path.string());
  std::fprintf(f, "trials,%zu\nfailed,%zu\nepochs,%zu\nchannel,filtered,smoothed\n", report.trials,
               report.failed, report.epochs);
  for (std::size_t i = 0; i < kChannels; ++i) {
    std::fprintf(f, "%s,%.12g,%.12g\n", std::string(kChannelNames[i]).c_str(), report.filtered[i],
                 report.smoothed[i]);
  }
  std::fprintf(f, "smoothed_above_filtered,%s\n",
               dominance_violations(report.filtered, report.smoothed).c_str());
  if (report.nees_filtered > 0.0) {
    std::fprintf(f, "mean_nees,%.12g,%.12g\n", report.nees_filtered, report.nees_smoothed);
  }
  std::fprintf(f, "\ntrial,seed,status,psi0_deg,heading_error_deg,fused,rejected,dropped\n");
  for (const TrialResult& r : report.per_trial) {
    std::fprintf(f, "%zu,%llu,%s,%.12g,%.12g,%zu,%zu,%zu\n", r.index,
                 static_cast<unsigned long long>(r.seed), r.ok ? "ok" : "failed",
                 r.psi0 * 180.0 / std::numbers::pi, r.heading_error * 180.0 / std::numbers::pi,
                 r.stats.fused, r.stats.rejected, r.stats.dropped);
  }
  const bool good = std::ferror(f) == 0;
  if (std::fclose(f) != 0 || !good) throw Error(ErrorKind::kData, "write failed: " + path.string());
}

}  // namespace lienav::pipeline
