// lienav: simulate datasets, align, filter, smooth, and run Monte Carlo
// campaigns from the command line.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "lienav/error.hpp"
#include "lienav/ins/earth.hpp"
#include "lienav/pipeline/monte_carlo.hpp"

namespace fs = std::filesystem;
using namespace lienav;
using namespace lienav::pipeline;

namespace {

struct Flags {
  std::string config;
  std::string imu;
  std::string gnss;
  std::string truth;
  std::string out;
  std::string profile;
  std::optional<std::size_t> trials;
  std::optional<std::uint64_t> seed;
  std::string gate;
  std::optional<double> kappa;
  std::optional<double> skip_seconds;
};

void add_common(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "key = value configuration file")->check(CLI::ExistingFile);
  app->add_option("--out", f.out, "output directory");
  app->add_option("--gate", f.gate, "innovation gating")->check(CLI::IsMember({"soft", "hard", "off"}));
  app->add_option("--kappa", f.kappa, "gate threshold on the squared Mahalanobis distance");
}

void add_inputs(CLI::App* app, Flags& f, bool with_truth) {
  app->add_option("--imu", f.imu, "IMU CSV");
  app->add_option("--gnss", f.gnss, "GNSS CSV");
  if (with_truth) {
    app->add_option("--truth", f.truth, "truth CSV; enables the RMSE report");
    app->add_option("--skip-seconds", f.skip_seconds, "exclude this long after filter start from RMSE");
  }
}

void add_sim(CLI::App* app, Flags& f) {
  app->add_option("--profile", f.profile, "trajectory profile")
      ->check(CLI::IsMember({"helicoidal", "rectangular", "circular"}));
  app->add_option("--seed", f.seed, "random seed");
}

PipelineConfig resolve(const Flags& f) {
  PipelineConfig cfg = f.config.empty() ? PipelineConfig{} : load_config(f.config);
  if (!f.imu.empty()) cfg.imu_path = f.imu;
  if (!f.gnss.empty()) cfg.gnss_path = f.gnss;
  if (!f.truth.empty()) cfg.truth_path = f.truth;
  if (!f.out.empty()) cfg.output_dir = f.out;
  if (!f.profile.empty()) cfg.sim.profile = sim::parse_profile(f.profile);
  if (f.trials) cfg.trials = *f.trials;
  if (f.seed) cfg.seed = *f.seed;
  if (f.gate == "soft") cfg.options.gate.mode = estimation::GateMode::kSoft;
  if (f.gate == "hard") cfg.options.gate.mode = estimation::GateMode::kHard;
  if (f.gate == "off") cfg.options.gate.mode = estimation::GateMode::kOff;
  if (f.kappa) cfg.options.gate.kappa = *f.kappa;
  if (f.skip_seconds) cfg.options.skip_seconds = *f.skip_seconds;
  return cfg;
}

void require_inputs(const PipelineConfig& cfg) {
  for (const auto& [name, p] : {std::pair{"--imu", cfg.imu_path}, std::pair{"--gnss", cfg.gnss_path}}) {
    if (p.empty()) throw Error(ErrorKind::kData, std::string("ingestion: missing ") + name);
    if (!fs::exists(p)) throw Error(ErrorKind::kData, "ingestion: " + p.string() + " does not exist");
  }
  if (!cfg.truth_path.empty() && !fs::exists(cfg.truth_path)) {
    throw Error(ErrorKind::kData, "ingestion: " + cfg.truth_path.string() + " does not exist");
  }
}

void print_rmse(const RmseReport& r) {
  std::printf("%-12s %14s %14s\n", "channel", "filtered", "smoothed");
  for (std::size_t i = 0; i < kChannels; ++i) {
    std::printf("%-12s %14.6g %14.6g\n", std::string(kChannelNames[i]).c_str(), r.filtered[i], r.smoothed[i]);
  }
}

int cmd_simulate(const PipelineConfig& cfg) {
  sim::SimConfig sc = cfg.sim;
  sc.noise.seed = cfg.seed;
  const sim::SimDataset data = sim::simulate(sc);
  fs::create_directories(cfg.output_dir);
  std::vector<TimedState> truth(data.imu.size());
  for (std::size_t i = 0; i < truth.size(); ++i) truth[i] = {data.imu[i].t, data.truth[i]};
  write_imu_csv(cfg.output_dir / "imu.csv", data.imu);
  write_gnss_csv(cfg.output_dir / "gnss.csv", data.gnss);
  write_truth_csv(cfg.output_dir / "truth.csv", truth);
  std::printf("wrote %zu IMU samples, %zu GNSS fixes (%s profile) to %s\n", data.imu.size(),
              data.gnss.size(), std::string(sim::to_string(sc.profile)).c_str(),
              cfg.output_dir.string().c_str());
  return 0;
}

int cmd_align(const PipelineConfig& cfg) {
  require_inputs(cfg);
  const auto imu = parse_imu_csv(cfg.imu_path, cfg.gyro_unit, cfg.accel_unit);
  const auto gnss = parse_gnss_csv(cfg.gnss_path, cfg.default_gnss_sigma);
  const AlignmentResult a = run_alignment(imu, gnss, cfg.options);
  constexpr double r2d = 180.0 / 3.14159265358979323846;
  std::printf("static interval  %.3f .. %.3f s (%zu samples)\n", a.stat.t_start, a.stat.t_end,
              a.stat.sample_count);
  std::printf("roll, pitch      %.6f, %.6f deg\n", a.level.phi0 * r2d, a.level.theta0 * r2d);
  if (a.heading) {
    std::printf("heading          %.6f deg (sigma %.6f deg)\n", a.psi0 * r2d, a.heading->sigma_psi_star * r2d);
  } else {
    std::printf("heading          %.6f deg (fixed)\n", a.psi0 * r2d);
  }
  std::printf("filter start     %.6f s\n", imu[a.start_index].t);
  return 0;
}

int cmd_run(const PipelineConfig& cfg, bool smooth) {
  require_inputs(cfg);
  const auto report = run_pipeline_files(cfg, smooth);
  std::printf("trajectories written to %s\n", cfg.output_dir.string().c_str());
  if (report) print_rmse(*report);
  return 0;
}

int cmd_montecarlo(const PipelineConfig& cfg) {
  MonteCarloConfig mc;
  mc.sim = cfg.sim;
  mc.options = cfg.options;
  mc.trials = cfg.trials;
  mc.seed = cfg.seed;
  const auto t0 = std::chrono::steady_clock::now();
  const MonteCarloReport report = run_monte_carlo(mc, [](const TrialResult& r) {
    std::fprintf(stderr, "trial %zu %s\n", r.index, r.ok ? "ok" : r.failure.c_str());
  });
  fs::create_directories(cfg.output_dir);
  const fs::path path = cfg.output_dir / "montecarlo_report.csv";
  write_monte_carlo_report(path, report);
  RmseReport r;
  r.filtered = report.filtered;
  r.smoothed = report.smoothed;
  print_rmse(r);
  // Runtime stays out of the report file so that reruns are byte-identical.
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("%zu trials, %zu failed in %.1f s; report at %s\n", report.trials, report.failed, secs,
              path.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lie-group INS/GNSS alignment, filtering and smoothing"};
  app.require_subcommand(1);
  Flags f;

  auto* simulate = app.add_subcommand("simulate", "generate IMU, GNSS and truth CSVs");
  add_common(simulate, f);
  add_sim(simulate, f);
  auto* align = app.add_subcommand("align", "static detection, leveling and heading alignment");
  add_common(align, f);
  add_inputs(align, f, false);
  auto* filter = app.add_subcommand("filter", "alignment then a filter pass");
  add_common(filter, f);
  add_inputs(filter, f, true);
  auto* smooth = app.add_subcommand("smooth", "alignment, filter and smoother");
  add_common(smooth, f);
  add_inputs(smooth, f, true);
  auto* run = app.add_subcommand("run", "full pipeline with optional RMSE report");
  add_common(run, f);
  add_inputs(run, f, true);
  auto* montecarlo = app.add_subcommand("montecarlo", "simulate and process many trials");
  add_common(montecarlo, f);
  add_sim(montecarlo, f);
  montecarlo->add_option("--trials", f.trials, "number of trials")->check(CLI::PositiveNumber);
  montecarlo->add_option("--skip-seconds", f.skip_seconds, "exclude this long after filter start from RMSE");

  CLI11_PARSE(app, argc, argv);

  const std::string name = app.get_subcommands().front()->get_name();
  try {
    const PipelineConfig cfg = resolve(f);
    if (name == "simulate") return cmd_simulate(cfg);
    if (name == "align") return cmd_align(cfg);
    if (name == "filter") return cmd_run(cfg, false);
    if (name == "smooth" || name == "run") return cmd_run(cfg, true);
    return cmd_montecarlo(cfg);
  } catch (const Error& e) {
    std::fprintf(stderr, "lienav %s: %s: %s\n", name.c_str(), to_string(e.kind()), e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "lienav %s: %s\n", name.c_str(), e.what());
    return 1;
  }
}
