#include "lienav/pipeline/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

#include "lienav/error.hpp"

namespace lienav::pipeline {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_ws(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

bool parse_double(const std::string& s, double& out) {
  const char* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

// A parsed right-hand side: numbers followed by an optional unit.
struct Value {
  std::vector<double> numbers;
  Unit unit = Unit::kNone;
  std::string text;  // raw, for string-valued keys
};

class Parser {
 public:
  Parser(PipelineConfig& cfg, std::string source) : cfg_(cfg), source_(std::move(source)) {
    register_keys();
  }

  void line(const std::string& raw, std::size_t lineno) {
    lineno_ = lineno;
    const std::string s = trim(raw);
    if (s.empty() || s.front() == '#') return;
    const auto eq = s.find('=');
    if (eq == std::string::npos) fail("expected key = value");
    const std::string key = trim(std::string_view(s).substr(0, eq));
    Value v;
    v.text = trim(std::string_view(s).substr(eq + 1));
    const auto it = handlers_.find(key);
    if (it == handlers_.end()) fail("unknown key '" + key + "'");
    current_ = key;
    it->second(v);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::kParse, source_ + ":" + std::to_string(lineno_) + ": " + msg);
  }

  // Numbers with an optional trailing unit compatible with `target`.
  std::vector<double> numbers(Value& v, std::size_t count, Unit target) {
    std::vector<std::string> tok = split_ws(v.text);
    Unit unit = Unit::kNone;
    double probe;
    if (!tok.empty() && !parse_double(tok.back(), probe)) {
      try {
        unit = parse_unit(tok.back());
      } catch (const Error& e) {
        fail(e.what());
      }
      tok.pop_back();
      if (unit != Unit::kNone && !compatible(unit, target)) {
        fail("unit '" + std::string(unit_name(unit)) + "' does not fit key '" + current_ + "'");
      }
    }
    if (tok.size() != count) {
      fail("key '" + current_ + "' expects " + std::to_string(count) + " value(s)");
    }
    std::vector<double> out;
    for (const std::string& t : tok) {
      double x;
      if (!parse_double(t, x)) fail("'" + t + "' is not a number");
      out.push_back(to_si(x, unit));
    }
    return out;
  }

  void scalar(const std::string& key, Unit target, std::function<void(double)> set) {
    handlers_[key] = [this, target, set](Value& v) { set(numbers(v, 1, target)[0]); };
  }
  void vec3(const std::string& key, Unit target, std::function<void(const Vec3&)> set) {
    handlers_[key] = [this, target, set](Value& v) {
      const auto n = numbers(v, 3, target);
      set(Vec3(n[0], n[1], n[2]));
    };
  }
  void text(const std::string& key, std::function<void(const std::string&)> set) {
    handlers_[key] = [this, set](Value& v) {
      if (v.text.empty()) fail("key '" + current_ + "' needs a value");
      try {
        set(v.text);
      } catch (const Error& e) {
        fail(e.what());
      }
    };
  }
  void flag(const std::string& key, std::function<void(bool)> set) {
    text(key, [this, set](const std::string& s) {
      if (s == "true" || s == "1" || s == "yes") return set(true);
      if (s == "false" || s == "0" || s == "no") return set(false);
      fail("expected true or false");
    });
  }

  void register_keys() {
    PipelineConfig& c = cfg_;
    PipelineOptions& o = c.options;
    sim::SimConfig& s = c.sim;
    constexpr Unit kAngle = Unit::kRad;
    constexpr Unit kLength = Unit::kMeter;
    constexpr Unit kTime = Unit::kSecond;

    text("imu", [&c](const std::string& v) { c.imu_path = v; });
    text("gnss", [&c](const std::string& v) { c.gnss_path = v; });
    text("truth", [&c](const std::string& v) { c.truth_path = v; });
    text("out", [&c](const std::string& v) { c.output_dir = v; });
    text("imu.gyro_unit", [&c](const std::string& v) {
      c.gyro_unit = parse_unit(v);
      if (!compatible(c.gyro_unit, Unit::kRadPerSecond)) {
        throw Error(ErrorKind::kParse, "gyro unit must be an angular rate");
      }
    });
    text("imu.accel_unit", [&c](const std::string& v) {
      c.accel_unit = parse_unit(v);
      if (!compatible(c.accel_unit, Unit::kMeterPerSecond2)) {
        throw Error(ErrorKind::kParse, "accel unit must be an acceleration");
      }
    });
    vec3("gnss.sigma", kLength, [&c](const Vec3& v) { c.default_gnss_sigma = v; });
    vec3("lever", kLength, [&c](const Vec3& v) { c.options.lever.l_b = v; c.sim.lever.l_b = v; });

    scalar("noise.sigma_g", Unit::kDegPerRootHour, [&o](double v) { o.noise.sigma_g = v; });
    scalar("noise.sigma_a", Unit::kMeterPerSecondPerRootHour, [&o](double v) { o.noise.sigma_a = v; });
    scalar("noise.bg", Unit::kRadPerSecond, [&o](double v) { o.noise.Bg = v; });
    scalar("noise.ba", Unit::kMeterPerSecond2, [&o](double v) { o.noise.Ba = v; });

    text("gate", [&o](const std::string& v) {
      if (v == "soft") o.gate.mode = estimation::GateMode::kSoft;
      else if (v == "hard") o.gate.mode = estimation::GateMode::kHard;
      else if (v == "off") o.gate.mode = estimation::GateMode::kOff;
      else throw Error(ErrorKind::kParse, "gate must be soft, hard or off");
    });
    scalar("gate.kappa", Unit::kNone, [&o](double v) { o.gate.kappa = v; });
    scalar("gate.confidence", Unit::kNone,
           [&o](double v) { o.gate.kappa = estimation::default_kappa(v); });

    scalar("static.window", kTime, [&o](double v) { o.static_window_s = v; });
    scalar("static.gyro_std", Unit::kRadPerSecond, [&o](double v) { o.static_thresholds.gyro_std = v; });
    scalar("static.accel_std", Unit::kMeterPerSecond2, [&o](double v) { o.static_thresholds.accel_std = v; });
    scalar("static.min_samples", Unit::kNone,
           [&o](double v) { o.static_thresholds.min_samples = static_cast<std::size_t>(v); });

    vec3("align.guesses", kAngle, [&o](const Vec3& v) { o.guesses = {v.x(), v.y(), v.z()}; });
    scalar("align.sigma_psi", kAngle, [&o](double v) { o.sigma_psi = v; });
    scalar("align.prior_mean", kAngle, [&o](double v) { o.prior_mean = v; });
    scalar("align.prefix", kTime, [&o](double v) { o.prefix_s = v; });
    flag("align.allow_extrapolation", [&o](bool v) { o.allow_extrapolation = v; });
    scalar("align.heading", kAngle, [&o](double v) { o.fixed_heading = v; });

    vec3("p0.attitude", kAngle, [&o](const Vec3& v) { o.p0.attitude = v; });
    scalar("p0.velocity", Unit::kMeterPerSecond, [&o](double v) { o.p0.velocity = v; });
    scalar("p0.position", kLength, [&o](double v) { o.p0.position = v; });
    scalar("p0.accel_bias", Unit::kMeterPerSecond2, [&o](double v) { o.p0.accel_bias = v; });
    scalar("p0.gyro_bias", Unit::kRadPerSecond, [&o](double v) { o.p0.gyro_bias = v; });

    scalar("eval.skip_seconds", kTime, [&o](double v) { o.skip_seconds = v; });

    text("sim.profile", [&s](const std::string& v) { s.profile = sim::parse_profile(v); });
    scalar("sim.rate", Unit::kHertz, [&s](double v) { s.imu_rate = v; });
    scalar("sim.gnss_rate", Unit::kHertz, [&s](double v) { s.gnss_rate = v; });
    scalar("sim.origin_lat", kAngle, [&s](double v) { s.params.origin.lat = v; });
    scalar("sim.origin_lon", kAngle, [&s](double v) { s.params.origin.lon = v; });
    scalar("sim.origin_h", kLength, [&s](double v) { s.params.origin.height = v; });
    scalar("sim.static", kTime, [&s](double v) { s.params.static_s = v; });
    scalar("sim.flight", kTime, [&s](double v) { s.params.flight_s = v; });
    scalar("sim.speed", Unit::kMeterPerSecond, [&s](double v) { s.params.speed = v; });
    scalar("sim.ramp", kTime, [&s](double v) { s.params.ramp_s = v; });
    scalar("sim.heading", kAngle, [&s](double v) { s.params.heading0 = v; });
    scalar("sim.bank_gain", Unit::kNone, [&s](double v) { s.params.bank_gain = v; });
    scalar("sim.radius", kLength, [&s](double v) { s.params.radius = v; });
    scalar("sim.climb_rate", Unit::kMeterPerSecond, [&s](double v) { s.params.climb_rate = v; });
    scalar("sim.side_a", kLength, [&s](double v) { s.params.side_a = v; });
    scalar("sim.side_b", kLength, [&s](double v) { s.params.side_b = v; });
    scalar("sim.corner_radius", kLength, [&s](double v) { s.params.corner_radius = v; });
    scalar("sim.corner_ramp", kLength, [&s](double v) { s.params.corner_ramp = v; });
    scalar("sim.na", Unit::kMeterPerSecondPerRootHour, [&s](double v) { s.noise.na = v; });
    scalar("sim.ng", Unit::kDegPerRootHour, [&s](double v) { s.noise.ng = v; });
    scalar("sim.ba", Unit::kMeterPerSecond2, [&s](double v) { s.noise.ba = v; });
    scalar("sim.bg", Unit::kRadPerSecond, [&s](double v) { s.noise.bg = v; });
    scalar("sim.beta_a", Unit::kMeterPerSecond2, [&s](double v) { s.noise.beta_a = v; });
    scalar("sim.beta_g", Unit::kRadPerSecond, [&s](double v) { s.noise.beta_g = v; });
    scalar("sim.tau_a", Unit::kHertz, [&s](double v) { s.noise.tau_a = v; });
    scalar("sim.tau_g", Unit::kHertz, [&s](double v) { s.noise.tau_g = v; });
    vec3("sim.sigma", kLength, [&s](const Vec3& v) { s.noise.sigma_xyz = v; });
    text("sim.sigma_frame", [&s](const std::string& v) {
      if (v == "ecef") s.noise.sigma_frame = sim::SigmaFrame::kEcef;
      else if (v == "ned") s.noise.sigma_frame = sim::SigmaFrame::kNed;
      else throw Error(ErrorKind::kParse, "sim.sigma_frame must be ecef or ned");
    });
    flag("sim.random_turn_on", [&s](bool v) { s.noise.random_turn_on = v; });
    vec3("sim.lever", kLength, [&s](const Vec3& v) { s.lever.l_b = v; });

    scalar("mc.trials", Unit::kNone, [&c](double v) { c.trials = static_cast<std::size_t>(v); });
    scalar("mc.seed", Unit::kNone, [&c](double v) { c.seed = static_cast<std::uint64_t>(v); });
  }

  PipelineConfig& cfg_;
  std::string source_;
  std::size_t lineno_ = 0;
  std::string current_;
  std::map<std::string, std::function<void(Value&)>> handlers_;
};

}  // namespace

void apply_config_text(PipelineConfig& cfg, const std::string& text, const std::string& source) {
  Parser parser(cfg, source);
  std::istringstream in(text);
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) parser.line(line, ++lineno);
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kParse, "cannot open config file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  PipelineConfig cfg;
  apply_config_text(cfg, buf.str(), path.string());
  return cfg;
}

}  // namespace lienav::pipeline
