#include "lienav/pipeline/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <string>

#include "lienav/error.hpp"
#include "lienav/ins/earth.hpp"

namespace lienav::pipeline {

namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

const std::vector<std::string> kNavColumns{"t",   "lat", "lon", "alt",  "vn",  "ve",
                                           "vd",  "roll", "pitch", "yaw", "bax", "bay",
                                           "baz", "bgx", "bgy", "bgz"};
const std::vector<std::string> kCovColumns{
    "cov_att_x", "cov_att_y", "cov_att_z", "cov_vel_x", "cov_vel_y",
    "cov_vel_z", "cov_pos_x", "cov_pos_y", "cov_pos_z", "cov_ba_x",
    "cov_ba_y",  "cov_ba_z",  "cov_bg_x",  "cov_bg_y",  "cov_bg_z"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Column {
  std::string name;
  std::optional<Unit> unit;
};

// Reads a CSV with a header row, skipping blank and '#' lines.
class Reader {
 public:
  explicit Reader(const std::filesystem::path& path) : path_(path), in_(path) {
    if (!in_) throw Error(ErrorKind::kParse, "cannot open " + path.string());
    std::vector<std::string> cells;
    if (!next(cells)) fail("missing header");
    for (const std::string& cell : cells) {
      Column c;
      const auto lb = cell.find('[');
      if (lb != std::string::npos) {
        const auto rb = cell.find(']', lb);
        if (rb == std::string::npos) fail("unterminated unit in header cell '" + cell + "'");
        c.name = trim(std::string_view(cell).substr(0, lb));
        try {
          c.unit = parse_unit(cell.substr(lb + 1, rb - lb - 1));
        } catch (const Error& e) {
          fail(e.what());
        }
      } else {
        c.name = cell;
      }
      columns_.push_back(c);
    }
  }

  std::optional<std::size_t> find(const std::string& name) const {
    for (std::size_t i = 0; i < columns_.size(); ++i) {
      if (columns_[i].name == name) return i;
    }
    return std::nullopt;
  }
  std::size_t require(const std::string& name) const {
    const auto i = find(name);
    if (!i) fail("missing column '" + name + "'");
    return *i;
  }
  const Column& column(std::size_t i) const { return columns_[i]; }

  // Next data row as numbers; false at end of file.
  bool row(std::vector<double>& values) {
    std::vector<std::string> cells;
    if (!next(cells)) return false;
    if (cells.size() != columns_.size()) {
      fail("expected " + std::to_string(columns_.size()) + " fields, found " +
           std::to_string(cells.size()));
    }
    values.resize(cells.size());
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const std::string& c = cells[i];
      const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), values[i]);
      if (ec != std::errc() || ptr != c.data() + c.size() || !std::isfinite(values[i])) {
        fail("field '" + columns_[i].name + "' is not a finite number: '" + c + "'");
      }
    }
    return true;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw Error(ErrorKind::kParse, path_.string() + ":" + std::to_string(line_) + ": " + msg);
  }

 private:
  bool next(std::vector<std::string>& cells) {
    for (std::string line; std::getline(in_, line);) {
      ++line_;
      const std::string t = trim(line);
      if (t.empty() || t.front() == '#') continue;
      cells = split(t);
      return true;
    }
    return false;
  }

  std::filesystem::path path_;
  std::ifstream in_;
  std::size_t line_ = 0;
  std::vector<Column> columns_;
};

double column_scale(const Reader& r, std::size_t col, Unit fallback, Unit quantity) {
  const Unit u = r.column(col).unit.value_or(fallback);
  if (!compatible(u, quantity)) {
    r.fail("unit '" + std::string(unit_name(u)) + "' does not fit column '" + r.column(col).name + "'");
  }
  return to_si(1.0, u);
}

class Writer {
 public:
  explicit Writer(const std::filesystem::path& path) : file_(std::fopen(path.string().c_str(), "w")) {
    if (!file_) throw Error(ErrorKind::kData, "cannot write " + path.string());
  }
  ~Writer() {
    if (file_) std::fclose(file_);
  }
  Writer(const Writer&) = delete;
  Writer& operator=(const Writer&) = delete;

  void header(const std::vector<std::string>& names) {
    for (std::size_t i = 0; i < names.size(); ++i) {
      std::fprintf(file_, i ? ",%s" : "%s", names[i].c_str());
    }
    std::fputc('\n', file_);
  }
  void field(double v) {
    std::fprintf(file_, first_ ? "%.12g" : ",%.12g", v);
    first_ = false;
  }
  void end_row() {
    std::fputc('\n', file_);
    first_ = true;
  }
  void close() {
    const bool bad = std::ferror(file_) != 0;
    const int rc = std::fclose(file_);
    file_ = nullptr;
    if (bad || rc != 0) throw Error(ErrorKind::kData, "write failed");
  }

 private:
  std::FILE* file_;
  bool first_ = true;
};

}  // namespace

std::vector<ImuSample> parse_imu_csv(const std::filesystem::path& path, Unit gyro_unit,
                                     Unit accel_unit) {
  Reader r(path);
  const std::array<std::size_t, 7> col{r.require("t"),  r.require("gx"), r.require("gy"),
                                       r.require("gz"), r.require("ax"), r.require("ay"),
                                       r.require("az")};
  std::array<double, 7> scale{};
  scale[0] = column_scale(r, col[0], Unit::kSecond, Unit::kSecond);
  for (int i = 1; i <= 3; ++i) scale[i] = column_scale(r, col[i], gyro_unit, Unit::kRadPerSecond);
  for (int i = 4; i <= 6; ++i) scale[i] = column_scale(r, col[i], accel_unit, Unit::kMeterPerSecond2);

  std::vector<ImuSample> out;
  std::vector<double> v;
  while (r.row(v)) {
    ImuSample s;
    s.t = v[col[0]] * scale[0];
    s.gyro = Vec3(v[col[1]] * scale[1], v[col[2]] * scale[2], v[col[3]] * scale[3]);
    s.accel = Vec3(v[col[4]] * scale[4], v[col[5]] * scale[5], v[col[6]] * scale[6]);
    if (!out.empty() && !(s.t > out.back().t)) {
      r.fail("timestamp " + std::to_string(s.t) + " is not after the previous one");
    }
    out.push_back(s);
  }
  return out;
}

std::vector<GnssFix> parse_gnss_csv(const std::filesystem::path& path, const Vec3& default_sigma) {
  Reader r(path);
  const std::array<std::size_t, 4> col{r.require("t"), r.require("x"), r.require("y"), r.require("z")};
  const auto sx = r.find("sx"), sy = r.find("sy"), sz = r.find("sz");
  const bool has_sigma = sx && sy && sz;
  if ((sx || sy || sz) && !has_sigma) r.fail("sigma columns must come as sx,sy,sz");

  std::vector<GnssFix> out;
  std::vector<double> v;
  while (r.row(v)) {
    GnssFix f;
    f.t = v[col[0]];
    f.pos = Vec3(v[col[1]], v[col[2]], v[col[3]]);
    f.sigma = has_sigma ? Vec3(v[*sx], v[*sy], v[*sz]) : default_sigma;
    if ((f.sigma.array() <= 0.0).any()) r.fail("sigma must be positive");
    if (!out.empty() && !(f.t > out.back().t)) {
      r.fail("timestamp " + std::to_string(f.t) + " is not after the previous one");
    }
    out.push_back(f);
  }
  return out;
}

void write_imu_csv(const std::filesystem::path& path, std::span<const ImuSample> imu) {
  Writer w(path);
  w.header({"t", "gx", "gy", "gz", "ax", "ay", "az"});
  for (const ImuSample& s : imu) {
    w.field(s.t);
    for (int i = 0; i < 3; ++i) w.field(s.gyro[i]);
    for (int i = 0; i < 3; ++i) w.field(s.accel[i]);
    w.end_row();
  }
  w.close();
}

void write_gnss_csv(const std::filesystem::path& path, std::span<const GnssFix> gnss) {
  Writer w(path);
  w.header({"t", "x", "y", "z", "sx", "sy", "sz"});
  for (const GnssFix& f : gnss) {
    w.field(f.t);
    for (int i = 0; i < 3; ++i) w.field(f.pos[i]);
    for (int i = 0; i < 3; ++i) w.field(f.sigma[i]);
    w.end_row();
  }
  w.close();
}

std::array<double, 16> nav_row(double t, const GroupElement& x) {
  const ins::Geodetic g = ins::geodetic_from_ecef(x.pos());
  const lie::Mat3 c_ne = ins::ecef_from_ned(g.lat, g.lon);
  const Vec3 v_ned = c_ne.transpose() * x.vel();
  const Vec3 euler = ins::euler_from_dcm(c_ne.transpose() * x.rot());
  return {t,          g.lat / kDeg,        g.lon / kDeg,        g.height,
          v_ned.x(),  v_ned.y(),           v_ned.z(),           euler.x() / kDeg,
          euler.y() / kDeg, euler.z() / kDeg, x.bias()[0], x.bias()[1],
          x.bias()[2], x.bias()[3],        x.bias()[4],         x.bias()[5]};
}

GroupElement state_from_nav_row(const std::array<double, 16>& r) {
  const ins::Geodetic g{r[1] * kDeg, r[2] * kDeg, r[3]};
  const lie::Mat3 c_ne = ins::ecef_from_ned(g.lat, g.lon);
  const lie::Mat3 rot = lie::orthonormalize(c_ne * ins::dcm_from_euler(r[7] * kDeg, r[8] * kDeg, r[9] * kDeg));
  lie::Vec6 bias;
  bias << r[10], r[11], r[12], r[13], r[14], r[15];
  return {rot, c_ne * Vec3(r[4], r[5], r[6]), ins::ecef_from_geodetic(g), bias};
}

void write_truth_csv(const std::filesystem::path& path, std::span<const TimedState> truth) {
  Writer w(path);
  w.header(kNavColumns);
  for (const TimedState& s : truth) {
    for (double v : nav_row(s.t, s.x)) w.field(v);
    w.end_row();
  }
  w.close();
}

std::vector<TimedState> parse_truth_csv(const std::filesystem::path& path) {
  Reader r(path);
  std::array<std::size_t, 16> col{};
  for (std::size_t i = 0; i < kNavColumns.size(); ++i) col[i] = r.require(kNavColumns[i]);
  std::vector<TimedState> out;
  std::vector<double> v;
  while (r.row(v)) {
    std::array<double, 16> row{};
    for (std::size_t i = 0; i < 16; ++i) row[i] = v[col[i]];
    if (!out.empty() && !(row[0] > out.back().t)) r.fail("timestamps must increase");
    out.push_back({row[0], state_from_nav_row(row)});
  }
  return out;
}

void write_trajectory_csv(const std::filesystem::path& path, std::span<const double> t,
                          std::span<const lie::ConcentratedGaussian> states) {
  if (t.size() != states.size()) {
    throw Error(ErrorKind::kMisaligned, "write_trajectory_csv: time and state counts differ");
  }
  Writer w(path);
  std::vector<std::string> names = kNavColumns;
  names.insert(names.end(), kCovColumns.begin(), kCovColumns.end());
  w.header(names);
  for (std::size_t k = 0; k < t.size(); ++k) {
    for (double v : nav_row(t[k], states[k].mean)) w.field(v);
    for (int i = 0; i < lie::kDim; ++i) w.field(states[k].cov(i, i));
    w.end_row();
  }
  w.close();
}

}  // namespace lienav::pipeline
