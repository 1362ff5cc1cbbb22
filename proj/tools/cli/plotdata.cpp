#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "runner.hpp"
#include "superwave/error.hpp"

namespace superwave::cli {

namespace {

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name, const fs::path& from) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw IoError("'" + from.string() + "' has no column '" + name + "'");
  }
};

Table read_table(RunContext& c, const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("missing input '" + p.string() + "'");
  c.inputs.push_back(p);
  Table t;
  std::string line, cell;
  if (!std::getline(in, line)) throw IoError("'" + p.string() + "' is empty");
  std::istringstream hs(line);
  while (std::getline(hs, cell, ',')) t.header.push_back(cell);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
    if (row.size() != t.header.size()) throw IoError("ragged row in '" + p.string() + "'");
    t.rows.push_back(std::move(row));
  }
  return t;
}

json read_doc(RunContext& c, const fs::path& p) {
  std::ifstream in(p);
  if (!in) throw IoError("missing input '" + p.string() + "'");
  c.inputs.push_back(p);
  auto doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw IoError("'" + p.string() + "' is not valid JSON");
  return doc;
}

// First of stem.swf / stem.csv present in dir.
fs::path field_file(const fs::path& dir, const std::vector<std::string>& stems) {
  for (const auto& s : stems)
    for (const char* ext : {".swf", ".csv"})
      if (fs::exists(dir / (s + ext))) return dir / (s + ext);
  throw IoError("no '" + stems.front() + "' field in '" + dir.string() + "'");
}

void grid_csv(RunContext& c, const std::string& name, const std::string& value_name, const SampledField& f,
              std::size_t stride) {
  const auto& g = f.grid2d();
  const double scale = std::exp(f.log_scale());
  std::vector<std::vector<double>> rows;
  for (std::size_t iy = 0; iy < g.ny(); iy += stride)
    for (std::size_t ix = 0; ix < g.nx(); ix += stride)
      rows.push_back({g.x(ix), g.y(iy), f[g.index(ix, iy)].real() * scale});
  c.write_csv(name, {"x", "y", value_name}, rows);
}

void fig1(RunContext& c, const fs::path& dir) {
  const auto t = read_table(c, dir / "analysis.csv");
  const double band = read_doc(c, dir / "report.json").value("band_limit", 1.0);
  const auto x = t.column("x", dir), k = t.column("k_local", dir), kap = t.column("kappa_local", dir);
  std::vector<std::vector<double>> rows;
  for (const auto& r : t.rows) rows.push_back({r[x], r[k], r[kap], band, -band});
  c.write_csv("fig1.csv", {"x", "k", "kappa", "band_upper", "band_lower"}, rows);
}

void fig10(RunContext& c, const fs::path& dir) {
  const auto doc = read_doc(c, dir / "report.json");
  try {
    const auto k = doc.at("k").get<std::vector<double>>();
    const auto C = doc.at("C");
    const double f = doc.at("target_freq").get<double>(), x1 = doc.at("x1").get<double>(),
                 x2 = doc.at("x2").get<double>(), view = doc.at("view_half_width").get<double>();
    const std::string target = doc.at("target").get<std::string>();
    const std::size_t n = 4001;
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = -view + 2 * view * static_cast<double>(i) / (n - 1);
      cdouble a = 0;
      for (std::size_t j = 0; j < k.size(); ++j)
        a += cdouble(C[j][0].get<double>(), C[j][1].get<double>()) * std::polar(1.0, k[j] * t);
      double y = 0;
      if (target == "cos") y = std::cos(f * t);
      else if (target == "sinc") y = t == 0 ? 1.0 : std::sin(f * t) / (f * t);
      else if (target == "gauss") y = std::exp(-f * t * t);
      else y = std::cos(f * t);  // real part of the tone
      rows.push_back({t, y, a.real(), (t >= x1 && t <= x2) ? 1.0 : 0.0});
    }
    c.write_csv("fig10.csv", {"t", "target", "approx", "inside_interval"}, rows);
  } catch (const json::exception& e) {
    throw IoError("'" + (dir / "report.json").string() + "' is not a fit interval report: " + e.what());
  }
}

void carpet(RunContext& c, const fs::path& dir, std::size_t stride) {
  const auto doc = read_doc(c, dir / "hotspots.json");
  for (const auto& plane : doc.at("planes")) {
    const auto file = dir / plane.at("file").get<std::string>();
    const auto f = c.read_input(file);
    grid_csv(c, "carpet_" + file.stem().string() + ".csv", "irradiance", f, stride);
  }
}

void gamma(RunContext& c, const fs::path& dir, std::size_t stride) {
  const auto file = field_file(dir, {"gamma", "gamma0"});
  grid_csv(c, "gamma.csv", "gamma", c.read_input(file), stride);
}

void recovery(RunContext& c, const fs::path& dir) {
  const auto t = read_table(c, dir / "reconstruction.csv");
  const auto x = t.column("x", dir), tr = t.column("truth_re", dir), rr = t.column("recovered_re", dir),
             nr = t.column("noisy_re", dir);
  std::vector<std::vector<double>> rows;
  for (const auto& r : t.rows) rows.push_back({r[x], r[tr], r[rr], r[nr]});
  c.write_csv("recovery.csv", {"x", "truth", "recovered", "noisy"}, rows);
}

}  // namespace

void run_plotdata(RunContext& c) {
  const fs::path dir = c.str("input");
  if (dir.empty()) throw ConfigError("input", "'input' (a run directory) is required");
  if (!fs::is_directory(dir)) throw IoError("input directory '" + dir.string() + "' does not exist");
  const long stride = c.integer("stride");
  if (stride < 1) throw ConfigError("stride", "'stride' must be >= 1");
  const std::string view = c.str("view");
  if (view == "fig1") fig1(c, dir);
  else if (view == "fig10") fig10(c, dir);
  else if (view == "carpet") carpet(c, dir, static_cast<std::size_t>(stride));
  else if (view == "gamma") gamma(c, dir, static_cast<std::size_t>(stride));
  else if (view == "recovery") recovery(c, dir);
  else throw ConfigError("view", "unknown view '" + view + "' (fig1, fig10, carpet, gamma, recovery)");
}

}  // namespace superwave::cli
