#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <string>

#include "runner.hpp"
#include "superwave/construct.hpp"
#include "superwave/error.hpp"
#include "superwave/holography.hpp"
#include "superwave/local_analysis.hpp"
#include "superwave/optimize.hpp"
#include "superwave/propagate.hpp"
#include "superwave/recover.hpp"
#include "superwave/speckle.hpp"

namespace superwave::cli {

namespace {

constexpr double kPi = std::numbers::pi;
using P = ParamType;

json cj(cdouble c) { return json::array({c.real(), c.imag()}); }

json cj(const std::vector<cdouble>& v) {
  json a = json::array();
  for (auto c : v) a.push_back(cj(c));
  return a;
}

cdouble complex_from(const json& v, const std::string& key) {
  if (v.is_number()) return v.get<double>();
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError(key, "'" + key + "' entries must be numbers or [re, im] pairs");
}

std::vector<double> numbers_from(const json& v, const std::string& key) {
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ConfigError(key, "'" + key + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

int positive_int(const RunContext& c, const std::string& key, long lo = 1) {
  const long v = c.integer(key);
  if (v < lo || v > 1L << 30) throw ConfigError(key, "'" + key + "' must be >= " + std::to_string(lo));
  return static_cast<int>(v);
}

double positive(const RunContext& c, const std::string& key) {
  const double v = c.num(key);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key, "'" + key + "' must be positive");
  return v;
}

Target make_target(const std::string& kind, double f) {
  if (kind == "cos") return [f](double t) { return cdouble(std::cos(f * t)); };
  if (kind == "sinc") return [f](double t) { return cdouble(t == 0.0 ? 1.0 : std::sin(f * t) / (f * t)); };
  if (kind == "gauss") return [f](double t) { return cdouble(std::exp(-f * t * t)); };
  if (kind == "tone") return [f](double t) { return std::polar(1.0, f * t); };
  throw ConfigError("target", "unknown target '" + kind + "' (cos, sinc, gauss, tone)");
}

cdouble physical(const SampledField& f, std::size_t i) { return f[i] * std::exp(f.log_scale()); }

// x[, y], re, im, k_local, kappa_local, gamma, valid.
void write_local_csv(RunContext& c, const std::string& name, const SampledField& f, const LocalMap& m) {
  std::vector<std::vector<double>> rows;
  rows.reserve(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const cdouble v = physical(f, i);
    std::vector<double> row;
    if (f.is_2d()) {
      const auto& g = f.grid2d();
      row = {g.x(i % g.nx()), g.y(i / g.nx())};
    } else {
      row = {f.grid1d().coord(i)};
    }
    row.insert(row.end(), {v.real(), v.imag(), m.k_local[i], m.kappa_local[i], m.gamma[i],
                           static_cast<double>(m.valid[i])});
    rows.push_back(std::move(row));
  }
  std::vector<std::string> header{"x"};
  if (f.is_2d()) header.push_back("y");
  header.insert(header.end(), {"re", "im", "k_local", "kappa_local", "gamma", "valid"});
  c.write_csv(name, header, rows);
}

json regions_json(const std::vector<Region>& rs) {
  json a = json::array();
  for (const auto& r : rs)
    a.push_back({{"samples", r.samples}, {"x_min", r.x_min}, {"x_max", r.x_max}, {"y_min", r.y_min}, {"y_max", r.y_max}});
  return a;
}

json super_json(const SuperRegionReport& s) {
  return {{"superoscillating_fraction", s.superoscillating_fraction},
          {"supergrowing_fraction", s.supergrowing_fraction},
          {"reference_bandlimit", s.reference_bandlimit},
          {"valid_samples", s.valid_samples},
          {"superoscillating_regions", regions_json(s.superoscillating)},
          {"supergrowing_regions", regions_json(s.supergrowing)}};
}

SampledField real_field(const AnyGrid& grid, const std::vector<double>& v) {
  return SampledField(grid, std::vector<cdouble>(v.begin(), v.end()));
}

LocalOptions local_options(const RunContext& c, double bandlimit) {
  LocalOptions o;
  o.scheme = derivative_scheme_from_string(c.str("scheme"));
  o.mask_threshold = c.num("mask_threshold");
  o.reference_bandlimit = bandlimit;
  return o;
}

// ---- construct ---------------------------------------------------------------

void run_product(RunContext& c) {
  ProductFunctionParams p{positive_int(c, "N"), c.num("a")};
  const auto n = static_cast<std::size_t>(positive_int(c, "samples", 2));
  const double length = c.num("length");
  const Grid1D grid = length > 0 ? Grid1D::centered(n, length) : product_period_grid(p.N, n);
  const auto f = product_function(p, grid);
  const auto m = local_analysis(f, local_options(c, 1.0));
  const auto s = super_regions(m, 1.0);
  const auto series = product_fourier_coeffs(p);
  c.write("field", f);
  write_local_csv(c, "analysis.csv", f, m);
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < series.terms.size(); ++i)
    rows.push_back({static_cast<double>(i), series.terms[i].k, series.terms[i].c.real(), series.terms[i].c.imag()});
  c.write_csv("coefficients.csv", {"n", "k", "re", "im"}, rows);
  std::size_t i0 = 0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (std::abs(grid.coord(i)) < std::abs(grid.coord(i0))) i0 = i;
  c.write_json("report.json", {{"N", p.N},
                               {"a", p.a},
                               {"x0", grid.coord(i0)},
                               {"k_at_x0", m.k_local[i0]},
                               {"kappa_at_x0", m.kappa_local[i0]},
                               {"coefficient_sum", series.coefficient_sum},
                               {"coefficient_abs_sum", series.coefficient_abs_sum},
                               {"log_scale", f.log_scale()},
                               {"band_limit", 1.0},
                               {"measured_bandlimit", measured_bandlimit(f, 1e-9)},
                               {"regions", super_json(s)},
                               {"warnings", m.warnings}});
}

void run_forced_zeros(RunContext& c) {
  ForcedZeroDesign d;
  d.omega = positive(c, "omega");
  d.n = positive_int(c, "n", 0);
  d.m = positive_int(c, "m", 0);
  for (const auto& z : c.params.at("zeros")) {
    const auto xy = numbers_from(z, "zeros");
    if (xy.size() != 2) throw ConfigError("zeros", "'zeros' entries must be [x, y] pairs");
    d.zeros.emplace_back(xy[0], xy[1]);
  }
  const auto grid = Grid2D::centered(positive_int(c, "nx", 2), positive_int(c, "ny", 2),
                                     positive(c, "dx"), positive(c, "dx"));
  const auto g = forced_zero_field(d, grid);
  auto plain = d;
  plain.zeros.clear();
  const auto f = forced_zero_field(plain, grid);
  c.write("field", g);
  c.write("base", f);
  double on_lines = 0;
  bool any = false;
  for (std::size_t iy = 0; iy < grid.ny(); ++iy)
    for (std::size_t ix = 0; ix < grid.nx(); ++ix)
      for (const auto& [zx, zy] : d.zeros)
        if (grid.x(ix) == zx || grid.y(iy) == zy) {
          any = true;
          on_lines = std::max(on_lines, std::abs(g[grid.index(ix, iy)]));
        }
  c.write_json("report.json", {{"bandlimit_base", measured_bandlimit(f, 1e-9)},
                               {"bandlimit_field", measured_bandlimit(g, 1e-9)},
                               {"bandlimit_axes_base", measured_bandlimit_axes(f, 1e-9)},
                               {"bandlimit_axes_field", measured_bandlimit_axes(g, 1e-9)},
                               {"bin", 2 * kPi / (grid.nx() * grid.dx())},
                               {"max_abs", g.max_abs()},
                               {"max_abs_on_zero_lines", any ? json(on_lines / g.max_abs()) : json(nullptr)}});
}

void run_canvas(RunContext& c) {
  CanvasDesign d;
  d.omega = positive(c, "omega");
  d.m = positive_int(c, "m");
  d.poly_coeffs.clear();
  for (const auto& v : c.params.at("poly")) d.poly_coeffs.push_back(complex_from(v, "poly"));
  if (d.poly_coeffs.empty()) throw ConfigError("poly", "'poly' needs at least one coefficient");
  d.allow_non_square_integrable = c.flag("allow_non_square_integrable");
  const auto grid = Grid1D::centered(static_cast<std::size_t>(positive_int(c, "samples", 2)), positive(c, "length"));
  const auto f = canvas_function(d, grid);
  const auto m = local_analysis(f);
  c.write("field", f);
  write_local_csv(c, "analysis.csv", f, m);
  c.write_json("report.json", {{"measured_bandlimit", measured_bandlimit(f, 1e-9)},
                               {"band_limit", d.omega},
                               {"regions", super_json(super_regions(m, d.omega))},
                               {"warnings", m.warnings}});
}

void run_taylor(RunContext& c) {
  const int N = positive_int(c, "N");
  const double a = c.num("a");
  const auto d = taylor_match_coeffs(N, a);
  const double length = c.num("length") > 0 ? c.num("length") : kPi * N * (N % 2 ? 2 : 1);
  const auto grid = Grid1D::centered(static_cast<std::size_t>(positive_int(c, "samples", 2)), length);
  const auto f = taylor_field(d, grid);
  c.write("field", f);
  std::vector<std::vector<double>> rows;
  for (std::size_t j = 0; j < d.k.size(); ++j) rows.push_back({static_cast<double>(j), d.k[j], d.X[j]});
  c.write_csv("coefficients.csv", {"j", "k", "X"}, rows);
  const auto m = local_analysis(f);
  write_local_csv(c, "analysis.csv", f, m);
  c.write_json("report.json", {{"N", N}, {"a", a}, {"band_limit", 1.0}, {"measured_bandlimit", measured_bandlimit(f, 1e-9)}});
}

// ---- fit ----------------------------------------------------------------------

void run_fit_interval(RunContext& c) {
  const auto target = make_target(c.str("target"), c.num("target_freq"));
  const double x1 = c.num("x1"), x2 = c.num("x2");
  const auto d = interval_approx(target, x1, x2, positive_int(c, "N"), positive(c, "band"));
  const double view = positive(c, "view_half_width");
  const auto samples = static_cast<std::size_t>(positive_int(c, "samples", 2));
  double inside = 0, outside = 0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = -view + 2 * view * static_cast<double>(i) / static_cast<double>(samples - 1);
    if (t >= x1 && t <= x2)
      inside = std::max(inside, std::abs(d(t) - target(t)));
    else
      outside = std::max(outside, std::abs(d(t)));
  }
  json k = d.k;
  c.write_json("report.json", {{"target", c.str("target")},
                               {"target_freq", c.num("target_freq")},
                               {"x1", x1},
                               {"x2", x2},
                               {"view_half_width", view},
                               {"N", d.N},
                               {"band", d.band},
                               {"k", k},
                               {"C", cj(d.C)},
                               {"residual", d.residual},
                               {"rank", d.rank},
                               {"singular_values", d.singular_values},
                               {"inside_max_error", inside},
                               {"outside_max_abs", outside}});
}

void run_fit_bessel(RunContext& c) {
  const auto target = make_target(c.str("target"), c.num("target_freq"));
  const auto d = bessel_line_approx(target, c.num("x1"), c.num("x2"), positive_int(c, "n_terms"));
  c.write_json("report.json", {{"beta", cj(d.beta)}, {"D", cj(d.D)}, {"residual", d.residual}, {"rank", d.rank},
                               {"singular_values", d.singular_values}});
}

json comb_json(const CombSpec& comb) {
  return {{"frequencies", comb.frequencies}, {"amplitudes", cj(comb.amplitudes)}, {"delays", comb.delays},
          {"omega_min", comb.omega_min}, {"Omega", comb.Omega}};
}

CombSpec comb_from_json(const json& j) {
  CombSpec comb;
  try {
    comb.frequencies = numbers_from(j.at("frequencies"), "frequencies");
    for (const auto& a : j.at("amplitudes")) comb.amplitudes.push_back(complex_from(a, "amplitudes"));
    if (j.contains("delays")) comb.delays = numbers_from(j.at("delays"), "delays");
    comb.omega_min = j.value("omega_min", 0.0);
    comb.Omega = j.value("Omega", 0.0);
  } catch (const json::exception& e) {
    throw ConfigError("comb", std::string("malformed comb document: ") + e.what());
  }
  if (comb.amplitudes.size() != comb.frequencies.size())
    throw ConfigError("comb", "comb needs one amplitude per frequency");
  for (double t : comb.delays)
    if (t != 0.0) throw ConfigError("comb", "recovery expects a comb without delays");
  return comb;
}

void run_fit_comb(RunContext& c) {
  const auto target = make_target(c.str("target"), c.num("target_freq"));
  const double half = c.num("half_width") > 0 ? c.num("half_width") : kPi / positive(c, "Omega");
  const auto n = static_cast<std::size_t>(positive_int(c, "fit_points", 2));
  std::vector<double> x(n);
  std::vector<cdouble> F(n);
  for (std::size_t i = 0; i < n; ++i) {
    x[i] = -half + 2 * half * static_cast<double>(i) / static_cast<double>(n - 1);
    F[i] = target(x[i]);
  }
  const auto fit = comb_fit(x, F, positive_int(c, "K"), c.num("omega_min"), positive(c, "Omega"));
  c.write_json("comb.json", comb_json(fit.comb));
  c.write_json("report.json", {{"rank", fit.rank}, {"residual", fit.residual}, {"singular_values", fit.singular_values}});
}

void run_fit_phases(RunContext& c) {
  const auto omegas = numbers_from(c.params.at("omegas"), "omegas");
  PhaseDescentConfig cfg;
  cfg.T_SO = positive(c, "T_SO");
  cfg.restarts = positive_int(c, "restarts");
  cfg.max_iterations = positive_int(c, "max_iterations");
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  const auto r = phase_descent(c.num("A"), omegas, cfg);
  const auto grid = Grid1D::centered(20000, 2 * kPi);
  const auto v = r.comb.sample(grid);
  std::vector<double> re;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < v.size(); ++i) {
    re.push_back(v[i].real());
    rows.push_back({grid.coord(i), v[i].real(), v[i].imag()});
  }
  c.write_csv("waveform.csv", {"t", "re", "im"}, rows);
  c.write_json("comb.json", comb_json(r.comb));
  c.write_json("report.json", {{"objective", r.objective},
                               {"converged", r.converged},
                               {"best_restart", r.best_restart},
                               {"restart_objectives", r.restart_objectives},
                               {"zero_spacing_frequency", zero_spacing_frequency(grid, re, -cfg.T_SO, cfg.T_SO)},
                               {"max_tone", *std::max_element(omegas.begin(), omegas.end())}});
}

// ---- analyze --------------------------------------------------------------------

void run_analyze(RunContext& c) {
  if (c.str("input").empty()) throw ConfigError("input", "'input' (a field file) is required");
  const auto f = c.read_input(c.str("input"));
  LocalOptions o;
  o.scheme = derivative_scheme_from_string(c.str("scheme"));
  o.mask_threshold = c.num("mask_threshold");
  if (c.num("bandlimit") > 0) o.reference_bandlimit = c.num("bandlimit");
  const double irr = c.num("irradiance_bandlimit");
  const auto kind = c.str("kind") == "irradiance" ? FieldKind::irradiance : FieldKind::amplitude;
  if (c.str("kind") != "irradiance" && c.str("kind") != "amplitude")
    throw ConfigError("kind", "'kind' must be amplitude or irradiance");
  const auto m = irr > 0 ? supergrowth_strength(f, irr, kind, o) : local_analysis(f, o);
  write_local_csv(c, "local.csv", f, m);
  if (f.is_2d()) c.write("gamma", real_field(m.grid, m.gamma));
  c.write_json("report.json", {{"regions", super_json(super_regions(m))}, {"warnings", m.warnings},
                               {"valid_samples", m.valid_count()}});
}

// ---- speckle ---------------------------------------------------------------------

void run_speckle(RunContext& c) {
  SpeckleModel model;
  const std::string shape = c.str("spectrum");
  const double kmax = positive(c, "kmax");
  if (shape == "disk")
    model.spectrum = BandDescriptor::disk(kmax);
  else if (shape == "annular")
    model.spectrum = c.num("k_min") >= 0 ? BandDescriptor::annular(kmax, c.num("k_min")) : BandDescriptor::annular(kmax);
  else
    throw ConfigError("spectrum", "'spectrum' must be disk or annular");
  model.n_plane_waves = positive_int(c, "n_plane_waves");
  model.mean_intensity = positive(c, "mean_intensity");
  model.seed = c.seed;
  const auto n = static_cast<std::size_t>(positive_int(c, "grid", 8));
  const auto grid = Grid2D::centered(n, n, positive(c, "dx"), positive(c, "dx"));
  const auto s = run_speckle_ensemble(model, grid, static_cast<std::size_t>(positive_int(c, "realizations")), c.threads);

  const auto first = generate_speckle(model, grid, 0);
  c.write("realization0", first);
  c.write("gamma0", real_field(grid, supergrowth_strength(first, 2 * kmax).gamma));

  const auto& h = s.histogram_spec;
  const double di = h.intensity_max * s.I_o / h.intensity_bins, dg = h.gradient_max * s.k_max / h.gradient_bins;
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < h.intensity_bins; ++i)
    for (int j = 0; j < h.gradient_bins; ++j)
      rows.push_back({i * di, (i + 1) * di, j * dg, (j + 1) * dg, s.histogram[i * h.gradient_bins + j]});
  c.write_csv("histogram.csv", {"I_lo", "I_hi", "g_lo", "g_hi", "mass"}, rows);
  c.write_json("stats.json", {{"spectrum", shape},
                              {"realizations", s.realizations},
                              {"samples", s.samples},
                              {"valid_samples", s.valid_samples},
                              {"k_max", s.k_max},
                              {"k2", s.k2},
                              {"I_o", s.I_o},
                              {"superoscillating_fraction", s.superoscillating_fraction},
                              {"superoscillating_half_width", s.superoscillating_half_width},
                              {"supergrowing_fraction", s.supergrowing_fraction},
                              {"supergrowing_half_width", s.supergrowing_half_width},
                              {"theory_fraction", superoscillatory_fraction_theory(model.spectrum)},
                              {"superoscillating_fraction_strict_mask", s.superoscillating_fraction_strict_mask},
                              {"effective_samples", s.effective_samples},
                              {"mean_intensity", s.mean_intensity},
                              {"mean_intensity_se", s.mean_intensity_se},
                              {"histogram_overflow", s.histogram_overflow},
                              {"tv_distance", s.tv_distance}});
}

// ---- propagate ---------------------------------------------------------------------

// Hole-array keys a --mask-spec file may set.
void merge_mask_spec(RunContext& c) {
  const fs::path p = c.str("mask_spec");
  if (p.empty()) return;
  std::ifstream in(p);
  if (!in) throw IoError("cannot read mask spec '" + p.string() + "'");
  c.inputs.push_back(p);
  const auto doc = json::parse(in, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw ConfigError("mask_spec", "mask spec must be a JSON object");
  static const std::vector<std::string> allowed{"symmetry_order", "hole_diameter", "min_separation", "aperture",
                                                "hole_count", "n", "dx"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw ConfigError(key, "unknown mask spec key '" + key + "'");
    if (!value.is_number()) throw ConfigError(key, "mask spec key '" + key + "' must be a number");
    c.params[key] = value;
  }
}

void run_propagate(RunContext& c) {
  merge_mask_spec(c);
  PropagationSetup setup;
  setup.wavelength = positive(c, "lambda");
  setup.kernel = propagation_kernel_from_string(c.str("kernel"));
  setup.pad_factor = positive_int(c, "pad");
  const auto zs = numbers_from(c.params.at("z"), "z");
  if (zs.empty()) throw ConfigError("z", "'z' needs at least one plane");

  std::optional<SampledField> input;
  json mask_info;
  double aperture = positive(c, "aperture");
  if (!c.str("input").empty()) {
    input = c.read_input(c.str("input"));
  } else {
    HoleArraySpec spec;
    spec.symmetry_order = positive_int(c, "symmetry_order");
    spec.hole_diameter = positive(c, "hole_diameter");
    spec.min_separation = positive(c, "min_separation");
    spec.aperture_diameter = aperture;
    spec.hole_count = static_cast<std::size_t>(positive_int(c, "hole_count", 0));
    spec.seed = c.seed;
    const auto n = static_cast<std::size_t>(positive_int(c, "n", 8));
    const auto holes = quasiperiodic_mask(spec, Grid2D::centered(n, n, positive(c, "dx"), positive(c, "dx")));
    input = holes.mask;
    c.write("mask", holes.mask);
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < holes.x.size(); ++i) rows.push_back({holes.x[i], holes.y[i]});
    c.write_csv("holes.csv", {"x", "y"}, rows);
    mask_info = {{"holes", holes.x.size()}, {"edge_length", holes.edge_length},
                 {"min_pairwise_separation", holes.min_pairwise_separation}};
  }
  const auto results = propagate_planes(*input, setup, zs, c.threads);
  json planes = json::array();
  std::vector<std::vector<double>> spot_rows;
  double best = INFINITY;
  for (std::size_t p = 0; p < results.size(); ++p) {
    const auto irr = irradiance(results[p].field);
    char stem[32];
    std::snprintf(stem, sizeof stem, "plane_%02zu", p);
    c.write(stem, irr);
    const double na = c.num("numerical_aperture") > 0 ? c.num("numerical_aperture")
                                                      : std::sin(std::atan(0.5 * aperture / std::abs(zs[p])));
    const auto hs = find_hotspots(irr, c.num("threshold"), setup.wavelength, na);
    json spots = json::array();
    for (const auto& s : hs.spots) {
      spots.push_back({{"x", s.x}, {"y", s.y}, {"peak", s.peak}, {"fwhm", s.fwhm},
                       {"fwhm_over_wavelength", s.fwhm / setup.wavelength}, {"sub_diffraction", s.sub_diffraction}});
      best = std::min(best, s.fwhm / setup.wavelength);
      spot_rows.push_back({zs[p], s.x, s.y, s.peak, s.fwhm, s.fwhm / setup.wavelength, double(s.sub_diffraction)});
    }
    for (const auto& w : results[p].warnings) c.warnings.push_back("z=" + std::to_string(zs[p]) + ": " + w);
    planes.push_back({{"z", zs[p]}, {"file", c.field_path(stem).filename().string()},
                      {"numerical_aperture", na}, {"diffraction_limit", hs.diffraction_limit},
                      {"nyquist_leakage", results[p].nyquist_leakage},
                      {"window_leakage", results[p].window_leakage}, {"hotspots", spots}});
  }
  c.write_csv("hotspots.csv", {"z", "x", "y", "peak", "fwhm", "fwhm_over_lambda", "sub_diffraction"}, spot_rows);
  c.write_json("hotspots.json", {{"wavelength", setup.wavelength}, {"kernel", to_string(setup.kernel)},
                                 {"mask", mask_info}, {"planes", planes},
                                 {"min_fwhm_over_wavelength", std::isfinite(best) ? json(best) : json(nullptr)}});
}

// ---- holography ----------------------------------------------------------------------

void write_plan(RunContext& c, const HologramPlan& plan) {
  const auto& g = plan.grid;
  c.write("plan_M", real_field(g, plan.M));
  c.write("plan_Phi", real_field(g, plan.Phi));
  c.write_json("plan.json", {{"pitch", plan.pitch}, {"kind", to_string(plan.kind)},
                             {"amplitude_scale", plan.amplitude_scale},
                             {"M", c.field_path("plan_M").filename().string()},
                             {"Phi", c.field_path("plan_Phi").filename().string()}});
}

HologramPlan read_plan(RunContext& c) {
  const fs::path dir = c.str("plan");
  if (dir.empty()) throw ConfigError("plan", "'plan' (an encode output directory) is required");
  const auto pj = dir / "plan.json";
  std::ifstream in(pj);
  if (!in) throw IoError("cannot read '" + pj.string() + "'");
  c.inputs.push_back(pj);
  const auto doc = json::parse(in, nullptr, false);
  if (doc.is_discarded()) throw IoError("'" + pj.string() + "' is not valid JSON");
  const auto M = c.read_input(dir / doc.at("M").get<std::string>());
  const auto Phi = c.read_input(dir / doc.at("Phi").get<std::string>());
  HologramPlan plan{M.grid2d(), {}, {}, doc.at("pitch").get<double>(),
                    grating_kind_from_string(doc.at("kind").get<std::string>()),
                    doc.at("amplitude_scale").get<double>()};
  for (auto v : M.values()) plan.M.push_back(v.real());
  for (auto v : Phi.values()) plan.Phi.push_back(v.real());
  return plan;
}

void run_holo_encode(RunContext& c) {
  const auto kind = grating_kind_from_string(c.str("kind"));
  std::optional<SampledField> target;
  if (c.str("target") == "lg") {
    const auto n = static_cast<std::size_t>(positive_int(c, "n", 8));
    target = laguerre_gauss(Grid2D::centered(n, n, positive(c, "dx"), positive(c, "dx")),
                            positive_int(c, "p", 0), static_cast<int>(c.integer("m")), positive(c, "waist"));
  } else {
    target = c.read_input(c.str("target"));
  }
  const auto plan = encode_hologram(*target, positive(c, "pitch"), kind);
  write_plan(c, plan);
  if (kind == GratingKind::blazed) c.write("first_order", first_order_field(plan));
  c.write_json("report.json", {{"amplitude_scale", plan.amplitude_scale},
                               {"max_pitch", max_pitch_for(*target)},
                               {"pitch", plan.pitch}});
}

void run_holo_render(RunContext& c) {
  const auto plan = read_plan(c);
  const auto map = render_grating(plan);
  c.write("grating", real_field(plan.grid, map));
  const auto levels = quantize_8bit(map);
  write_pgm(c.path("grating.pgm"), plan.grid.nx(), plan.grid.ny(), levels);
  c.add_output("grating.pgm");
}

void run_holo_simulate(RunContext& c) {
  const auto plan = read_plan(c);
  SimulationOptions o;
  o.oversample = positive_int(c, "oversample");
  o.quantize = c.flag("quantize");
  const auto sim = simulate_first_order(plan, o);
  c.write("simulated", sim);
  json report{{"oversample", o.oversample}, {"quantize", o.quantize}};
  if (plan.kind == GratingKind::blazed) {
    const auto closed = first_order_field(plan);
    c.write("closed_form", closed);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < sim.size(); ++i) {
      num += std::norm(sim[i] - closed[i]);
      den += std::norm(closed[i]);
    }
    report["rms_vs_closed_form"] = std::sqrt(num / den);
  }
  c.write_json("report.json", report);
}

// ---- recover -------------------------------------------------------------------------

void run_recover(RunContext& c) {
  RecoveryExperiment e;
  e.K = positive_int(c, "K", 2);
  e.Omega = positive(c, "Omega");
  e.omega_min = c.num("omega_min");
  e.target_bandwidth = positive(c, "target_bandwidth");
  e.fit_points = static_cast<std::size_t>(positive_int(c, "fit_points", 2));
  e.periods = positive_int(c, "periods");
  e.samples_per_period = static_cast<std::size_t>(positive_int(c, "samples_per_period", 2));
  e.noise_db = c.num("noise_db");
  e.averages = positive_int(c, "averages");
  e.seed = c.seed;
  e.window = c.num("window");
  e.options.averaging = averaging_mode_from_string(c.str("averaging"));
  e.options.projection = projection_mode_from_string(c.str("projection"));
  if (!c.str("comb").empty()) {
    const fs::path p = c.str("comb");
    std::ifstream in(p);
    if (!in) throw IoError("cannot read comb '" + p.string() + "'");
    c.inputs.push_back(p);
    const auto doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw IoError("'" + p.string() + "' is not valid JSON");
    e.comb = comb_from_json(doc);
  }
  const auto trials = static_cast<std::size_t>(positive_int(c, "trials"));
  const auto mse = run_recovery_trials(e, trials, c.threads);
  const auto first = run_recovery_experiment(e, 0);

  auto sorted = mse;
  std::sort(sorted.begin(), sorted.end());
  const double median = trials % 2 ? sorted[trials / 2] : 0.5 * (sorted[trials / 2 - 1] + sorted[trials / 2]);
  double mean = 0;
  for (double m : mse) mean += m / static_cast<double>(trials);

  // Overlay on the record samples inside the window, first trial.
  const double half = e.window > 0 ? e.window : kPi / e.Omega;
  const auto& truth = first.truth;
  auto w = truth.frequencies;
  std::sort(w.begin(), w.end());
  const double period = 2 * kPi / (w[1] - w[0]);
  const Grid1D grid(static_cast<std::size_t>(e.periods) * e.samples_per_period,
                    period / static_cast<double>(e.samples_per_period), -0.5 * e.periods * period);
  const auto noisy = add_noise(truth.sample(grid), NoiseModel{first.sigma, e.seed}, 0).values;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double x = grid.coord(i);
    if (std::abs(x) > half) continue;
    const cdouble t = truth(x), r = first.report.reconstructed[i];
    rows.push_back({x, t.real(), t.imag(), r.real(), r.imag(), noisy[i].real(), noisy[i].imag()});
  }
  c.write_csv("reconstruction.csv",
              {"x", "truth_re", "truth_im", "recovered_re", "recovered_im", "noisy_re", "noisy_im"}, rows);
  c.write_json("comb_truth.json", comb_json(truth));
  c.write_json("report.json", {{"trials", trials},
                               {"mse", mse},
                               {"mse_median", median},
                               {"mse_mean", mean},
                               {"a_so", first.a_so},
                               {"sigma", first.sigma},
                               {"noise_db", e.noise_db},
                               {"achieved_db", first.achieved_db},
                               {"averages", e.averages},
                               {"averaging", to_string(e.options.averaging)},
                               {"projection", to_string(e.options.projection)},
                               {"leakage", first.report.leakage},
                               {"recovered_amplitudes", cj(first.report.comb.amplitudes)}});
}

}  // namespace

void run_plotdata(RunContext& c);

const std::vector<Pipeline>& pipelines() {
  static const std::vector<Pipeline> all = {
      {"construct product", "[cos(x/N) + i a sin(x/N)]^N with local analysis",
       {{"N", P::integer, 20, "exponent N"},
        {"a", P::number, 6.0, "superoscillation factor a"},
        {"samples", P::integer, 4096, "grid samples"},
        {"length", P::number, 20.0, "grid length; 0 means one period"},
        {"scheme", P::string, "central4", "spectral or central4"},
        {"mask_threshold", P::number, 1e-6, "relative mask threshold"}},
       run_product},
      {"construct forced-zeros", "2D bandlimited field with prescribed zero lines",
       {{"omega", P::number, 1.0, "band Ω"},
        {"n", P::integer, 6, "cos power along x"},
        {"m", P::integer, 6, "cos power along y"},
        {"zeros", P::array, json::array({json::array({3.0, -2.0}), json::array({-5.0, 4.0})}), "[[x_j, y_j], ...]"},
        {"nx", P::integer, 1024, "grid size x"},
        {"ny", P::integer, 1024, "grid size y"},
        {"dx", P::number, 0.5, "grid spacing"}},
       run_forced_zeros},
      {"construct canvas", "polynomial times sinc^m canvas",
       {{"omega", P::number, 1.0, "band Ω"},
        {"m", P::integer, 1, "canvas power"},
        {"poly", P::array, json::array({1.0}), "coefficients a_0.. (numbers or [re, im])"},
        {"samples", P::integer, 2048, "grid samples"},
        {"length", P::number, 400.0, "grid length"},
        {"allow_non_square_integrable", P::boolean, false, "allow deg f >= m"}},
       run_canvas},
      {"construct taylor", "Vandermonde Taylor matching of e^{iax}",
       {{"N", P::integer, 10, "order N"},
        {"a", P::number, 3.0, "target wavenumber"},
        {"samples", P::integer, 2048, "grid samples"},
        {"length", P::number, 0.0, "grid length; 0 means one period"}},
       run_taylor},
      {"fit interval", "interval pseudo-inverse approximation",
       {{"target", P::string, "cos", "cos, sinc, gauss or tone"},
        {"target_freq", P::number, 10.0, "target frequency"},
        {"x1", P::number, -0.5, "interval start"},
        {"x2", P::number, 0.5, "interval end"},
        {"N", P::integer, 9, "N (N+1 wavenumbers)"},
        {"band", P::number, 2 * kPi, "band limit"},
        {"view_half_width", P::number, 2.0, "half-width of the reported view"},
        {"samples", P::integer, 4001, "view samples"}},
       run_fit_interval},
      {"fit bessel", "whole-line spherical Bessel approximation",
       {{"target", P::string, "cos", "cos, sinc, gauss or tone"},
        {"target_freq", P::number, 2.0, "target frequency"},
        {"x1", P::number, -1.0, "interval start"},
        {"x2", P::number, 1.0, "interval end"},
        {"n_terms", P::integer, 12, "number of j_n terms"}},
       run_fit_bessel},
      {"fit comb", "least-squares comb fit",
       {{"target", P::string, "sinc", "cos, sinc, gauss or tone"},
        {"target_freq", P::number, 2.0, "target frequency"},
        {"K", P::integer, 11, "teeth"},
        {"omega_min", P::number, -0.5, "lowest tooth"},
        {"Omega", P::number, 1.0, "comb width"},
        {"half_width", P::number, 0.0, "fit half-width; 0 means π/Ω"},
        {"fit_points", P::integer, 64, "fit points"}},
       run_fit_comb},
      {"fit phases", "interference-functional phase descent",
       {{"omegas", P::array, json::array({1.0, 2.0, 3.0, 4.0}), "tone frequencies"},
        {"A", P::number, 1.0, "common amplitude"},
        {"T_SO", P::number, 0.5, "half-width of the minimized window"},
        {"restarts", P::integer, 16, "random restarts"},
        {"max_iterations", P::integer, 2000, "iterations per restart"}},
       run_fit_phases},
      {"analyze", "local wavenumber, growth and super regions of a field file",
       {{"input", P::string, "", "field file"},
        {"scheme", P::string, "spectral", "spectral or central4"},
        {"mask_threshold", P::number, 1e-6, "relative mask threshold"},
        {"bandlimit", P::number, 0.0, "reference band limit; 0 means auto"},
        {"irradiance_bandlimit", P::number, 0.0, "if > 0, compute Γ against this limit"},
        {"kind", P::string, "amplitude", "amplitude or irradiance"}},
       run_analyze},
      {"speckle", "random-wave ensembles and super-region statistics",
       {{"spectrum", P::string, "disk", "disk or annular"},
        {"kmax", P::number, kPi / 2, "band limit"},
        {"k_min", P::number, -1.0, "annulus inner radius; < 0 means thin ring"},
        {"n_plane_waves", P::integer, 1024, "plane waves per realization"},
        {"mean_intensity", P::number, 1.0, "I_o"},
        {"realizations", P::integer, 64, "ensemble size"},
        {"grid", P::integer, 256, "grid size (grid x grid)"},
        {"dx", P::number, 1.0, "grid spacing"}},
       run_speckle},
      {"propagate", "angular-spectrum propagation and hot spots",
       {{"input", P::string, "", "field file; empty builds a quasiperiodic hole mask"},
        {"lambda", P::number, 0.5, "wavelength"},
        {"z", P::array, json::array({5.0, 7.5, 10.0, 12.5, 15.0}), "planes; a number or a list"},
        {"mask_spec", P::string, "", "JSON file overriding the hole-array keys below"},
        {"kernel", P::string, "helmholtz", "paraxial or helmholtz"},
        {"pad", P::integer, 2, "zero-padding factor"},
        {"n", P::integer, 1024, "mask grid size"},
        {"dx", P::number, 0.033, "mask grid spacing"},
        {"symmetry_order", P::integer, 10, "tiling symmetry"},
        {"hole_diameter", P::number, 0.2, "hole diameter"},
        {"min_separation", P::number, 0.8, "minimum hole separation"},
        {"aperture", P::number, 25.0, "aperture diameter"},
        {"hole_count", P::integer, 0, "holes nearest the center; 0 keeps all"},
        {"threshold", P::number, 0.3, "hot-spot threshold relative to the plane max"},
        {"numerical_aperture", P::number, 0.0, "NA; 0 means sin(atan(aperture/2z))"}},
       run_propagate},
      {"holo encode", "encode a target into a hologram plan",
       {{"target", P::string, "lg", "'lg' or a field file"},
        {"p", P::integer, 5, "LG radial index"},
        {"m", P::integer, 1, "LG azimuthal index"},
        {"waist", P::number, 40.0, "LG waist"},
        {"n", P::integer, 512, "LG grid size"},
        {"dx", P::number, 1.0, "LG grid spacing"},
        {"pitch", P::number, 4.0, "grating pitch"},
        {"kind", P::string, "blazed", "binary, sinusoidal or blazed"}},
       run_holo_encode},
      {"holo render", "render a plan to a phase map and 8-bit PGM",
       {{"plan", P::string, "", "encode output directory"}},
       run_holo_render},
      {"holo simulate", "simulate the first diffraction order of a plan",
       {{"plan", P::string, "", "encode output directory"},
        {"oversample", P::integer, 9, "odd render samples per pixel"},
        {"quantize", P::boolean, false, "8-bit quantize the map"}},
       run_holo_simulate},
      {"recover", "comb filtering of a superoscillation buried in noise",
       {{"comb", P::string, "", "comb JSON; empty fits the sinc target"},
        {"K", P::integer, 11, "teeth"},
        {"Omega", P::number, 1.0, "comb width"},
        {"omega_min", P::number, -0.5, "lowest tooth"},
        {"target_bandwidth", P::number, 2.0, "sinc target bandwidth"},
        {"fit_points", P::integer, 64, "fit points"},
        {"noise_db", P::number, 17.0, "noise above the superoscillation amplitude (dB)"},
        {"averages", P::integer, 10, "records averaged"},
        {"trials", P::integer, 1, "Monte Carlo trials"},
        {"periods", P::integer, 12, "comb periods per record"},
        {"samples_per_period", P::integer, 2048, "samples per period"},
        {"averaging", P::string, "coherent", "coherent or spectral"},
        {"projection", P::string, "exact", "exact or fft_bin"},
        {"window", P::number, 0.0, "MSE half-width; 0 means π/Ω"}},
       run_recover},
      {"plotdata", "tidy CSV bundles from earlier runs",
       {{"view", P::string, "fig1", "fig1, fig10, carpet, gamma or recovery"},
        {"input", P::string, "", "run directory"},
        {"stride", P::integer, 4, "decimation for 2D grids"}},
       run_plotdata},
  };
  return all;
}

}  // namespace superwave::cli
