#pragma once

// Command implementations behind the `mpq` tool.
//
// A run configuration is a flat JSON object. Each command declares its keys
// with defaults; values come from the defaults, then an optional JSON config
// file, then command-line flags (flags win). The default's JSON type fixes
// the key's type, and unknown keys are rejected.

#include "csv.hpp"
#include "dispersion.hpp"
#include "errors.hpp"
#include "kernels.hpp"
#include "modes.hpp"
#include "mpf1.hpp"
#include "parallel.hpp"
#include "propagation.hpp"
#include "selftest.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

namespace mpq::cli {

using json = nlohmann::json;

struct Param {
  std::string key;
  json def;
  std::string help;
};

using Schema = std::vector<Param>;

namespace detail {

inline double parse_number(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw ConfigError("--" + key + ": '" + s + "' is not a number");
  return v;
}

inline long long parse_integer(const std::string& key, const std::string& s) {
  std::size_t used = 0;
  long long v = 0;
  try {
    v = std::stoll(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size())
    throw ConfigError("--" + key + ": '" + s + "' is not an integer");
  return v;
}

/// Converts a flag string to the JSON type of the default.
inline json from_flag(const Param& p, const std::string& s) {
  switch (p.def.type()) {
  case json::value_t::number_float:
    return parse_number(p.key, s);
  case json::value_t::number_integer:
  case json::value_t::number_unsigned:
    return parse_integer(p.key, s);
  case json::value_t::boolean:
    if (s == "true" || s == "1")
      return true;
    if (s == "false" || s == "0")
      return false;
    throw ConfigError("--" + p.key + ": expected true|false, got '" + s + "'");
  case json::value_t::array: {
    json arr = json::array();
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
      arr.push_back(parse_number(p.key, item));
    return arr;
  }
  default:
    return s;
  }
}

/// Checks a config-file value against the type of the default.
inline json from_file(const Param& p, const json& v) {
  const auto bad = [&] {
    return ConfigError("config key '" + p.key + "': expected " + std::string(p.def.type_name()) +
                       ", got " + v.type_name());
  };
  switch (p.def.type()) {
  case json::value_t::number_float:
    if (!v.is_number())
      throw bad();
    return v.get<double>();
  case json::value_t::number_integer:
  case json::value_t::number_unsigned:
    if (v.is_number_integer())
      return v.get<long long>();
    if (v.is_number_float() && v.get<double>() == std::floor(v.get<double>()))
      return static_cast<long long>(v.get<double>());
    throw bad();
  case json::value_t::boolean:
    if (!v.is_boolean())
      throw bad();
    return v;
  case json::value_t::array:
    if (v.is_number())
      return json::array({v.get<double>()});
    if (!v.is_array())
      throw bad();
    for (const json& e : v)
      if (!e.is_number())
        throw bad();
    return v;
  default:
    if (!v.is_string())
      throw bad();
    return v;
  }
}

} // namespace detail

/// defaults <- config file <- flags.
inline json resolve_config(const Schema& schema, const json& file,
                           const std::map<std::string, std::string>& flags) {
  json cfg = json::object();
  std::map<std::string, const Param*> by_key;
  for (const Param& p : schema) {
    cfg[p.key] = p.def;
    by_key[p.key] = &p;
  }
  if (!file.is_null()) {
    if (!file.is_object())
      throw ConfigError("config file must hold a JSON object");
    for (const auto& [k, v] : file.items()) {
      const auto it = by_key.find(k);
      if (it == by_key.end())
        throw ConfigError("unknown config key '" + k + "'");
      cfg[k] = detail::from_file(*it->second, v);
    }
  }
  for (const auto& [k, s] : flags) {
    const auto it = by_key.find(k);
    if (it == by_key.end())
      throw ConfigError("unknown option --" + k);
    cfg[k] = detail::from_flag(*it->second, s);
  }
  return cfg;
}

inline json read_json_file(const std::string& path) {
  std::ifstream is(path);
  if (!is)
    throw ConfigError("cannot open config '" + path + "'");
  try {
    return json::parse(is);
  } catch (const json::exception& e) {
    throw ConfigError("malformed config '" + path + "': " + e.what());
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw ConfigError("cannot open '" + path + "' for writing");
  os << text;
  if (!os)
    throw ConfigError("write failed: " + path);
}

inline std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// What a command produced: summary, written files, and its exit status.
struct Outcome {
  json summary = json::object();
  std::vector<std::string> outputs;
  int exit_code = 0;
};

// ---------------------------------------------------------------------------
// typed accessors

inline double num(const json& c, const char* k) { return c.at(k).get<double>(); }
inline long long integer(const json& c, const char* k) { return c.at(k).get<long long>(); }
inline std::string str(const json& c, const char* k) { return c.at(k).get<std::string>(); }

inline Vec2 vec2(const json& c, const char* k) {
  const json& a = c.at(k);
  if (a.size() != 2)
    throw ConfigError(std::string(k) + " needs two values x,y");
  return {a[0].get<double>(), a[1].get<double>()};
}

inline std::vector<double> numbers(const json& c, const char* k) {
  std::vector<double> out;
  for (const json& v : c.at(k))
    out.push_back(v.get<double>());
  if (out.empty())
    throw ConfigError(std::string(k) + " must not be empty");
  return out;
}

inline PhysicalConstants constants(const json& c) {
  const std::string u = str(c, "units");
  if (u == "SI" || u == "si")
    return PhysicalConstants::si();
  if (u == "dimensionless")
    return PhysicalConstants::dimensionless();
  throw ConfigError("units must be SI|dimensionless, got '" + u + "'");
}

inline std::size_t positive_size(const json& c, const char* k) {
  const long long v = integer(c, k);
  if (v <= 0)
    throw ConfigError(std::string(k) + " must be > 0");
  return static_cast<std::size_t>(v);
}

inline Pol polarization(const json& c) {
  return pol_from_int(static_cast<int>(integer(c, "lambda")));
}

inline AliasingPolicy aliasing_policy(const json& c) {
  const std::string s = str(c, "aliasing");
  if (s == "refuse")
    return AliasingPolicy::refuse;
  if (s == "flag")
    return AliasingPolicy::flag;
  if (s == "off")
    return AliasingPolicy::off;
  throw ConfigError("aliasing must be refuse|flag|off, got '" + s + "'");
}

/// nx, ny, dx, dy with ny = 0 -> nx and dy = 0 -> dx; dx = 0 -> fallback.
inline TransverseGrid grid_from(const json& c, double dx_fallback) {
  TransverseGrid g;
  g.nx = positive_size(c, "nx");
  g.ny = integer(c, "ny") > 0 ? static_cast<std::size_t>(integer(c, "ny")) : g.nx;
  g.dx = num(c, "dx") > 0.0 ? num(c, "dx") : dx_fallback;
  g.dy = num(c, "dy") > 0.0 ? num(c, "dy") : g.dx;
  g.validate();
  return g;
}

inline ModeSpec mode_from(const json& c) {
  const Family fam = family_from_string(str(c, "mode"));
  const double w0 = num(c, "w0"), omega = num(c, "omega");
  const Pol lambda = polarization(c);
  ModeSpec s;
  switch (fam) {
  case Family::hermite_gauss:
    s = ModeSpec::hg(static_cast<int>(integer(c, "hg_n")), static_cast<int>(integer(c, "hg_m")),
                     w0, omega, lambda);
    break;
  case Family::laguerre_gauss:
    s = ModeSpec::lg(static_cast<int>(integer(c, "lg_p")), static_cast<int>(integer(c, "lg_l")),
                     w0, omega, lambda);
    break;
  default:
    s = ModeSpec::gaussian(w0, omega, lambda);
  }
  s.validate();
  return s;
}

// ---------------------------------------------------------------------------
// field metrics

/// Norm, intensity peak, centroid and second-moment widths (1/e^2 radii).
inline json field_metrics(const std::vector<const ScalarEnvelope*>& comps) {
  const TransverseGrid& g = comps.front()->grid;
  std::vector<double> I(g.size(), 0.0);
  for (const ScalarEnvelope* c : comps)
    for (std::size_t i = 0; i < g.size(); ++i)
      I[i] += std::norm(c->samples[i]);
  double tot = 0.0, mx = 0.0, my = 0.0, peak = -1.0;
  std::size_t ipk = 0;
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double v = I[g.index(ix, iy)];
      tot += v;
      mx += v * g.x(ix);
      my += v * g.y(iy);
      if (v > peak) {
        peak = v;
        ipk = g.index(ix, iy);
      }
    }
  json m;
  m["norm"] = std::sqrt(tot * g.cell_area());
  if (tot == 0.0) {
    m["peak"] = {0.0, 0.0};
    m["centroid"] = {0.0, 0.0};
    m["width_x"] = m["width_y"] = m["width"] = 0.0;
    return m;
  }
  mx /= tot;
  my /= tot;
  double sxx = 0.0, syy = 0.0;
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      const double v = I[g.index(ix, iy)];
      sxx += v * (g.x(ix) - mx) * (g.x(ix) - mx);
      syy += v * (g.y(iy) - my) * (g.y(iy) - my);
    }
  sxx /= tot;
  syy /= tot;
  m["peak"] = {g.x(ipk % g.nx), g.y(ipk / g.nx)};
  m["peak_intensity"] = peak;
  m["centroid"] = {mx, my};
  m["width_x"] = 2.0 * std::sqrt(sxx);
  m["width_y"] = 2.0 * std::sqrt(syy);
  m["width"] = std::sqrt(2.0 * (sxx + syy));
  return m;
}

inline json field_metrics(const ScalarEnvelope& f) { return field_metrics({&f}); }
inline json field_metrics(const VectorEnvelope& f) { return field_metrics({&f[0], &f[1], &f[2]}); }

inline std::string plane_path(const std::string& prefix, const std::string& tag, std::size_t i) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "z%03zu", i);
  return prefix + (tag.empty() ? "_" : "_" + tag + "_") + buf + ".mpf1";
}

// ---------------------------------------------------------------------------
// dispersion

inline Schema dispersion_schema() {
  return {{"units", "SI", "SI | dimensionless"},
          {"out", "mpq_dispersion", "output prefix; '-' writes the CSV to stdout"},
          {"k0", 5.905249348852994e6, "carrier wavenumber k0"},
          {"q_min", 0.0, "first transverse wavenumber"},
          {"q_max", 5.905249348852994e6, "last transverse wavenumber (<= sqrt(2) k0)"},
          {"points", 101, "number of rows (>= 1)"}};
}

inline Outcome cmd_dispersion(const json& c) {
  const PhysicalConstants pc = constants(c);
  const double k0 = num(c, "k0"), q0 = num(c, "q_min"), q1 = num(c, "q_max");
  const std::size_t n = positive_size(c, "points");
  ::mpq::detail::require_carrier(k0);
  if (!(q0 >= 0.0) || !(q1 >= q0) || !std::isfinite(q1))
    throw ConfigError("need 0 <= q_min <= q_max");
  if (n == 1 && q0 != q1)
    throw ConfigError("points = 1 requires q_min == q_max");
  if (vartheta_of_q(q1, k0) > 1.0)
    throw DomainError("q_max = " + format_double(q1) +
                      " lies beyond the paraxial constraint vartheta <= 1 (q <= sqrt(2) k0 = " +
                      format_double(sqrt2 * k0) + ")");
  const double omega = pc.c * k0;
  std::ostringstream os;
  const std::vector<std::string> cols = {"q", "vartheta", "zeta", "theta", "Theta", "Omega0", "jacobian"};
  write_csv_header(os, cols);
  for (std::size_t i = 0; i < n; ++i) {
    const double q = n == 1 ? q0 : (i + 1 == n ? q1 : q0 + (q1 - q0) * static_cast<double>(i) / static_cast<double>(n - 1));
    const DispersionPoint dp = dispersion_point(q, k0);
    const FrequencyPoint fp = theta_omega_point(q, omega, pc);
    const std::vector<double> row = {q,        dp.vartheta, dp.zeta, theta_of_q(q, k0),
                                     fp.Theta, fp.Omega0,   dirac_jacobian(q, omega, pc)};
    write_csv_row(os, row);
  }
  Outcome o;
  const std::string out = str(c, "out");
  if (out == "-") {
    std::cout << os.str();
  } else {
    write_text(out + ".csv", os.str());
    o.outputs.push_back(out + ".csv");
  }
  o.summary = {{"rows", n}, {"omega", omega}};
  return o;
}

// ---------------------------------------------------------------------------
// propagate / compare

inline Schema field_schema(const std::string& out) {
  return {{"units", "SI", "SI | dimensionless"},
          {"out", out, "output prefix"},
          {"input", "", "MPF1 input field (overrides the mode keys)"},
          {"mode", "gaussian", "gaussian | hg | lg"},
          {"hg_n", 0, "HG x index"},
          {"hg_m", 0, "HG y index"},
          {"lg_p", 0, "LG radial index"},
          {"lg_l", 0, "LG azimuthal index"},
          {"w0", 1e-5, "waist radius"},
          {"omega", 1.7705302e15, "carrier angular frequency"},
          {"lambda", 1, "polarization index 1 | 2"},
          {"nx", 256, "grid points along x (even)"},
          {"ny", 0, "grid points along y (0: same as nx)"},
          {"dx", 0.0, "grid spacing along x (0: w0/8)"},
          {"dy", 0.0, "grid spacing along y (0: same as dx)"},
          {"z", json::array({0.0}), "output planes, comma separated"},
          {"t", 0.0, "time tag used by vector/wavefunction output"},
          {"aliasing", "refuse", "refuse | flag | off"}};
}

inline Schema propagate_schema() {
  Schema s = field_schema("mpq_propagate");
  s.push_back({"model", "exact", "exact | paraxial"});
  s.push_back({"kind", "scalar", "scalar | vector | wavefunction"});
  return s;
}

inline Schema compare_schema() { return field_schema("mpq_compare"); }

struct Source {
  FieldFile file;          // input file, or the generated mode
  std::optional<ModeSpec> mode;
};

inline Source load_source(const json& c, const PhysicalConstants& pc) {
  Source src;
  const std::string input = str(c, "input");
  if (!input.empty()) {
    src.file = read_mpf1(input);
    if (src.file.units != pc.units)
      throw ConfigError("input '" + input + "' is in " + to_string(src.file.units) +
                        " units but the run uses " + to_string(pc.units));
    return src;
  }
  const ModeSpec spec = mode_from(c);
  const TransverseGrid g = grid_from(c, spec.w0 / 8.0);
  src.mode = spec;
  src.file = FieldFile::from(make_mode(spec, g, pc.units));
  return src;
}

inline PropagationOptions propagation_options(const json& c, const PhysicalConstants& pc) {
  PropagationOptions o;
  o.aliasing = aliasing_policy(c);
  o.pc = pc;
  return o;
}

inline Outcome cmd_propagate(const json& c) {
  const PhysicalConstants pc = constants(c);
  const Model model = model_from_string(str(c, "model"));
  const std::string kind = str(c, "kind");
  if (kind != "scalar" && kind != "vector" && kind != "wavefunction")
    throw ConfigError("kind must be scalar|vector|wavefunction, got '" + kind + "'");
  const std::vector<double> zs = numbers(c, "z");
  const double t = num(c, "t");
  const PropagationOptions opts = propagation_options(c, pc);
  const Source src = load_source(c, pc);
  if (kind == "wavefunction" && !src.mode)
    throw ConfigError("kind = wavefunction needs a mode spec, not an input file");
  const std::string prefix = str(c, "out");

  Outcome o;
  json planes = json::array();
  for (std::size_t i = 0; i < zs.size(); ++i) {
    FieldFile out;
    bool flagged = false;
    if (src.file.components.size() == 3) {
      VectorEnvelope v = propagate(src.file.vector(), zs[i] - src.file.z, model, opts);
      flagged = v[0].aliasing_flagged;
      out = FieldFile::from(v);
    } else {
      ScalarEnvelope f = src.file.component(0);
      if (kind == "scalar") {
        f = propagate(f, zs[i] - f.z, model, opts);
        flagged = f.aliasing_flagged;
        out = FieldFile::from(f);
      } else if (kind == "vector") {
        f.t = t;
        VectorEnvelope v = propagate_vector(f, zs[i] - f.z, model, src.mode ? src.mode->lambda : polarization(c), opts);
        flagged = v[0].aliasing_flagged;
        out = FieldFile::from(v);
      } else {
        WavefunctionOptions wo;
        wo.pc = pc;
        wo.propagation = opts;
        const PhotonWavefunction psi = photon_wavefunction(*src.mode, f.grid, zs[i], t, model, wo);
        out = FieldFile::from(psi.field);
      }
    }
    out.z = zs[i];
    const std::string path = plane_path(prefix, "", i);
    write_mpf1(path, out);
    o.outputs.push_back(path);
    json m = out.components.size() == 3 ? field_metrics(out.vector()) : field_metrics(out.component(0));
    m["z"] = zs[i];
    m["file"] = path;
    m["aliasing_flagged"] = flagged;
    planes.push_back(m);
  }
  o.summary = {{"model", to_string(model)}, {"kind", kind}, {"planes", planes}};
  return o;
}

inline Outcome cmd_compare(const json& c) {
  const PhysicalConstants pc = constants(c);
  const std::vector<double> zs = numbers(c, "z");
  const PropagationOptions opts = propagation_options(c, pc);
  const Source src = load_source(c, pc);
  if (src.file.components.size() != 1)
    throw ConfigError("compare works on scalar fields");
  const ScalarEnvelope f = src.file.component(0);
  const std::string prefix = str(c, "out");
  Outcome o;
  json planes = json::array();
  double worst = 0.0;
  for (std::size_t i = 0; i < zs.size(); ++i) {
    const ScalarEnvelope a = propagate(f, zs[i] - f.z, Model::exact, opts);
    const ScalarEnvelope b = propagate(f, zs[i] - f.z, Model::paraxial, opts);
    const std::string pa = plane_path(prefix, "exact", i), pb = plane_path(prefix, "paraxial", i);
    write_mpf1(pa, FieldFile::from(a));
    write_mpf1(pb, FieldFile::from(b));
    o.outputs.push_back(pa);
    o.outputs.push_back(pb);
    const double d = l2_distance(a, b) / l2_norm(b);
    worst = std::max(worst, d);
    planes.push_back({{"z", zs[i]},
                      {"l2_difference", d},
                      {"exact", field_metrics(a)},
                      {"paraxial", field_metrics(b)}});
  }
  o.summary = {{"planes", planes}, {"max_l2_difference", worst}};
  return o;
}

// ---------------------------------------------------------------------------
// kernel / orthogonality

inline Schema kernel_schema() {
  return {{"units", "SI", "SI | dimensionless"},
          {"out", "mpq_kernel", "output prefix"},
          {"model", "exact", "exact (MP mode) | paraxial (paraxial Green's function)"},
          {"omega", 1.7705302e15, "angular frequency"},
          {"t", 0.0, "time"},
          {"z", 1e-4, "propagation distance"},
          {"x_src", json::array({0.0, 0.0}), "source point x,y"},
          {"lambda", 1, "polarization index 1 | 2"},
          {"q_max", 0.0, "quadrature band edge (0: omega / (4c))"},
          {"n_q", 128, "quadrature nodes per axis"},
          {"window", "none", "none | cosine-taper"},
          {"taper_fraction", 0.5, "outer band fraction of the taper"},
          {"nx", 32, "evaluation grid points along x (even)"},
          {"ny", 0, "evaluation grid points along y (0: same as nx)"},
          {"dx", 0.0, "evaluation spacing along x (0: pi / q_max)"},
          {"dy", 0.0, "evaluation spacing along y (0: same as dx)"}};
}

inline QuadratureSpec quadrature_from(const json& c, double omega, const PhysicalConstants& pc) {
  QuadratureSpec q;
  q.q_max = num(c, "q_max") > 0.0 ? num(c, "q_max") : omega / (4.0 * pc.c);
  q.n_q = positive_size(c, "n_q");
  q.window = window_from_string(str(c, "window"));
  q.taper_fraction = num(c, "taper_fraction");
  q.validate();
  return q;
}

inline Outcome cmd_kernel(const json& c) {
  const PhysicalConstants pc = constants(c);
  const Model model = model_from_string(str(c, "model"));
  const double omega = num(c, "omega"), t = num(c, "t"), z = num(c, "z");
  const Vec2 src = vec2(c, "x_src");
  const Pol lambda = polarization(c);
  const QuadratureSpec quad = quadrature_from(c, omega, pc);
  const TransverseGrid g = grid_from(c, pi / quad.q_max);
  std::vector<Vec2> xs;
  xs.reserve(g.size());
  for (std::size_t iy = 0; iy < g.ny; ++iy)
    for (std::size_t ix = 0; ix < g.nx; ++ix)
      xs.push_back({src.x + g.x(ix), src.y + g.y(iy)});
  const std::vector<KernelValue> vals =
      model == Model::exact ? mp_kernel(xs, z, src, omega, t, lambda, quad, pc)
                            : paraxial_green(xs, z, src, omega, lambda, quad, pc);
  FieldFile f;
  f.grid = g;
  f.z = z;
  f.t = t;
  f.omega = omega;
  f.model = to_string(model);
  f.units = pc.units;
  f.components.assign(3, std::vector<cplx>(g.size()));
  for (std::size_t i = 0; i < vals.size(); ++i)
    for (std::size_t k = 0; k < 3; ++k)
      f.components[k][i] = vals[i].value[k];
  Outcome o;
  const std::string path = str(c, "out") + ".mpf1";
  write_mpf1(path, f);
  o.outputs.push_back(path);
  json s = {{"model", to_string(model)},
            {"q_max", quad.q_max},
            {"n_q", quad.n_q},
            {"under_resolved", vals.front().under_resolved},
            {"grid_origin", {src.x, src.y}},
            {"metrics", field_metrics(f.vector())}};
  if (model == Model::exact) {
    const KernelConvergence kc = mp_kernel_refined(src, z, src, omega, t, lambda, quad, pc);
    s["cauchy_difference_at_source"] = kc.cauchy_difference;
    s["value_norm_at_source"] = norm(kc.fine.value);
  }
  o.summary = s;
  return o;
}

inline Schema orthogonality_schema() {
  return {{"units", "SI", "SI | dimensionless"},
          {"out", "mpq_orthogonality", "output prefix"},
          {"omega", 1.7705302e15, "angular frequency"},
          {"q_max", 0.0, "quadrature band edge (0: omega / (4c))"},
          {"n_q", 256, "quadrature nodes per axis"},
          {"window", "none", "none | cosine-taper"},
          {"taper_fraction", 0.5, "outer band fraction of the taper"},
          {"x1", json::array({0.0, 0.0}), "first point x,y"},
          {"x2", json::array({0.0, 0.0}), "second point x,y"},
          {"unit_weight", false, "replace W(q, omega) by 1"}};
}

inline Outcome cmd_orthogonality(const json& c) {
  const PhysicalConstants pc = constants(c);
  const double omega = num(c, "omega");
  const QuadratureSpec quad = quadrature_from(c, omega, pc);
  const Vec2 x1 = vec2(c, "x1"), x2 = vec2(c, "x2");
  const bool unit = c.at("unit_weight").get<bool>();
  const cplx v = orthogonality_integral(x1, x2, omega, quad, pc, unit);
  Outcome o;
  o.summary = {{"value", {v.real(), v.imag()}}, {"q_max", quad.q_max}, {"unit_weight", unit}};
  if (x1 == x2 && quad.window == Window::none) {
    const double ref = quad.q_max * quad.q_max / (4.0 * pi);
    o.summary["coincident_reference"] = ref;
    o.summary["relative_deviation"] = std::abs(v - ref) / ref;
  }
  return o;
}

// ---------------------------------------------------------------------------
// selftest

inline Schema selftest_schema() {
  return {{"out", "mpq_selftest", "output prefix for the report"}};
}

inline Outcome cmd_selftest(const json& c) {
  const auto results = selftest::run_all();
  for (const auto& r : results)
    std::cout << selftest::summary_line(r) << '\n';
  const json report = selftest::report_json(results);
  Outcome o;
  const std::string path = str(c, "out") + ".report.json";
  write_text(path, dump(report));
  o.outputs.push_back(path);
  const bool ok = report.at("all_passed").get<bool>();
  o.summary = {{"all_passed", ok}, {"report", path}};
  o.exit_code = ok ? 0 : 4;
  std::cout << (ok ? "selftest: all criteria passed\n" : "selftest: FAILED\n");
  return o;
}

// ---------------------------------------------------------------------------

struct Command {
  std::string name;
  std::string help;
  Schema (*schema)();
  Outcome (*run)(const json&);
};

inline const std::vector<Command>& commands() {
  static const std::vector<Command> cmds = {
      {"dispersion", "tabulate the dispersion relation as CSV", dispersion_schema, cmd_dispersion},
      {"propagate", "propagate a mode or MPF1 field to z-planes", propagate_schema, cmd_propagate},
      {"compare", "propagate with both models and report their L2 difference", compare_schema,
       cmd_compare},
      {"kernel", "sample the MP mode or paraxial Green's function on a grid", kernel_schema,
       cmd_kernel},
      {"orthogonality", "evaluate the weighted quasi-orthogonality integral",
       orthogonality_schema, cmd_orthogonality},
      {"selftest", "run the acceptance checks", selftest_schema, cmd_selftest}};
  return cmds;
}

/// Runs a command, then writes PREFIX.summary.json and PREFIX.manifest.json.
inline int execute(const Command& cmd, const json& cfg) {
  Outcome o = cmd.run(cfg);
  const std::string prefix = cfg.at("out").get<std::string>();
  json manifest = {{"command", cmd.name},
                   {"library_version", MPQ_VERSION},
                   {"config", cfg},
                   {"threads", thread_count()},
                   {"outputs", o.outputs},
                   {"exit_code", o.exit_code}};
  if (prefix == "-") {
    std::cerr << dump(manifest);
    return o.exit_code;
  }
  if (cmd.name != "selftest")
    write_text(prefix + ".summary.json", dump(o.summary));
  if (cmd.name != "selftest" && cmd.name != "dispersion")
    std::cout << dump(o.summary);
  write_text(prefix + ".manifest.json", dump(manifest));
  return o.exit_code;
}

} // namespace mpq::cli
