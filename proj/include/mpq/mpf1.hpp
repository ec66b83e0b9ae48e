#pragma once

// MPF1 field files.
//
//   bytes 0..4   "MPF1\n"
//   header       one JSON object on a single line, terminated by '\n':
//                {components, dx, dy, model, nx, ny, omega_or_k0, t, units, z}
//   payload      16 * nx * ny * components bytes: little-endian IEEE-754
//                float64 pairs (re, im), row-major (x fastest), one
//                component after another.
//
// `omega_or_k0` holds the carrier angular frequency omega; k0 = omega / c in
// the file's units. `model` is "exact", "paraxial" or "none".

#include "errors.hpp"
#include "grid.hpp"

#include <json.hpp>

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace mpq {

inline constexpr char mpf1_magic[] = "MPF1\n";

struct FieldFile {
  TransverseGrid grid;
  double z = 0.0;
  double t = 0.0;
  double omega = 0.0;
  std::string model = "none";
  Units units = Units::si;
  std::vector<std::vector<cplx>> components; // 1 or 3

  static FieldFile from(const ScalarEnvelope& f) {
    FieldFile out;
    out.grid = f.grid;
    out.z = f.z;
    out.t = f.t;
    out.omega = f.omega;
    out.model = f.model ? to_string(*f.model) : "none";
    out.units = f.units;
    out.components.push_back(f.samples);
    return out;
  }

  static FieldFile from(const VectorEnvelope& f) {
    FieldFile out = from(f[0]);
    out.components.push_back(f[1].samples);
    out.components.push_back(f[2].samples);
    return out;
  }

  ScalarEnvelope component(std::size_t c) const {
    ScalarEnvelope e;
    e.grid = grid;
    e.samples = components.at(c);
    e.omega = omega;
    e.z = z;
    e.t = t;
    e.units = units;
    if (model != "none")
      e.model = model_from_string(model);
    return e;
  }

  VectorEnvelope vector() const {
    if (components.size() != 3)
      throw ConfigError("MPF1: file holds " + std::to_string(components.size()) +
                        " component(s), expected 3");
    VectorEnvelope v;
    for (std::size_t c = 0; c < 3; ++c)
      v[c] = component(c);
    return v;
  }
};

namespace detail {

inline std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little)
    return v;
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i)
    r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
  return r;
}

inline void put_double(std::string& out, double d) {
  const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(d));
  char buf[8];
  std::memcpy(buf, &bits, 8);
  out.append(buf, 8);
}

inline double get_double(const char* p) {
  std::uint64_t bits;
  std::memcpy(&bits, p, 8);
  return std::bit_cast<double>(to_little_endian(bits));
}

} // namespace detail

inline nlohmann::json mpf1_header(const FieldFile& f) {
  return {{"nx", f.grid.nx},
          {"ny", f.grid.ny},
          {"dx", f.grid.dx},
          {"dy", f.grid.dy},
          {"z", f.z},
          {"t", f.t},
          {"omega_or_k0", f.omega},
          {"components", f.components.size()},
          {"model", f.model},
          {"units", to_string(f.units)}};
}

inline std::string encode_mpf1(const FieldFile& f) {
  f.grid.validate();
  if (f.components.size() != 1 && f.components.size() != 3)
    throw ConfigError("MPF1 supports 1 or 3 components");
  for (const auto& c : f.components)
    if (c.size() != f.grid.size())
      throw ConfigError("MPF1: component size does not match the grid");
  std::string out(mpf1_magic);
  out += mpf1_header(f).dump();
  out += '\n';
  out.reserve(out.size() + 16 * f.grid.size() * f.components.size());
  for (const auto& comp : f.components)
    for (const cplx& v : comp) {
      detail::put_double(out, v.real());
      detail::put_double(out, v.imag());
    }
  return out;
}

inline FieldFile decode_mpf1(const std::string& bytes) {
  const std::size_t magic_len = sizeof(mpf1_magic) - 1;
  if (bytes.compare(0, magic_len, mpf1_magic) != 0)
    throw ConfigError("MPF1: bad magic");
  const std::size_t eol = bytes.find('\n', magic_len);
  if (eol == std::string::npos)
    throw ConfigError("MPF1: unterminated header");
  nlohmann::json h;
  try {
    h = nlohmann::json::parse(bytes.substr(magic_len, eol - magic_len));
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("MPF1: malformed header: ") + e.what());
  }
  FieldFile f;
  try {
    f.grid = {h.at("nx").get<std::size_t>(), h.at("ny").get<std::size_t>(),
              h.at("dx").get<double>(), h.at("dy").get<double>()};
    f.z = h.at("z").get<double>();
    f.t = h.at("t").get<double>();
    f.omega = h.at("omega_or_k0").get<double>();
    f.model = h.at("model").get<std::string>();
    const std::string units = h.at("units").get<std::string>();
    if (units == "SI")
      f.units = Units::si;
    else if (units == "dimensionless")
      f.units = Units::dimensionless;
    else
      throw ConfigError("MPF1: unknown units '" + units + "'");
    const auto ncomp = h.at("components").get<std::size_t>();
    if (ncomp != 1 && ncomp != 3)
      throw ConfigError("MPF1: components must be 1 or 3");
    f.components.resize(ncomp);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("MPF1: incomplete header: ") + e.what());
  }
  f.grid.validate();
  const std::size_t n = f.grid.size();
  const std::size_t payload = bytes.size() - eol - 1;
  if (payload != 16 * n * f.components.size())
    throw ConfigError("MPF1: payload length " + std::to_string(payload) + " does not match header");
  const char* p = bytes.data() + eol + 1;
  for (auto& comp : f.components) {
    comp.resize(n);
    for (std::size_t i = 0; i < n; ++i, p += 16)
      comp[i] = {detail::get_double(p), detail::get_double(p + 8)};
  }
  return f;
}

inline void write_mpf1(const std::string& path, const FieldFile& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os)
    throw ConfigError("cannot open '" + path + "' for writing");
  const std::string bytes = encode_mpf1(f);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os)
    throw ConfigError("write failed: " + path);
}

inline FieldFile read_mpf1(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is)
    throw ConfigError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return decode_mpf1(ss.str());
}

} // namespace mpq
