#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "qpgate/constants.hpp"
#include "qpgate/errors.hpp"
#include "qpgate/field.hpp"

namespace qpgate {

// Field dump format: 64-byte header (magic "QPGF", u32 version, u32 N,
// f64 extent [m], f64 z [m], f64 energy [keV], 28 reserved zero bytes),
// then N*N little-endian (re, im) f64 pairs, row-major.
inline constexpr std::uint32_t qpgf_version = 1;

namespace detail {

inline void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f64(std::string& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

inline double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(v);
}

}  // namespace detail

inline void write_qpgf(const FieldGrid& f, const std::string& path) {
  std::string buf;
  buf.reserve(64 + f.samples.size() * 16);
  buf += "QPGF";
  detail::put_u32(buf, qpgf_version);
  detail::put_u32(buf, static_cast<std::uint32_t>(f.n));
  detail::put_f64(buf, f.extent);
  detail::put_f64(buf, f.z);
  detail::put_f64(buf, f.ctx.kinetic_energy_kev);
  buf.append(64 - buf.size(), '\0');
  for (const Complex& v : f.samples) {
    detail::put_f64(buf, v.real());
    detail::put_f64(buf, v.imag());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ContractError("write_qpgf: cannot open " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw ContractError("write_qpgf: short write to " + path);
}

inline FieldGrid read_qpgf(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ContractError("read_qpgf: cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() < 64)
    throw ContractError("read_qpgf: truncated header at byte offset " +
                        std::to_string(data.size()) + " (need 64)");
  if (data.compare(0, 4, "QPGF") != 0) throw ContractError("read_qpgf: bad magic");
  const auto* p = reinterpret_cast<const unsigned char*>(data.data());
  const std::uint32_t version = detail::get_u32(p + 4);
  if (version != qpgf_version)
    throw ContractError("read_qpgf: unsupported version " + std::to_string(version));
  const std::uint32_t n = detail::get_u32(p + 8);
  if (n == 0 || (n & (n - 1)) != 0) throw ContractError("read_qpgf: grid size not a power of two");
  FieldGrid f;
  f.n = n;
  f.extent = detail::get_f64(p + 12);
  f.z = detail::get_f64(p + 20);
  f.ctx = electron_context(detail::get_f64(p + 28));
  const std::size_t need = 64 + static_cast<std::size_t>(n) * n * 16;
  if (data.size() < need)
    throw ContractError("read_qpgf: truncated payload at byte offset " +
                        std::to_string(data.size()) + " (need " + std::to_string(need) + ")");
  f.samples.resize(static_cast<std::size_t>(n) * n);
  for (std::size_t i = 0; i < f.samples.size(); ++i) {
    const unsigned char* q = p + 64 + i * 16;
    f.samples[i] = Complex(detail::get_f64(q), detail::get_f64(q + 8));
  }
  return f;
}

namespace detail {

inline std::array<unsigned char, 3> hsv_to_rgb(double hue01, double value) {
  const double h = 6.0 * hue01;
  const int sector = std::min(5, static_cast<int>(h));
  const double frac = h - sector;
  const double q = value * (1.0 - frac);
  const double t = value * frac;
  double r = 0, g = 0, b = 0;
  switch (sector) {
    case 0: r = value; g = t; break;
    case 1: r = q; g = value; break;
    case 2: g = value; b = t; break;
    case 3: g = q; b = value; break;
    case 4: r = t; b = value; break;
    default: r = value; b = q; break;
  }
  const auto to8 = [](double x) {
    return static_cast<unsigned char>(std::clamp(x, 0.0, 1.0) * 255.0 + 0.5);
  };
  return {to8(r), to8(g), to8(b)};
}

}  // namespace detail

// Color-wheel rendering: brightness follows the amplitude, hue the phase.
inline void render_ppm(const FieldGrid& f, const std::string& path) {
  double peak = 0.0;
  for (const Complex& v : f.samples) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) peak = 1.0;
  std::string buf = "P6\n" + std::to_string(f.n) + " " + std::to_string(f.n) + "\n255\n";
  buf.reserve(buf.size() + f.samples.size() * 3);
  for (const Complex& v : f.samples) {
    const double hue01 = (std::arg(v) + pi) / (2.0 * pi);
    const auto rgb = detail::hsv_to_rgb(std::min(hue01, 1.0 - 1e-12), std::abs(v) / peak);
    buf.push_back(static_cast<char>(rgb[0]));
    buf.push_back(static_cast<char>(rgb[1]));
    buf.push_back(static_cast<char>(rgb[2]));
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ContractError("render_ppm: cannot open " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

}  // namespace qpgate
