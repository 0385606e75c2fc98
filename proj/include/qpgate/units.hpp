#pragma once

#include <cctype>
#include <cstdlib>
#include <string>

#include "qpgate/errors.hpp"
#include "qpgate/math_util.hpp"

namespace qpgate {

namespace detail {

inline double parse_number_prefix(const std::string& text, std::string& suffix,
                                  const char* what) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double value = std::strtod(begin, &end);
  if (end == begin) throw ContractError(std::string(what) + ": cannot parse '" + text + "'");
  suffix.assign(end);
  while (!suffix.empty() && std::isspace(static_cast<unsigned char>(suffix.front())))
    suffix.erase(suffix.begin());
  return value;
}

}  // namespace detail

// Lengths require a unit suffix (m, mm, nm); bare numbers are rejected so
// unit mistakes fail loudly.
inline double parse_length(const std::string& text) {
  std::string suffix;
  const double v = detail::parse_number_prefix(text, suffix, "length");
  if (suffix == "m") return v;
  if (suffix == "mm") return v * 1e-3;
  if (suffix == "nm") return v * 1e-9;
  if (suffix.empty())
    throw ContractError("length '" + text + "' is missing a unit (m, mm or nm)");
  throw ContractError("length '" + text + "' has unknown unit '" + suffix + "'");
}

// Angles require deg or rad.
inline double parse_angle(const std::string& text) {
  std::string suffix;
  const double v = detail::parse_number_prefix(text, suffix, "angle");
  if (suffix == "rad") return v;
  if (suffix == "deg") return v * pi / 180.0;
  if (suffix.empty())
    throw ContractError("angle '" + text + "' is missing a unit (deg or rad)");
  throw ContractError("angle '" + text + "' has unknown unit '" + suffix + "'");
}

// Energies are keV by convention; an explicit keV suffix is accepted.
inline double parse_energy_kev(const std::string& text) {
  std::string suffix;
  const double v = detail::parse_number_prefix(text, suffix, "energy");
  if (suffix.empty() || suffix == "keV") return v;
  throw ContractError("energy '" + text + "' has unknown unit '" + suffix + "' (use keV)");
}

}  // namespace qpgate
