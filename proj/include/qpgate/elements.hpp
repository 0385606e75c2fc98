#pragma once

#include <optional>
#include <variant>
#include <vector>

namespace qpgate {

struct Drift {
  double length = 0.0;  // m, >= 0
};

struct RoundLens {
  double f = 0.0;  // m, != 0
};

// Focal length +f along the element's own x' axis, -f along y'.
// An unset f means the quadrupole is switched off.
struct Quadrupole {
  std::optional<double> f;
  double axis_angle = 0.0;  // rad, orientation of x' in the lab frame
};

// Ideal rotation of the transverse coordinate frame (Larmor-style).
struct Rotator {
  double angle = 0.0;  // rad
};

using Element = std::variant<Drift, RoundLens, Quadrupole, Rotator>;
using OpticsLine = std::vector<Element>;

}  // namespace qpgate
