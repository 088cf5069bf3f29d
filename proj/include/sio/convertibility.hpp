#pragma once

#include <array>
#include <cmath>

#include "sio/errors.hpp"
#include "sio/linalg.hpp"

namespace sio {

namespace detail {
inline void require_bloch(const BlochVector& v, const char* which) {
  if (!std::isfinite(v.rx) || !std::isfinite(v.ry) || !std::isfinite(v.rz) || v.norm() > 1.0 + kEps)
    throw DomainError(std::string(which) + " is not a valid Bloch vector");
}
}  // namespace detail

/// Reachability under stochastic SIO: s_x^2 + s_y^2 <= r_x^2 + r_y^2 and |s_z| <= |r_z|.
inline bool convertible_sio(const BlochVector& r, const BlochVector& s) {
  detail::require_bloch(r, "source");
  detail::require_bloch(s, "target");
  return s.rx * s.rx + s.ry * s.ry <= r.rx * r.rx + r.ry * r.ry + kEps && std::abs(s.rz) <= std::abs(r.rz) + kEps;
}

/// Reachability under Pauli-form stochastic SIO: componentwise |s_i| <= |r_i|.
inline bool convertible_pauli_sio(const BlochVector& r, const BlochVector& s) {
  detail::require_bloch(r, "source");
  detail::require_bloch(s, "target");
  return std::abs(s.rx) <= std::abs(r.rx) + kEps && std::abs(s.ry) <= std::abs(r.ry) + kEps &&
         std::abs(s.rz) <= std::abs(r.rz) + kEps;
}

/// Set of Bloch vectors reachable from one state: a z-aligned cylinder for
/// general SIO, an origin-centred box for the Pauli-only family.
struct ImageRegion {
  enum class Kind { Cylinder, Cuboid };

  Kind kind = Kind::Cylinder;
  double radius = 0.0;
  double half_height = 0.0;
  std::array<double, 3> half_extents{};

  bool contains(const BlochVector& s) const {
    if (kind == Kind::Cylinder)
      return s.rx * s.rx + s.ry * s.ry <= radius * radius + kEps && std::abs(s.rz) <= half_height + kEps;
    return std::abs(s.rx) <= half_extents[0] + kEps && std::abs(s.ry) <= half_extents[1] + kEps &&
           std::abs(s.rz) <= half_extents[2] + kEps;
  }
};

inline ImageRegion image_region(const BlochVector& r, bool pauli_only) {
  detail::require_bloch(r, "source");
  ImageRegion region;
  if (pauli_only) {
    region.kind = ImageRegion::Kind::Cuboid;
    region.half_extents = {std::abs(r.rx), std::abs(r.ry), std::abs(r.rz)};
  } else {
    region.kind = ImageRegion::Kind::Cylinder;
    region.radius = std::hypot(r.rx, r.ry);
    region.half_height = std::abs(r.rz);
  }
  return region;
}

}  // namespace sio
