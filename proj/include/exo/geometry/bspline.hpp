#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "exo/geometry/geometry.hpp"

namespace exo::geometry {

/// Nonzero cubic basis values and first derivatives at one abscissa.
struct BasisEval {
  std::size_t first = 0;  ///< index of the first of the four active basis functions
  std::array<double, 4> value{};
  std::array<double, 4> derivative{};
};

/// Clamped cubic knot vector with not-a-knot interior knots for a set of
/// strictly increasing interpolation nodes.
class CubicKnots {
 public:
  CubicKnots() = default;
  explicit CubicKnots(std::span<const double> nodes);

  std::size_t num_basis() const { return knots_.size() - 4; }
  double lo() const { return knots_.front(); }
  double hi() const { return knots_.back(); }
  const std::vector<double>& knots() const { return knots_; }

  /// Evaluate the four active basis functions at x, which must be in [lo, hi].
  BasisEval basis(double x) const;

  static CubicKnots from_knot_vector(std::vector<double> knots);

 private:
  std::vector<double> knots_;
};

struct SurrogateSample {
  double length = 0.0;
  double moment_arm = 0.0;
};

/// Per-MTU cubic B-spline of MTU length over the L5/S1 angle. All MTUs share
/// one knot vector, so a single basis evaluation serves the whole roster.
/// The moment arm is -dL/d(angle). Outside the fitted range the length
/// continues linearly with the boundary slope.
class BSplineSurrogate {
 public:
  BSplineSurrogate() = default;
  BSplineSurrogate(CubicKnots knots, std::vector<double> coefficients, std::size_t num_mtus);

  std::size_t num_mtus() const { return num_mtus_; }
  const CubicKnots& knots() const { return knots_; }
  std::span<const double> coefficients(std::size_t mtu) const;

  /// Fills `length` and `moment_arm` (both sized num_mtus). Returns true when
  /// the angle was outside the fitted range and extrapolation was used.
  bool eval(double angle, std::span<double> length, std::span<double> moment_arm) const;

  SurrogateSample eval(std::size_t mtu, double angle) const;

  /// Evaluate many angles; element [k] holds all MTUs at angles[k].
  std::vector<std::vector<SurrogateSample>> eval_batch(std::span<const double> angles) const;

 private:
  CubicKnots knots_;
  std::vector<double> coeffs_;  // row-major [mtu][basis]
  std::size_t num_mtus_ = 0;
  std::size_t num_basis_ = 0;
};

/// Interpolating fit through every grid node. Requires at least 8 strictly
/// increasing nodes; throws DataError otherwise.
BSplineSurrogate fit_surrogate(const GeometrySampleGrid& samples);

}  // namespace exo::geometry
