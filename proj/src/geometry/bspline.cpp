#include "exo/geometry/bspline.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "exo/error.hpp"

namespace exo::geometry {

namespace {
constexpr int kDegree = 3;
constexpr std::size_t kMinNodes = 8;
}  // namespace

CubicKnots::CubicKnots(std::span<const double> nodes) {
  const std::size_t n = nodes.size();
  if (n < 4) throw DataError("cubic interpolation needs at least 4 nodes");
  knots_.reserve(n + 4);
  for (int k = 0; k < 4; ++k) knots_.push_back(nodes.front());
  for (std::size_t i = 2; i + 2 < n; ++i) knots_.push_back(nodes[i]);
  for (int k = 0; k < 4; ++k) knots_.push_back(nodes.back());
}

CubicKnots CubicKnots::from_knot_vector(std::vector<double> knots) {
  if (knots.size() < 8) throw DataError("cubic knot vector needs at least 8 entries");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (knots[i] < knots[i - 1]) throw DataError("knot vector must be non-decreasing");
  }
  CubicKnots out;
  out.knots_ = std::move(knots);
  return out;
}

BasisEval CubicKnots::basis(double x) const {
  const std::vector<double>& u = knots_;
  const std::size_t last = num_basis() - 1;
  std::size_t span;
  if (x >= u[last + 1]) {
    span = last;
  } else {
    span = static_cast<std::size_t>(std::upper_bound(u.begin() + kDegree, u.begin() + last + 1, x) -
                                    u.begin()) - 1;
  }

  // Triangular table of basis values and knot differences.
  double ndu[kDegree + 1][kDegree + 1];
  double left[kDegree + 1], right[kDegree + 1];
  ndu[0][0] = 1.0;
  for (int j = 1; j <= kDegree; ++j) {
    left[j] = x - u[span + 1 - j];
    right[j] = u[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu[j][r] = right[r + 1] + left[j - r];
      const double temp = ndu[r][j - 1] / ndu[j][r];
      ndu[r][j] = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu[j][j] = saved;
  }

  BasisEval out;
  out.first = span - kDegree;
  for (int r = 0; r <= kDegree; ++r) {
    out.value[r] = ndu[r][kDegree];
    double d = 0.0;
    if (r >= 1) d += ndu[r - 1][kDegree - 1] / ndu[kDegree][r - 1];
    if (r <= kDegree - 1) d -= ndu[r][kDegree - 1] / ndu[kDegree][r];
    out.derivative[r] = kDegree * d;
  }
  return out;
}

BSplineSurrogate::BSplineSurrogate(CubicKnots knots, std::vector<double> coefficients,
                                   std::size_t num_mtus)
    : knots_(std::move(knots)), coeffs_(std::move(coefficients)), num_mtus_(num_mtus) {
  num_basis_ = knots_.num_basis();
  if (coeffs_.size() != num_mtus_ * num_basis_) {
    throw DataError("surrogate coefficient count does not match knots x MTUs");
  }
}

std::span<const double> BSplineSurrogate::coefficients(std::size_t mtu) const {
  return {coeffs_.data() + mtu * num_basis_, num_basis_};
}

bool BSplineSurrogate::eval(double angle, std::span<double> length,
                            std::span<double> moment_arm) const {
  const double lo = knots_.lo(), hi = knots_.hi();
  const bool outside = angle < lo || angle > hi;
  const double at = std::clamp(angle, lo, hi);
  const double offset = angle - at;
  const BasisEval b = knots_.basis(at);
  for (std::size_t m = 0; m < num_mtus_; ++m) {
    const double* c = coeffs_.data() + m * num_basis_ + b.first;
    const double len = c[0] * b.value[0] + c[1] * b.value[1] + c[2] * b.value[2] + c[3] * b.value[3];
    const double slope = c[0] * b.derivative[0] + c[1] * b.derivative[1] +
                         c[2] * b.derivative[2] + c[3] * b.derivative[3];
    length[m] = len + slope * offset;
    moment_arm[m] = -slope;
  }
  return outside;
}

SurrogateSample BSplineSurrogate::eval(std::size_t mtu, double angle) const {
  const double at = std::clamp(angle, knots_.lo(), knots_.hi());
  const BasisEval b = knots_.basis(at);
  const double* c = coeffs_.data() + mtu * num_basis_ + b.first;
  double len = 0.0, slope = 0.0;
  for (int k = 0; k < 4; ++k) {
    len += c[k] * b.value[k];
    slope += c[k] * b.derivative[k];
  }
  return {len + slope * (angle - at), -slope};
}

std::vector<std::vector<SurrogateSample>> BSplineSurrogate::eval_batch(
    std::span<const double> angles) const {
  std::vector<std::vector<SurrogateSample>> out(angles.size(),
                                                std::vector<SurrogateSample>(num_mtus_));
  std::vector<double> len(num_mtus_), arm(num_mtus_);
  for (std::size_t k = 0; k < angles.size(); ++k) {
    eval(angles[k], len, arm);
    for (std::size_t m = 0; m < num_mtus_; ++m) out[k][m] = {len[m], arm[m]};
  }
  return out;
}

BSplineSurrogate fit_surrogate(const GeometrySampleGrid& samples) {
  const std::vector<double>& x = samples.angles;
  if (x.size() < kMinNodes) {
    throw DataError("surrogate fit needs at least 8 grid nodes, got " + std::to_string(x.size()));
  }
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw DataError("surrogate grid must be strictly increasing");
  }
  const std::size_t n = x.size();
  const std::size_t mtus = samples.lengths.size();
  for (const auto& row : samples.lengths) {
    if (row.size() != n) throw DataError("length samples do not match the angle grid");
  }

  CubicKnots knots(x);
  Eigen::MatrixXd collocation = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                      static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const BasisEval b = knots.basis(x[i]);
    for (int k = 0; k < 4; ++k) {
      collocation(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(b.first + k)) = b.value[k];
    }
  }
  Eigen::MatrixXd rhs(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(mtus));
  for (std::size_t m = 0; m < mtus; ++m) {
    for (std::size_t i = 0; i < n; ++i) {
      rhs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(m)) = samples.lengths[m][i];
    }
  }
  const Eigen::MatrixXd solution = collocation.partialPivLu().solve(rhs);

  std::vector<double> coeffs(mtus * n);
  for (std::size_t m = 0; m < mtus; ++m) {
    for (std::size_t j = 0; j < n; ++j) {
      coeffs[m * n + j] = solution(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(m));
    }
  }
  return BSplineSurrogate(std::move(knots), std::move(coeffs), mtus);
}

}  // namespace exo::geometry
