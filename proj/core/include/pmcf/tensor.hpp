#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace pmcf {

/// Largest supported ambient dimension (n + 1 with n <= 2).
inline constexpr int kMaxAmbient = 3;
/// Largest supported hypersurface dimension.
inline constexpr int kMaxSpatial = 2;

using Vec2 = std::array<double, kMaxSpatial>;
using Vec3 = std::array<double, kMaxAmbient>;
using Mat2 = std::array<Vec2, kMaxSpatial>;
using Mat3 = std::array<Vec3, kMaxAmbient>;

/// Christoffel symbols indexed [alpha][beta][gamma] = Gamma^alpha_{beta gamma}.
using Christoffel = std::array<Mat3, kMaxAmbient>;
/// Partial derivatives of Christoffel symbols, [mu][alpha][beta][gamma] = d_mu Gamma^alpha_{beta gamma}.
using ChristoffelGradient = std::array<Christoffel, kMaxAmbient>;
/// Fully covariant Riemann tensor R_{alpha beta gamma delta}.
using Riemann = std::array<std::array<Mat3, kMaxAmbient>, kMaxAmbient>;

constexpr Mat2 zero_mat2() { return Mat2{}; }
constexpr Mat3 zero_mat3() { return Mat3{}; }

inline Mat2 identity2(int n) {
  Mat2 m{};
  for (int i = 0; i < n; ++i) m[i][i] = 1.0;
  return m;
}

inline Mat3 identity3(int dim) {
  Mat3 m{};
  for (int i = 0; i < dim; ++i) m[i][i] = 1.0;
  return m;
}

/// Inverse of the leading n x n block, n in {1, 2}. Returns false when singular.
inline bool invert(const Mat2& a, int n, Mat2& out) {
  out = Mat2{};
  if (n == 1) {
    if (a[0][0] == 0.0) return false;
    out[0][0] = 1.0 / a[0][0];
    return true;
  }
  const double det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
  if (det == 0.0) return false;
  out[0][0] = a[1][1] / det;
  out[1][1] = a[0][0] / det;
  out[0][1] = -a[0][1] / det;
  out[1][0] = -a[1][0] / det;
  return true;
}

/// Positive definiteness of the leading n x n block of a symmetric matrix.
inline bool positive_definite(const Mat2& a, int n) {
  if (!(a[0][0] > 0.0)) return false;
  if (n == 1) return true;
  return a[0][0] * a[1][1] - a[0][1] * a[1][0] > 0.0;
}

/// Largest eigenvalue of the leading symmetric n x n block.
inline double max_eigenvalue(const Mat2& a, int n) {
  if (n == 1) return a[0][0];
  const double tr = 0.5 * (a[0][0] + a[1][1]);
  const double d = 0.5 * (a[0][0] - a[1][1]);
  return tr + std::sqrt(d * d + a[0][1] * a[1][0]);
}

/// g(a, b) over the leading dim components.
inline double inner(const Mat3& g, const Vec3& a, const Vec3& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) s += g[i][j] * a[i] * b[j];
  return s;
}

inline Vec3 lower(const Mat3& g, const Vec3& a, int dim) {
  Vec3 out{};
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) out[i] += g[i][j] * a[j];
  return out;
}

/// R(a, b, c, d) = R_{alpha beta gamma delta} a^alpha b^beta c^gamma d^delta.
inline double contract(const Riemann& r, const Vec3& a, const Vec3& b, const Vec3& c, const Vec3& d,
                       int dim) {
  double s = 0.0;
  for (int al = 0; al < dim; ++al)
    for (int be = 0; be < dim; ++be)
      for (int ga = 0; ga < dim; ++ga)
        for (int de = 0; de < dim; ++de) s += r[al][be][ga][de] * a[al] * b[be] * c[ga] * d[de];
  return s;
}

}  // namespace pmcf
