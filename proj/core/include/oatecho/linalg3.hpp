#pragma once

// Dependency-free dense 3x3 linear algebra for the direction optimizer.

#include <array>

#include "oatecho/core.hpp"

namespace oatecho {

/// Row-major 3x3 matrix: m[row][col].
using Mat3 = std::array<Vec3, 3>;

Mat3 identity3();
Mat3 transpose(const Mat3& a);
Mat3 operator*(const Mat3& a, const Mat3& b);
Vec3 operator*(const Mat3& a, const Vec3& v);
double dot(const Vec3& a, const Vec3& b);
double norm(const Vec3& v);
Vec3 cross(const Vec3& a, const Vec3& b);
double frobenius_norm(const Mat3& a);
double max_abs_diff(const Mat3& a, const Mat3& b);

/// Eigen-decomposition of a real symmetric matrix. Eigenvalues are sorted in
/// descending order; eigenvector i is column i of `vectors`.
struct SymmetricEigen3 {
  Vec3 values{};
  Mat3 vectors{};

  [[nodiscard]] Vec3 vector(int i) const { return {vectors[0][i], vectors[1][i], vectors[2][i]}; }
};

/// Cyclic Jacobi sweeps until the off-diagonal norm is below
/// 1e-14 times the Frobenius norm of the input.
SymmetricEigen3 eigen_symmetric(const Mat3& a);

/// B = U diag(values) V^T, singular values descending. V comes from the
/// eigenvectors of B^T B; each u_i = B v_i / s_i, so the pairs carry
/// consistent signs. Columns of U belonging to zero singular values are an
/// orthonormal completion.
struct Svd3 {
  Vec3 values{};
  Mat3 u{};
  Mat3 v{};

  [[nodiscard]] Vec3 left(int i) const { return {u[0][i], u[1][i], u[2][i]}; }
  [[nodiscard]] Vec3 right(int i) const { return {v[0][i], v[1][i], v[2][i]}; }
};

Svd3 svd(const Mat3& b);

/// Index of the largest |component|; near-ties resolve toward z, then y, then x.
int leading_index(const Vec3& v);

/// Deterministic unit vector inside span{basis[0..count)} (orthonormal
/// columns): the longest projection of e_z, e_y or e_x onto the span, in that
/// order of preference, with a positive leading component.
Vec3 canonical_unit_in_span(const std::array<Vec3, 3>& basis, int count);

}  // namespace oatecho
