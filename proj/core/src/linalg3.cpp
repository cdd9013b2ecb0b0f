#include "oatecho/linalg3.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace oatecho {

Mat3 identity3() { return Mat3{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0}}}; }

Mat3 transpose(const Mat3& a) {
  Mat3 t{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      t[j][i] = a[i][j];
    }
  }
  return t;
}

Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) {
        s += a[i][k] * b[k][j];
      }
      c[i][j] = s;
    }
  }
  return c;
}

Vec3 operator*(const Mat3& a, const Vec3& v) {
  Vec3 r{};
  for (int i = 0; i < 3; ++i) {
    r[i] = a[i][0] * v[0] + a[i][1] * v[1] + a[i][2] * v[2];
  }
  return r;
}

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

double frobenius_norm(const Mat3& a) {
  double s = 0.0;
  for (const auto& row : a) {
    for (double x : row) {
      s += x * x;
    }
  }
  return std::sqrt(s);
}

double max_abs_diff(const Mat3& a, const Mat3& b) {
  double m = 0.0;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      m = std::max(m, std::abs(a[i][j] - b[i][j]));
    }
  }
  return m;
}

SymmetricEigen3 eigen_symmetric(const Mat3& input) {
  Mat3 a = input;
  Mat3 v = identity3();
  const double scale = frobenius_norm(input);
  const double target = 1e-14 * scale;

  auto off_norm = [&a] {
    return std::sqrt(2.0 * (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2]));
  };

  for (int sweep = 0; sweep < 64 && scale > 0.0 && off_norm() > target; ++sweep) {
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        const double apq = a[p][q];
        if (apq == 0.0) {
          continue;
        }
        const double theta = (a[q][q] - a[p][p]) / (2.0 * apq);
        const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < 3; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < 3; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < 3; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<int, 3> order{0, 1, 2};
  std::stable_sort(order.begin(), order.end(), [&a](int i, int j) { return a[i][i] > a[j][j]; });

  SymmetricEigen3 out;
  for (int c = 0; c < 3; ++c) {
    out.values[c] = a[order[c]][order[c]];
    for (int r = 0; r < 3; ++r) {
      out.vectors[r][c] = v[r][order[c]];
    }
  }
  return out;
}

namespace {

// Completes the orthonormal set {cols[0..k)} with a unit vector.
Vec3 orthonormal_completion(const std::array<Vec3, 3>& cols, int k) {
  Vec3 best{};
  double best_norm = -1.0;
  for (int e = 0; e < 3; ++e) {
    Vec3 w{0.0, 0.0, 0.0};
    w[e] = 1.0;
    for (int i = 0; i < k; ++i) {
      const double p = dot(w, cols[i]);
      for (int r = 0; r < 3; ++r) {
        w[r] -= p * cols[i][r];
      }
    }
    const double n = norm(w);
    if (n > best_norm) {
      best_norm = n;
      best = w;
    }
  }
  for (double& x : best) {
    x /= best_norm;
  }
  return best;
}

}  // namespace

Svd3 svd(const Mat3& b) {
  const SymmetricEigen3 eig = eigen_symmetric(transpose(b) * b);
  const double scale = frobenius_norm(b);

  Svd3 out;
  out.v = eig.vectors;
  std::array<Vec3, 3> ucols{};
  int k = 0;
  for (int i = 0; i < 3; ++i) {
    const Vec3 vi = eig.vector(i);
    const Vec3 bv = b * vi;
    const double s = norm(bv);
    out.values[i] = s;
    if (s > 1e-14 * scale && s > 0.0) {
      Vec3 u{bv[0] / s, bv[1] / s, bv[2] / s};
      // Re-orthogonalize against earlier columns to absorb rounding.
      for (int j = 0; j < k; ++j) {
        const double p = dot(u, ucols[j]);
        for (int r = 0; r < 3; ++r) {
          u[r] -= p * ucols[j][r];
        }
      }
      const double un = norm(u);
      for (double& x : u) {
        x /= un;
      }
      ucols[k++] = u;
    } else {
      ucols[k] = orthonormal_completion(ucols, k);
      ++k;
    }
  }
  for (int c = 0; c < 3; ++c) {
    for (int r = 0; r < 3; ++r) {
      out.u[r][c] = ucols[c][r];
    }
  }
  return out;
}

int leading_index(const Vec3& v) {
  int best = 2;
  for (int k : {1, 0}) {
    if (std::abs(v[k]) > std::abs(v[best]) * (1.0 + 1e-9) + 1e-300) {
      best = k;
    }
  }
  return best;
}

Vec3 canonical_unit_in_span(const std::array<Vec3, 3>& basis, int count) {
  Vec3 out{0.0, 0.0, 1.0};
  double best_norm = -1.0;
  for (int axis : {2, 1, 0}) {
    Vec3 p{0.0, 0.0, 0.0};
    for (int i = 0; i < count; ++i) {
      const double c = basis[i][axis];
      for (int r = 0; r < 3; ++r) {
        p[r] += c * basis[i][r];
      }
    }
    const double pn = norm(p);
    if (pn > best_norm * (1.0 + 1e-9)) {
      best_norm = pn;
      out = {p[0] / pn, p[1] / pn, p[2] / pn};
    }
  }
  if (out[leading_index(out)] < 0.0) {
    for (double& x : out) {
      x = -x;
    }
  }
  return out;
}

}  // namespace oatecho
