#include "randpoly/predicates.hpp"

#include <bit>
#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

#include "randpoly/error.hpp"

namespace randpoly::predicates {
namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr double kEps = std::numeric_limits<double>::epsilon() * 0.5;

double gamma(int k) {
  const double ke = k * kEps;
  return ke / (1.0 - ke);
}

// Minors of the leading rows: table[mask] is the determinant of the square
// submatrix formed by rows 0..popcount(mask)-1 and the columns in mask, by
// Laplace expansion along its last row. `perm` receives the same expansion
// on absolute values (the permanent of |A|), which bounds rounding error.
template <class T>
void leading_minors(const T* rows, int dim, int row_count, T* table, double* perm) {
  table[0] = T(1);
  if (perm != nullptr) perm[0] = 1.0;
  const unsigned limit = 1u << dim;
  for (unsigned mask = 1; mask < limit; ++mask) {
    const int k = std::popcount(mask);
    if (k > row_count) continue;
    const int r = k - 1;
    T acc(0);
    double pacc = 0.0;
    int j = 0;
    for (int c = 0; c < dim; ++c) {
      if (!(mask & (1u << c))) continue;
      const unsigned sub = mask & ~(1u << c);
      const T& a = rows[r * dim + c];
      if ((r + j) % 2 == 0) {
        acc += a * table[sub];
      } else {
        acc -= a * table[sub];
      }
      if constexpr (std::is_same_v<T, double>) {
        if (perm != nullptr) pacc += std::abs(a) * perm[sub];
      }
      ++j;
    }
    table[mask] = acc;
    if (perm != nullptr) perm[mask] = pacc;
  }
}

int sign_of(const Rational& v) { return v > 0 ? 1 : (v < 0 ? -1 : 0); }

// Exact determinant sign of a square rational matrix (row-major), destructive.
int determinant_sign(std::vector<Rational>& m, int n) {
  int sign = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (m[r * n + col] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) return 0;
    if (pivot != col) {
      for (int c = 0; c < n; ++c) std::swap(m[pivot * n + c], m[col * n + c]);
      sign = -sign;
    }
    if (m[col * n + col] < 0) sign = -sign;
    for (int r = col + 1; r < n; ++r) {
      if (m[r * n + col] == 0) continue;
      const Rational f = m[r * n + col] / m[col * n + col];
      for (int c = col; c < n; ++c) m[r * n + c] -= f * m[col * n + c];
    }
  }
  return sign;
}

// Exact rank of a rows x cols rational matrix (row-major), destructive.
int matrix_rank(std::vector<Rational>& m, int rows, int cols) {
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (m[r * cols + col] != 0) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != rank) {
      for (int c = 0; c < cols; ++c) std::swap(m[pivot * cols + c], m[rank * cols + c]);
    }
    for (int r = rank + 1; r < rows; ++r) {
      if (m[r * cols + col] == 0) continue;
      const Rational f = m[r * cols + col] / m[rank * cols + col];
      for (int c = col; c < cols; ++c) m[r * cols + c] -= f * m[rank * cols + c];
    }
    ++rank;
  }
  return rank;
}

void check_dim(int dim) {
  if (dim < 1 || dim > kMaxHullDim) {
    fail(ErrorCode::kUnsupported,
         "predicates support dimensions 1.." + std::to_string(kMaxHullDim) + ", got " +
             std::to_string(dim));
  }
}

}  // namespace

Hyperplane::Hyperplane(std::span<const PointRef> points) {
  dim_ = static_cast<int>(points.size());
  check_dim(dim_);
  for (int i = 0; i < dim_; ++i) {
    if (static_cast<int>(points[static_cast<std::size_t>(i)].size()) != dim_) {
      fail(ErrorCode::kDimensionMismatch, "hyperplane needs d points of dimension d");
    }
    for (int c = 0; c < dim_; ++c) points_[static_cast<std::size_t>(i * dim_ + c)] = points[static_cast<std::size_t>(i)][static_cast<std::size_t>(c)];
  }
  std::array<double, kMaxHullDim * kMaxHullDim> rows{};
  for (int i = 1; i < dim_; ++i) {
    for (int c = 0; c < dim_; ++c) {
      rows[static_cast<std::size_t>((i - 1) * dim_ + c)] =
          points_[static_cast<std::size_t>(i * dim_ + c)] - points_[static_cast<std::size_t>(c)];
    }
  }
  std::array<double, 1u << kMaxHullDim> table{};
  std::array<double, 1u << kMaxHullDim> perm{};
  leading_minors(rows.data(), dim_, dim_ - 1, table.data(), perm.data());
  const unsigned full = (1u << dim_) - 1;
  for (int c = 0; c < dim_; ++c) {
    const unsigned sub = full & ~(1u << c);
    const double s = ((dim_ - 1 + c) % 2 == 0) ? 1.0 : -1.0;
    cofactor_[static_cast<std::size_t>(c)] = s * table[sub];
    permanent_[static_cast<std::size_t>(c)] = perm[sub];
  }
  // Rounding steps along any product path: entry subtraction, the Laplace
  // recursion, the query subtraction and the final dot product. Doubled for
  // slack on the permanent itself being rounded.
  gamma_ = 2.0 * gamma(dim_ * dim_ + 3 * dim_ + 4);
}

int Hyperplane::side(PointRef q) const {
  double s = 0.0;
  double bound = 0.0;
  for (int c = 0; c < dim_; ++c) {
    const double x = q[static_cast<std::size_t>(c)] - points_[static_cast<std::size_t>(c)];
    s += x * cofactor_[static_cast<std::size_t>(c)];
    bound += std::abs(x) * permanent_[static_cast<std::size_t>(c)];
  }
  const double err = gamma_ * bound;
  int sign;
  if (bound > 1e-250 && s > err) {
    sign = 1;
  } else if (bound > 1e-250 && s < -err) {
    sign = -1;
  } else {
    sign = exact_side(q);
  }
  return flipped_ ? -sign : sign;
}

int Hyperplane::exact_side(PointRef q) const {
  std::vector<Rational> m(static_cast<std::size_t>(dim_ * dim_));
  for (int i = 1; i < dim_; ++i) {
    for (int c = 0; c < dim_; ++c) {
      m[static_cast<std::size_t>((i - 1) * dim_ + c)] =
          Rational(points_[static_cast<std::size_t>(i * dim_ + c)]) - Rational(points_[static_cast<std::size_t>(c)]);
    }
  }
  for (int c = 0; c < dim_; ++c) {
    m[static_cast<std::size_t>((dim_ - 1) * dim_ + c)] =
        Rational(q[static_cast<std::size_t>(c)]) - Rational(points_[static_cast<std::size_t>(c)]);
  }
  return determinant_sign(m, dim_);
}

Vector Hyperplane::unit_normal() const {
  Vector n(dim_);
  for (int c = 0; c < dim_; ++c) n[c] = cofactor_[static_cast<std::size_t>(c)];
  const double norm = n.norm();
  if (norm > 0.0) n /= norm;
  return flipped_ ? Vector(-n) : n;
}

double Hyperplane::offset() const { return unit_normal().dot(as_vector(point(0))); }

bool Hyperplane::nondegenerate() const {
  std::vector<PointRef> pts;
  for (int i = 0; i < dim_; ++i) pts.push_back(point(i));
  return affine_rank(pts) == dim_ - 1;
}

int orientation(std::span<const PointRef> simplex, PointRef q) {
  return Hyperplane(simplex).side(q);
}

int affine_rank(std::span<const PointRef> points) {
  if (points.empty()) return -1;
  const int dim = static_cast<int>(points[0].size());
  const int rows = static_cast<int>(points.size()) - 1;
  if (rows == 0) return 0;
  std::vector<Rational> m(static_cast<std::size_t>(rows * dim));
  for (int i = 0; i < rows; ++i) {
    const PointRef p = points[static_cast<std::size_t>(i + 1)];
    if (static_cast<int>(p.size()) != dim) fail(ErrorCode::kDimensionMismatch, "affine_rank: mixed dimensions");
    for (int c = 0; c < dim; ++c) {
      m[static_cast<std::size_t>(i * dim + c)] = Rational(p[static_cast<std::size_t>(c)]) - Rational(points[0][static_cast<std::size_t>(c)]);
    }
  }
  return matrix_rank(m, rows, dim);
}

int affine_sign(PointRef a, PointRef x, double b) {
  if (a.size() != x.size()) fail(ErrorCode::kDimensionMismatch, "affine_sign: dimension mismatch");
  double s = -b;
  double bound = std::abs(b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    s += a[i] * x[i];
    bound += std::abs(a[i] * x[i]);
  }
  const double err = 2.0 * gamma(static_cast<int>(a.size()) + 2) * bound;
  if (bound > 1e-250) {
    if (s > err) return 1;
    if (s < -err) return -1;
  }
  Rational e = -Rational(b);
  for (std::size_t i = 0; i < a.size(); ++i) e += Rational(a[i]) * Rational(x[i]);
  return sign_of(e);
}

int normal_rank(std::span<const Hyperplane* const> planes) {
  if (planes.empty()) return 0;
  const int dim = planes[0]->dim();
  const int rows = static_cast<int>(planes.size());
  std::vector<Rational> normals(static_cast<std::size_t>(rows * dim));
  std::vector<Rational> edge(static_cast<std::size_t>(dim * dim));
  std::vector<Rational> table(1u << dim);
  for (int r = 0; r < rows; ++r) {
    const Hyperplane& h = *planes[static_cast<std::size_t>(r)];
    for (int i = 1; i < dim; ++i) {
      for (int c = 0; c < dim; ++c) {
        edge[static_cast<std::size_t>((i - 1) * dim + c)] =
            Rational(h.point(i)[static_cast<std::size_t>(c)]) - Rational(h.point(0)[static_cast<std::size_t>(c)]);
      }
    }
    leading_minors<Rational>(edge.data(), dim, dim - 1, table.data(), nullptr);
    const unsigned full = (1u << dim) - 1;
    for (int c = 0; c < dim; ++c) {
      normals[static_cast<std::size_t>(r * dim + c)] = table[full & ~(1u << c)];
    }
  }
  return matrix_rank(normals, rows, dim);
}

}  // namespace randpoly::predicates
