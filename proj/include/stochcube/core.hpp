#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

// Core value types: dense square matrices and cubic (n x n x n) grids,
// plus the validated stochastic wrappers built on top of them.
//
// Index convention: all code is 0-based. The textbook 1-based entry
// p_{ijk} of a cubic matrix lives at Cubic::at(i-1, j-1, k-1).
// Cubic storage is frontal-slice-major: k outermost, then i, then j,
// i.e. offset(i,j,k) = (k*n + i)*n + j. This matches the frontal
// matricization used by the file formats (see io.hpp).
//
// Every validated type is immutable after construction; instances can be
// freely shared across threads.

namespace stochcube {

struct ShapeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

// Shortest decimal string that round-trips to the same double.
inline std::string dtoa(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace detail

// Tolerance for all admission checks. An entry v passes nonnegativity if
// v >= -eps; a sum s passes if |s - 1| <= eps.
class Tolerance {
 public:
  Tolerance() = default;
  explicit Tolerance(double eps) : eps_(eps) {
    if (!(eps >= 0.0)) {
      throw DomainError("tolerance eps must be nonnegative, got " +
                        detail::dtoa(eps));
    }
  }

  double eps() const { return eps_; }

  bool nonnegative(double v) const { return v >= -eps_; }
  bool sums_to_one(double s) const { return std::abs(s - 1.0) <= eps_; }

 private:
  double eps_ = 1e-9;
};

// Outcome of a stochasticity check. On failure `message` names the first
// offending index set and the computed value, e.g.
//   "frontal slice k=1 (0-based) sums to 0.9, expected 1 within eps=1e-09".
struct ValidationReport {
  bool ok = true;
  std::string message;

  explicit operator bool() const { return ok; }

  static ValidationReport pass() { return {}; }
  static ValidationReport fail(std::string msg) {
    return {false, std::move(msg)};
  }
};

// Dense row-major matrix. Plain carrier with no invariants; the validated
// types below wrap it.
class Matrix {
 public:
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1) {
      throw ShapeError("matrix dimensions must be positive");
    }
    v_.assign(static_cast<std::size_t>(rows) * cols, fill);
  }

  Matrix(int rows, int cols, std::vector<double> values)
      : rows_(rows), cols_(cols), v_(std::move(values)) {
    if (rows < 1 || cols < 1) {
      throw ShapeError("matrix dimensions must be positive");
    }
    if (v_.size() != static_cast<std::size_t>(rows) * cols) {
      throw ShapeError("matrix value count " + std::to_string(v_.size()) +
                       " does not match " + std::to_string(rows) + "x" +
                       std::to_string(cols));
    }
  }

  static Matrix identity(int n) {
    Matrix m(n, n, 0.0);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& at(int i, int j) { return v_[static_cast<std::size_t>(i) * cols_ + j]; }
  double at(int i, int j) const {
    return v_[static_cast<std::size_t>(i) * cols_ + j];
  }

  const std::vector<double>& values() const { return v_; }

 private:
  int rows_;
  int cols_;
  std::vector<double> v_;
};

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: inner dimensions differ (" +
                     std::to_string(a.cols()) + " vs " +
                     std::to_string(b.rows()) + ")");
  }
  Matrix out(a.rows(), b.cols(), 0.0);
  for (int i = 0; i < a.rows(); ++i) {
    for (int k = 0; k < a.cols(); ++k) {
      const double aik = a.at(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < b.cols(); ++j) {
        out.at(i, j) += aik * b.at(k, j);
      }
    }
  }
  return out;
}

inline Matrix transpose(const Matrix& m) {
  Matrix out(m.cols(), m.rows());
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) out.at(j, i) = m.at(i, j);
  }
  return out;
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError("max_abs_diff: matrix shapes differ");
  }
  double d = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
  }
  return d;
}

// Dense n x n x n grid in frontal-slice-major order. Plain carrier.
class Cubic {
 public:
  explicit Cubic(int n, double fill = 0.0) : n_(n) {
    if (n < 1) throw ShapeError("cubic dimension must be positive");
    v_.assign(static_cast<std::size_t>(n) * n * n, fill);
  }

  Cubic(int n, std::vector<double> frontal_major)
      : n_(n), v_(std::move(frontal_major)) {
    if (n < 1) throw ShapeError("cubic dimension must be positive");
    if (v_.size() != static_cast<std::size_t>(n) * n * n) {
      throw ShapeError("cubic value count " + std::to_string(v_.size()) +
                       " does not match n^3 for n=" + std::to_string(n));
    }
  }

  int n() const { return n_; }

  double& at(int i, int j, int k) {
    return v_[(static_cast<std::size_t>(k) * n_ + i) * n_ + j];
  }
  double at(int i, int j, int k) const {
    return v_[(static_cast<std::size_t>(k) * n_ + i) * n_ + j];
  }

  const std::vector<double>& values() const { return v_; }

 private:
  int n_;
  std::vector<double> v_;
};

inline double max_abs_diff(const Cubic& a, const Cubic& b) {
  if (a.n() != b.n()) throw ShapeError("max_abs_diff: cubic sizes differ");
  double d = 0.0;
  for (std::size_t i = 0; i < a.values().size(); ++i) {
    d = std::max(d, std::abs(a.values()[i] - b.values()[i]));
  }
  return d;
}

// The four stochasticity conditions a cubic grid can satisfy.
enum class CubicKind {
  Type12,           // sum_{i,j} p_ijk = 1 for every k
  Type23,           // sum_{j,k} p_ijk = 1 for every i
  Type13,           // sum_{i,k} p_ijk = 1 for every j
  ThreeStochastic,  // sum_k p_ijk = 1 for every (i,j)
};

inline const char* to_string(CubicKind kind) {
  switch (kind) {
    case CubicKind::Type12: return "type (1,2)";
    case CubicKind::Type23: return "type (2,3)";
    case CubicKind::Type13: return "type (1,3)";
    case CubicKind::ThreeStochastic: return "3-stochastic";
  }
  return "?";
}

namespace detail {

inline std::string sum_failure(const std::string& what, double sum,
                               double eps) {
  return what + " sums to " + dtoa(sum) + ", expected 1 within eps=" +
         dtoa(eps);
}

inline std::string negative_failure(const std::string& where, double v,
                                    double eps) {
  return "negative entry " + dtoa(v) + " at " + where +
         " (0-based), below -eps=" + dtoa(-eps);
}

}  // namespace detail

// Checks the named sum condition plus nonnegativity, within tolerance.
// Pure predicate: never modifies the grid, reports the first failure.
inline ValidationReport validate_cubic(const Cubic& g, CubicKind kind,
                                       Tolerance tol = {}) {
  const int n = g.n();
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double v = g.at(i, j, k);
        if (!tol.nonnegative(v)) {
          return ValidationReport::fail(detail::negative_failure(
              "(i,j,k)=(" + std::to_string(i) + "," + std::to_string(j) +
                  "," + std::to_string(k) + ")",
              v, tol.eps()));
        }
      }
    }
  }
  switch (kind) {
    case CubicKind::Type12:
      for (int k = 0; k < n; ++k) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) s += g.at(i, j, k);
        if (!tol.sums_to_one(s)) {
          return ValidationReport::fail(detail::sum_failure(
              "frontal slice k=" + std::to_string(k) + " (0-based)", s,
              tol.eps()));
        }
      }
      break;
    case CubicKind::Type23:
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) s += g.at(i, j, k);
        if (!tol.sums_to_one(s)) {
          return ValidationReport::fail(detail::sum_failure(
              "horizontal slice i=" + std::to_string(i) + " (0-based)", s,
              tol.eps()));
        }
      }
      break;
    case CubicKind::Type13:
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k) s += g.at(i, j, k);
        if (!tol.sums_to_one(s)) {
          return ValidationReport::fail(detail::sum_failure(
              "lateral slice j=" + std::to_string(j) + " (0-based)", s,
              tol.eps()));
        }
      }
      break;
    case CubicKind::ThreeStochastic:
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int k = 0; k < n; ++k) s += g.at(i, j, k);
          if (!tol.sums_to_one(s)) {
            return ValidationReport::fail(detail::sum_failure(
                "tube (i,j)=(" + std::to_string(i) + "," +
                    std::to_string(j) + ") (0-based)",
                s, tol.eps()));
          }
        }
      }
      break;
  }
  return ValidationReport::pass();
}

// Column-stochasticity check for a square matrix: entries nonnegative,
// every column sums to 1 within tolerance.
inline ValidationReport validate_column_stochastic(const Matrix& m,
                                                   Tolerance tol = {}) {
  if (m.rows() != m.cols()) {
    return ValidationReport::fail("matrix is " + std::to_string(m.rows()) +
                                  "x" + std::to_string(m.cols()) +
                                  ", expected square");
  }
  const int n = m.rows();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = m.at(i, j);
      if (!tol.nonnegative(v)) {
        return ValidationReport::fail(detail::negative_failure(
            "(i,j)=(" + std::to_string(i) + "," + std::to_string(j) + ")", v,
            tol.eps()));
      }
    }
  }
  for (int j = 0; j < n; ++j) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += m.at(i, j);
    if (!tol.sums_to_one(s)) {
      return ValidationReport::fail(detail::sum_failure(
          "column j=" + std::to_string(j) + " (0-based)", s, tol.eps()));
    }
  }
  return ValidationReport::pass();
}

inline ValidationReport validate_simplex(const std::vector<double>& x,
                                         Tolerance tol = {}) {
  if (x.empty()) return ValidationReport::fail("simplex vector is empty");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!tol.nonnegative(x[i])) {
      return ValidationReport::fail(detail::negative_failure(
          "index " + std::to_string(i), x[i], tol.eps()));
    }
    s += x[i];
  }
  if (!tol.sums_to_one(s)) {
    return ValidationReport::fail(
        detail::sum_failure("simplex vector", s, tol.eps()));
  }
  return ValidationReport::pass();
}

namespace detail {

// Admission clamps entries in (-eps, 0) to exact 0 so the nonnegativity
// invariant holds literally downstream. Sums were already checked on the
// raw values, so an accepted grid re-validates as given.
inline void clamp_negatives(std::vector<double>& v) {
  for (double& x : v) {
    if (x < 0.0) x = 0.0;
  }
}

}  // namespace detail

// Element of NS(n,R): nonnegative n x n, every column sums to 1.
// Entry (i,j) is the transition probability from state j to state i.
class StochasticMatrix {
 public:
  explicit StochasticMatrix(Matrix m, Tolerance tol = {}) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) {
      throw ShapeError("stochastic matrix must be square, got " +
                       std::to_string(m_.rows()) + "x" +
                       std::to_string(m_.cols()));
    }
    auto report = validate_column_stochastic(m_, tol);
    if (!report) {
      throw ValidationError("not column stochastic: " + report.message);
    }
    std::vector<double> v = m_.values();
    detail::clamp_negatives(v);
    m_ = Matrix(m_.rows(), m_.cols(), std::move(v));
  }

  static StochasticMatrix identity(int n) {
    return StochasticMatrix(Matrix::identity(n));
  }

  int n() const { return m_.rows(); }
  double at(int i, int j) const { return m_.at(i, j); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

// Element of CS_(1,2)(n,R): nonnegative n x n x n, each frontal slice has
// total entry-sum 1.
class CubicStochastic12 {
 public:
  explicit CubicStochastic12(Cubic g, Tolerance tol = {}) : g_(std::move(g)) {
    auto report = validate_cubic(g_, CubicKind::Type12, tol);
    if (!report) {
      throw ValidationError("not cubic stochastic of type (1,2): " +
                            report.message);
    }
    std::vector<double> v = g_.values();
    detail::clamp_negatives(v);
    g_ = Cubic(g_.n(), std::move(v));
  }

  int n() const { return g_.n(); }
  double at(int i, int j, int k) const { return g_.at(i, j, k); }
  const Cubic& grid() const { return g_; }

 private:
  Cubic g_;
};

// Nonnegative n x n x n grid whose tubes sum to 1; the coefficient array
// of a quadratic stochastic operator.
class Cubic3Stochastic {
 public:
  explicit Cubic3Stochastic(Cubic g, Tolerance tol = {}) : g_(std::move(g)) {
    auto report = validate_cubic(g_, CubicKind::ThreeStochastic, tol);
    if (!report) {
      throw ValidationError("not 3-stochastic: " + report.message);
    }
    std::vector<double> v = g_.values();
    detail::clamp_negatives(v);
    g_ = Cubic(g_.n(), std::move(v));
  }

  int n() const { return g_.n(); }
  double at(int i, int j, int k) const { return g_.at(i, j, k); }
  const Cubic& grid() const { return g_; }

 private:
  Cubic g_;
};

// Point of the (n-1)-dimensional probability simplex.
class SimplexVector {
 public:
  explicit SimplexVector(std::vector<double> x, Tolerance tol = {})
      : x_(std::move(x)) {
    auto report = validate_simplex(x_, tol);
    if (!report) {
      throw ValidationError("not a simplex vector: " + report.message);
    }
    detail::clamp_negatives(x_);
  }

  static SimplexVector vertex(int n, int m) {
    std::vector<double> x(n, 0.0);
    x.at(m) = 1.0;
    return SimplexVector(std::move(x));
  }

  int n() const { return static_cast<int>(x_.size()); }
  double at(int i) const { return x_[i]; }
  const std::vector<double>& values() const { return x_; }

 private:
  std::vector<double> x_;
};

// Segregation coefficient pair (lambda1, lambda2): nonnegative, sum 1.
class Weights {
 public:
  Weights(double lambda1, double lambda2, Tolerance tol = {})
      : l1_(lambda1), l2_(lambda2) {
    if (!tol.nonnegative(l1_) || !tol.nonnegative(l2_)) {
      throw DomainError("weights must be nonnegative, got (" +
                        detail::dtoa(l1_) + ", " + detail::dtoa(l2_) + ")");
    }
    if (!tol.sums_to_one(l1_ + l2_)) {
      throw DomainError("weights must sum to 1, got " +
                        detail::dtoa(l1_ + l2_));
    }
    if (l1_ < 0.0) l1_ = 0.0;
    if (l2_ < 0.0) l2_ = 0.0;
  }

  double first() const { return l1_; }
  double second() const { return l2_; }

 private:
  double l1_;
  double l2_;
};

// Entrywise lambda*A + (1-lambda)*B. Stochasticity is preserved for any
// lambda in [0,1]; the result is re-admitted through the validating
// constructor.
inline StochasticMatrix convex_combine(const StochasticMatrix& a,
                                       const StochasticMatrix& b,
                                       double lambda) {
  if (lambda < 0.0 || lambda > 1.0) {
    throw DomainError("convex_combine: lambda must lie in [0,1], got " +
                      detail::dtoa(lambda));
  }
  if (a.n() != b.n()) {
    throw ShapeError("convex_combine: sizes differ (" + std::to_string(a.n()) +
                     " vs " + std::to_string(b.n()) + ")");
  }
  const int n = a.n();
  Matrix out(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out.at(i, j) = lambda * a.at(i, j) + (1.0 - lambda) * b.at(i, j);
    }
  }
  return StochasticMatrix(std::move(out));
}

inline CubicStochastic12 convex_combine(const CubicStochastic12& a,
                                        const CubicStochastic12& b,
                                        double lambda) {
  if (lambda < 0.0 || lambda > 1.0) {
    throw DomainError("convex_combine: lambda must lie in [0,1], got " +
                      detail::dtoa(lambda));
  }
  if (a.n() != b.n()) {
    throw ShapeError("convex_combine: sizes differ (" + std::to_string(a.n()) +
                     " vs " + std::to_string(b.n()) + ")");
  }
  const int n = a.n();
  Cubic out(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        out.at(i, j, k) =
            lambda * a.at(i, j, k) + (1.0 - lambda) * b.at(i, j, k);
      }
    }
  }
  return CubicStochastic12(std::move(out));
}

// Ordinary matrix product; NS(n,R) is closed under it.
inline StochasticMatrix matmul(const StochasticMatrix& a,
                               const StochasticMatrix& b) {
  return StochasticMatrix(matmul(a.matrix(), b.matrix()));
}

}  // namespace stochcube
