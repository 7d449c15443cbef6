#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stochcube/core.hpp"

// Lower-dimensional views of a cubic grid: slices, fibers, the frontal
// matricization, and the two accompanying (marginal) matrices of a cubic
// stochastic matrix of type (1,2).
//
// All functions return copies; inputs are never aliased or mutated.

namespace stochcube {

enum class SliceAxis {
  Horizontal,  // fix the first index:  P_{h::}, entry (j,k)
  Lateral,     // fix the second index: P_{:h:}, entry (i,k)
  Frontal,     // fix the third index:  P_{::h}, entry (i,j)
};

enum class FiberAxis {
  Column,  // fix (j,k): P_{:jk}
  Row,     // fix (i,k): P_{i:k}
  Tube,    // fix (i,j): P_{ij:}
};

inline const char* to_string(SliceAxis axis) {
  switch (axis) {
    case SliceAxis::Horizontal: return "horizontal";
    case SliceAxis::Lateral: return "lateral";
    case SliceAxis::Frontal: return "frontal";
  }
  return "?";
}

// The n slices of a cubic grid along one axis. Only the frontal slices of
// a type-(1,2) grid carry a stochastic guarantee (each has total sum 1);
// horizontal and lateral slices carry none.
struct SliceFamily {
  SliceAxis axis;
  std::vector<Matrix> slices;
};

// The n^2 fibers of a cubic grid along one axis, indexed by the two fixed
// indices as first*n + second. Tube fibers of a 3-stochastic grid each sum
// to 1; no guarantee otherwise.
struct FiberFamily {
  FiberAxis axis;
  int n;
  std::vector<std::vector<double>> fibers;

  const std::vector<double>& at(int first, int second) const {
    return fibers[static_cast<std::size_t>(first) * n + second];
  }
};

namespace detail {

inline void check_index(int h, int n, const char* what) {
  if (h < 0 || h >= n) {
    throw DomainError(std::string(what) + " index " + std::to_string(h) +
                      " out of range [0," + std::to_string(n - 1) + "]");
  }
}

}  // namespace detail

// Extracts one slice, 0-based index along the fixed axis.
inline Matrix slice(const Cubic& g, SliceAxis axis, int h) {
  const int n = g.n();
  detail::check_index(h, n, "slice");
  Matrix out(n, n);
  switch (axis) {
    case SliceAxis::Horizontal:
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) out.at(j, k) = g.at(h, j, k);
      break;
    case SliceAxis::Lateral:
      for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) out.at(i, k) = g.at(i, h, k);
      break;
    case SliceAxis::Frontal:
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.at(i, j) = g.at(i, j, h);
      break;
  }
  return out;
}

inline SliceFamily slices(const Cubic& g, SliceAxis axis) {
  SliceFamily fam{axis, {}};
  fam.slices.reserve(g.n());
  for (int h = 0; h < g.n(); ++h) fam.slices.push_back(slice(g, axis, h));
  return fam;
}

// Extracts one fiber; (a, b) are the two fixed indices in the order they
// appear in the subscript: column (j,k), row (i,k), tube (i,j).
inline std::vector<double> fiber(const Cubic& g, FiberAxis axis, int a,
                                 int b) {
  const int n = g.n();
  detail::check_index(a, n, "fiber");
  detail::check_index(b, n, "fiber");
  std::vector<double> out(n);
  switch (axis) {
    case FiberAxis::Column:
      for (int i = 0; i < n; ++i) out[i] = g.at(i, a, b);
      break;
    case FiberAxis::Row:
      for (int j = 0; j < n; ++j) out[j] = g.at(a, j, b);
      break;
    case FiberAxis::Tube:
      for (int k = 0; k < n; ++k) out[k] = g.at(a, b, k);
      break;
  }
  return out;
}

inline FiberFamily fibers(const Cubic& g, FiberAxis axis) {
  FiberFamily fam{axis, g.n(), {}};
  fam.fibers.reserve(static_cast<std::size_t>(g.n()) * g.n());
  for (int a = 0; a < g.n(); ++a)
    for (int b = 0; b < g.n(); ++b) fam.fibers.push_back(fiber(g, axis, a, b));
  return fam;
}

// Unfolds a cubic grid into the n x n^2 matrix (P_::1 | P_::2 | ... | P_::n):
// frontal slices concatenated left to right. Column k*n+j of the output
// holds entry (i,j) of slice k; the interchange CSV format reuses this
// layout. Lossless — no arithmetic is performed.
inline Matrix matricize_frontal(const Cubic& g) {
  const int n = g.n();
  Matrix out(n, n * n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        out.at(i, k * n + j) = g.at(i, j, k);
      }
    }
  }
  return out;
}

// Exact inverse of matricize_frontal.
inline Cubic dematricize_frontal(const Matrix& m) {
  const int n = m.rows();
  if (m.cols() != n * n) {
    throw ShapeError("dematricize: expected " + std::to_string(n) + "x" +
                     std::to_string(n * n) + " matrix, got " +
                     std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  Cubic out(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        out.at(i, j, k) = m.at(i, k * n + j);
      }
    }
  }
  return out;
}

// First accompanying matrix P1: entry (i,k) = sum_j p_ijk, the marginal of
// the first index. Column stochastic for any type-(1,2) input.
inline StochasticMatrix accompanying_first(const CubicStochastic12& p) {
  const int n = p.n();
  Matrix out(n, n, 0.0);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += p.at(i, j, k);
      out.at(i, k) = s;
    }
  }
  return StochasticMatrix(std::move(out));
}

// Second accompanying matrix P2: entry (j,k) = sum_i p_ijk.
inline StochasticMatrix accompanying_second(const CubicStochastic12& p) {
  const int n = p.n();
  Matrix out(n, n, 0.0);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < n; ++j) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += p.at(i, j, k);
      out.at(j, k) = s;
    }
  }
  return StochasticMatrix(std::move(out));
}

}  // namespace stochcube
