#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stochcube/algebra.hpp"
#include "stochcube/core.hpp"
#include "stochcube/decomp.hpp"
#include "stochcube/markov.hpp"

// Semigroup actions of NS(n,R) on CS_(1,2)(n,R). The first action routes
// the acting matrix through the first (paternal) index, the second through
// the second (maternal) index:
//
//   (A act1 P)(i,s,t) = sum_r a_ir p_rst
//   (A act2 P)(r,i,t) = sum_s a_is p_rst
//
// so act2 = transpose12 . act1 . transpose12. On frontal slices this reads
//
//   (A act1 P)_::k = A * P_::k
//   (A act2 P)_::k = P_::k * A^T = (A * (P_::k)^T)^T
//
// both forced by the elementwise definitions above. act is implemented
// through these per-slice products; the elementwise triple loop serves as
// the test oracle.

namespace stochcube {

enum class ActionSide {
  First,   // acts on the first index
  Second,  // acts on the second index
};

inline CubicStochastic12 act(const StochasticMatrix& a,
                             const CubicStochastic12& p, ActionSide side) {
  if (a.n() != p.n()) {
    throw ShapeError("act: matrix dimension " + std::to_string(a.n()) +
                     " does not match tensor dimension " +
                     std::to_string(p.n()));
  }
  const int n = p.n();
  Cubic out(n);
  const Matrix a_t =
      (side == ActionSide::Second) ? transpose(a.matrix()) : a.matrix();
  for (int k = 0; k < n; ++k) {
    const Matrix pk = slice(p.grid(), SliceAxis::Frontal, k);
    const Matrix acted = (side == ActionSide::First) ? matmul(a_t, pk)
                                                     : matmul(pk, a_t);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        out.at(i, j, k) = acted.at(i, j);
      }
    }
  }
  return CubicStochastic12(std::move(out));
}

// Frontal slices of the acted tensor, computed purely by matrix products
// against P's frontal slices. Equals slicewise extraction from act().
inline SliceFamily act_on_slices(const StochasticMatrix& a,
                                 const CubicStochastic12& p, ActionSide side) {
  if (a.n() != p.n()) {
    throw ShapeError("act_on_slices: matrix dimension " +
                     std::to_string(a.n()) + " does not match tensor " +
                     std::to_string(p.n()));
  }
  SliceFamily fam{SliceAxis::Frontal, {}};
  fam.slices.reserve(p.n());
  for (int k = 0; k < p.n(); ++k) {
    Matrix pk = slice(p.grid(), SliceAxis::Frontal, k);
    if (side == ActionSide::First) {
      fam.slices.push_back(matmul(a.matrix(), pk));
    } else {
      fam.slices.push_back(matmul(pk, transpose(a.matrix())));
    }
  }
  return fam;
}

// Accompanying matrices of the acted tensor: acting on the first index
// multiplies the first marginal and leaves the second untouched, and
// symmetrically for the second index.
inline std::pair<StochasticMatrix, StochasticMatrix> act_on_marginals(
    const StochasticMatrix& a, const CubicStochastic12& p, ActionSide side) {
  if (a.n() != p.n()) {
    throw ShapeError("act_on_marginals: matrix dimension " +
                     std::to_string(a.n()) + " does not match tensor " +
                     std::to_string(p.n()));
  }
  const StochasticMatrix p1 = accompanying_first(p);
  const StochasticMatrix p2 = accompanying_second(p);
  if (side == ActionSide::First) {
    return {matmul(a, p1), p2};
  }
  return {p1, matmul(a, p2)};
}

enum class ChainKind {
  Q1,  // act on the first index:  diag(A, I) * Q
  Q2,  // act on the second index: diag(I, A) * Q
  Q3,  // act on both:             diag(A, A) * Q
};

// Bivariate Markov model induced by acting with A on P. Block row 1 holds
// the first accompanying matrix of the acted tensor, block row 2 the
// second; equivalently the base model premultiplied by the stated diagonal
// block matrix.
inline BlockModel induced_chain(const StochasticMatrix& a,
                                const CubicStochastic12& p,
                                const std::vector<double>& lambda4,
                                ChainKind which, Tolerance tol = {}) {
  if (a.n() != p.n()) {
    throw ShapeError("induced_chain: matrix dimension " +
                     std::to_string(a.n()) + " does not match tensor " +
                     std::to_string(p.n()));
  }
  const StochasticMatrix p1 = accompanying_first(p);
  const StochasticMatrix p2 = accompanying_second(p);
  const StochasticMatrix top =
      (which == ChainKind::Q2) ? p1 : matmul(a, p1);
  const StochasticMatrix bottom =
      (which == ChainKind::Q1) ? p2 : matmul(a, p2);
  return BlockModel(2, {top, top, bottom, bottom}, lambda4, tol);
}

}  // namespace stochcube
