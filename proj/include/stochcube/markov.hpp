#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stochcube/core.hpp"
#include "stochcube/decomp.hpp"

// Block Markov models over s categorical sequences with a common state
// space of size n:
//
//   X_{t+1}^(j) = sum_k lambda_jk P^(jk) X_t^(k)
//
// with every P^(jk) column stochastic and every lambda row summing to 1.
// The bivariate (s = 2) case is built from the two accompanying matrices
// of a cubic stochastic matrix of type (1,2).
//
// Note the assembled sn x sn matrix Q (block (j,k) = lambda_jk P^(jk)) is
// generally not column stochastic itself; only the per-part update is.

namespace stochcube {

namespace detail {

inline void validate_lambda_rows(const std::vector<double>& lambda, int s,
                                 Tolerance tol) {
  if (static_cast<int>(lambda.size()) != s * s) {
    throw ShapeError("mixing weights: expected " + std::to_string(s * s) +
                     " values, got " + std::to_string(lambda.size()));
  }
  for (int j = 0; j < s; ++j) {
    double row = 0.0;
    for (int k = 0; k < s; ++k) {
      const double l = lambda[static_cast<std::size_t>(j) * s + k];
      if (!tol.nonnegative(l)) {
        throw DomainError("mixing weight lambda(" + std::to_string(j) + "," +
                          std::to_string(k) + ") is negative: " + dtoa(l));
      }
      row += l;
    }
    if (!tol.sums_to_one(row)) {
      throw DomainError("mixing weight row " + std::to_string(j) +
                        " sums to " + dtoa(row) + ", expected 1");
    }
  }
}

}  // namespace detail

// An s x s grid of column stochastic blocks with row-convex mixing
// weights. Immutable once built.
class BlockModel {
 public:
  BlockModel(int s, std::vector<StochasticMatrix> blocks,
             std::vector<double> lambda, Tolerance tol = {})
      : s_(s), blocks_(std::move(blocks)), lambda_(std::move(lambda)) {
    if (s_ < 1) throw ShapeError("block model: s must be positive");
    if (static_cast<int>(blocks_.size()) != s_ * s_) {
      throw ShapeError("block model: expected " + std::to_string(s_ * s_) +
                       " blocks, got " + std::to_string(blocks_.size()));
    }
    n_ = blocks_.front().n();
    for (const auto& b : blocks_) {
      if (b.n() != n_) {
        throw ShapeError("block model: blocks have mixed dimensions");
      }
    }
    detail::validate_lambda_rows(lambda_, s_, tol);
  }

  int s() const { return s_; }
  int n() const { return n_; }

  const StochasticMatrix& block(int j, int k) const {
    return blocks_[static_cast<std::size_t>(j) * s_ + k];
  }
  double lambda(int j, int k) const {
    return lambda_[static_cast<std::size_t>(j) * s_ + k];
  }

  // The sn x sn transition structure with block (j,k) = lambda_jk P^(jk).
  Matrix assembled() const {
    Matrix q(s_ * n_, s_ * n_, 0.0);
    for (int j = 0; j < s_; ++j) {
      for (int k = 0; k < s_; ++k) {
        const double l = lambda(j, k);
        const Matrix& b = block(j, k).matrix();
        for (int r = 0; r < n_; ++r) {
          for (int c = 0; c < n_; ++c) {
            q.at(j * n_ + r, k * n_ + c) = l * b.at(r, c);
          }
        }
      }
    }
    return q;
  }

 private:
  int s_;
  int n_;
  std::vector<StochasticMatrix> blocks_;
  std::vector<double> lambda_;
};

// General block model from explicit blocks (row-major s x s) and mixing
// weights (row-major s x s, rows summing to 1).
inline BlockModel build_general(std::vector<StochasticMatrix> blocks,
                                std::vector<double> lambda, int s,
                                Tolerance tol = {}) {
  return BlockModel(s, std::move(blocks), std::move(lambda), tol);
}

// Bivariate model of a type-(1,2) cubic matrix: P^(11) = P^(12) = first
// accompanying matrix, P^(21) = P^(22) = second accompanying matrix.
// lambda4 is (l11, l12, l21, l22) with rows summing to 1.
inline BlockModel build_bivariate(const CubicStochastic12& p,
                                  const std::vector<double>& lambda4,
                                  Tolerance tol = {}) {
  const StochasticMatrix p1 = accompanying_first(p);
  const StochasticMatrix p2 = accompanying_second(p);
  return BlockModel(2, {p1, p1, p2, p2}, lambda4, tol);
}

// One simplex-valued distribution per sequence, kept as separate parts so
// each part's simplex invariant stays independently checkable.
struct StackedState {
  std::vector<SimplexVector> parts;

  int s() const { return static_cast<int>(parts.size()); }
  int n() const { return parts.empty() ? 0 : parts.front().n(); }
};

// One transition: part j of the output is sum_k lambda_jk P^(jk) X^(k),
// a convex combination of stochastic-matrix images, hence again a simplex
// vector.
inline StackedState step(const BlockModel& m, const StackedState& x) {
  if (x.s() != m.s()) {
    throw ShapeError("step: state has " + std::to_string(x.s()) +
                     " parts, model expects " + std::to_string(m.s()));
  }
  for (const auto& part : x.parts) {
    if (part.n() != m.n()) {
      throw ShapeError("step: state part length " + std::to_string(part.n()) +
                       " does not match model dimension " +
                       std::to_string(m.n()));
    }
  }
  const int s = m.s();
  const int n = m.n();
  StackedState out;
  out.parts.reserve(s);
  for (int j = 0; j < s; ++j) {
    std::vector<double> part(n, 0.0);
    for (int k = 0; k < s; ++k) {
      const double l = m.lambda(j, k);
      const Matrix& b = m.block(j, k).matrix();
      const SimplexVector& xk = x.parts[k];
      for (int r = 0; r < n; ++r) {
        double acc = 0.0;
        for (int c = 0; c < n; ++c) acc += b.at(r, c) * xk.at(c);
        part[r] += l * acc;
      }
    }
    out.parts.emplace_back(std::move(part));
  }
  return out;
}

struct IterateResult {
  StackedState state;
  int steps = 0;
  bool converged = false;
};

// Repeats step until the L1 distance between successive stacked states
// drops to tol, or max_steps is reached. Reports non-convergence rather
// than throwing; no ergodicity is assumed.
inline IterateResult iterate(const BlockModel& m, const StackedState& x0,
                             int max_steps = 10000, double tol = 1e-10) {
  if (max_steps < 1) throw DomainError("iterate: max_steps must be >= 1");
  if (!(tol > 0.0)) throw DomainError("iterate: tol must be positive");
  IterateResult res{x0, 0, false};
  for (int t = 1; t <= max_steps; ++t) {
    StackedState next = step(m, res.state);
    double dist = 0.0;
    for (int j = 0; j < res.state.s(); ++j) {
      for (int i = 0; i < res.state.n(); ++i) {
        dist += std::abs(next.parts[j].at(i) - res.state.parts[j].at(i));
      }
    }
    res.state = std::move(next);
    res.steps = t;
    if (dist <= tol) {
      res.converged = true;
      break;
    }
  }
  return res;
}

}  // namespace stochcube
