#pragma once

#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "stochcube/core.hpp"
#include "stochcube/decomp.hpp"

// Quadratic stochastic operators carried by 3-stochastic cubic matrices,
// and the symmetric-group action permuting their frontal slices.

namespace stochcube {

// Bijection on {0..n-1}.
class Permutation {
 public:
  explicit Permutation(std::vector<int> images) : images_(std::move(images)) {
    const int n = static_cast<int>(images_.size());
    if (n < 1) throw ShapeError("permutation must be nonempty");
    std::vector<bool> hit(n, false);
    for (int v : images_) {
      if (v < 0 || v >= n || hit[v]) {
        throw DomainError("permutation images must hit each of 0.." +
                          std::to_string(n - 1) + " exactly once");
      }
      hit[v] = true;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> images(n);
    std::iota(images.begin(), images.end(), 0);
    return Permutation(std::move(images));
  }

  int n() const { return static_cast<int>(images_.size()); }
  int operator()(int k) const { return images_[k]; }
  const std::vector<int>& images() const { return images_; }

  Permutation inverse() const {
    std::vector<int> inv(images_.size());
    for (int k = 0; k < n(); ++k) inv[images_[k]] = k;
    return Permutation(std::move(inv));
  }

  // Diagrammatic composition: (this->then(t))(k) = t((*this)(k)), i.e.
  // *this applies first. This is the orientation under which
  // permute_frontal(s.then(t), P) == permute_frontal(s, permute_frontal(t, P)).
  Permutation then(const Permutation& t) const {
    if (t.n() != n()) throw ShapeError("permutation sizes differ");
    std::vector<int> images(images_.size());
    for (int k = 0; k < n(); ++k) images[k] = t(images_[k]);
    return Permutation(std::move(images));
  }

 private:
  std::vector<int> images_;
};

inline Permutation compose(const Permutation& s, const Permutation& t) {
  return s.then(t);
}

// Evaluates V(x)_k = sum_{i,j} p_ijk x_i x_j. The image of a simplex
// vector is again a simplex vector since the tubes of P sum to 1.
//
// The classical definition additionally assumes p_ijk = p_jik; pass
// require_symmetric to enforce it (3-stochasticity alone does not).
inline SimplexVector apply_qso(const Cubic3Stochastic& p,
                               const SimplexVector& x,
                               bool require_symmetric = false,
                               Tolerance tol = {}) {
  if (p.n() != x.n()) {
    throw ShapeError("apply_qso: operator dimension " + std::to_string(p.n()) +
                     " does not match vector dimension " +
                     std::to_string(x.n()));
  }
  const int n = p.n();
  if (require_symmetric) {
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          if (std::abs(p.at(i, j, k) - p.at(j, i, k)) > tol.eps()) {
            throw ValidationError(
                "apply_qso: coefficients are not (1,2)-symmetric at "
                "(i,j,k)=(" +
                std::to_string(i) + "," + std::to_string(j) + "," +
                std::to_string(k) + ") (0-based)");
          }
        }
      }
    }
  }
  std::vector<double> out(n, 0.0);
  for (int k = 0; k < n; ++k) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        s += p.at(i, j, k) * x.at(i) * x.at(j);
      }
    }
    out[k] = s;
  }
  return SimplexVector(std::move(out));
}

// Frontal-slice permutation: entry (i,j,k) of the output is p_{i,j,sigma(k)}.
// Preserves 3-stochasticity (tubes are permuted entrywise), and together
// with the `then` composition defines an S_n action.
inline Cubic3Stochastic permute_frontal(const Permutation& sigma,
                                        const Cubic3Stochastic& p) {
  if (sigma.n() != p.n()) {
    throw ShapeError("permute_frontal: permutation size " +
                     std::to_string(sigma.n()) + " does not match tensor " +
                     std::to_string(p.n()));
  }
  const int n = p.n();
  Cubic out(n);
  for (int k = 0; k < n; ++k) {
    const int src = sigma(k);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        out.at(i, j, k) = p.at(i, j, src);
      }
    }
  }
  return Cubic3Stochastic(std::move(out));
}

}  // namespace stochcube
