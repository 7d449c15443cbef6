#pragma once

#include <string>
#include <utility>

#include "stochcube/core.hpp"
#include "stochcube/decomp.hpp"

// Multiplication rules on CS_(1,2)(n,R). Everything is a special case of
// the weighted product
//
//   (A *_(l1,l2) B)_ijk = sum_r a_ijr * (l1 * b_{r+k} + l2 * b_{+rk})
//
// where b_{r+k} and b_{+rk} are the entries of B's first and second
// accompanying matrices. The Maksimov product is the (1,0) case and the
// equally weighted star product the (1/2,1/2) case; both are literal
// aliases running through the same code path.
//
// The accompanying matrices of the right factor are computed once per
// product (O(n^3)) and reused, so each multiplication costs O(n^4). The
// naive O(n^5) double sum lives in the test suite as an oracle.

namespace stochcube {

class MulRule {
 public:
  static MulRule dot() { return MulRule(Weights(1.0, 0.0)); }
  static MulRule star() { return MulRule(Weights(0.5, 0.5)); }
  static MulRule weighted(Weights w) { return MulRule(w); }

  const Weights& weights() const { return w_; }

 private:
  explicit MulRule(Weights w) : w_(w) {}
  Weights w_;
};

inline CubicStochastic12 weighted_mul(const CubicStochastic12& a,
                                      const CubicStochastic12& b,
                                      const Weights& w) {
  if (a.n() != b.n()) {
    throw ShapeError("weighted_mul: sizes differ (" + std::to_string(a.n()) +
                     " vs " + std::to_string(b.n()) + ")");
  }
  const int n = a.n();
  const Matrix b1 = accompanying_first(b).matrix();
  const Matrix b2 = accompanying_second(b).matrix();
  // mix(r,k) = l1 * b_{r+k} + l2 * b_{+rk}
  Matrix mix(n, n);
  for (int r = 0; r < n; ++r) {
    for (int k = 0; k < n; ++k) {
      mix.at(r, k) = w.first() * b1.at(r, k) + w.second() * b2.at(r, k);
    }
  }
  Cubic out(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int r = 0; r < n; ++r) s += a.at(i, j, r) * mix.at(r, k);
        out.at(i, j, k) = s;
      }
    }
  }
  return CubicStochastic12(std::move(out));
}

// Maksimov product: (i,j,k) . (m,r,s) = delta_km (i,j,s).
inline CubicStochastic12 dot_mul(const CubicStochastic12& a,
                                 const CubicStochastic12& b) {
  return weighted_mul(a, b, MulRule::dot().weights());
}

// Equally weighted product: (i,j,k) * (m,r,s) = 1/2 (delta_km + delta_kr)(i,j,s).
inline CubicStochastic12 star_mul(const CubicStochastic12& a,
                                  const CubicStochastic12& b) {
  return weighted_mul(a, b, MulRule::star().weights());
}

inline CubicStochastic12 mul(const CubicStochastic12& a,
                             const CubicStochastic12& b, const MulRule& rule) {
  return weighted_mul(a, b, rule.weights());
}

// (1,2)-transpose: swaps the first two indices. Type (1,2) is preserved.
inline CubicStochastic12 transpose12(const CubicStochastic12& p) {
  const int n = p.n();
  Cubic out(n);
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        out.at(i, j, k) = p.at(j, i, k);
      }
    }
  }
  return CubicStochastic12(std::move(out));
}

// True iff max |p_ijk - p_jik| <= tol.eps.
inline bool is_symmetric12(const CubicStochastic12& p, Tolerance tol = {}) {
  const int n = p.n();
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (std::abs(p.at(i, j, k) - p.at(j, i, k)) > tol.eps()) return false;
      }
    }
  }
  return true;
}

// m-th power under the rule, left-associated. Iterated multiplication is
// deliberate: it doubles as an associativity witness in the tests. There
// is no two-sided identity, so m = 0 is rejected.
inline CubicStochastic12 power(const CubicStochastic12& p, int m,
                               const MulRule& rule) {
  if (m < 1) {
    throw DomainError("power: exponent must be >= 1, got " +
                      std::to_string(m));
  }
  CubicStochastic12 acc = p;
  for (int step = 2; step <= m; ++step) {
    acc = mul(acc, p, rule);
  }
  return acc;
}

// The diagonal unit tensor E (e_ijk = 1 iff i=j=k): the right — but not
// left — identity for every weighted multiplication.
inline CubicStochastic12 right_identity(int n) {
  Cubic e(n, 0.0);
  for (int i = 0; i < n; ++i) e.at(i, i, i) = 1.0;
  return CubicStochastic12(std::move(e));
}

}  // namespace stochcube
