#pragma once

// Exact Kloosterman and Ramanujan sums, and the Selberg factorization
// S(l^2, n; c) = sum_{l2 | (l^2, n, c)} l2 * S(n l^2 / l2^2, 1; c / l2).
//
// Evaluation is direct O(c) summation with modular inverses; c up to ~10^6
// is the intended range.

#include <complex>
#include <cstdint>
#include <vector>

#include "arith.hpp"

namespace rsl::expsums {

using arith::i64;

struct KloostermanQuery {
    i64 m = 0;
    i64 n = 0;
    i64 c = 1;
};

// S(m, n; c) = sum over alpha mod c, (alpha, c) = 1, of
// e((m alpha + n alphabar) / c). Real by the alpha <-> -alpha symmetry;
// the imaginary part is asserted < 1e-12 * phi(c) before being dropped.
double kloosterman(i64 m, i64 n, i64 c);

// Ramanujan sum c_q(n), as an exact integer via sum_{d | (n,q)} d mu(q/d).
i64 ramanujan(i64 n, i64 q);
// Direct O(q) evaluation, for cross-checks.
double ramanujan_direct(i64 n, i64 q);

std::vector<std::pair<i64, KloostermanQuery>> selberg_decompose(i64 ell_sq, i64 n, i64 c);

// Shared-table evaluator: amortizes the inverse and root-of-unity tables
// over many (m, n) pairs at the same modulus.
class KloostermanBatch {
  public:
    explicit KloostermanBatch(i64 c);
    i64 modulus() const { return c_; }
    double operator()(i64 m, i64 n) const;
    // All values S(r, n; c) for r = 0..c-1 in one pass; O(c^2).
    std::vector<double> row(i64 n) const;

  private:
    i64 c_;
    std::vector<i64> inverse_;  // inverse_[a] = a^{-1} mod c, or -1 when not a unit
    std::vector<double> cos_, sin_;
};

}  // namespace rsl::expsums
