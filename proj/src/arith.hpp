#pragma once

// Exact elementary arithmetic: factorization, multiplicative functions,
// quadratic Dirichlet characters via the Kronecker symbol, the index
// v(N) = [Gamma_0(1) : Gamma_0(N)], and friable-number enumeration.
//
// All exact arithmetic is done in 64-bit integers with 128-bit intermediates
// and overflow detection; the supported input range is 1 <= n <= 2^63 - 1.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rsl::arith {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

std::string to_string_i128(i128 v);
i128 parse_i128(const std::string& s);

// Throws std::overflow_error when a*b exceeds the i128 range.
i128 checked_mul(i128 a, i128 b);
i128 checked_add(i128 a, i128 b);

struct Factorization {
    i64 n = 1;
    std::vector<std::pair<i64, int>> primes;  // ascending, exponents >= 1

    bool squarefree() const;
    int omega() const { return static_cast<int>(primes.size()); }
};

// n = 0 (or negative) is a domain error.
Factorization factorize(i64 n);

bool is_prime(u64 n);

i64 mobius(i64 n);
i64 euler_phi(i64 n);
i64 divisor_count(i64 n);
std::vector<i64> divisors(i64 n);        // ascending
std::vector<i64> prime_divisors(i64 n);  // ascending
bool is_squarefree(i64 n);

// v(N) = N * prod_{p|N} (1 + 1/p) = prod_{p|N} (p+1) for square-free N.
// Rejects non-square-free N.
i64 index_v(i64 N);

// Kronecker symbol (a|n), full generality including n <= 0.
int kronecker(i64 a, i64 n);

bool is_fundamental_discriminant(i64 D);

// Quadratic (or trivial) Dirichlet characters. Values lie in {-1, 0, +1}.
class DirichletCharacter {
  public:
    enum class Kind { Trivial, Kronecker };

    static DirichletCharacter trivial(i64 modulus);
    // chi(n) = kronecker(D, n), modulus |D|; D must be a fundamental
    // discriminant (or D = 1, the trivial character mod 1).
    static DirichletCharacter kronecker_char(i64 D);

    i64 modulus() const { return modulus_; }
    Kind kind() const { return kind_; }
    i64 discriminant() const { return disc_; }
    bool is_trivial() const { return kind_ == Kind::Trivial; }
    bool is_real() const { return true; }  // only real kinds are supported
    // chi(-1); +1 for trivial characters.
    int parity() const;

    int value(i64 n) const;

    // Splits chi into chi1 (mod M1) * chi2 (mod M2) where modulus = M1*M2,
    // gcd(M1, M2) = 1. Requires a square-free modulus, and an odd modulus
    // when the character is non-trivial.
    std::pair<DirichletCharacter, DirichletCharacter> factor(i64 M2) const;

    bool operator==(const DirichletCharacter&) const = default;

  private:
    DirichletCharacter(Kind k, i64 modulus, i64 disc)
        : kind_(k), modulus_(modulus), disc_(disc) {}
    Kind kind_;
    i64 modulus_;
    i64 disc_;  // meaningful for Kind::Kronecker
};

struct SmoothEnumeration {
    i64 L = 1;
    double bound = 1.0;          // = L^A
    std::vector<i64> members;    // ascending, complete below bound
};

// All ell <= L^A with ell | L^infinity. L must be square-free.
// Reports overflow when L^A exceeds the 63-bit range.
SmoothEnumeration smooth_enumerate(i64 L, double A);

// Modular arithmetic helpers (moduli < 2^32 are enough for every caller,
// but these are safe for any u64 modulus).
u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 a, u64 e, u64 m);
// Inverse of a mod m; throws std::domain_error when gcd(a, m) != 1.
i64 invmod(i64 a, i64 m);

// dim S_k(Gamma_0(N)) for k >= 2 even, N square-free; and the dimension of
// its newform subspace.
i64 dim_cusp_forms(int k, i64 N);
i64 dim_newforms(int k, i64 N);

}  // namespace rsl::arith
