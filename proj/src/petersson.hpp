#pragma once

// Geometric-side evaluation of the harmonically weighted coefficient
// average Delta_{k,N}(m,n) with a certified truncation tail, the spectral
// side from explicit eigenbases, and the newform sieve Delta*_{k,N} for
// square-free N.

#include <optional>
#include <vector>

#include "forms.hpp"

namespace rsl::petersson {

using arith::i64;

struct GeometricOptions {
    double target_tail = 1e-9;
    i64 c_ceiling = 100000;     // hard ceiling on the modulus sum
    bool allow_weight_two = false;  // k = 2 converges too slowly to certify tightly
    int workers = 1;
};

struct PeterssonValue {
    double value = 0.0;
    double diagonal = 0.0;
    double offdiag = 0.0;
    i64 c_max = 0;
    double tail_bound = 0.0;    // certified bound on the discarded c-tail
    bool tail_achieved = false; // tail_bound <= target
    double target_tail = 0.0;
    int k = 0;
    i64 N = 1, m = 1, n = 1;
};

// delta(m,n) + 2 pi i^{-k} sum_{c = 0 mod N, c <= c_max} S(m,n;c)/c *
// J_{k-1}(4 pi sqrt(mn)/c), with c_max chosen so the certified tail bound
// meets target_tail (or flagged partial at the ceiling).
PeterssonValue delta_geometric(int k, i64 N, i64 m, i64 n, const GeometricOptions& opt = {});

// Same (k, N) for many (m, n); shares the per-modulus inverse and
// root-of-unity tables across the whole batch.
std::vector<PeterssonValue> delta_geometric_batch(int k, i64 N,
                                                  const std::vector<std::pair<i64, i64>>& pairs,
                                                  const GeometricOptions& opt = {});

// Certified bound on 2 pi sum_{c > C, c = 0 mod N} |S| |J| / c via the Weil
// bound, |J_nu(x)| <= (x/2)^nu / nu! for x <= 2 sqrt(nu+1), and a hyperbola
// bound for sum d(c) c^{-s}. Returns +inf when C is below the validity
// threshold 2 pi sqrt(mn) / sqrt(k).
double tail_bound(int k, i64 N, i64 m, i64 n, i64 C);

struct SpectralEntry {
    const forms::NewformData* form = nullptr;
    double omega = 1.0;  // harmonic weight omega_f
};

// sum_f omega_f^{-1} psi_f(m) psi_f(n) over a complete Hecke eigenbasis.
// The basis size must match dim S_k(Gamma_0(N)).
double delta_spectral(const std::vector<SpectralEntry>& basis, i64 m, i64 n);

// omega_f for one-dimensional spaces, obtained by equating the spectral and
// geometric sides at (m, n) = (1, 1).
double harmonic_weight_1dim(int k, i64 N, const GeometricOptions& opt = {});

struct SieveOptions {
    GeometricOptions geometric;
    double A = 8.0;  // friable truncation ell <= L^A
};

struct SieveTerm {
    i64 L = 1, R = 1, ell = 1, ell1 = 1;
    double coefficient = 0.0;
    PeterssonValue delta;
    bool skipped = false;   // charged to the certificate instead of evaluated
};

struct DeltaStarValue {
    double value = 0.0;
    double tail_bound = 0.0;       // aggregated certified c-tails + skips
    double skipped_bound = 0.0;    // certified charge for skipped deep terms
    bool achieved = false;
    std::vector<SieveTerm> terms;
};

// Newform average Delta*_{k,N}(m,n) for square-free N, gcd(m, N) = 1:
//   sum_{LR=N} mu(L)/(L v((n,L))) sum_{ell | L^inf, ell <= L^A} ell^{-1}
//   sum_{ell1 | L, ell1^2 | n} mu(ell1) ell1 Delta_{k,R}(m ell^2, n/ell1^2).
DeltaStarValue delta_star(int k, i64 N, i64 m, i64 n, const SieveOptions& opt = {});

// Prime-level route: Delta_{k,N}(m,n) - (1/(N v((n,N)))) sum_j N^{-j}
// Delta_{k,1}(m N^{2j}, n), valid for N prime (or N = 1) with (n, N^2) | N.
DeltaStarValue delta_star_prime(int k, i64 N, i64 m, i64 n, const SieveOptions& opt = {});

}  // namespace rsl::petersson
