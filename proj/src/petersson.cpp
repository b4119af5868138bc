#include "petersson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "expsums.hpp"
#include "special.hpp"

namespace rsl::petersson {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double zeta_real(double s) {
    // Direct sum with integral tail; fine for s >= 1.3.
    double sum = 0.0;
    const int K = 200;
    for (int n = 1; n <= K; ++n) sum += std::pow(double(n), -s);
    sum += std::pow(double(K), 1.0 - s) / (s - 1.0) - 0.5 * std::pow(double(K), -s);
    return sum;
}

// Upper bound for sum_{j > X} d(j) j^{-s} via the divisor hyperbola.
double divisor_tail(double X, double s) {
    if (X < 1.0) return zeta_real(s) * zeta_real(s);
    auto T = [&](double Y) {
        if (Y < 1.0) return zeta_real(s);
        return std::pow(Y, 1.0 - s) / (s - 1.0) + std::pow(Y, -s);
    };
    double sqX = std::sqrt(X);
    double acc = T(sqX) * zeta_real(s);
    for (i64 a = 1; a <= i64(sqX); ++a) acc += std::pow(double(a), -s) * T(X / double(a));
    return acc;
}

double log_gamma_int(int n) { return std::lgamma(double(n)); }

int sign_i_minus_k(int k) {
    // i^{-k} for even k
    return (k / 2) % 2 == 0 ? 1 : -1;
}

struct Kahan {
    double sum = 0.0, comp = 0.0;
    void add(double x) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

}  // namespace

double tail_bound(int k, i64 N, i64 m, i64 n, i64 C) {
    double s = double(k) - 0.5;
    double root = std::sqrt(double(m) * double(n));
    // power-series bound on J_{k-1} needs 4 pi sqrt(mn)/c <= 2 sqrt(k)
    if (double(C) < kTwoPi * root / std::sqrt(double(k))) return kInf;
    double g = double(std::gcd(m, n));
    double K = kTwoPi * std::sqrt(g) *
               std::exp(double(k - 1) * std::log(kTwoPi * root) - log_gamma_int(k));
    double dn = double(arith::divisor_count(N));
    return K * dn * std::pow(double(N), -s) * divisor_tail(double(C) / double(N), s);
}

namespace {

i64 choose_c_max(int k, i64 N, i64 m, i64 n, const GeometricOptions& opt, double& achieved) {
    i64 c = std::max<i64>(N, 8);
    while (c < opt.c_ceiling && !(tail_bound(k, N, m, n, c) <= opt.target_tail)) c *= 2;
    c = std::min(c, opt.c_ceiling);
    // shave back down while the target still holds
    while (c / 2 >= N && tail_bound(k, N, m, n, c / 2) <= opt.target_tail) c /= 2;
    achieved = tail_bound(k, N, m, n, c);
    return c;
}

void check_weight(int k, const GeometricOptions& opt) {
    if (k < 2 || k % 2 != 0)
        throw std::domain_error("delta_geometric: k must be a positive even integer");
    if (k == 2 && !opt.allow_weight_two)
        throw std::domain_error(
            "delta_geometric: k = 2 converges too slowly for tight certificates; set "
            "allow_weight_two to opt in");
}

}  // namespace

std::vector<PeterssonValue> delta_geometric_batch(int k, i64 N,
                                                  const std::vector<std::pair<i64, i64>>& pairs,
                                                  const GeometricOptions& opt) {
    check_weight(k, opt);
    if (N < 1) throw std::domain_error("delta_geometric: N must be >= 1");
    const size_t P = pairs.size();
    std::vector<PeterssonValue> out(P);
    std::vector<Kahan> acc(P);
    i64 c_all = N;
    for (size_t i = 0; i < P; ++i) {
        auto [m, n] = pairs[i];
        if (m < 1 || n < 1) throw std::domain_error("delta_geometric: m, n must be >= 1");
        auto& v = out[i];
        v.k = k;
        v.N = N;
        v.m = m;
        v.n = n;
        v.target_tail = opt.target_tail;
        v.diagonal = (m == n) ? 1.0 : 0.0;
        double achieved;
        v.c_max = choose_c_max(k, N, m, n, opt, achieved);
        v.tail_bound = achieved;
        v.tail_achieved = achieved <= opt.target_tail;
        c_all = std::max(c_all, v.c_max);
    }
    // Group by the second argument so the alpha -> n*inv(alpha) row is
    // shared across the batch.
    std::vector<size_t> order(P);
    for (size_t i = 0; i < P; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) {
        return pairs[a].second < pairs[b].second;
    });

    const double pref = kTwoPi * sign_i_minus_k(k);
    std::vector<i64> srow;
    for (i64 c = N; c <= c_all; c += N) {
        expsums::KloostermanBatch tables(c);
        // direct access to inverse table through row computation below
        size_t gi = 0;
        while (gi < P) {
            size_t gj = gi;
            i64 n = pairs[order[gi]].second;
            while (gj < P && pairs[order[gj]].second == n) ++gj;
            bool any = false;
            for (size_t t = gi; t < gj; ++t) any |= (out[order[t]].c_max >= c);
            if (any) {
                for (size_t t = gi; t < gj; ++t) {
                    size_t idx = order[t];
                    if (out[idx].c_max < c) continue;
                    i64 m = pairs[idx].first;
                    double S = tables(m, n);
                    double x = 4.0 * std::numbers::pi * std::sqrt(double(m) * double(n)) / double(c);
                    double term = pref * S / double(c) * special::bessel_j(k - 1, x);
                    acc[idx].add(term);
                }
            }
            gi = gj;
        }
    }
    for (size_t i = 0; i < P; ++i) {
        out[i].offdiag = acc[i].sum;
        out[i].value = out[i].diagonal + out[i].offdiag;
    }
    return out;
}

PeterssonValue delta_geometric(int k, i64 N, i64 m, i64 n, const GeometricOptions& opt) {
    return delta_geometric_batch(k, N, {{m, n}}, opt)[0];
}

double delta_spectral(const std::vector<SpectralEntry>& basis, i64 m, i64 n) {
    if (basis.empty()) throw std::domain_error("delta_spectral: empty basis");
    int k = basis[0].form->weight();
    i64 N = basis[0].form->level();
    i64 dim = arith::dim_cusp_forms(k, N);
    if (i64(basis.size()) != dim)
        throw std::domain_error("delta_spectral: basis size " + std::to_string(basis.size()) +
                                " does not match dim S_k(N) = " + std::to_string(dim));
    double total = 0.0;
    for (auto& e : basis) total += e.form->lambda(m) * e.form->lambda(n) / e.omega;
    return total;
}

double harmonic_weight_1dim(int k, i64 N, const GeometricOptions& opt) {
    if (arith::dim_cusp_forms(k, N) != 1)
        throw std::domain_error("harmonic_weight_1dim: dim S_k(N) != 1");
    double d11 = delta_geometric(k, N, 1, 1, opt).value;
    return 1.0 / d11;
}

namespace {

// Rigorous bound on |Delta_{k,R}(m', n')| from the spectral side:
// |Delta| <= d(m') d(n') * Delta_{k,R}(1,1). The (1,1) value is cached.
double delta_abs_bound(int k, i64 R, i64 mp, i64 np, const GeometricOptions& opt,
                       std::vector<std::pair<i64, double>>& cache) {
    double base = -1.0;
    for (auto& [key, val] : cache)
        if (key == R) base = val;
    if (base < 0) {
        GeometricOptions o = opt;
        o.target_tail = 1e-6;
        auto v = delta_geometric(k, R, 1, 1, o);
        base = std::abs(v.value) + v.tail_bound;
        cache.emplace_back(R, base);
    }
    return double(arith::divisor_count(mp)) * double(arith::divisor_count(np)) * base;
}

DeltaStarValue run_sieve(int k, i64 N, i64 m, i64 n, const SieveOptions& opt,
                         bool prime_route) {
    if (N < 1 || !arith::is_squarefree(N))
        throw std::domain_error("delta_star: N must be a square-free positive integer");
    if (std::gcd(m, N) != 1)
        throw std::domain_error("delta_star: gcd(m, N) = 1 is required");
    if (prime_route && N > 1 && !arith::is_prime(arith::u64(N)))
        throw std::domain_error("delta_star_prime: N must be prime (or 1)");
    DeltaStarValue out;

    struct RawTerm {
        i64 L, R, ell, ell1;
        double coeff;
    };
    std::vector<RawTerm> raw;
    if (prime_route) {
        // Delta_{k,N}(m,n) - 1/(N v((n,N))) sum_j N^{-j} Delta_{k,1}(m N^{2j}, n)
        i64 g = std::gcd(n, N * N);
        if (N > 1 && g % N == 0 && g != N)
            throw std::domain_error("delta_star_prime: requires (n, N^2) | N");
        raw.push_back({1, N, 1, 1, 1.0});
        if (N > 1) {
            double vfac = double(arith::index_v(std::gcd(n, N)));
            double scale = -1.0 / (double(N) * vfac);
            i64 ell = 1;
            for (int j = 0; j < 64; ++j) {
                raw.push_back({N, 1, ell, 1, scale / double(ell)});
                if (ell > i64(2e17) / N) break;
                ell *= N;
                if (double(ell) > std::pow(double(N), opt.A)) break;
            }
        }
    } else {
        for (i64 L : arith::divisors(N)) {
            i64 R = N / L;
            double muL = double(arith::mobius(L));
            double vfac = double(arith::index_v(std::gcd(n, L)));
            auto smooth = arith::smooth_enumerate(L, opt.A);
            for (i64 ell : smooth.members) {
                for (i64 ell1 : arith::divisors(L)) {
                    if (n % (ell1 * ell1) != 0) continue;
                    double coeff = muL / (double(L) * vfac) / double(ell) *
                                   double(arith::mobius(ell1)) * double(ell1);
                    raw.push_back({L, R, ell, ell1, coeff});
                }
            }
        }
    }

    const double per_term_budget =
        opt.geometric.target_tail / std::max<size_t>(1, 2 * raw.size());
    std::vector<std::pair<i64, double>> bound_cache;
    double tail_total = 0.0, skip_total = 0.0;
    bool all_achieved = true;
    for (auto& t : raw) {
        SieveTerm st;
        st.L = t.L;
        st.R = t.R;
        st.ell = t.ell;
        st.ell1 = t.ell1;
        st.coefficient = t.coeff;
        i64 mp = m * t.ell * t.ell;
        i64 np = n / (t.ell1 * t.ell1);
        double bound =
            std::abs(t.coeff) * delta_abs_bound(k, t.R, mp, np, opt.geometric, bound_cache);
        if (bound < per_term_budget) {
            st.skipped = true;
            skip_total += bound;
            out.terms.push_back(std::move(st));
            continue;
        }
        GeometricOptions o = opt.geometric;
        o.target_tail = std::min(o.target_tail, per_term_budget / std::abs(t.coeff));
        st.delta = delta_geometric(k, t.R, mp, np, o);
        out.value += t.coeff * st.delta.value;
        tail_total += std::abs(t.coeff) * st.delta.tail_bound;
        all_achieved = all_achieved && st.delta.tail_achieved;
        out.terms.push_back(std::move(st));
    }
    out.skipped_bound = skip_total;
    out.tail_bound = tail_total + skip_total;
    out.achieved = all_achieved && out.tail_bound <= opt.geometric.target_tail * 4.0;
    return out;
}

}  // namespace

DeltaStarValue delta_star(int k, i64 N, i64 m, i64 n, const SieveOptions& opt) {
    return run_sieve(k, N, m, n, opt, false);
}

DeltaStarValue delta_star_prime(int k, i64 N, i64 m, i64 n, const SieveOptions& opt) {
    return run_sieve(k, N, m, n, opt, true);
}

}  // namespace rsl::petersson
