#include "arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace rsl::arith {

std::string to_string_i128(i128 v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    u128 u = neg ? u128(-(v + 1)) + 1 : u128(v);
    std::string s;
    while (u > 0) {
        s.push_back(char('0' + int(u % 10)));
        u /= 10;
    }
    if (neg) s.push_back('-');
    std::reverse(s.begin(), s.end());
    return s;
}

i128 parse_i128(const std::string& s) {
    if (s.empty()) throw std::invalid_argument("empty integer literal");
    size_t i = 0;
    bool neg = false;
    if (s[0] == '-' || s[0] == '+') {
        neg = s[0] == '-';
        i = 1;
    }
    if (i == s.size()) throw std::invalid_argument("bad integer literal: " + s);
    i128 v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9')
            throw std::invalid_argument("bad integer literal: " + s);
        v = checked_add(checked_mul(v, 10), s[i] - '0');
    }
    return neg ? -v : v;
}

i128 checked_mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r))
        throw std::overflow_error("128-bit integer overflow in multiply");
    return r;
}

i128 checked_add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r))
        throw std::overflow_error("128-bit integer overflow in add");
    return r;
}

bool Factorization::squarefree() const {
    for (auto& [p, e] : primes)
        if (e > 1) return false;
    return true;
}

u64 mulmod(u64 a, u64 b, u64 m) { return u64(u128(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

i64 invmod(i64 a, i64 m) {
    if (m <= 0) throw std::domain_error("invmod: modulus must be positive");
    i64 r0 = m, r1 = ((a % m) + m) % m;
    i64 t0 = 0, t1 = 1;
    while (r1 != 0) {
        i64 q = r0 / r1;
        r0 -= q * r1;
        std::swap(r0, r1);
        t0 -= q * t1;
        std::swap(t0, t1);
    }
    if (r0 != 1) throw std::domain_error("invmod: arguments not coprime");
    return ((t0 % m) + m) % m;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Deterministic Miller-Rabin bases for n < 2^64.
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace {

u64 pollard_rho(u64 n) {
    if (n % 2 == 0) return 2;
    u64 c = 1;
    while (true) {
        u64 x = 2, y = 2, d = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        u64 saved_x = x, saved_y = y;
        (void)saved_x;
        (void)saved_y;
        while (d == 1) {
            x = f(x);
            y = f(f(y));
            u64 diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            d = std::gcd(diff, n);
        }
        if (d != 1 && d != n) return d;
        ++c;
    }
}

void factor_into(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

Factorization factorize(i64 n) {
    if (n <= 0) throw std::domain_error("factorize: argument must be positive");
    Factorization f;
    f.n = n;
    u64 m = u64(n);
    std::vector<u64> ps;
    for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull}) {
        while (m % p == 0) {
            ps.push_back(p);
            m /= p;
        }
    }
    if (m > 1) factor_into(m, ps);
    std::sort(ps.begin(), ps.end());
    for (size_t i = 0; i < ps.size();) {
        size_t j = i;
        while (j < ps.size() && ps[j] == ps[i]) ++j;
        f.primes.emplace_back(i64(ps[i]), int(j - i));
        i = j;
    }
    return f;
}

i64 mobius(i64 n) {
    auto f = factorize(n);
    if (!f.squarefree()) return 0;
    return (f.omega() % 2 == 0) ? 1 : -1;
}

i64 euler_phi(i64 n) {
    auto f = factorize(n);
    i64 r = n;
    for (auto& [p, e] : f.primes) r = r / p * (p - 1);
    return r;
}

i64 divisor_count(i64 n) {
    auto f = factorize(n);
    i64 d = 1;
    for (auto& [p, e] : f.primes) d *= (e + 1);
    return d;
}

std::vector<i64> divisors(i64 n) {
    auto f = factorize(n);
    std::vector<i64> ds = {1};
    for (auto& [p, e] : f.primes) {
        size_t sz = ds.size();
        i64 pk = 1;
        for (int i = 1; i <= e; ++i) {
            pk *= p;
            for (size_t j = 0; j < sz; ++j) ds.push_back(ds[j] * pk);
        }
    }
    std::sort(ds.begin(), ds.end());
    return ds;
}

std::vector<i64> prime_divisors(i64 n) {
    auto f = factorize(n);
    std::vector<i64> ps;
    for (auto& [p, e] : f.primes) ps.push_back(p);
    return ps;
}

bool is_squarefree(i64 n) { return factorize(n).squarefree(); }

i64 index_v(i64 N) {
    auto f = factorize(N);
    if (!f.squarefree()) throw std::domain_error("index_v: N must be square-free");
    i128 r = 1;
    for (auto& [p, e] : f.primes) r = checked_mul(r, p + 1);
    if (r > i128(INT64_MAX)) throw std::overflow_error("index_v overflow");
    return i64(r);
}

int kronecker(i64 a, i64 n) {
    // (a|0) = 1 iff a = +-1.
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int sign = 1;
    if (n < 0) {
        if (a < 0) sign = -sign;
        n = -n;
    }
    if (n % 2 == 0) {
        if (a % 2 == 0) return 0;
        // (a|2): 8-periodic.
        int k2 = (a % 8 == 1 || a % 8 == -7 || a % 8 == 7 || a % 8 == -1) ? 1 : -1;
        while (n % 2 == 0) {
            n /= 2;
            sign *= k2;
        }
    }
    // Now n odd positive; reduce a mod n and run the Jacobi loop.
    a %= n;
    if (a < 0) {
        a += n;
        if (n % 4 == 3) sign = -sign;  // (-1|n)
    }
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            if (n % 8 == 3 || n % 8 == 5) sign = -sign;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) sign = -sign;
        a %= n;
    }
    return (n == 1) ? sign : 0;
}

bool is_fundamental_discriminant(i64 D) {
    if (D == 1) return true;  // trivial character mod 1
    if (D == 0) return false;
    i64 m = D % 4;
    if (m < 0) m += 4;
    if (m == 1) return is_squarefree(D < 0 ? -D : D);
    if (D % 4 != 0) return false;
    i64 q = D / 4;
    i64 r = q % 4;
    if (r < 0) r += 4;
    if (r != 2 && r != 3) return false;
    return is_squarefree(q < 0 ? -q : q);
}

DirichletCharacter DirichletCharacter::trivial(i64 modulus) {
    if (modulus <= 0) throw std::domain_error("character modulus must be positive");
    return DirichletCharacter(Kind::Trivial, modulus, 1);
}

DirichletCharacter DirichletCharacter::kronecker_char(i64 D) {
    if (D == 1) return trivial(1);
    if (!is_fundamental_discriminant(D))
        throw std::domain_error("kronecker_char: not a fundamental discriminant");
    return DirichletCharacter(Kind::Kronecker, D < 0 ? -D : D, D);
}

int DirichletCharacter::parity() const {
    if (kind_ == Kind::Trivial) return 1;
    return disc_ < 0 ? -1 : 1;
}

int DirichletCharacter::value(i64 n) const {
    if (kind_ == Kind::Trivial) {
        i64 r = n % modulus_;
        if (r < 0) r += modulus_;
        return std::gcd(r, modulus_) == 1 ? 1 : 0;
    }
    return kronecker(disc_, n);
}

std::pair<DirichletCharacter, DirichletCharacter> DirichletCharacter::factor(i64 M2) const {
    if (M2 <= 0 || modulus_ % M2 != 0)
        throw std::domain_error("character factor: M2 must divide the modulus");
    i64 M1 = modulus_ / M2;
    if (!is_squarefree(modulus_))
        throw std::domain_error("character factor: modulus must be square-free");
    if (kind_ == Kind::Trivial) return {trivial(M1), trivial(M2)};
    if (modulus_ % 2 == 0)
        throw std::domain_error("character factor: even quadratic modulus unsupported");
    // For odd square-free modulus, chi = prod over p of the quadratic
    // character mod p; group the factors by M1 and M2.
    auto piece = [&](i64 m) {
        if (m == 1) return trivial(1);
        i64 r = m % 4;
        i64 d = (r == 1) ? m : -m;
        return kronecker_char(d);
    };
    return {piece(M1), piece(M2)};
}

SmoothEnumeration smooth_enumerate(i64 L, double A) {
    if (L < 1 || !is_squarefree(L))
        throw std::domain_error("smooth_enumerate: L must be a square-free positive integer");
    if (A <= 0) throw std::domain_error("smooth_enumerate: A must be positive");
    double bound = std::pow(double(L), A);
    if (bound >= 9.2e18)
        throw std::overflow_error("smooth_enumerate: L^A exceeds the 63-bit range");
    SmoothEnumeration out;
    out.L = L;
    out.bound = bound;
    auto ps = prime_divisors(L);
    std::vector<i64> cur = {1};
    for (i64 p : ps) {
        std::vector<i64> next;
        for (i64 v : cur) {
            i64 x = v;
            while (true) {
                next.push_back(x);
                if (double(x) > bound / double(p)) break;
                x *= p;
            }
        }
        cur = std::move(next);
    }
    for (i64 v : cur)
        if (double(v) <= bound) out.members.push_back(v);
    std::sort(out.members.begin(), out.members.end());
    return out;
}

namespace {

// Elliptic-point counts for Gamma_0(N), square-free N.
i64 nu2(const Factorization& f) {
    i64 r = 1;
    for (auto& [p, e] : f.primes) {
        if (p == 2) continue;          // factor 1
        if (p % 4 == 1) r *= 2;
        else return 0;
    }
    return r;
}

i64 nu3(const Factorization& f) {
    i64 r = 1;
    for (auto& [p, e] : f.primes) {
        if (p == 3) continue;
        if (p % 3 == 1) r *= 2;
        else return 0;
    }
    return r;
}

}  // namespace

i64 dim_cusp_forms(int k, i64 N) {
    if (k < 2 || k % 2 != 0) throw std::domain_error("dim_cusp_forms: k must be even >= 2");
    auto f = factorize(N);
    if (!f.squarefree()) throw std::domain_error("dim_cusp_forms: N must be square-free");
    i64 mu = index_v(N);
    i64 n2 = nu2(f), n3 = nu3(f);
    i64 cusps = i64(1) << f.omega();  // 2^omega(N) for square-free N
    // genus: 12g = 12 + mu - 3*nu2 - 4*nu3 - 6*cusps
    i64 g12 = 12 + mu - 3 * n2 - 4 * n3 - 6 * cusps;
    if (g12 % 12 != 0) throw std::logic_error("dim_cusp_forms: genus not integral");
    i64 g = g12 / 12;
    if (k == 2) return g;
    return (k - 1) * (g - 1) + (k / 2 - 1) * cusps + n2 * (k / 4) + n3 * (k / 3);
}

i64 dim_newforms(int k, i64 N) {
    // dim S_k(N) = sum_{M | N} d(N/M) dim^new S_k(M); invert with mu*mu,
    // which is (-2)^omega on square-free arguments.
    i64 total = 0;
    for (i64 d : divisors(N)) {
        i64 coeff = 1;
        for (i64 p : prime_divisors(N / d)) {
            (void)p;
            coeff *= -2;
        }
        total += coeff * dim_cusp_forms(k, d);
    }
    return total;
}

}  // namespace rsl::arith
