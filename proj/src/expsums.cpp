#include "expsums.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace rsl::expsums {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

KloostermanBatch::KloostermanBatch(i64 c) : c_(c) {
    if (c <= 0) throw std::domain_error("kloosterman: modulus must be positive");
    inverse_.assign(size_t(c), -1);
    cos_.resize(size_t(c));
    sin_.resize(size_t(c));
    for (i64 r = 0; r < c; ++r) {
        double ang = kTwoPi * double(r) / double(c);
        cos_[size_t(r)] = std::cos(ang);
        sin_[size_t(r)] = std::sin(ang);
    }
    for (i64 a = 0; a < c; ++a) {
        if (std::gcd(a, c) == 1) inverse_[size_t(a)] = arith::invmod(a, c);
    }
    if (c == 1) inverse_[0] = 0;  // single residue class, unit by convention
}

double KloostermanBatch::operator()(i64 m, i64 n) const {
    if (c_ == 1) return 1.0;
    i64 mr = ((m % c_) + c_) % c_;
    i64 nr = ((n % c_) + c_) % c_;
    double re = 0.0, im = 0.0;
    i64 ma = 0;  // m*alpha mod c, updated incrementally
    for (i64 a = 0; a < c_; ++a) {
        if (inverse_[size_t(a)] >= 0 && a > 0) {
            i64 idx = (ma + nr * inverse_[size_t(a)]) % c_;
            re += cos_[size_t(idx)];
            im += sin_[size_t(idx)];
        }
        ma += mr;
        if (ma >= c_) ma -= c_;
    }
    double scale = std::max(1.0, double(c_));
    if (std::abs(im) > 1e-12 * scale)
        throw std::logic_error("kloosterman: imaginary part failed the reality check");
    return re;
}

std::vector<double> KloostermanBatch::row(i64 n) const {
    std::vector<double> out(size_t(c_));
    for (i64 r = 0; r < c_; ++r) out[size_t(r)] = (*this)(r, n);
    return out;
}

double kloosterman(i64 m, i64 n, i64 c) { return KloostermanBatch(c)(m, n); }

i64 ramanujan(i64 n, i64 q) {
    if (q <= 0) throw std::domain_error("ramanujan: modulus must be positive");
    i64 g = std::gcd(((n % q) + q) % q, q);
    if (g == 0) g = q;  // n == 0 mod q
    i64 total = 0;
    for (i64 d : arith::divisors(g)) total += d * arith::mobius(q / d);
    return total;
}

double ramanujan_direct(i64 n, i64 q) {
    if (q <= 0) throw std::domain_error("ramanujan: modulus must be positive");
    if (q == 1) return 1.0;
    double re = 0.0;
    for (i64 a = 0; a < q; ++a) {
        if (std::gcd(a, q) != 1 || a == 0) continue;
        re += std::cos(kTwoPi * double((a * (((n % q) + q) % q)) % q) / double(q));
    }
    return re;
}

std::vector<std::pair<i64, KloostermanQuery>> selberg_decompose(i64 ell_sq, i64 n, i64 c) {
    if (ell_sq < 1 || n < 1 || c < 1)
        throw std::domain_error("selberg_decompose: arguments must be >= 1");
    i64 g = std::gcd(std::gcd(ell_sq, n), c);
    std::vector<std::pair<i64, KloostermanQuery>> out;
    for (i64 l2 : arith::divisors(g)) {
        KloostermanQuery q;
        q.m = n * (ell_sq / l2) / l2;
        q.n = 1;
        q.c = c / l2;
        out.emplace_back(l2, q);
    }
    return out;
}

}  // namespace rsl::expsums
