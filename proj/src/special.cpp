#include "special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace rsl::special {

namespace {

constexpr double kPi = std::numbers::pi;

double bessel_series(int nu, double x) {
    // J_nu(x) = sum_m (-1)^m (x/2)^{nu+2m} / (m! (nu+m)!), long double
    // accumulation to absorb the alternating cancellation.
    long double half = 0.5L * (long double)x;
    long double term = 1.0L;
    for (int i = 1; i <= nu; ++i) term *= half / i;
    long double sum = term;
    long double q = half * half;
    for (int m = 1; m < 400; ++m) {
        term *= -q / ((long double)m * (m + nu));
        sum += term;
        if (std::abs((double)term) < 1e-19L * (std::abs((double)sum) + 1e-300)) break;
    }
    return double(sum);
}

bool bessel_hankel(int nu, double x, double& out) {
    // J_nu(x) = sqrt(2/(pi x)) [P cos w - Q sin w], w = x - nu pi/2 - pi/4,
    // P, Q from the asymptotic series with terms
    // t_m = prod_{j<=m} (4 nu^2 - (2j-1)^2) / (8 j x). Accept only when the
    // terms certify ~1e-13 relative accuracy before diverging.
    long double mu = 4.0L * nu * nu;
    long double t = 1.0L;
    long double P = 1.0L, Q = 0.0L;
    long double min_t = 1.0L;
    bool ok = false;
    for (int m = 1; m <= 70; ++m) {
        t *= (mu - (long double)(2 * m - 1) * (2 * m - 1)) / (8.0L * m * x);
        long double at = std::abs((double)t);
        // sign pattern: + + - - + + ...
        int r = m % 4;
        long double s = (r == 0 || r == 1) ? t : -t;
        if (m % 2 == 1) Q += s; else P += s;
        if (at < min_t) min_t = at;
        if (at < 1e-17L) {
            ok = true;
            break;
        }
        if (at > 10.0L * min_t) break;  // series started diverging
    }
    if (!ok && min_t > 1e-13L) return false;
    long double w = (long double)x - nu * (kPi / 2.0L) - kPi / 4.0L;
    long double amp = std::sqrt(2.0L / (kPi * (long double)x));
    out = double(amp * (P * std::cos((double)w) - Q * std::sin((double)w)));
    return true;
}

double bessel_miller(int nu, double x) {
    // Backward recurrence normalized by J_0 + 2 sum_{m>=1} J_{2m} = 1.
    int start = int(std::ceil(std::max(double(nu), x) + 10.0 * std::cbrt(std::max(x, 1.0)) + 24.0));
    if (start % 2 == 1) ++start;
    long double jp1 = 0.0L, j = 1e-280L;
    long double norm = 0.0L, target = 0.0L;
    for (int n = start; n >= 1; --n) {
        long double jm1 = (2.0L * n / (long double)x) * j - jp1;
        jp1 = j;
        j = jm1;
        if ((n - 1) % 2 == 0) norm += (n - 1 == 0) ? j : 2.0L * j;
        if (n - 1 == nu) target = j;
        if (std::abs((double)j) > 1e260) {
            j *= 1e-260L;
            jp1 *= 1e-260L;
            norm *= 1e-260L;
            target *= 1e-260L;
        }
    }
    return double(target / norm);
}

}  // namespace

double bessel_j(int order, double x) {
    if (order < 0) throw std::domain_error("bessel_j: order must be >= 0");
    if (x < 0) throw std::domain_error("bessel_j: x must be >= 0");
    if (x == 0.0) return order == 0 ? 1.0 : 0.0;
    if (x <= order + 10.0) return bessel_series(order, x);
    double out;
    if (bessel_hankel(order, x, out)) return out;
    return bessel_miller(order, x);
}

namespace {

// Int_0^inf e^{-y} (y (1 + i y / (2x)))^{k-1/2} dy via y = u^2 on [0, 12].
std::complex<double> envelope_integral(int k, double x, bool derivative) {
    const auto& gl = quadrature::gauss_legendre(48);
    const double U = 12.0;
    const int panels = 6;
    std::complex<double> acc = 0.0;
    for (int p = 0; p < panels; ++p) {
        double u0 = U * p / panels, u1 = U * (p + 1) / panels;
        double mid = 0.5 * (u0 + u1), halfw = 0.5 * (u1 - u0);
        for (auto& [t, w] : gl) {
            double u = mid + halfw * t;
            double y = u * u;
            std::complex<double> z(1.0, y / (2.0 * x));
            std::complex<double> f;
            if (!derivative) {
                f = std::pow(z, k - 0.5);
            } else {
                // d/dx (1 + iy/2x)^{k-1/2} = (k-1/2)(1+iy/2x)^{k-3/2} * (-iy/(2x^2))
                f = (k - 0.5) * std::pow(z, k - 1.5) * std::complex<double>(0.0, -y / (2.0 * x * x));
            }
            double base = std::exp(-y) * std::pow(u, 2 * k - 1) * 2.0;
            acc += w * halfw * base * f;
        }
    }
    return acc;
}

double gamma_half_integer(int k) {
    // Gamma(k + 1/2) = (2k-1)!! sqrt(pi) / 2^k
    double v = std::sqrt(kPi);
    for (int j = 1; j <= k; ++j) v *= (2.0 * j - 1.0) / 2.0;
    return v;
}

}  // namespace

std::complex<double> envelope_w(int order, double x) {
    if (x <= 0) throw std::domain_error("envelope_w: x must be positive");
    std::complex<double> phase = std::polar(1.0, kPi / 2.0 * order - kPi / 4.0);
    double pref = std::sqrt(2.0 / (kPi * x)) / gamma_half_integer(order);
    return phase * pref * envelope_integral(order, x, false);
}

std::complex<double> envelope_w_derivative(int order, double x) {
    if (x <= 0) throw std::domain_error("envelope_w: x must be positive");
    std::complex<double> phase = std::polar(1.0, kPi / 2.0 * order - kPi / 4.0);
    double pref = std::sqrt(2.0 / (kPi * x)) / gamma_half_integer(order);
    std::complex<double> g = envelope_integral(order, x, false);
    std::complex<double> gp = envelope_integral(order, x, true);
    return phase * pref * (gp - g / (2.0 * x));
}

namespace {
double mollifier(double t) { return t > 0 ? std::exp(-1.0 / t) : 0.0; }
double smoothstep(double t) {
    if (t <= 0) return 0.0;
    if (t >= 1) return 1.0;
    double a = mollifier(t), b = mollifier(1.0 - t);
    return a / (a + b);
}
}  // namespace

Bump::Bump() = default;

double Bump::raw(double x) const {
    if (x <= support_lo || x >= support_hi) return 0.0;
    if (x < 1.0) return smoothstep(2.0 * (x - 0.5));
    if (x <= 2.0) return 1.0;
    return smoothstep(2.0 * (2.5 - x));
}

double Bump::operator()(double x) const {
    double phi = raw(x);
    if (phi == 0.0) return 0.0;
    // Normalize by the scale-2-periodic sum of dyadic translates; only
    // neighbors can overlap the support.
    double total = 0.0;
    for (int j = -2; j <= 2; ++j) total += raw(x * std::exp2(double(-j)));
    return phi / total;
}

const Bump& standard_bump() {
    static Bump b;
    return b;
}

double DyadicPartition::sum_at(double x) const {
    double s = 0.0;
    const Bump& h = standard_bump();
    for (auto& p : pieces) s += h(x / p.scale);
    return s;
}

DyadicPartition make_dyadic_partition(double x_min, double x_max) {
    if (!(x_min > 0) || !(x_max >= x_min))
        throw std::domain_error("dyadic partition: need 0 < x_min <= x_max");
    DyadicPartition part;
    part.x_min = x_min;
    part.x_max = x_max;
    // Scale Z covers [Z/2, 5Z/2]; include every scale whose support meets
    // the range.
    int j_lo = int(std::floor(std::log2(2.0 * x_min / 5.0)));
    int j_hi = int(std::ceil(std::log2(2.0 * x_max)));
    for (int j = j_lo; j <= j_hi; ++j) {
        double Z = std::exp2(double(j));
        if (Z / 2.0 <= x_max && 2.5 * Z >= x_min) part.pieces.push_back({Z});
    }
    return part;
}

OscillatoryIntegral oscillatory_I_weighted(double a, double b, int k, int kappa,
                                           const std::function<double(double)>& weight,
                                           double lo, double hi,
                                           const QuadratureBudget& budget) {
    if (a <= 0 || b <= 0) throw std::domain_error("oscillatory_I: a, b must be positive");
    if (k < 2 || kappa < 2) throw std::domain_error("oscillatory_I: weights must be >= 2");
    double w0 = std::sqrt(lo), w1 = std::sqrt(hi);
    auto f = [&](double w) {
        double xi = w * w;
        return 2.0 * weight(xi) * bessel_j(k - 1, 4.0 * kPi * a * w) *
               bessel_j(kappa - 1, 4.0 * kPi * b * w);
    };
    double freq = 4.0 * kPi * (a + b);
    auto r = quadrature::integrate(f, w0, w1, budget, freq);
    return {r.value, r.error_estimate, r.converged};
}

OscillatoryIntegral oscillatory_I(double a, double b, int k, int kappa,
                                  const QuadratureBudget& budget) {
    const Bump& h = standard_bump();
    return oscillatory_I_weighted(a, b, k, kappa, [&](double xi) { return h(xi); },
                                  Bump::support_lo, Bump::support_hi, budget);
}

OscillatoryIntegral kernel_Iq(double n, double q, double D, double D1, double M2, double Z,
                              int k, int kappa, const QuadratureBudget& budget) {
    if (n <= 0 || q <= 0 || D <= 0 || D1 <= 0 || M2 <= 0 || Z <= 0)
        throw std::domain_error("kernel_Iq: all parameters must be positive");
    double a = std::sqrt(D * Z) / q;
    double b = D1 * std::sqrt(n * Z) / (q * std::sqrt(M2));
    auto r = oscillatory_I(a, b, k, kappa, budget);
    r.value *= std::sqrt(Z);
    r.error_estimate *= std::sqrt(Z);
    return r;
}

}  // namespace rsl::special
