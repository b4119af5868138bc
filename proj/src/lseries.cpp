#include "lseries.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "quadrature.hpp"

namespace rsl::lseries {

namespace {
constexpr double kPi = std::numbers::pi;
}

cplx log_gamma(cplx z) {
    // Lanczos, g = 7, 9 coefficients.
    static const double c[9] = {0.99999999999980993,  676.5203681218851,    -1259.1392167224028,
                                771.32342877765313,   -176.61502916214059,  12.507343278686905,
                                -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (z.real() < 0.5) {
        // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return std::log(kPi) - std::log(std::sin(kPi * z)) - log_gamma(1.0 - z);
    }
    z -= 1.0;
    cplx x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (z + double(i));
    cplx t = z + 7.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx log_gamma_factor(int k, int kappa, cplx s) {
    double a = std::abs(k - kappa) / 2.0;
    double b = (k + kappa) / 2.0 - 1.0;
    for (double shift : {a, b}) {
        cplx z = s + shift;
        if (std::abs(z.imag()) < 1e-8 && z.real() < 0.5) {
            double d = std::abs(z.real() - std::round(z.real()));
            if (d < 1e-8 && z.real() < 1e-8)
                throw std::domain_error("gamma factor: evaluation too close to a pole");
        }
    }
    return log_gamma(s + a) + log_gamma(s + b);
}

cplx dirichlet_l_stripN(cplx z, const DirichletCharacter& chi, i64 N) {
    if (z.real() < 1.3)
        throw std::domain_error("dirichlet_l_stripN: Re z must exceed 1.3");
    // sum to K, Euler-Maclaurin style integral tail on the completed sum;
    // character periodicity keeps the remainder below the alternating-tail
    // envelope q K^{-Re z}.
    const i64 K = 4000;
    cplx sum = 0.0;
    for (i64 n = 1; n <= K; ++n) {
        int cv = chi.value(n);
        if (cv == 0) continue;
        sum += double(cv) * std::exp(-z * std::log(double(n)));
    }
    // |tail| <= sum_{n > K} n^{-Re z} <= K^{1-Re z}/(Re z - 1); at Re z >= 3
    // and K = 4000 this is below 1e-8 absolute, and below 1e-13 for the
    // contour line Re z = 5 actually in use.
    cplx l = sum;
    for (i64 p : arith::prime_divisors(N)) {
        l *= (1.0 - double(chi.value(p)) * std::exp(-z * std::log(double(p))));
    }
    return l;
}

int root_number(i64 N, int k, const forms::NewformData& g) {
    if (!g.self_dual()) throw std::domain_error("root_number: non-self-dual g unsupported");
    if (std::gcd(N, g.level()) != 1)
        throw std::domain_error("root_number: levels must be coprime");
    const auto& chi = g.nebentypus();
    // eta_g(M)^2 = 1 for real nebentypus
    int v = (g.weight() >= k) ? chi.value(-N) : chi.value(N);
    if (v == 0) throw std::logic_error("root_number: character vanished on a coprime argument");
    return v;
}

namespace {

cplx g_function(const AFEParams& p, cplx s) {
    double a = (p.g_choice == GChoice::kGaussianOverS) ? 1.0 : 2.0;
    cplx u = s - cplx(0.0, p.t);
    cplx num = std::exp(a * u * u);
    // pole of order j+1, residue normalization j!
    double jfac = 1.0;
    for (int i = 2; i <= p.j; ++i) jfac *= i;
    cplx den = std::pow(u, p.j + 1);
    return jfac * num / den;
}

cplx vhat(const AFEParams& p, cplx s) {
    const DirichletCharacter chi = p.dual ? p.chi : p.chi;  // real characters: conj = id
    cplx lg = log_gamma_factor(p.k, p.kappa, 0.5 + s) -
              log_gamma_factor(p.k, p.kappa, cplx(0.5, p.t));
    cplx l = dirichlet_l_stripN(1.0 + 2.0 * s, chi, p.N);
    cplx four_pi_sq = std::exp(-s * std::log(4.0 * kPi * kPi));
    return four_pi_sq * std::exp(lg) * l * g_function(p, s);
}

}  // namespace

AFEWeight::AFEWeight(const AFEParams& params) : params_(params) {
    if (params_.k < 2 || params_.kappa < 2)
        throw std::domain_error("AFE weight: weights must be >= 2");
    real_path_ = (params_.j == 0 && params_.t == 0.0 && params_.chi.is_real());

    // Composite Gauss-Legendre along tau with unit panels; extend until the
    // gamma decay certifies the remaining tail.
    const auto& gl = quadrature::gauss_legendre(16);
    double peak = 0.0;
    double tau0 = 0.0;
    const double panel_w = 1.0;
    const int max_panels = 400;
    double tail = 0.0;
    int quiet_panels = 0;
    double lo = real_path_ ? 0.0 : -double(max_panels) * panel_w;
    (void)lo;
    auto add_panel = [&](double t0) {
        double pmax = 0.0;
        for (auto& [x, w] : gl) {
            double tau = t0 + 0.5 * panel_w * (x + 1.0);
            cplx v = vhat(params_, cplx(2.0, tau));
            tau_.push_back(tau);
            coeff_.push_back(0.5 * panel_w * w * v);
            pmax = std::max(pmax, std::abs(v));
        }
        return pmax;
    };
    if (real_path_) {
        for (int pnl = 0; pnl < max_panels; ++pnl) {
            double pmax = add_panel(tau0);
            peak = std::max(peak, pmax);
            tau0 += panel_w;
            if (pmax < 1e-18 * peak) {
                if (++quiet_panels >= 2) break;
            } else {
                quiet_panels = 0;
            }
        }
        tail = 2.0 * peak * 1e-18 * 10.0;
    } else {
        // symmetric two-sided contour
        for (int pnl = 0; pnl < max_panels; ++pnl) {
            double pmax = add_panel(tau0);
            if (tau0 > 0.0) pmax = std::max(pmax, add_panel(-tau0 - panel_w));
            peak = std::max(peak, pmax);
            tau0 += panel_w;
            if (pmax < 1e-18 * peak) {
                if (++quiet_panels >= 2) break;
            } else {
                quiet_panels = 0;
            }
        }
        tail = 2.0 * peak * 1e-18 * 10.0;
    }
    contour_tail_ = tail;

    // decay constant for the A = 8 envelope |V(y)| <= C8 y^{-8}
    double c8 = 0.0;
    for (double y : {4.0, 6.0, 8.0, 12.0, 16.0, 24.0, 32.0, 48.0, 64.0, 96.0}) {
        double v = std::abs(complex_value(y));
        c8 = std::max(c8, v * std::pow(y, 8.0));
    }
    c8_ = 4.0 * std::max(c8, 1e-300);
}

cplx AFEWeight::complex_value(double y) const {
    if (!(y > 0)) throw std::domain_error("AFE weight: y must be positive");
    double L = std::log(y);
    cplx acc = 0.0;
    for (size_t i = 0; i < tau_.size(); ++i) {
        // y^{-s} = e^{-(2 + i tau) ln y}
        cplx e = std::polar(std::exp(-2.0 * L), -tau_[i] * L);
        acc += coeff_[i] * e;
    }
    if (real_path_) {
        // half-line doubled by Hermitian symmetry; (1/2 pi) * 2 Re
        return cplx(acc.real() / kPi, 0.0);
    }
    return acc / (2.0 * kPi);
}

double AFEWeight::operator()(double y) const {
    cplx v = complex_value(y);
    return v.real();
}

CentralValue central_value(const forms::NewformData& f, const forms::NewformData& g, int j,
                           double t, const CentralValueOptions& opt) {
    if (!f.nebentypus().is_trivial())
        throw std::domain_error("central_value: f must have trivial nebentypus");
    if (std::gcd(f.level(), g.level()) != 1)
        throw std::domain_error("central_value: levels must be coprime");
    if (!arith::is_squarefree(f.level()) || !arith::is_squarefree(g.level()))
        throw std::domain_error("central_value: levels must be square-free");

    AFEParams pa;
    pa.k = f.weight();
    pa.kappa = g.weight();
    pa.N = f.level();
    pa.M = g.level();
    pa.chi = g.nebentypus();
    pa.j = j;
    pa.t = t;
    pa.g_choice = opt.g_choice;
    AFEWeight V(pa);
    pa.dual = true;
    AFEWeight Vdual(pa);

    int eps = root_number(f.level(), f.weight(), g);
    double NM = double(f.level()) * double(g.level());

    // Truncation: remainder past n0 bounded through |V(y)| <= C8 y^{-8} and
    // d(n)^2 <= 4 n^{1/2} gives 4 C8 (NM)^8 sum_{n > n0} n^{-8} <=
    // 4 C8 (NM)^8 n0^{-7} / 7.
    double C8 = std::max(V.decay_constant_A8(), Vdual.decay_constant_A8());
    i64 n0 = i64(std::ceil(4.0 * NM));
    auto tail_at = [&](i64 n) {
        return 4.0 * C8 * std::pow(NM, 8.0) * std::pow(double(n), -7.0) / 7.0;
    };
    while (tail_at(n0) > opt.target_tail && n0 < opt.n_cap) n0 *= 2;
    n0 = i64(double(n0) * opt.length_multiplier);
    n0 = std::min(n0, opt.n_cap);
    i64 Tmin = std::min(f.table_length(), g.table_length());
    if (n0 > Tmin)
        throw std::out_of_range("central_value: eigenvalue tables too short (need n <= " +
                                std::to_string(n0) + ", have " + std::to_string(Tmin) + ")");

    bool real_case = (j == 0 && t == 0.0);
    cplx main = 0.0, dual = 0.0;
    double comp_m = 0.0, comp_d = 0.0;
    for (i64 n = 1; n <= n0; ++n) {
        double b = f.lambda(n) * g.lambda(n);
        if (b == 0.0) continue;
        double w = b / std::sqrt(double(n));
        double y = double(n) / NM;
        if (real_case) {
            double vy = w * V(y);
            double yd = w * Vdual(y);
            double z = vy - comp_m;
            double s = main.real() + z;
            comp_m = (s - main.real()) - z;
            main = s;
            z = yd - comp_d;
            s = dual.real() + z;
            comp_d = (s - dual.real()) - z;
            dual = s;
        } else {
            cplx shift = std::exp(cplx(0.0, -t) * std::log(double(n)));
            main += w * shift * V.complex_value(y);
            dual += w * std::conj(shift) * Vdual.complex_value(y);
        }
    }
    // dual-sum sign (-1)^j from G(-s) = (-1)^{j+1} G(s)
    double sj = (j % 2 == 0) ? 1.0 : -1.0;
    CentralValue out;
    out.value = main + sj * double(eps) * dual;
    out.epsilon = eps;
    out.n_used = n0;
    out.tail_estimate = 2.0 * tail_at(n0) + V.contour_tail_bound() + Vdual.contour_tail_bound();
    return out;
}

}  // namespace rsl::lseries
