#include "quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <queue>

namespace rsl::quadrature {

namespace {

// 7-15 Gauss-Kronrod pair (QUADPACK dqk15 constants).
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double err;
    bool operator<(const Panel& o) const { return err < o.err; }
};

Panel gk15(const std::function<double(double)>& f, double a, double b, long& evals) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fc = f(c);
    double resk = fc * kWgk[7];
    double resg = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        double x = h * kXgk[j];
        double f1 = f(c - x), f2 = f(c + x);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    evals += 15;
    double value = resk * h;
    double err = std::abs((resk - resg) * h);
    // QUADPACK-style sharpening of the raw difference.
    if (err != 0.0) err = std::min(err, 200.0 * err * std::sqrt(200.0 * err / std::max(1e-300, std::abs(value) + err)));
    err = std::max(err, 1e-300);
    return {a, b, value, err};
}

}  // namespace

IntegrationResult integrate(const std::function<double(double)>& f, double a, double b,
                            const QuadratureBudget& budget, double frequency) {
    budget.validate();
    IntegrationResult out;
    if (a == b) {
        out.converged = true;
        return out;
    }
    // Initial panels: at least points_per_wavelength samples per oscillation
    // period, 15 samples per panel.
    double wavelengths = std::abs(b - a) * frequency / (2.0 * std::numbers::pi);
    int panels = std::max(1, int(std::ceil(wavelengths * budget.points_per_wavelength / 15.0)));
    panels = std::min(panels, budget.max_subdivisions);

    std::priority_queue<Panel> heap;
    double total = 0.0, toterr = 0.0;
    for (int i = 0; i < panels; ++i) {
        double x0 = a + (b - a) * double(i) / panels;
        double x1 = a + (b - a) * double(i + 1) / panels;
        Panel p = gk15(f, x0, x1, out.evaluations);
        total += p.value;
        toterr += p.err;
        heap.push(p);
    }
    int splits = panels;
    while (splits < budget.max_subdivisions) {
        if (toterr <= budget.abs_tol || toterr <= budget.rel_tol * std::abs(total)) break;
        Panel worst = heap.top();
        heap.pop();
        total -= worst.value;
        toterr -= worst.err;
        double mid = 0.5 * (worst.a + worst.b);
        Panel left = gk15(f, worst.a, mid, out.evaluations);
        Panel right = gk15(f, mid, worst.b, out.evaluations);
        total += left.value + right.value;
        toterr += left.err + right.err;
        heap.push(left);
        heap.push(right);
        ++splits;
    }
    out.value = total;
    out.error_estimate = toterr;
    out.converged = (toterr <= budget.abs_tol || toterr <= budget.rel_tol * std::abs(total));
    return out;
}

const std::vector<std::pair<double, double>>& gauss_legendre(int n) {
    static std::mutex mu;
    static std::map<int, std::vector<std::pair<double, double>>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    std::vector<std::pair<double, double>> nw(size_t(n));
    for (int i = 0; i < n; ++i) {
        // Tricomi initial guess, then Newton on P_n.
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        double dp = n * (x * p1 - p0) / (x * x - 1.0);
        nw[size_t(i)] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
    }
    auto [pos, ok] = cache.emplace(n, std::move(nw));
    return pos->second;
}

}  // namespace rsl::quadrature
