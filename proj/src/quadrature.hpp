#pragma once

// Adaptive quadrature with oscillation-aware initial panel sizing.
// Panels use the embedded 7-15 Gauss-Kronrod pair; refinement is by
// bisection of the worst panel until the budget is met.

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace rsl::quadrature {

struct QuadratureBudget {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
    int max_subdivisions = 4000;
    double points_per_wavelength = 10.0;  // >= 8

    void validate() const {
        if (abs_tol <= 0 || rel_tol <= 0)
            throw std::domain_error("quadrature budget: tolerances must be positive");
        if (points_per_wavelength < 8)
            throw std::domain_error("quadrature budget: need >= 8 points per wavelength");
    }
};

struct IntegrationResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
    long evaluations = 0;
};

// Integrates f over [a, b]. `frequency` is an upper bound for the angular
// frequency (radians per unit length) of the integrand's oscillation and
// controls the initial panel count; 0 means "smooth, no oscillation".
IntegrationResult integrate(const std::function<double(double)>& f, double a, double b,
                            const QuadratureBudget& budget, double frequency = 0.0);

// Gauss-Legendre nodes and weights on [-1, 1], cached per n.
const std::vector<std::pair<double, double>>& gauss_legendre(int n);

}  // namespace rsl::quadrature
