#pragma once

// Numerical special functions: Bessel J of integer order, its oscillatory
// envelope decomposition J_k(x) = e^{ix} W_k(x) + e^{-ix} conj(W_k(x)),
// smooth bumps, dyadic partitions of unity, and the oscillatory kernel
// integrals I(a,b) built from two Bessel factors.

#include <complex>
#include <functional>

#include "quadrature.hpp"

namespace rsl::special {

using quadrature::QuadratureBudget;

// J_order(x) for integer order >= 0, x >= 0, relative accuracy ~1e-11 for
// x <= 1e4. Power series up to order+10, then the real-form asymptotic
// expansion where its terms certify convergence, backward recurrence with
// even-order normalization otherwise.
double bessel_j(int order, double x);

// Envelope W_k with J_k(x) = 2 Re(e^{ix} W_k(x)), from the integral
// representation W_k(x) = C_k x^{-1/2} Int_0^inf e^{-y} (y(1+iy/2x))^{k-1/2} dy.
std::complex<double> envelope_w(int order, double x);
std::complex<double> envelope_w_derivative(int order, double x);

// Smooth bump supported on [1/2, 5/2], identically built so that
// sum_{j in Z} h(x / 2^j) = 1 for every x > 0.
class Bump {
  public:
    Bump();
    double operator()(double x) const;
    static constexpr double support_lo = 0.5;
    static constexpr double support_hi = 2.5;

  private:
    double raw(double x) const;
};

const Bump& standard_bump();

struct DyadicPiece {
    double scale;  // Z = 2^j
};

struct DyadicPartition {
    double x_min = 1.0;
    double x_max = 2.0;
    std::vector<DyadicPiece> pieces;  // ascending scales

    // sum of h(x/Z) over the pieces; equals 1 on [x_min, x_max].
    double sum_at(double x) const;
};

DyadicPartition make_dyadic_partition(double x_min, double x_max);

struct OscillatoryIntegral {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = false;
};

// I(a, b) = Int h(xi) xi^{-1/2} J_{k-1}(4 pi a sqrt(xi)) J_{kappa-1}(4 pi b sqrt(xi)) dxi,
// evaluated as 2 Int h(w^2) J_{k-1}(4 pi a w) J_{kappa-1}(4 pi b w) dw.
OscillatoryIntegral oscillatory_I(double a, double b, int k, int kappa,
                                  const QuadratureBudget& budget);

// Same kernel with an arbitrary smooth compactly supported weight w(xi)
// on [lo, hi] in the xi variable (replaces h).
OscillatoryIntegral oscillatory_I_weighted(double a, double b, int k, int kappa,
                                           const std::function<double(double)>& weight,
                                           double lo, double hi,
                                           const QuadratureBudget& budget);

// I_q(n) = sqrt(Z) * I(sqrt(DZ)/q, D1 sqrt(nZ)/(q sqrt(M2))).
OscillatoryIntegral kernel_Iq(double n, double q, double D, double D1, double M2, double Z,
                              int k, int kappa, const QuadratureBudget& budget);

}  // namespace rsl::special
