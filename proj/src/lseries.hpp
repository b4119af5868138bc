#pragma once

// Rankin-Selberg L-series machinery: the archimedean gamma factor, the root
// number for self-dual data, the cutoff function V realized as a
// quadrature-backed evaluator on the vertical line Re s = 2, and central
// values through the two-sided smoothed sum.

#include <complex>
#include <vector>

#include "forms.hpp"

namespace rsl::lseries {

using arith::DirichletCharacter;
using arith::i64;
using cplx = std::complex<double>;

// log Gamma(z), Lanczos approximation, Re z > 0 (reflected otherwise).
cplx log_gamma(cplx z);

// L_infty(s) = Gamma(s + |k-kappa|/2) Gamma(s + (k+kappa)/2 - 1), log scale.
// Rejects evaluation within 1e-8 of a pole.
cplx log_gamma_factor(int k, int kappa, cplx s);

// Dirichlet L-function with the Euler factors at p | N removed,
// L^{(N)}(z, chi) for Re z > 1.3, via direct summation with a certified
// integral tail.
cplx dirichlet_l_stripN(cplx z, const DirichletCharacter& chi, i64 N);

// Root number for f of level N (trivial nebentypus) against self-dual g:
// chi(-N) when kappa >= k, chi(N) when k >= kappa.
int root_number(i64 N, int k, const forms::NewformData& g);

enum class GChoice {
    kGaussianOverS,   // e^{s^2} / s
    kGaussian2OverS,  // e^{2 s^2} / s
};

struct AFEParams {
    int k = 12;            // weight of f
    int kappa = 2;         // weight of g
    i64 N = 1;             // level of f
    i64 M = 11;            // level of g
    DirichletCharacter chi = DirichletCharacter::trivial(1);
    int j = 0;             // derivative order (pole of order j+1)
    double t = 0.0;        // height shift
    GChoice g_choice = GChoice::kGaussianOverS;
    bool dual = false;     // build the mirrored weight
};

// V(y) = (1/2 pi i) Int_{Re s = 2} y^{-s} Vhat(s) ds with
//   Vhat(s) = (4 pi^2)^{-s} (L_inf(1/2+s)/L_inf(1/2+it))
//             L^{(N)}(1+2s, chi) G(s).
// The contour data is precomputed at construction; each evaluation is a
// weighted exponential sum over the stored nodes.
class AFEWeight {
  public:
    explicit AFEWeight(const AFEParams& params);

    double operator()(double y) const;  // real path (j = 0, t = 0, real chi)
    cplx complex_value(double y) const;

    const AFEParams& params() const { return params_; }
    // max over sampled y >= 4 of |V(y)| y^8, with a safety factor; used for
    // certified tail truncation of the smoothed sums.
    double decay_constant_A8() const { return c8_; }
    double contour_tail_bound() const { return contour_tail_; }

  private:
    AFEParams params_;
    bool real_path_ = true;
    std::vector<double> tau_;
    std::vector<cplx> coeff_;  // w_j * Vhat(2 + i tau_j), including 1/pi or 1/2pi
    double contour_tail_ = 0.0;
    double c8_ = 1.0;
};

struct CentralValue {
    cplx value = 0.0;
    double epsilon = 1.0;       // root number
    i64 n_used = 0;             // truncation of each smoothed sum
    double tail_estimate = 0.0; // certified truncation remainder
};

struct CentralValueOptions {
    GChoice g_choice = GChoice::kGaussianOverS;
    double target_tail = 1e-9;
    i64 n_cap = 2000000;        // refuse to sum past this
    double length_multiplier = 1.0;  // scales the chosen truncation (tests)
};

// L(1/2, f x g) for self-dual data at j = 0, t = 0 (real); for general
// (j, t) the Gaussian-regularized j-th derivative of the completed function,
// which reduces to L^{(j)} when the lower-order central values vanish.
CentralValue central_value(const forms::NewformData& f, const forms::NewformData& g, int j = 0,
                           double t = 0.0, const CentralValueOptions& opt = {});

}  // namespace rsl::lseries
