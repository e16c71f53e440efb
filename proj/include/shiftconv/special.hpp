#pragma once

// Complex special functions: Gamma, digamma, zeta and Hurwitz zeta by
// Euler-Maclaurin with certified remainders, the conductor-4 Dirichlet
// L-function and the completed variants, K-Bessel of real/complex/imaginary
// order, Whittaker W for first index in {-1/2, 0, 1/2}, and the geometric
// Kuznetsov arc integral. Double precision throughout; every result carries
// an absolute error estimate.

#include <complex>
#include <cstdint>

#include "shiftconv/errors.hpp"

namespace shiftconv {

using cplx = std::complex<double>;

enum class eval_method {
    lanczos,
    reflection,
    euler_maclaurin,
    hurwitz_split,
    exp_arc_quadrature,   // trapezoid on e^{-x cosh t} cosh(nu t)
    laplace_quadrature,   // exp-sinh transformed real-axis integral
    mellin_barnes,
    arc_gauss_legendre,
    closed_form,
    underflow,
};

struct special_value {
    cplx value{0.0, 0.0};
    double abs_error_estimate = 0.0;  // finite, >= 0
    eval_method method = eval_method::closed_form;
};

// Mellin-Barnes path and node budget for the quadrature-backed evaluators.
struct quadrature_budget {
    std::int64_t max_nodes = 1 << 22;
    double target_abs_error = 1e-10;
    double line_abscissa = 0.25 - 1e-3;  // Re u for the Mellin-Barnes line
    double truncation_drop = 45.0;       // stop once log-integrand falls this far below its peak
    double imag_order_cap = 10.0;        // |T| limit for imaginary-order evaluation
};

inline void validate(const quadrature_budget& b, const char* who) {
    if (!(b.target_abs_error > 0.0))
        throw contract_error(std::string(who) + ": target_abs_error must be positive");
    if (b.max_nodes < 16) throw contract_error(std::string(who) + ": max_nodes must be >= 16");
}

// Gamma(s); reflection formula for Re s <= 0.5. Throws pole_error at
// nonpositive integers.
special_value gamma_c(cplx s);

// log Gamma(s) for Re s > 0, branch-continuous on the half-plane.
cplx lgamma_right_halfplane(cplx s);

// psi(s) = Gamma'(s)/Gamma(s).
special_value digamma(cplx s);

// zeta(s) by Euler-Maclaurin with the classical remainder certificate.
special_value zeta_c(cplx s);

// zeta*(s) = pi^{-s/2} Gamma(s/2) zeta(s); poles at s = 0, 1.
special_value zeta_star(cplx s);

// Hurwitz zeta(s, a) for 0 < a <= 1, s != 1.
special_value hurwitz_zeta(cplx s, double a);

// L(s, chi4) = 4^{-s} (zeta(s,1/4) - zeta(s,3/4)); entire.
special_value l_chi4(cplx s);

// L*(s, chi4) = (pi/4)^{-s/2} Gamma((s+1)/2) L(s, chi4); satisfies
// L*(s) = L*(1-s) with root number 1.
special_value l_chi4_star(cplx s);

// K_nu(x) for complex order, x > 0, via the even integral
// (1/2) Int_R e^{-x cosh t} cosh(nu t) dt with trapezoid halving.
// Underflows to exact 0 (flagged) once x is beyond exponential range.
special_value bessel_k(cplx nu, double x);

// W_{kappa,mu}(x) for kappa in {-1/2, 0, 1/2}, x > 0, through the Laplace
// integral; uses the mu -> -mu symmetry when needed.
special_value whittaker_w(double kappa, cplx mu, double x);

// K_{2iT}(z) for Re z > 0 via the Mellin-Barnes line Re u = line_abscissa.
// |T| is capped (default 10) because the line integrand widens with T.
special_value bessel_k_imag_order(double T, cplx z, const quadrature_budget& budget = {});

// I_T(beta) = Int K_{2iT}(beta zeta) zeta^{-2} dzeta along the right half
// unit circle (counter-clockwise from -i to i). Gauss-Legendre on the arc
// with node doubling until self-consistent; shares one Gamma-pair grid
// across all arc nodes.
special_value kuznetsov_geometric_integral(double T, double beta,
                                           const quadrature_budget& budget = {});

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

}  // namespace shiftconv
