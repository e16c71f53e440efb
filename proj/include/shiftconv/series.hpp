#pragma once

// The two-variable shifted-convolution series D_h(s,w), its h = 0 closed
// form, and the main-term/residue formulas tied to it.

#include <complex>
#include <cstdint>
#include <optional>

#include "shiftconv/arith.hpp"
#include "shiftconv/errors.hpp"
#include "shiftconv/special.hpp"

namespace shiftconv {

// A point (s, w) with its region predicates derived on demand.
struct spectral_point {
    cplx s{2.0, 0.0};
    cplx w{0.5, 0.0};

    // Re s > 1 + |Re w - 1/2|: absolute convergence of D_h.
    bool converges_dh() const { return s.real() > 1.0 + std::abs(w.real() - 0.5); }
    bool w_in_strip() const { return w.real() > 0.0 && w.real() < 1.0; }
    bool w_is_half() const { return w == cplx(0.5, 0.0); }
};

struct dh_partial {
    cplx value{0.0, 0.0};
    double tail_bound = 0.0;       // +inf when the elementary certificate fails
    double rounding_error = 0.0;   // eps-scaled bound on accumulation error
};

// Partial sum of D_h(s,w) = sum_{n >= 0} r2(n) sigma_{1-2w}(n+h) (n+h)^{-(s+1/2-w)}
// over 0 <= n <= N. Requires point.converges_dh(); r2 indexed to N and sigma
// (with nu = 1-2w) indexed to N + h. The n = 0 term is
// sigma_{1-2w}(h) h^{-(s+1/2-w)}.
//
// Tail certificate: |sigma_{1-2w}(m)| <= d(m) max(1, m^{1-2 Re w}),
// d(m) <= 3.6 m^{1/3}, and Abel summation against the lattice-count bound
// sum_{n <= t} r2(n) <= (pi + 4.8/sqrt(N) + 2/N) t.
dh_partial dh_truncated(const spectral_point& point, std::int64_t h, std::int64_t N,
                        const arithmetic_table& r2, const arithmetic_table& sigma);

// D_0(s,w) = 4 zeta(s+1/2-w) zeta(s-1/2+w) L(s+1/2-w,chi4) L(s-1/2+w,chi4) / L(2s,chi4),
// the n = 0 term omitted by convention. Throws pole_error within 1e-6 of
// s = 1/2 + w or s = 3/2 - w, or where L(2s,chi4) vanishes to working precision.
special_value d0_closed_form(cplx s, cplx w);

// Direct summation oracle partner for d0_closed_form: the h = 0 series
// sum_{n >= 1} r2(n) sigma_{1-2w}(n) n^{-(s+1/2-w)} over n <= N.
dh_partial d0_truncated(const spectral_point& point, std::int64_t N, const arithmetic_table& r2,
                        const arithmetic_table& sigma);

struct main_term_inputs {
    std::int64_t h = 1;
    cplx w{0.5, 0.0};
    cplx phi_at{0.0, 0.0};            // phi_h(1/2+w), or phi_h(1) when w = 1/2
    cplx phi_at_reflected{0.0, 0.0};  // phi_h(3/2-w); unused when w = 1/2
    std::optional<cplx> phi_prime;    // phi_h'(1); required when w = 1/2
};

// Main terms of the sharp-sum asymptotic:
//   w != 1/2: sqrt(4 pi) [ zeta*(2w) phi h^{1/2-w} X
//                          + zeta*(2-2w) phi_reflected h^{w-1/2} X^{2-2w}/(2-2w) ]
//   w  = 1/2: sqrt(4 pi) [ phi(1) X log X
//                          + (phi(1)(gamma - log(4 pi h)) + phi'(1) - phi(1)) X ]
cplx main_term(double X, const main_term_inputs& inputs);

// The two coefficients of the w != 1/2 main terms: (coeff of X,
// coeff of X^{2-2w}). For w = 1/2: (coeff of X log X, coeff of X).
std::pair<cplx, cplx> main_term_coefficients(const main_term_inputs& inputs);

struct residue_pair {
    cplx at_half_plus_w{0.0, 0.0};       // Res_{s = 1/2 + w}
    cplx at_three_half_minus_w{0.0, 0.0};  // Res_{s = 3/2 - w}
    double consistency_residual = 0.0;   // vs main-term coefficients, relative
};

// Simple-pole residues for w != 1/2:
//   Res_{s=1/2+w}   = sqrt(4 pi) zeta*(2w)   h^{1/2-w} phi_h(1/2+w)
//   Res_{s=3/2-w}   = sqrt(4 pi) zeta*(2-2w) h^{w-1/2} phi_h(3/2-w)
// Also cross-checks that the main-term X coefficient equals the first residue
// and the X^{2-2w}/(2-2w) coefficient equals the second.
residue_pair residue_formulas(const main_term_inputs& inputs);

// w = 1/2 double pole at s = 1: principal part
//   c2/(s-1)^2 + c1/(s-1),
//   c2 = sqrt(4 pi) phi_h(1),
//   c1 = sqrt(4 pi) ((gamma - log(4 pi h)) phi_h(1) + phi_h'(1)).
std::pair<cplx, cplx> double_pole_principal_part(const main_term_inputs& inputs);

}  // namespace shiftconv
