#pragma once

// Theta and real-analytic Eisenstein series of level 1 and level 4, each by
// independent evaluation routes (q-series / Fourier-Bessel expansion / coset
// lattice sums), plus the residual checks tying the routes together.

#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "shiftconv/errors.hpp"
#include "shiftconv/special.hpp"

namespace shiftconv {

struct half_plane_point {
    double x = 0.0;
    double y = 1.0;  // > 0
};

inline void require_upper_half(const half_plane_point& z, const char* who) {
    if (!(z.y > 0.0)) throw contract_error(std::string(who) + ": point must satisfy y > 0");
}

// Cutoff (Fourier terms M, or coset radius R) plus the tail target the caller
// wants certified. Evaluators compute the documented tail bound for their
// route and refuse budgets that cannot meet the target.
struct truncation_budget {
    std::int64_t cutoff = 0;
    double target_tail = std::numeric_limits<double>::infinity();
};

struct truncated_value {
    cplx value{0.0, 0.0};
    double tail_bound = 0.0;
};

enum class eis_level { one, four };
enum class eis_cusp { infinity, zero, half };
enum class eis_weight { zero };  // weight -1 series are outside numeric scope

struct eisenstein_spec {
    eis_level level = eis_level::one;
    eis_cusp cusp = eis_cusp::infinity;  // level four only
    eis_weight weight = eis_weight::zero;
    bool completed = false;              // multiply by zeta*(2w)
    cplx w{2.0, 0.0};
};

// theta(z) = sum_{n in Z} e(n^2 z), truncated at |n| <= cutoff with the
// geometric tail bound 2 e^{-2 pi (M+1)^2 y} / (1 - e^{-4 pi (M+1) y}).
truncated_value theta(const half_plane_point& z, const truncation_budget& budget);

// Smallest cutoff whose theta tail bound at height y meets `target`.
std::int64_t theta_cutoff_for(double y, double target);

// Level-1 E(z,w) from the Fourier-Bessel expansion: constant term
// y^w + y^{1-w} zeta*(2w-1)/zeta*(2w) plus K-Bessel terms up to n = cutoff.
truncated_value eisenstein_level1_fourier(const half_plane_point& z, cplx w,
                                          const truncation_budget& budget);

// Bottom rows (c, d) of coset representatives: gcd(c,d) = 1, and 4 | c for
// level four; all sign pairs with 0 < max(|c|,|d|) <= R are visited. Sums
// over these rows carry a 1/2 prefactor for the +/- identification.
void enumerate_bottom_rows(eis_level level, std::int64_t R,
                           const std::function<void(std::int64_t c, std::int64_t d)>& visit);
std::vector<std::pair<std::int64_t, std::int64_t>> bottom_rows(eis_level level, std::int64_t R);

// Truncated coset sum (1/2) sum y^w / |c z + d|^{2w} for E_infinity of the
// requested level, evaluated at z. Requires Re w > 1.
truncated_value eisenstein_coset_sum(eis_level level, const half_plane_point& z, cplx w,
                                     const truncation_budget& budget, int workers = 1);

// Level-4 Eisenstein series at a cusp: E_a(z,w) = E_infinity(sigma_a z, w)
// with sigma_0: z -> -1/(4z) and sigma_{1/2}: z -> z/(2z+1).
truncated_value eisenstein_level4_cosets(eis_cusp cusp, const half_plane_point& z, cplx w,
                                         const truncation_budget& budget, int workers = 1);

half_plane_point apply_cusp_scaling(eis_cusp cusp, const half_plane_point& z);

// Unified entry point over an eisenstein_spec (Fourier route for level one,
// coset route for level four).
truncated_value eisenstein(const eisenstein_spec& spec, const half_plane_point& z,
                           const truncation_budget& budget, int workers = 1);

struct decomposition_residuals {
    double coset_route = 0.0;    // |E1_coset - (E_inf + 4^w E_0 + E_{1/2})|
    double fourier_route = 0.0;  // |E1_fourier - (E_inf + 4^w E_0 + E_{1/2})|
    double tail_bound = 0.0;     // summed lattice tails of the four coset sums
};

// Checks E(z,w) = E_inf(z,w) + 4^w E_0(z,w) + E_{1/2}(z,w) at radius
// budget.cutoff, with the level-1 side computed by both routes.
decomposition_residuals verify_decomposition(const half_plane_point& z, cplx w,
                                             const truncation_budget& budget, int workers = 1);

// The six integer coset representatives of Gamma_0(4) \ SL2(Z) used by the
// decomposition; exposed for the exact pairwise-inequivalence check.
struct int_matrix2 {
    std::int64_t a, b, c, d;
};
const std::vector<int_matrix2>& level4_coset_matrices();

// True iff every listed matrix has det 1 and no two lie in the same left
// Gamma_0(4)-coset (exact integer arithmetic).
bool verify_coset_matrices_inequivalent();

}  // namespace shiftconv
