#include "shiftconv/modular.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "shiftconv/parallel.hpp"

namespace shiftconv {

namespace {

constexpr double pi = 3.14159265358979323846264338327950288;

// d(n) <= 3.6 n^{1/3}: the multiplicative factors (a+1) p^{-a/3} are < 1 for
// every prime p >= 11, and the maxima over prime powers of 2, 3, 5, 7
// multiply to ~3.53.
constexpr double divisor_cuberoot_const = 3.6;

}  // namespace

truncated_value theta(const half_plane_point& z, const truncation_budget& budget) {
    require_upper_half(z, "theta");
    const std::int64_t M = budget.cutoff;
    if (M < 0) throw contract_error("theta: cutoff must be >= 0");

    // Tail: 2 sum_{n > M} e^{-2 pi n^2 y}. With n^2 >= (M+1)^2 + 2(M+1)(n-M-1),
    // the sum is geometric with ratio e^{-4 pi (M+1) y}.
    const double e1 = std::exp(-2.0 * pi * static_cast<double>((M + 1) * (M + 1)) * z.y);
    const double ratio = std::exp(-4.0 * pi * static_cast<double>(M + 1) * z.y);
    const double tail = 2.0 * e1 / (1.0 - ratio);
    if (!(tail <= budget.target_tail)) {
        throw budget_error("theta: tail bound " + std::to_string(tail) +
                           " exceeds target; try cutoff >= " +
                           std::to_string(theta_cutoff_for(z.y, budget.target_tail)));
    }

    cplx sum(1.0, 0.0);
    for (std::int64_t n = 1; n <= M; ++n) {
        const double nn = static_cast<double>(n * n);
        // e(n^2 z) = e^{-2 pi n^2 y} (cos + i sin)(2 pi n^2 x)
        const double decay = std::exp(-2.0 * pi * nn * z.y);
        const double phase = 2.0 * pi * nn * z.x;
        sum += 2.0 * decay * cplx(std::cos(phase), std::sin(phase));
    }
    return {sum, tail};
}

std::int64_t theta_cutoff_for(double y, double target) {
    if (!(y > 0.0)) throw contract_error("theta_cutoff_for: y must be positive");
    if (!(target > 0.0)) throw contract_error("theta_cutoff_for: target must be positive");
    for (std::int64_t M = 0; M < 100000; ++M) {
        const double e1 = std::exp(-2.0 * pi * static_cast<double>((M + 1) * (M + 1)) * y);
        const double ratio = std::exp(-4.0 * pi * static_cast<double>(M + 1) * y);
        if (2.0 * e1 / (1.0 - ratio) <= target) return M;
    }
    throw budget_error("theta_cutoff_for: target unreachable at this height");
}

truncated_value eisenstein_level1_fourier(const half_plane_point& z, cplx w,
                                          const truncation_budget& budget) {
    require_upper_half(z, "eisenstein_level1_fourier");
    for (double p : {0.0, 0.5, 1.0})
        if (std::abs(w - p) < 1e-12)
            throw pole_error("eisenstein_level1_fourier: constant-term pole at w = " +
                             std::to_string(p));
    const std::int64_t M = budget.cutoff;
    if (M < 1) throw contract_error("eisenstein_level1_fourier: cutoff must be >= 1");

    const double y = z.y;
    // Reduce x mod 1 so the expansion is exactly periodic in floating point.
    const double x = z.x - std::floor(z.x);
    const cplx zs2w = zeta_star(2.0 * w).value;
    const cplx zs2wm1 = zeta_star(2.0 * w - 1.0).value;
    const cplx a0 = std::exp(w * std::log(y)) + std::exp((1.0 - w) * std::log(y)) * zs2wm1 / zs2w;

    // sigma_{1-2w}(n) for n <= M by a small divisor loop.
    const cplx nu = 1.0 - 2.0 * w;
    std::vector<cplx> sigma(static_cast<std::size_t>(M + 1), cplx(0.0, 0.0));
    for (std::int64_t d = 1; d <= M; ++d) {
        const cplx dpow = std::exp(nu * std::log(static_cast<double>(d)));
        for (std::int64_t m = d; m <= M; m += d) sigma[static_cast<std::size_t>(m)] += dpow;
    }

    const cplx order = w - 0.5;
    cplx series(0.0, 0.0);
    for (std::int64_t n = 1; n <= M; ++n) {
        const double nd = static_cast<double>(n);
        const cplx npow = std::exp(order * std::log(nd));
        const special_value kv = bessel_k(order, 2.0 * pi * nd * y);
        series += sigma[static_cast<std::size_t>(n)] * npow * kv.value *
                  (2.0 * std::cos(2.0 * pi * nd * x));
    }
    const cplx pref = 2.0 * std::sqrt(y) / zs2w;
    const cplx value = a0 + pref * series;

    // Tail over n > M: |sigma_{1-2w}(n)| <= 3.6 n^{1/3} max(1, n^{1-2 Re w}),
    // |n^{w-1/2}| = n^{Re w - 1/2}, and
    // |K_nu(x)| <= e^{-x + a^2/(2x)} sqrt(2 pi / x) with a = |Re nu|.
    const double rw = w.real();
    const double a = std::abs(order.real());
    const double p = 1.0 / 3.0 + std::max(0.0, 1.0 - 2.0 * rw) + rw - 0.5;
    const double x1 = 2.0 * pi * static_cast<double>(M + 1) * y;
    if (static_cast<double>(M) < p / (pi * y) + 1.0)
        throw budget_error("eisenstein_level1_fourier: cutoff too small for the tail formula; "
                           "need M > p/(pi y) with p = " + std::to_string(p));
    const double c1 = std::exp(a * a / (2.0 * x1));
    const double mp = std::pow(static_cast<double>(M + 1), p);
    const double tail_sum = mp * std::exp(-x1) / (1.0 - std::exp(-pi * y));
    const double tail = std::abs(pref) * 2.0 * divisor_cuberoot_const * c1 *
                        std::sqrt(2.0 * pi / x1) * tail_sum;
    if (!(tail <= budget.target_tail))
        throw budget_error("eisenstein_level1_fourier: tail bound exceeds target; raise cutoff");
    return {value, tail};
}

void enumerate_bottom_rows(eis_level level, std::int64_t R,
                           const std::function<void(std::int64_t, std::int64_t)>& visit) {
    if (R < 1) throw contract_error("enumerate_bottom_rows: radius must be >= 1");
    const std::int64_t cstep = (level == eis_level::four) ? 4 : 1;
    // c = 0 seeds: gcd(0, d) = |d| = 1.
    visit(0, 1);
    visit(0, -1);
    for (std::int64_t c = cstep; c <= R; c += cstep) {
        for (std::int64_t d = -R; d <= R; ++d) {
            if (std::gcd(c, std::abs(d)) != 1) continue;
            visit(c, d);
            visit(-c, -d);
        }
    }
}

std::vector<std::pair<std::int64_t, std::int64_t>> bottom_rows(eis_level level, std::int64_t R) {
    std::vector<std::pair<std::int64_t, std::int64_t>> rows;
    enumerate_bottom_rows(level, R, [&](std::int64_t c, std::int64_t d) { rows.emplace_back(c, d); });
    return rows;
}

namespace {

// Smaller eigenvalue of the form (c x + d)^2 + c^2 y^2 = [c d] Q [c d]^T,
// Q = [[x^2 + y^2, x], [x, 1]]; gives |c z + d|^2 >= lambda (c^2 + d^2).
double lattice_form_lambda_min(const half_plane_point& z) {
    const double tr = z.x * z.x + z.y * z.y + 1.0;
    const double det = z.y * z.y;
    return 0.5 * (tr - std::sqrt(tr * tr - 4.0 * det));
}

double coset_tail_bound(const half_plane_point& z, double rw, std::int64_t R) {
    // At most 8m pairs with max(|c|,|d|) = m; each term <= y^rw / (lambda m^2)^rw.
    // Sum_{m > R} m^{1-2rw} <= R^{2-2rw} / (2rw - 2).
    const double lam = lattice_form_lambda_min(z);
    return 4.0 * std::pow(z.y, rw) * std::pow(lam, -rw) *
           std::pow(static_cast<double>(R), 2.0 - 2.0 * rw) / (2.0 * rw - 2.0);
}

}  // namespace

truncated_value eisenstein_coset_sum(eis_level level, const half_plane_point& z, cplx w,
                                     const truncation_budget& budget, int workers) {
    require_upper_half(z, "eisenstein_coset_sum");
    if (!(w.real() > 1.0))
        throw region_error("eisenstein_coset_sum: coset sum diverges for Re w <= 1");
    const std::int64_t R = budget.cutoff;
    if (R < 1) throw contract_error("eisenstein_coset_sum: radius must be >= 1");

    const double tail = coset_tail_bound(z, w.real(), R);
    if (!(tail <= budget.target_tail))
        throw budget_error("eisenstein_coset_sum: lattice tail exceeds target; raise radius");

    const double x = z.x, y = z.y;
    const double logy = std::log(y);
    const bool real_w = (w.imag() == 0.0);
    const double rw = w.real();
    const std::int64_t cstep = (level == eis_level::four) ? 4 : 1;
    const std::int64_t c_count = R / cstep;  // positive c values

    // Canonical half: (0,1) plus all (c > 0, d); the +/- identification
    // cancels the 1/2 prefactor.
    const std::int64_t block = 32;  // c-values per block, fixed for reproducibility
    const std::int64_t n_blocks = (c_count + block - 1) / block;
    std::vector<cplx> partial(static_cast<std::size_t>(n_blocks), cplx(0.0, 0.0));

    run_blocks(n_blocks, workers, [&](std::int64_t bi) {
        cplx acc(0.0, 0.0);
        const std::int64_t i_lo = 1 + bi * block;
        const std::int64_t i_hi = std::min(c_count, i_lo + block - 1);
        for (std::int64_t i = i_lo; i <= i_hi; ++i) {
            const std::int64_t c = i * cstep;
            const double cd = static_cast<double>(c);
            const double cy2 = cd * cd * y * y;
            for (std::int64_t d = -R; d <= R; ++d) {
                if (std::gcd(c, std::abs(d)) != 1) continue;
                const double t = cd * x + static_cast<double>(d);
                const double q = t * t + cy2;  // |cz + d|^2
                if (real_w) {
                    acc += std::exp(rw * (logy - std::log(q)));
                } else {
                    acc += std::exp(w * (logy - std::log(q)));
                }
            }
        }
        partial[static_cast<std::size_t>(bi)] = acc;
    });

    cplx sum = std::exp(w * logy);  // the (0, +-1) seed pair
    for (const cplx& p : partial) sum += p;
    return {sum, tail};
}

half_plane_point apply_cusp_scaling(eis_cusp cusp, const half_plane_point& z) {
    switch (cusp) {
        case eis_cusp::infinity:
            return z;
        case eis_cusp::zero: {
            // sigma_0 = (0, -1; 4, 0): z -> -1/(4z)
            const double q = 16.0 * (z.x * z.x + z.y * z.y);
            return {-4.0 * z.x / q, 4.0 * z.y / q};
        }
        case eis_cusp::half: {
            // sigma_{1/2} = (1, 0; 2, 1): z -> z/(2z+1)
            const double cx = 2.0 * z.x + 1.0, cy = 2.0 * z.y;
            const double q = cx * cx + cy * cy;
            const double nx = z.x * cx + z.y * cy;
            const double ny = z.y * cx - z.x * cy;
            return {nx / q, ny / q};
        }
    }
    throw contract_error("apply_cusp_scaling: unknown cusp");
}

truncated_value eisenstein_level4_cosets(eis_cusp cusp, const half_plane_point& z, cplx w,
                                         const truncation_budget& budget, int workers) {
    return eisenstein_coset_sum(eis_level::four, apply_cusp_scaling(cusp, z), w, budget, workers);
}

truncated_value eisenstein(const eisenstein_spec& spec, const half_plane_point& z,
                           const truncation_budget& budget, int workers) {
    truncated_value v;
    if (spec.level == eis_level::one) {
        v = eisenstein_level1_fourier(z, spec.w, budget);
    } else {
        v = eisenstein_level4_cosets(spec.cusp, z, spec.w, budget, workers);
    }
    if (spec.completed) {
        const cplx factor = zeta_star(2.0 * spec.w).value;
        v.value *= factor;
        v.tail_bound *= std::abs(factor);
    }
    return v;
}

decomposition_residuals verify_decomposition(const half_plane_point& z, cplx w,
                                             const truncation_budget& budget, int workers) {
    const truncated_value lhs_coset = eisenstein_coset_sum(eis_level::one, z, w, budget, workers);

    const truncated_value e_inf =
        eisenstein_level4_cosets(eis_cusp::infinity, z, w, budget, workers);
    const truncated_value e_0 = eisenstein_level4_cosets(eis_cusp::zero, z, w, budget, workers);
    const truncated_value e_half = eisenstein_level4_cosets(eis_cusp::half, z, w, budget, workers);
    const cplx four_w = std::exp(w * std::log(4.0));
    const cplx rhs = e_inf.value + four_w * e_0.value + e_half.value;

    // Fourier reference: pick the cutoff from the K-Bessel tail formula.
    truncation_budget fb;
    fb.cutoff = std::max<std::int64_t>(16, static_cast<std::int64_t>(30.0 / z.y) + 8);
    const truncated_value lhs_fourier = eisenstein_level1_fourier(z, w, fb);

    decomposition_residuals out;
    out.coset_route = std::abs(lhs_coset.value - rhs);
    out.fourier_route = std::abs(lhs_fourier.value - rhs);
    out.tail_bound = lhs_coset.tail_bound + e_inf.tail_bound +
                     std::abs(four_w) * e_0.tail_bound + e_half.tail_bound +
                     lhs_fourier.tail_bound;
    return out;
}

const std::vector<int_matrix2>& level4_coset_matrices() {
    // Bottom rows cover the six points of P^1(Z/4):
    // (0:1), (1:1), (1:3), (1:0), (1:2), (2:1).
    static const std::vector<int_matrix2> mats = {
        {1, 0, 0, 1}, {1, 0, 1, 1}, {1, 0, 3, 1}, {1, -1, 1, 0}, {1, 1, 1, 2}, {1, 0, 2, 1},
    };
    return mats;
}

bool verify_coset_matrices_inequivalent() {
    const auto& mats = level4_coset_matrices();
    for (const auto& m : mats)
        if (m.a * m.d - m.b * m.c != 1) return false;
    // gamma_i gamma_j^{-1} lies in Gamma_0(4) iff its lower-left entry is
    // 0 mod 4; distinct cosets must fail that.
    for (std::size_t i = 0; i < mats.size(); ++i) {
        for (std::size_t j = 0; j < mats.size(); ++j) {
            if (i == j) continue;
            const auto& g = mats[i];
            const auto& h = mats[j];
            // h^{-1} = (d, -b; -c, a); lower-left of g h^{-1}:
            const std::int64_t c = g.c * h.d - g.d * h.c;
            if (((c % 4) + 4) % 4 == 0) return false;
        }
    }
    return true;
}

}  // namespace shiftconv
