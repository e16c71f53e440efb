#include "shiftconv/series.hpp"

#include <cmath>
#include <limits>

namespace shiftconv {

namespace {

constexpr double pi = 3.14159265358979323846264338327950288;
constexpr double divisor_cuberoot_const = 3.6;  // d(n) <= 3.6 n^{1/3}

void require_sigma_table(const arithmetic_table& sigma, cplx w, std::int64_t need_index,
                         const char* who) {
    if (sigma.kind != table_kind::sigma_nu)
        throw contract_error(std::string(who) + ": weight table must be a sigma_nu table");
    if (std::abs(sigma.nu - (1.0 - 2.0 * w)) > 1e-12)
        throw contract_error(std::string(who) + ": sigma table exponent does not match 1 - 2w");
    if (sigma.max_index < need_index)
        throw contract_error(std::string(who) + ": sigma table too short");
}

// Elementary tail certificate for sum_{n > N} r2(n) |sigma_{1-2w}(n+h)| (n+h)^{-Re(s)-1/2+Re(w)}.
double dh_tail_bound(const spectral_point& point, std::int64_t h, std::int64_t N) {
    const double rs = point.s.real(), rw = point.w.real();
    const double ge = 1.0 / 3.0 + std::max(0.0, 1.0 - 2.0 * rw) + rw - 0.5 - rs;
    if (ge >= -1.0 - 1e-9) return std::numeric_limits<double>::infinity();
    const double circle = pi + 4.8 / std::sqrt(static_cast<double>(N)) + 2.0 / static_cast<double>(N);
    const double base = static_cast<double>(N + 1 + h);
    const double g_next = divisor_cuberoot_const * std::pow(base, ge);
    return circle * (static_cast<double>(N + 1) * g_next +
                     divisor_cuberoot_const * std::pow(base, ge + 1.0) / (-1.0 - ge));
}

struct kahan_acc {
    cplx sum{0.0, 0.0};
    cplx comp{0.0, 0.0};
    double mag = 0.0;
    void add(cplx v) {
        const cplx y = v - comp;
        const cplx t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        mag += std::abs(v);
    }
};

dh_partial dh_sum_range(const spectral_point& point, std::int64_t h, std::int64_t n_lo,
                        std::int64_t N, const arithmetic_table& r2,
                        const arithmetic_table& sigma) {
    const cplx expo = -(point.s + 0.5 - point.w);
    kahan_acc acc;
    for (std::int64_t n = n_lo; n <= N; ++n) {
        const std::int64_t r = r2.at_int(n);
        if (r == 0) continue;
        const double m = static_cast<double>(n + h);
        acc.add(static_cast<double>(r) * sigma.at(n + h) * std::exp(expo * std::log(m)));
    }
    dh_partial out;
    out.value = acc.sum;
    out.rounding_error = 4e-16 * acc.mag;
    return out;
}

}  // namespace

dh_partial dh_truncated(const spectral_point& point, std::int64_t h, std::int64_t N,
                        const arithmetic_table& r2, const arithmetic_table& sigma) {
    if (h < 1) throw contract_error("dh_truncated: h must be a positive integer");
    if (N < 0) throw contract_error("dh_truncated: N must be >= 0");
    if (!point.converges_dh())
        throw region_error("dh_truncated: (s,w) outside Re s > 1 + |Re w - 1/2|");
    if (r2.kind != table_kind::r2 || r2.max_index < N)
        throw contract_error("dh_truncated: r2 table missing or too short");
    require_sigma_table(sigma, point.w, N + h, "dh_truncated");

    // n = 0 term: r2(0) = 1, sigma at index h (never index 0).
    const cplx expo = -(point.s + 0.5 - point.w);
    dh_partial out;
    out.value = sigma.at(h) * std::exp(expo * std::log(static_cast<double>(h)));
    if (N >= 1) {
        const dh_partial rest = dh_sum_range(point, h, 1, N, r2, sigma);
        out.value += rest.value;
        out.rounding_error = rest.rounding_error;
    }
    out.tail_bound = dh_tail_bound(point, h, N);
    return out;
}

dh_partial d0_truncated(const spectral_point& point, std::int64_t N, const arithmetic_table& r2,
                        const arithmetic_table& sigma) {
    if (N < 1) throw contract_error("d0_truncated: N must be >= 1");
    if (!point.converges_dh())
        throw region_error("d0_truncated: (s,w) outside Re s > 1 + |Re w - 1/2|");
    if (r2.kind != table_kind::r2 || r2.max_index < N)
        throw contract_error("d0_truncated: r2 table missing or too short");
    require_sigma_table(sigma, point.w, N, "d0_truncated");

    dh_partial out = dh_sum_range(point, 0, 1, N, r2, sigma);
    out.tail_bound = dh_tail_bound(point, 0, N);
    return out;
}

special_value d0_closed_form(cplx s, cplx w) {
    const cplx p1 = 0.5 + w, p2 = 1.5 - w;
    if (std::abs(s - p1) < 1e-6 || std::abs(s - p2) < 1e-6)
        throw pole_error("d0_closed_form: within 1e-6 of a zeta-driven pole of D_0");

    const cplx a = s + 0.5 - w;
    const cplx b = s - 0.5 + w;
    const special_value za = zeta_c(a);
    const special_value zb = zeta_c(b);
    const special_value la = l_chi4(a);
    const special_value lb = l_chi4(b);
    const special_value ld = l_chi4(2.0 * s);
    if (std::abs(ld.value) < 1e-8)
        throw pole_error("d0_closed_form: L(2s, chi4) vanishes to working precision");

    special_value out;
    out.value = 4.0 * za.value * zb.value * la.value * lb.value / ld.value;
    out.method = eval_method::closed_form;
    // First-order error propagation through the five factors.
    const double rel = za.abs_error_estimate / std::abs(za.value) +
                       zb.abs_error_estimate / std::abs(zb.value) +
                       la.abs_error_estimate / std::abs(la.value) +
                       lb.abs_error_estimate / std::abs(lb.value) +
                       ld.abs_error_estimate / std::abs(ld.value);
    out.abs_error_estimate = std::abs(out.value) * (rel + 1e-15);
    return out;
}

namespace {

cplx sqrt_4pi() { return cplx(std::sqrt(4.0 * pi), 0.0); }

}  // namespace

std::pair<cplx, cplx> main_term_coefficients(const main_term_inputs& inputs) {
    if (inputs.h < 1) throw contract_error("main_term: h must be a positive integer");
    const cplx w = inputs.w;
    if (!(w.real() > 0.0 && w.real() < 1.0))
        throw contract_error("main_term: w must lie in the strip 0 < Re w < 1");
    const double hd = static_cast<double>(inputs.h);

    if (w == cplx(0.5, 0.0)) {
        if (!inputs.phi_prime.has_value())
            throw contract_error("main_term: w = 1/2 requires phi_h'(1)");
        const cplx c_xlogx = sqrt_4pi() * inputs.phi_at;
        const cplx c_x = sqrt_4pi() * (inputs.phi_at * (euler_gamma - std::log(4.0 * pi * hd)) +
                                       *inputs.phi_prime - inputs.phi_at);
        return {c_xlogx, c_x};
    }
    const cplx zs_a = zeta_star(2.0 * w).value;
    const cplx zs_b = zeta_star(2.0 - 2.0 * w).value;
    const cplx h_pow = std::exp((0.5 - w) * std::log(hd));
    const cplx c_x = sqrt_4pi() * zs_a * inputs.phi_at * h_pow;
    const cplx c_pow = sqrt_4pi() * zs_b * inputs.phi_at_reflected / h_pow / (2.0 - 2.0 * w);
    return {c_x, c_pow};
}

cplx main_term(double X, const main_term_inputs& inputs) {
    if (!(X >= 1.0)) throw contract_error("main_term: X must be >= 1");
    const auto [c1, c2] = main_term_coefficients(inputs);
    if (inputs.w == cplx(0.5, 0.0)) return c1 * X * std::log(X) + c2 * X;
    return c1 * X + c2 * std::exp((2.0 - 2.0 * inputs.w) * std::log(X));
}

residue_pair residue_formulas(const main_term_inputs& inputs) {
    const cplx w = inputs.w;
    if (w == cplx(0.5, 0.0))
        throw contract_error(
            "residue_formulas: w = 1/2 has a double pole; use double_pole_principal_part");
    if (!(w.real() > 0.0 && w.real() < 1.0))
        throw contract_error("residue_formulas: w must lie in the strip 0 < Re w < 1");
    const double hd = static_cast<double>(inputs.h);
    const cplx h_pow = std::exp((0.5 - w) * std::log(hd));

    residue_pair out;
    out.at_half_plus_w = sqrt_4pi() * zeta_star(2.0 * w).value * h_pow * inputs.phi_at;
    out.at_three_half_minus_w =
        sqrt_4pi() * zeta_star(2.0 - 2.0 * w).value / h_pow * inputs.phi_at_reflected;

    // Consistency with the main-term coefficients: coeff_X = res_1 and
    // coeff_{X^{2-2w}} (2-2w) = res_2.
    const auto [c1, c2] = main_term_coefficients(inputs);
    const double scale = std::max({std::abs(out.at_half_plus_w),
                                   std::abs(out.at_three_half_minus_w), 1e-300});
    out.consistency_residual =
        (std::abs(c1 - out.at_half_plus_w) +
         std::abs(c2 * (2.0 - 2.0 * w) - out.at_three_half_minus_w)) / scale;
    return out;
}

std::pair<cplx, cplx> double_pole_principal_part(const main_term_inputs& inputs) {
    if (inputs.w != cplx(0.5, 0.0))
        throw contract_error("double_pole_principal_part: only defined at w = 1/2");
    if (!inputs.phi_prime.has_value())
        throw contract_error("double_pole_principal_part: requires phi_h'(1)");
    const double hd = static_cast<double>(inputs.h);
    const cplx c2 = sqrt_4pi() * inputs.phi_at;
    const cplx c1 = sqrt_4pi() * ((euler_gamma - std::log(4.0 * pi * hd)) * inputs.phi_at +
                                  *inputs.phi_prime);
    return {c2, c1};
}

}  // namespace shiftconv
