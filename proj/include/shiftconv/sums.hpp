#pragma once

// Sharp and smoothed partial sums S(X; w, h), the C-infinity cutoff kernels
// with their Mellin transforms, and the least-squares pipeline that extracts
// the main-term constants from sieved data.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shiftconv/arith.hpp"
#include "shiftconv/errors.hpp"
#include "shiftconv/special.hpp"

namespace shiftconv {

enum class sum_mode { sharp, smoothed_plus, smoothed_minus };

struct sum_value {
    cplx value{0.0, 0.0};
    double rounding_error = 0.0;  // 0 for the exact integer path
};

// S(X; w, h) = sum_{m + h <= X} r2(m) sigma_{1-2w}(m + h); the m = 0 term
// contributes sigma_{1-2w}(h). Returns 0 for X < h. The weight table is
// either a sigma_nu table (nu = 1 - 2w, Kahan accumulation) or a
// divisor_count table (w = 1/2, exact 64-bit integers with overflow check).
sum_value partial_sum_sharp(double X, cplx w, std::int64_t h, const arithmetic_table& r2,
                            const arithmetic_table& weights);

enum class kernel_sign { plus, minus };

// u_{-y}(t): 1 for t <= 1 - 1/y, 0 for t >= 1; u_{+y}(t): 1 for t <= 1,
// 0 for t >= 1 + 1/y. Both C^inf and non-increasing, built from the
// exp-ratio transition psi(u) = e^{-1/u} / (e^{-1/u} + e^{-1/(1-u)}).
struct smoothing_kernel {
    kernel_sign sign = kernel_sign::minus;
    double y = 10.0;  // > 1
};

double kernel_eval(const smoothing_kernel& kernel, double t);

// Mellin transform U(s) = int_0^inf u(t) t^{s-1} dt = a^s / s + (transition),
// the transition integral by composite midpoint with panel doubling until the
// budget's target is met. s != 0.
special_value mellin_u(const smoothing_kernel& kernel, cplx s,
                       const quadrature_budget& budget = {});

// Smoothed sum S_{+-y}(X) = sum r2(m) sigma_{1-2w}(m+h) u((m+h)/X).
sum_value partial_sum_smoothed(double X, const smoothing_kernel& kernel, cplx w, std::int64_t h,
                               const arithmetic_table& r2, const arithmetic_table& weights);

struct partial_sum_series {
    std::int64_t h = 1;
    cplx w{0.5, 0.0};
    sum_mode mode = sum_mode::sharp;
    double y_param = 0.0;  // smoothed modes only
    std::vector<double> grid;          // ascending X values
    std::vector<cplx> values;          // same length as grid
    std::vector<double> rounding_errors;
};

// All grid values in one accumulation pass over m (grid must be ascending).
partial_sum_series partial_sum_over_grid(const std::vector<double>& grid, cplx w, std::int64_t h,
                                         const arithmetic_table& r2,
                                         const arithmetic_table& weights,
                                         sum_mode mode = sum_mode::sharp, double y = 0.0);

// Log-spaced grid with `per_decade` points from x_lo to x_hi inclusive.
std::vector<double> log_grid(double x_lo, double x_hi, int per_decade);

enum class fit_model { log_linear, two_power };

struct fit_report {
    fit_model model = fit_model::log_linear;
    cplx w{0.5, 0.0};
    std::int64_t h = 1;
    std::vector<cplx> coefficients;                 // one per basis element
    std::vector<std::vector<cplx>> window_estimates;  // per window, per basis
    std::vector<std::pair<double, double>> windows;   // [lo, hi] in X
    double stability = 0.0;            // max relative spread across windows
    std::optional<double> residual_exponent;  // absent when the fit is exact
    double residual_exponent_stderr = 0.0;
    bool exact_fit = false;            // residuals below the rounding floor
};

// Least squares of series.values against {X log X, X} (w = 1/2) or
// {X, X^{2-2w}} (w != 1/2), with per-window re-fits. The residual exponent
// comes from a three-point filter that annihilates the model span on the
// geometric grid (plain fit residuals would absorb part of any X^alpha term
// and distort its slope). Throws conditioning_error when 2 - 2w is too close
// to 1 or the design matrix is numerically collinear. Grid must hold >= 8
// points spanning >= 1.5 decades.
fit_report fit_main_terms(const partial_sum_series& series);

// JSON serialization, schema "fit_report_v1".
std::string fit_report_to_json(const fit_report& report);
fit_report fit_report_from_json(const std::string& text);

struct phi_estimates {
    cplx phi_first{0.0, 0.0};    // phi_h(1/2+w), or phi_h(1) at w = 1/2
    cplx phi_second{0.0, 0.0};   // phi_h(3/2-w), or phi_h'(1) at w = 1/2
    cplx aggregate_x_coeff{0.0, 0.0};  // w = 1/2 only: the combined X coefficient / sqrt(4 pi)
};

// Inverts the main-term formulas:
//   w != 1/2: phi_h(1/2+w) = c_X h^{w-1/2} / (sqrt(4 pi) zeta*(2w)),
//             phi_h(3/2-w) = c_{X^{2-2w}} (2-2w) h^{1/2-w} / (sqrt(4 pi) zeta*(2-2w))
//   w  = 1/2: phi_h(1) = c_{XlogX} / sqrt(4 pi); the X coefficient equals
//             sqrt(4 pi) [(gamma - log(4 pi h) - 1) phi_h(1) + phi_h'(1)],
//             from which phi_h'(1) is solved.
phi_estimates extract_phi(const fit_report& report);

}  // namespace shiftconv
