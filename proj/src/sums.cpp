#include "shiftconv/sums.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace shiftconv {

namespace {

constexpr double pi = 3.14159265358979323846264338327950288;

struct kahan {
    double sum = 0.0, comp = 0.0, mag = 0.0;
    void add(double v) {
        const double y = v - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        mag += std::abs(v);
    }
};

struct kahan_c {
    kahan re, im;
    void add(cplx v) {
        re.add(v.real());
        im.add(v.imag());
    }
    cplx value() const { return {re.sum, im.sum}; }
    double mag() const { return re.mag + im.mag; }
};

void check_tables(cplx w, std::int64_t h, double x_hi, const arithmetic_table& r2,
                  const arithmetic_table& weights, const char* who) {
    const std::int64_t m_max = static_cast<std::int64_t>(x_hi) - h;
    if (r2.kind != table_kind::r2 || r2.max_index < std::max<std::int64_t>(m_max, 0))
        throw contract_error(std::string(who) + ": r2 table missing or too short");
    if (weights.kind == table_kind::sigma_nu) {
        if (std::abs(weights.nu - (1.0 - 2.0 * w)) > 1e-12)
            throw contract_error(std::string(who) + ": sigma table exponent does not match 1-2w");
    } else if (weights.kind == table_kind::divisor_count) {
        if (w != cplx(0.5, 0.0))
            throw contract_error(std::string(who) +
                                 ": divisor_count weights require w = 1/2 exactly");
    } else {
        throw contract_error(std::string(who) + ": weights must be sigma_nu or divisor_count");
    }
    if (weights.max_index < m_max + h)
        throw contract_error(std::string(who) + ": weight table too short");
}

}  // namespace

sum_value partial_sum_sharp(double X, cplx w, std::int64_t h, const arithmetic_table& r2,
                            const arithmetic_table& weights) {
    if (h < 1) throw contract_error("partial_sum_sharp: h must be a positive integer");
    sum_value out;
    if (X < static_cast<double>(h)) return out;  // empty sum
    check_tables(w, h, X, r2, weights, "partial_sum_sharp");
    const std::int64_t m_max = static_cast<std::int64_t>(std::floor(X)) - h;

    if (weights.kind == table_kind::divisor_count) {
        std::int64_t acc = 0;
        for (std::int64_t m = 0; m <= m_max; ++m) {
            acc += r2.at_int(m) * weights.at_int(m + h);
            if (acc < 0) throw resource_error("partial_sum_sharp: int64 accumulator overflow");
        }
        out.value = cplx(static_cast<double>(acc), 0.0);
        return out;
    }
    kahan_c acc;
    for (std::int64_t m = 0; m <= m_max; ++m) {
        const std::int64_t r = r2.at_int(m);
        if (r == 0) continue;
        acc.add(static_cast<double>(r) * weights.at(m + h));
    }
    out.value = acc.value();
    out.rounding_error = 4e-16 * acc.mag();
    return out;
}

double kernel_eval(const smoothing_kernel& kernel, double t) {
    if (!(kernel.y > 1.0)) throw contract_error("kernel_eval: y must exceed 1");
    const double lo = (kernel.sign == kernel_sign::minus) ? 1.0 - 1.0 / kernel.y : 1.0;
    const double hi = lo + 1.0 / kernel.y;
    if (t <= lo) return 1.0;
    if (t >= hi) return 0.0;
    // psi rises 0 -> 1 on (0,1) with all derivatives vanishing at the ends.
    const double u = (t - lo) * kernel.y;
    const double ea = std::exp(-1.0 / u);
    const double eb = std::exp(-1.0 / (1.0 - u));
    return 1.0 - ea / (ea + eb);
}

special_value mellin_u(const smoothing_kernel& kernel, cplx s, const quadrature_budget& budget) {
    if (!(kernel.y > 1.0)) throw contract_error("mellin_u: y must exceed 1");
    if (std::abs(s) < 1e-14) throw contract_error("mellin_u: s = 0");
    validate(budget, "mellin_u");
    const double lo = (kernel.sign == kernel_sign::minus) ? 1.0 - 1.0 / kernel.y : 1.0;
    const double hi = lo + 1.0 / kernel.y;

    // Plateau: int_0^lo t^{s-1} dt = lo^s / s.
    const cplx plateau = std::exp(s * std::log(lo)) / s;

    // Transition integral over the narrow smooth window by composite
    // midpoint, panels doubled until two refinements agree to target.
    auto transition = [&](std::int64_t n) -> cplx {
        cplx acc(0.0, 0.0);
        for (std::int64_t i = 0; i < n; ++i) {
            const double t = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
            acc += kernel_eval(kernel, t) * std::exp((s - 1.0) * std::log(t));
        }
        return acc * ((hi - lo) / static_cast<double>(n));
    };
    std::int64_t n = 128;
    cplx prev = transition(n);
    cplx cur = prev;
    double gap = std::abs(prev);
    while (2 * n <= budget.max_nodes) {
        n *= 2;
        cur = transition(n);
        gap = std::abs(cur - prev);
        prev = cur;
        if (gap <= budget.target_abs_error) break;
    }

    special_value out;
    out.value = plateau + cur;
    out.method = eval_method::closed_form;
    out.abs_error_estimate = gap + 1e-15 * (std::abs(plateau) + std::abs(cur));
    return out;
}

sum_value partial_sum_smoothed(double X, const smoothing_kernel& kernel, cplx w, std::int64_t h,
                               const arithmetic_table& r2, const arithmetic_table& weights) {
    if (h < 1) throw contract_error("partial_sum_smoothed: h must be a positive integer");
    if (!(kernel.y > 1.0)) throw contract_error("partial_sum_smoothed: y must exceed 1");
    const double reach = (kernel.sign == kernel_sign::plus) ? X * (1.0 + 1.0 / kernel.y) : X;
    sum_value out;
    if (reach < static_cast<double>(h)) return out;
    check_tables(w, h, reach, r2, weights, "partial_sum_smoothed");
    const std::int64_t m_max = static_cast<std::int64_t>(std::floor(reach)) - h;

    kahan_c acc;
    for (std::int64_t m = 0; m <= m_max; ++m) {
        const std::int64_t r = r2.at_int(m);
        if (r == 0) continue;
        const double u = kernel_eval(kernel, static_cast<double>(m + h) / X);
        if (u == 0.0) continue;
        acc.add(static_cast<double>(r) * u * weights.at(m + h));
    }
    out.value = acc.value();
    out.rounding_error = 4e-16 * acc.mag();
    return out;
}

std::vector<double> log_grid(double x_lo, double x_hi, int per_decade) {
    if (!(x_lo > 0.0 && x_hi > x_lo)) throw contract_error("log_grid: need 0 < x_lo < x_hi");
    if (per_decade < 1) throw contract_error("log_grid: per_decade must be >= 1");
    std::vector<double> grid;
    const double l0 = std::log10(x_lo), l1 = std::log10(x_hi);
    const int n = static_cast<int>(std::round((l1 - l0) * per_decade));
    for (int i = 0; i <= n; ++i)
        grid.push_back(std::pow(10.0, l0 + (l1 - l0) * static_cast<double>(i) / n));
    return grid;
}

partial_sum_series partial_sum_over_grid(const std::vector<double>& grid, cplx w, std::int64_t h,
                                         const arithmetic_table& r2,
                                         const arithmetic_table& weights, sum_mode mode,
                                         double y) {
    if (grid.empty()) throw contract_error("partial_sum_over_grid: empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw contract_error("partial_sum_over_grid: grid must be strictly increasing");

    partial_sum_series out;
    out.h = h;
    out.w = w;
    out.mode = mode;
    out.y_param = y;
    out.grid = grid;
    out.values.reserve(grid.size());
    out.rounding_errors.reserve(grid.size());

    if (mode == sum_mode::sharp) {
        // Single pass: accumulate m in order, checkpoint at each grid X.
        check_tables(w, h, grid.back(), r2, weights, "partial_sum_over_grid");
        const bool integer_path = (weights.kind == table_kind::divisor_count);
        std::int64_t iacc = 0;
        kahan_c acc;
        std::int64_t m = 0;
        for (double X : grid) {
            const std::int64_t m_hi = static_cast<std::int64_t>(std::floor(X)) - h;
            for (; m <= m_hi; ++m) {
                const std::int64_t r = r2.at_int(m);
                if (integer_path) {
                    iacc += r * weights.at_int(m + h);
                    if (iacc < 0)
                        throw resource_error("partial_sum_over_grid: int64 accumulator overflow");
                } else if (r != 0) {
                    acc.add(static_cast<double>(r) * weights.at(m + h));
                }
            }
            if (integer_path) {
                out.values.push_back(cplx(static_cast<double>(iacc), 0.0));
                out.rounding_errors.push_back(0.0);
            } else {
                out.values.push_back(acc.value());
                out.rounding_errors.push_back(4e-16 * acc.mag());
            }
        }
        return out;
    }

    const smoothing_kernel kernel{mode == sum_mode::smoothed_plus ? kernel_sign::plus
                                                                  : kernel_sign::minus,
                                  y};
    for (double X : grid) {
        const sum_value v = partial_sum_smoothed(X, kernel, w, h, r2, weights);
        out.values.push_back(v.value);
        out.rounding_errors.push_back(v.rounding_error);
    }
    return out;
}

namespace {

// 2-basis complex least squares with column normalization. Returns the
// coefficients; `correlation` reports |<b1,b2>|/(|b1||b2|).
std::vector<cplx> solve_ls2(const std::vector<cplx>& values, const std::vector<cplx>& b1,
                            const std::vector<cplx>& b2, double* correlation) {
    const std::size_t n = values.size();
    double n1 = 0.0, n2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        n1 += std::norm(b1[i]);
        n2 += std::norm(b2[i]);
    }
    n1 = std::sqrt(n1);
    n2 = std::sqrt(n2);
    cplx g12(0.0, 0.0), r1(0.0, 0.0), r2(0.0, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const cplx u = b1[i] / n1, v = b2[i] / n2;
        g12 += std::conj(u) * v;
        r1 += std::conj(u) * values[i];
        r2 += std::conj(v) * values[i];
    }
    if (correlation) *correlation = std::abs(g12);
    const cplx det = 1.0 - std::conj(g12) * g12;
    if (std::abs(det) < 1e-12)
        throw conditioning_error("fit_main_terms: design matrix numerically collinear");
    const cplx c1 = (r1 - g12 * r2) / det;
    const cplx c2 = (r2 - std::conj(g12) * r1) / det;
    return {c1 / n1, c2 / n2};
}

std::pair<cplx, cplx> basis_at(fit_model model, cplx w, double X) {
    if (model == fit_model::log_linear) return {cplx(X * std::log(X), 0.0), cplx(X, 0.0)};
    return {cplx(X, 0.0), std::exp((2.0 - 2.0 * w) * std::log(X))};
}

std::vector<cplx> fit_range(const partial_sum_series& s, fit_model model, std::size_t lo,
                            std::size_t hi, double* correlation) {
    std::vector<cplx> vals, b1, b2;
    for (std::size_t i = lo; i < hi; ++i) {
        vals.push_back(s.values[i]);
        const auto [f1, f2] = basis_at(model, s.w, s.grid[i]);
        b1.push_back(f1);
        b2.push_back(f2);
    }
    return solve_ls2(vals, b1, b2, correlation);
}

}  // namespace

fit_report fit_main_terms(const partial_sum_series& series) {
    const std::size_t n = series.grid.size();
    if (n < 8) throw contract_error("fit_main_terms: need at least 8 grid points");
    const double span = std::log10(series.grid.back() / series.grid.front());
    if (span < 1.5 - 1e-9)
        throw contract_error("fit_main_terms: grid must span at least 1.5 decades");

    fit_report rep;
    rep.w = series.w;
    rep.h = series.h;
    rep.model = (series.w == cplx(0.5, 0.0)) ? fit_model::log_linear : fit_model::two_power;
    if (rep.model == fit_model::two_power && std::abs(2.0 - 2.0 * series.w - 1.0) < 0.02)
        throw conditioning_error(
            "fit_main_terms: basis X^{2-2w} collinear with X (2-2w too close to 1)");

    double corr = 0.0;
    rep.coefficients = fit_range(series, rep.model, 0, n, &corr);
    if (corr > 1.0 - 1e-12)
        throw conditioning_error("fit_main_terms: basis functions collinear on this grid");

    // Overlapping one-decade windows stepped by half a decade.
    const double l0 = std::log10(series.grid.front());
    const double l1 = std::log10(series.grid.back());
    for (double wlo = l0; wlo + 1.0 <= l1 + 1e-9; wlo += 0.5) {
        const double whi = wlo + 1.0;
        std::size_t i_lo = n, i_hi = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double lx = std::log10(series.grid[i]);
            if (lx >= wlo - 1e-9 && lx <= whi + 1e-9) {
                i_lo = std::min(i_lo, i);
                i_hi = std::max(i_hi, i + 1);
            }
        }
        if (i_lo >= i_hi || i_hi - i_lo < 4) continue;
        rep.window_estimates.push_back(fit_range(series, rep.model, i_lo, i_hi, nullptr));
        rep.windows.emplace_back(series.grid[i_lo], series.grid[i_hi - 1]);
    }

    // Stability: relative spread of each coefficient across windows.
    if (rep.window_estimates.size() >= 2) {
        for (std::size_t j = 0; j < 2; ++j) {
            cplx mean(0.0, 0.0);
            for (const auto& west : rep.window_estimates) mean += west[j];
            mean /= static_cast<double>(rep.window_estimates.size());
            double spread = 0.0;
            for (const auto& west : rep.window_estimates)
                spread = std::max(spread, std::abs(west[j] - mean));
            rep.stability = std::max(rep.stability, spread / std::max(std::abs(mean), 1e-300));
        }
    }

    // Residual exponent. Plain fit residuals are useless for this: the
    // least squares partially absorbs any X^alpha contamination and the
    // leftover has a distorted slope. On a geometric grid the model span is
    // scale-invariant, so the three-point filter
    //   g(X) = v(q^2 X) - (q + q^p) v(q X) + q^{1+p} v(X)
    // (p = 2-2w; confluent limit p -> 1 gives coefficients 1, -2q, q^2 for
    // {X log X, X}) annihilates both basis elements exactly and passes
    // X^alpha through with a constant factor, so the log-log slope of |g|
    // recovers alpha. Falls back to fit residuals on non-geometric grids.
    const double q_ratio = series.grid[1] / series.grid[0];
    bool geometric = true;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (std::abs(series.grid[i + 1] / series.grid[i] - q_ratio) > 1e-6 * q_ratio) {
            geometric = false;
            break;
        }
    }
    std::vector<double> lx, lr;
    if (geometric && n >= 6) {
        cplx cb, cc;
        if (rep.model == fit_model::log_linear) {
            cb = cplx(-2.0 * q_ratio, 0.0);
            cc = cplx(q_ratio * q_ratio, 0.0);
        } else {
            const cplx p = 2.0 - 2.0 * series.w;
            const cplx qp = std::exp(p * std::log(q_ratio));
            cb = -(q_ratio + qp);
            cc = q_ratio * qp;
        }
        for (std::size_t i = 0; i + 2 < n; ++i) {
            const cplx g = series.values[i + 2] + cb * series.values[i + 1] + cc * series.values[i];
            const double round_floor =
                series.rounding_errors[i + 2] + std::abs(cb) * series.rounding_errors[i + 1] +
                std::abs(cc) * series.rounding_errors[i] +
                4e-16 * (std::abs(series.values[i + 2]) +
                         std::abs(cb) * std::abs(series.values[i + 1]) +
                         std::abs(cc) * std::abs(series.values[i]));
            if (std::abs(g) > 10.0 * round_floor) {
                lx.push_back(std::log(series.grid[i]));
                lr.push_back(std::log(std::abs(g)));
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const auto [f1, f2] = basis_at(rep.model, series.w, series.grid[i]);
            const cplx fit = rep.coefficients[0] * f1 + rep.coefficients[1] * f2;
            const double resid = std::abs(series.values[i] - fit);
            const double floor_i =
                10.0 * std::max(series.rounding_errors[i], 1e-15 * std::abs(series.values[i]));
            if (resid > floor_i) {
                lx.push_back(std::log(series.grid[i]));
                lr.push_back(std::log(resid));
            }
        }
    }
    if (lx.size() < 4) {
        rep.exact_fit = true;
        return rep;
    }
    const double m = static_cast<double>(lx.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += lr[i];
    }
    const double mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (lr[i] - my);
    }
    const double slope = sxy / sxx;
    double sse = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        const double e = lr[i] - my - slope * (lx[i] - mx);
        sse += e * e;
    }
    rep.residual_exponent = slope;
    rep.residual_exponent_stderr =
        (lx.size() > 2) ? std::sqrt(sse / (m - 2.0) / sxx) : std::numeric_limits<double>::infinity();
    return rep;
}

namespace {

nlohmann::json cplx_json(cplx v) { return {{"re", v.real()}, {"im", v.imag()}}; }

cplx cplx_from_json(const nlohmann::json& j) {
    return {j.at("re").get<double>(), j.at("im").get<double>()};
}

}  // namespace

std::string fit_report_to_json(const fit_report& report) {
    nlohmann::json j;
    j["schema"] = "fit_report_v1";
    j["model"] = (report.model == fit_model::log_linear) ? "loglinear" : "twopower";
    j["w"] = cplx_json(report.w);
    j["h"] = report.h;
    nlohmann::json coeffs = nlohmann::json::array();
    for (const cplx& c : report.coefficients) coeffs.push_back(cplx_json(c));
    j["coefficients"] = coeffs;
    nlohmann::json wins = nlohmann::json::array();
    for (std::size_t i = 0; i < report.window_estimates.size(); ++i) {
        nlohmann::json w;
        w["x_lo"] = report.windows[i].first;
        w["x_hi"] = report.windows[i].second;
        nlohmann::json wc = nlohmann::json::array();
        for (const cplx& c : report.window_estimates[i]) wc.push_back(cplx_json(c));
        w["coefficients"] = wc;
        wins.push_back(w);
    }
    j["window_estimates"] = wins;
    j["stability"] = report.stability;
    if (report.residual_exponent.has_value()) {
        j["residual_exponent"] = *report.residual_exponent;
        j["residual_exponent_stderr"] = report.residual_exponent_stderr;
    } else {
        j["residual_exponent"] = nullptr;
    }
    j["exact_fit"] = report.exact_fit;
    return j.dump(2);
}

fit_report fit_report_from_json(const std::string& text) {
    const nlohmann::json j = nlohmann::json::parse(text);
    if (j.at("schema").get<std::string>() != "fit_report_v1")
        throw contract_error("fit_report_from_json: unknown schema");
    fit_report rep;
    rep.model = (j.at("model").get<std::string>() == "loglinear") ? fit_model::log_linear
                                                                  : fit_model::two_power;
    rep.w = cplx_from_json(j.at("w"));
    rep.h = j.at("h").get<std::int64_t>();
    for (const auto& c : j.at("coefficients")) rep.coefficients.push_back(cplx_from_json(c));
    for (const auto& w : j.at("window_estimates")) {
        std::vector<cplx> wc;
        for (const auto& c : w.at("coefficients")) wc.push_back(cplx_from_json(c));
        rep.window_estimates.push_back(wc);
        rep.windows.emplace_back(w.at("x_lo").get<double>(), w.at("x_hi").get<double>());
    }
    rep.stability = j.at("stability").get<double>();
    if (!j.at("residual_exponent").is_null()) {
        rep.residual_exponent = j.at("residual_exponent").get<double>();
        rep.residual_exponent_stderr = j.at("residual_exponent_stderr").get<double>();
    }
    rep.exact_fit = j.at("exact_fit").get<bool>();
    return rep;
}

phi_estimates extract_phi(const fit_report& report) {
    if (report.coefficients.size() != 2)
        throw contract_error("extract_phi: report must carry two coefficients");
    const double hd = static_cast<double>(report.h);
    const double s4pi = std::sqrt(4.0 * pi);
    phi_estimates out;
    if (report.model == fit_model::log_linear) {
        out.phi_first = report.coefficients[0] / s4pi;  // phi_h(1)
        out.aggregate_x_coeff = report.coefficients[1] / s4pi;
        // aggregate = (gamma - log(4 pi h) - 1) phi_h(1) + phi_h'(1)
        out.phi_second = out.aggregate_x_coeff -
                         (euler_gamma - std::log(4.0 * pi * hd) - 1.0) * out.phi_first;
        return out;
    }
    const cplx w = report.w;
    const cplx h_pow = std::exp((w - 0.5) * std::log(hd));  // h^{w-1/2}
    out.phi_first = report.coefficients[0] * h_pow / (s4pi * zeta_star(2.0 * w).value);
    out.phi_second = report.coefficients[1] * (2.0 - 2.0 * w) /
                     (h_pow * s4pi * zeta_star(2.0 - 2.0 * w).value);
    return out;
}

}  // namespace shiftconv
