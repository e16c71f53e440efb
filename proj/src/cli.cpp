#include "shiftconv/cli.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "shiftconv/arith.hpp"
#include "shiftconv/config.hpp"
#include "shiftconv/errors.hpp"
#include "shiftconv/modular.hpp"
#include "shiftconv/series.hpp"
#include "shiftconv/special.hpp"
#include "shiftconv/sums.hpp"
#include "shiftconv/verify.hpp"

namespace shiftconv {

namespace {

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw contract_error("cannot open output file " + out_path);
    out << text;
}

int report_and_exit_code(const std::vector<identity_record>& records,
                         const std::string& out_path) {
    emit(verification_report_json(records) + "\n", out_path);
    for (const identity_record& r : records) {
        if (!r.pass) {
            std::cerr << "verification failed: " << r.identity_id << " (residual "
                      << format_g17(r.residual) << " > tolerance " << format_g17(r.tolerance)
                      << ")\n";
            return 1;
        }
    }
    return 0;
}

struct csv_series {
    std::vector<double> xs;
    std::vector<cplx> values;
};

csv_series read_sum_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw contract_error("cannot open input file " + path);
    std::string header;
    if (!std::getline(in, header)) throw contract_error("empty CSV " + path);
    // Normalize the header and insist on the X column.
    std::stringstream hs(header);
    std::string col;
    std::vector<std::string> cols;
    while (std::getline(hs, col, ',')) cols.push_back(col);
    if (cols.empty() || cols[0] != "X")
        throw contract_error("CSV " + path + " lacks the required X column");
    if (cols.size() < 3 || cols[1] != "re" || cols[2] != "im")
        throw contract_error("CSV " + path + " must have columns X,re,im");
    csv_series s;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::string f1, f2, f3;
        if (!std::getline(ls, f1, ',') || !std::getline(ls, f2, ',') || !std::getline(ls, f3, ','))
            throw contract_error("CSV " + path + ": malformed row '" + line + "'");
        try {
            s.xs.push_back(std::stod(f1));
            s.values.push_back(cplx(std::stod(f2), std::stod(f3)));
        } catch (const std::exception&) {
            throw contract_error("CSV " + path + ": non-numeric row '" + line + "'");
        }
    }
    return s;
}

std::string sum_series_csv(const partial_sum_series& s) {
    std::ostringstream os;
    os << "X,re,im\n";
    for (std::size_t i = 0; i < s.grid.size(); ++i) {
        os << format_g17(s.grid[i]) << ',' << format_g17(s.values[i].real()) << ','
           << format_g17(s.values[i].imag()) << '\n';
    }
    return os.str();
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    CLI::App app{"shiftconv: shifted-convolution sums of r2 against divisor functions, with the "
                 "Eisenstein/theta identity suite behind their main-term constants"};
    app.footer("Environment overrides: SHIFTCONV_MEMORY_BUDGET (bytes), SHIFTCONV_WORKERS.");
    app.require_subcommand(1);

    run_config cfg = apply_env_overrides({});
    std::string config_path;
    app.add_option("--config", config_path, "flat key = value config file (flags override)")
        ->check(CLI::ExistingFile);
    int workers_flag = 0;
    app.add_option("--workers", workers_flag, "worker threads (default: hardware concurrency)");
    std::uint64_t mem_flag = 0;
    app.add_option("--memory-budget", mem_flag, "memory budget in bytes");

    // ---- sieve ------------------------------------------------------------
    auto* sieve = app.add_subcommand("sieve", "emit an arithmetic table as CSV");
    std::string sieve_kind = "r2";
    sieve->add_option("--kind", sieve_kind, "r2 | sigma | d")->required();
    std::int64_t sieve_max = 0;
    sieve->add_option("--max", sieve_max, "largest index N")->required();
    double nu_re = 0.0, nu_im = 0.0;
    sieve->add_option("--nu-re", nu_re, "Re nu (sigma only)");
    sieve->add_option("--nu-im", nu_im, "Im nu (sigma only)");
    std::string sieve_out;
    sieve->add_option("--out", sieve_out, "output file (default stdout)");

    // ---- sums run / sums fit ----------------------------------------------
    auto* sums = app.add_subcommand("sums", "partial-sum series and main-term fits");
    sums->require_subcommand(1);
    auto* sums_run = sums->add_subcommand("run", "emit CSV X,re,im of S(X; w, h)");
    std::int64_t sums_h = 1;
    double sums_wre = 0.5, sums_wim = 0.0;
    double sums_xlo = 0.0, sums_xhi = 0.0;
    int sums_per_decade = 0;
    std::string sums_mode = "sharp";
    double sums_y = 100.0;
    std::string sums_out;
    sums_run->add_option("--shift", sums_h, "shift h >= 1");
    sums_run->add_option("--w-re", sums_wre, "Re w");
    sums_run->add_option("--w-im", sums_wim, "Im w");
    sums_run->add_option("--x-lo", sums_xlo, "grid start (default from config)");
    sums_run->add_option("--x-hi", sums_xhi, "grid end (default from config)");
    sums_run->add_option("--per-decade", sums_per_decade, "grid points per decade");
    sums_run->add_option("--mode", sums_mode, "sharp | plus | minus");
    sums_run->add_option("--y", sums_y, "smoothing parameter (smoothed modes)");
    sums_run->add_option("--out", sums_out, "output file (default stdout)");

    auto* sums_fit = sums->add_subcommand("fit", "fit main terms from a sums-run CSV");
    std::string fit_in, fit_out, fit_model = "loglinear";
    std::int64_t fit_h = 1;
    double fit_wre = 0.5, fit_wim = 0.0;
    sums_fit->add_option("--in", fit_in, "input CSV from `sums run`")->required();
    sums_fit->add_option("--model", fit_model, "loglinear | twopower");
    sums_fit->add_option("--shift", fit_h, "shift h recorded in the report");
    sums_fit->add_option("--w-re", fit_wre, "Re w (twopower)");
    sums_fit->add_option("--w-im", fit_wim, "Im w (twopower)");
    sums_fit->add_option("--out", fit_out, "output file (default stdout)");

    // ---- series compare ----------------------------------------------------
    auto* series_cmd = app.add_subcommand("series", "shifted-convolution Dirichlet series");
    series_cmd->require_subcommand(1);
    auto* series_cmp =
        series_cmd->add_subcommand("compare", "closed form vs truncated series for the h=0 case");
    std::int64_t cmp_n = 1000000;
    std::string cmp_out;
    series_cmp->add_option("--n", cmp_n, "truncation cutoff N");
    series_cmp->add_option("--out", cmp_out, "output file (default stdout)");

    // ---- modular verify ------------------------------------------------------
    auto* modular_cmd = app.add_subcommand("modular", "theta/Eisenstein identity checks");
    modular_cmd->require_subcommand(1);
    auto* modular_verify = modular_cmd->add_subcommand("verify", "JSON identity report");
    std::string mod_level = "quick", mod_out;
    modular_verify->add_option("--level", mod_level, "quick | full");
    modular_verify->add_option("--out", mod_out, "output file (default stdout)");

    // ---- special eval ----------------------------------------------------
    auto* special_cmd = app.add_subcommand("special", "special-function evaluation");
    special_cmd->require_subcommand(1);
    auto* special_eval = special_cmd->add_subcommand("eval", "evaluate one special function");
    std::string fn;
    special_eval
        ->add_option("--fn", fn,
                     "gamma | digamma | zeta | zeta-star | hurwitz | lchi4 | lchi4-star | "
                     "besselk | whittaker | besselk-imag | kuznetsov")
        ->required();
    double ev_re = 2.0, ev_im = 0.0, ev_a = 1.0;
    double ev_nu_re = 0.0, ev_nu_im = 0.0, ev_x = 1.0, ev_kappa = 0.0, ev_t = 1.0, ev_beta = 1.0;
    special_eval->add_option("--re", ev_re, "Re s");
    special_eval->add_option("--im", ev_im, "Im s");
    special_eval->add_option("--a", ev_a, "Hurwitz shift a in (0,1]");
    special_eval->add_option("--nu-re", ev_nu_re, "Re nu / Re mu");
    special_eval->add_option("--nu-im", ev_nu_im, "Im nu / Im mu");
    special_eval->add_option("--x", ev_x, "positive real argument");
    special_eval->add_option("--kappa", ev_kappa, "Whittaker first index (-0.5, 0, 0.5)");
    special_eval->add_option("--t", ev_t, "spectral parameter T");
    special_eval->add_option("--beta", ev_beta, "arc-integral argument beta > 0");

    // ---- verify all ----------------------------------------------------------
    auto* verify_cmd = app.add_subcommand("verify", "identity verification suites");
    verify_cmd->require_subcommand(1);
    std::string verify_level_str = "quick", verify_out;
    auto add_verify_sub = [&](const char* name, const char* desc) {
        auto* sub = verify_cmd->add_subcommand(name, desc);
        sub->add_option("--level", verify_level_str, "quick | full");
        sub->add_option("--out", verify_out, "output file (default stdout)");
        return sub;
    };
    auto* verify_all = add_verify_sub("all", "run the full identity suite");
    auto* verify_arith_cmd = add_verify_sub("arith", "arithmetic identities only");
    auto* verify_special_cmd = add_verify_sub("special", "special-function identities only");
    auto* verify_modular_cmd = add_verify_sub("modular", "modular identities only");
    auto* verify_series_cmd = add_verify_sub("series", "series identities only");
    auto* verify_sums_cmd = add_verify_sub("sums", "partial-sum identities only");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help();
        return 2;
    }

    try {
        if (!config_path.empty()) cfg = apply_env_overrides(load_config_file(config_path, cfg));
        if (workers_flag > 0) cfg.workers = workers_flag;
        if (mem_flag > 0) cfg.memory_budget = mem_flag;
        cfg.validate();
        const int workers = cfg.resolved_workers();

        if (*sieve) {
            arithmetic_table t;
            if (sieve_kind == "r2") {
                t = sieve_r2(sieve_max, cfg.memory_budget, workers);
            } else if (sieve_kind == "sigma") {
                t = sieve_sigma(sieve_max, cplx(nu_re, nu_im), cfg.memory_budget);
            } else if (sieve_kind == "d") {
                t = sieve_divisor_count(sieve_max, cfg.memory_budget);
            } else {
                std::cerr << "unknown --kind " << sieve_kind << " (use r2 | sigma | d)\n";
                return 2;
            }
            std::ostringstream os;
            t.write_csv(os);
            emit(os.str(), sieve_out);
            return 0;
        }

        if (*sums_run) {
            const double xlo = sums_xlo > 0.0 ? sums_xlo : cfg.x_lo;
            const double xhi = sums_xhi > 0.0 ? sums_xhi : cfg.x_hi;
            const int pd = sums_per_decade > 0 ? sums_per_decade : cfg.per_decade;
            sum_mode mode = sum_mode::sharp;
            if (sums_mode == "plus") mode = sum_mode::smoothed_plus;
            else if (sums_mode == "minus") mode = sum_mode::smoothed_minus;
            else if (sums_mode != "sharp") {
                std::cerr << "unknown --mode " << sums_mode << " (use sharp | plus | minus)\n";
                return 2;
            }
            const cplx w(sums_wre, sums_wim);
            const double reach = (mode == sum_mode::smoothed_plus) ? xhi * (1.0 + 1.0 / sums_y)
                                                                   : xhi;
            const std::int64_t need = static_cast<std::int64_t>(reach) + 1;
            const arithmetic_table r2 = sieve_r2(need, cfg.memory_budget, workers);
            arithmetic_table weights;
            if (w == cplx(0.5, 0.0)) {
                weights = sieve_divisor_count(need + sums_h, cfg.memory_budget);
            } else {
                weights = sieve_sigma(need + sums_h, 1.0 - 2.0 * w, cfg.memory_budget);
            }
            const partial_sum_series s = partial_sum_over_grid(log_grid(xlo, xhi, pd), w, sums_h,
                                                               r2, weights, mode, sums_y);
            emit(sum_series_csv(s), sums_out);
            return 0;
        }

        if (*sums_fit) {
            csv_series in;
            try {
                in = read_sum_csv(fit_in);
            } catch (const contract_error& e) {
                std::cerr << e.what() << '\n';
                return 2;
            }
            partial_sum_series s;
            s.h = fit_h;
            if (fit_model == "loglinear") {
                s.w = cplx(0.5, 0.0);
            } else if (fit_model == "twopower") {
                s.w = cplx(fit_wre, fit_wim);
                if (s.w == cplx(0.5, 0.0)) {
                    std::cerr << "twopower model requires w != 1/2\n";
                    return 2;
                }
            } else {
                std::cerr << "unknown --model " << fit_model << " (use loglinear | twopower)\n";
                return 2;
            }
            s.grid = in.xs;
            s.values = in.values;
            s.rounding_errors.assign(in.xs.size(), 0.0);
            const fit_report rep = fit_main_terms(s);
            emit(fit_report_to_json(rep) + "\n", fit_out);
            return 0;
        }

        if (*series_cmp) {
            const double s_res[] = {2.0, 8.0 / 3.0, 10.0 / 3.0, 4.0};
            const double w_res[] = {0.3, 0.5, 0.7};
            std::ostringstream os;
            os << "re_s,im_s,re_w,im_w,closed_re,closed_im,trunc_re,trunc_im,tail_bound,pass\n";
            const arithmetic_table r2 = sieve_r2(cmp_n, cfg.memory_budget, workers);
            for (const double rw : w_res) {
                const arithmetic_table sigma =
                    sieve_sigma(cmp_n, cplx(1.0 - 2.0 * rw, 0.0), cfg.memory_budget);
                for (const double rs : s_res) {
                    const cplx s(rs, 0.0), w(rw, 0.0);
                    const special_value closed = d0_closed_form(s, w);
                    const dh_partial trunc = d0_truncated({s, w}, cmp_n, r2, sigma);
                    const bool pass = std::abs(closed.value - trunc.value) <=
                                      trunc.tail_bound + closed.abs_error_estimate;
                    os << format_g17(rs) << ",0," << format_g17(rw) << ",0,"
                       << format_g17(closed.value.real()) << ',' << format_g17(closed.value.imag())
                       << ',' << format_g17(trunc.value.real()) << ','
                       << format_g17(trunc.value.imag()) << ',' << format_g17(trunc.tail_bound)
                       << ',' << (pass ? 1 : 0) << '\n';
                }
            }
            emit(os.str(), cmp_out);
            return 0;
        }

        if (*modular_verify) {
            verify_options opt;
            opt.level = (mod_level == "full") ? verify_level::full : verify_level::quick;
            opt.workers = workers;
            opt.memory_budget = cfg.memory_budget;
            return report_and_exit_code(verify_modular(opt), mod_out);
        }

        if (*special_eval) {
            const cplx s(ev_re, ev_im);
            const cplx nu(ev_nu_re, ev_nu_im);
            special_value v;
            if (fn == "gamma") v = gamma_c(s);
            else if (fn == "digamma") v = digamma(s);
            else if (fn == "zeta") v = zeta_c(s);
            else if (fn == "zeta-star") v = zeta_star(s);
            else if (fn == "hurwitz") v = hurwitz_zeta(s, ev_a);
            else if (fn == "lchi4") v = l_chi4(s);
            else if (fn == "lchi4-star") v = l_chi4_star(s);
            else if (fn == "besselk") v = bessel_k(nu, ev_x);
            else if (fn == "whittaker") v = whittaker_w(ev_kappa, nu, ev_x);
            else if (fn == "besselk-imag") v = bessel_k_imag_order(ev_t, cplx(ev_x, 0.0));
            else if (fn == "kuznetsov") v = kuznetsov_geometric_integral(ev_t, ev_beta);
            else {
                std::cerr << "unknown --fn " << fn << '\n';
                return 2;
            }
            std::cout << "value_re = " << format_g17(v.value.real()) << '\n'
                      << "value_im = " << format_g17(v.value.imag()) << '\n'
                      << "abs_error_estimate = " << format_g17(v.abs_error_estimate) << '\n';
            return 0;
        }

        verify_options opt;
        opt.level = (verify_level_str == "full") ? verify_level::full : verify_level::quick;
        opt.workers = workers;
        opt.memory_budget = cfg.memory_budget;
        if (*verify_all) return report_and_exit_code(verify_everything(opt), verify_out);
        if (*verify_arith_cmd) return report_and_exit_code(verify_arith(opt), verify_out);
        if (*verify_special_cmd) return report_and_exit_code(verify_special(opt), verify_out);
        if (*verify_modular_cmd) return report_and_exit_code(verify_modular(opt), verify_out);
        if (*verify_series_cmd) return report_and_exit_code(verify_series(opt), verify_out);
        if (*verify_sums_cmd) return report_and_exit_code(verify_sums(opt), verify_out);

        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const contract_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace shiftconv
