#include "shiftconv/arith.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "shiftconv/parallel.hpp"

namespace shiftconv {

namespace {

void check_budget(const char* what, std::uint64_t bytes, std::uint64_t budget) {
    if (budget != 0 && bytes > budget) {
        throw resource_error(std::string(what) + ": table of " + std::to_string(bytes) +
                             " bytes exceeds memory budget of " + std::to_string(budget) +
                             " bytes");
    }
}

void write_value(std::ostream& os, double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    os << buf;
}

}  // namespace

void arithmetic_table::write_csv(std::ostream& os) const {
    if (is_integer_kind()) {
        os << "n,value\n";
        for (std::int64_t n = 0; n <= max_index; ++n)
            os << n << ',' << ivalues[static_cast<std::size_t>(n)] << '\n';
    } else {
        os << "n,re,im\n";
        for (std::int64_t n = 0; n <= max_index; ++n) {
            const cplx& v = cvalues[static_cast<std::size_t>(n)];
            os << n << ',';
            write_value(os, v.real());
            os << ',';
            write_value(os, v.imag());
            os << '\n';
        }
    }
}

arithmetic_table sieve_r2(std::int64_t N, std::uint64_t memory_budget, int workers) {
    (void)workers;  // O(N) increment loop; not worth the per-worker counter arrays
    if (N < 1) throw contract_error("sieve_r2: N must be >= 1");
    check_budget("sieve_r2", static_cast<std::uint64_t>(N + 1) * sizeof(std::int64_t),
                 memory_budget);

    arithmetic_table t;
    t.kind = table_kind::r2;
    t.max_index = N;
    t.ivalues.assign(static_cast<std::size_t>(N + 1), 0);

    // Count lattice points with a >= 1, b >= 1 once and expand by the sign
    // and axis symmetries afterwards: r2(n) = 4*interior(n) + 4*[n is a square].
    for (std::int64_t a = 1; a * a <= N; ++a) {
        const std::int64_t aa = a * a;
        const std::int64_t rem = N - aa;
        std::int64_t b = static_cast<std::int64_t>(std::sqrt(static_cast<double>(rem)));
        while (b * b > rem) --b;
        while ((b + 1) * (b + 1) <= rem) ++b;
        for (std::int64_t bb = 1; bb <= b; ++bb)
            t.ivalues[static_cast<std::size_t>(aa + bb * bb)] += 1;
    }

    for (std::int64_t n = N; n >= 1; --n)
        t.ivalues[static_cast<std::size_t>(n)] *= 4;  // (±a, ±b) sign choices
    for (std::int64_t a = 1; a * a <= N; ++a)
        t.ivalues[static_cast<std::size_t>(a * a)] += 4;  // (±a, 0), (0, ±a)
    t.ivalues[0] = 1;
    return t;
}

arithmetic_table sieve_sigma(std::int64_t N, cplx nu, std::uint64_t memory_budget) {
    if (N < 1) throw contract_error("sieve_sigma: N must be >= 1");
    check_budget("sieve_sigma", static_cast<std::uint64_t>(N + 1) * sizeof(cplx), memory_budget);

    arithmetic_table t;
    t.kind = table_kind::sigma_nu;
    t.nu = nu;
    t.max_index = N;
    t.cvalues.assign(static_cast<std::size_t>(N + 1), cplx(0.0, 0.0));

    // One transcendental call per divisor d, then plain additions over
    // multiples. sigma_nu(0) stays 0 and is documented unread.
    for (std::int64_t d = 1; d <= N; ++d) {
        const cplx dpow = std::exp(nu * std::log(static_cast<double>(d)));
        for (std::int64_t m = d; m <= N; m += d) t.cvalues[static_cast<std::size_t>(m)] += dpow;
    }
    return t;
}

arithmetic_table sieve_divisor_count(std::int64_t N, std::uint64_t memory_budget) {
    if (N < 1) throw contract_error("sieve_divisor_count: N must be >= 1");
    check_budget("sieve_divisor_count", static_cast<std::uint64_t>(N + 1) * sizeof(std::int64_t),
                 memory_budget);

    arithmetic_table t;
    t.kind = table_kind::divisor_count;
    t.max_index = N;
    t.ivalues.assign(static_cast<std::size_t>(N + 1), 0);
    for (std::int64_t d = 1; d <= N; ++d)
        for (std::int64_t m = d; m <= N; m += d) t.ivalues[static_cast<std::size_t>(m)] += 1;
    return t;
}

std::int64_t mod_inverse(std::int64_t a, std::int64_t m) {
    // Extended gcd; caller guarantees gcd(a, m) = 1 and m >= 1.
    std::int64_t old_r = a % m, r = m;
    if (old_r < 0) old_r += m;
    std::int64_t old_s = 1, s = 0;
    while (r != 0) {
        const std::int64_t q = old_r / r;
        std::int64_t tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    std::int64_t inv = old_s % m;
    if (inv < 0) inv += m;
    return inv;
}

cplx kloosterman(const kloosterman_spec& spec, std::int64_t c_cap) {
    if (spec.c < 1) throw contract_error("kloosterman: c must be a positive integer");
    if (spec.c > c_cap)
        throw resource_error("kloosterman: c = " + std::to_string(spec.c) +
                             " exceeds the configured cap " + std::to_string(c_cap));
    if (spec.twist == kloosterman_twist::chi4 && spec.c % 4 != 0)
        throw contract_error("kloosterman: chi4 twist requires c = 0 mod 4");
    const std::int64_t c = spec.c;
    if (c == 1) return cplx(1.0, 0.0);  // empty congruence condition, conventional value

    const double two_pi_over_c = 2.0 * M_PI / static_cast<double>(c);
    std::int64_t m = spec.m % c, n = spec.n % c;
    if (m < 0) m += c;
    if (n < 0) n += c;

    double re = 0.0, im = 0.0;
    for (std::int64_t d = 1; d < c; ++d) {
        if (std::gcd(d, c) != 1) continue;
        const std::int64_t dbar = mod_inverse(d, c);
        const std::int64_t k = (m * d + n * dbar) % c;
        const double phase = two_pi_over_c * static_cast<double>(k);
        double eps = 1.0;
        if (spec.twist == kloosterman_twist::chi4) eps = static_cast<double>(chi4(d));
        re += eps * std::cos(phase);
        im += eps * std::sin(phase);
    }
    return cplx(re, im);
}

r2_identity_report verify_r2_identities(std::int64_t N, std::uint64_t memory_budget, int workers) {
    if (N < 1) throw contract_error("verify_r2_identities: N must be >= 1");
    r2_identity_report rep;
    rep.checked_n = N;

    arithmetic_table r2 = sieve_r2(N, memory_budget, workers);

    // Independent divisor-sum side: chi4 summatory sieve (integer arithmetic).
    std::vector<std::int32_t> chi_divsum(static_cast<std::size_t>(N + 1), 0);
    for (std::int64_t d = 1; d <= N; ++d) {
        const int x = chi4(d);
        if (x == 0) continue;
        for (std::int64_t m = d; m <= N; m += d)
            chi_divsum[static_cast<std::size_t>(m)] += static_cast<std::int32_t>(x);
    }

    auto fail = [&](const char* id, std::int64_t n, std::int64_t lhs, std::int64_t rhs) {
        rep.pass = false;
        rep.first_failure =
            identity_failure{id, n, static_cast<double>(lhs), static_cast<double>(rhs)};
    };

    for (std::int64_t n = 1; n <= N; ++n) {
        const std::int64_t lhs = r2.at_int(n);
        const std::int64_t rhs = 4 * static_cast<std::int64_t>(chi_divsum[static_cast<std::size_t>(n)]);
        if (lhs != rhs) {
            fail("r2 = 4 sum chi4(d)", n, lhs, rhs);
            return rep;
        }
    }
    for (std::int64_t n = 1; 2 * n <= N; ++n) {
        if (r2.at_int(2 * n) != r2.at_int(n)) {
            fail("r2(2n) = r2(n)", n, r2.at_int(2 * n), r2.at_int(n));
            return rep;
        }
    }
    for (std::int64_t n = 1; 4 * n <= N; ++n) {
        if (r2.at_int(4 * n) != r2.at_int(n)) {
            fail("r2(4n) = r2(n)", n, r2.at_int(4 * n), r2.at_int(n));
            return rep;
        }
    }
    return rep;
}

weil_report verify_weil_bound(std::int64_t m_max, std::int64_t n_max, std::int64_t c_max,
                              int workers) {
    if (m_max < 1 || n_max < 1 || c_max < 1)
        throw contract_error("verify_weil_bound: grid bounds must be >= 1");

    arithmetic_table dtab = sieve_divisor_count(c_max);

    struct block_result {
        double worst_ratio = 0.0;
        std::int64_t m = 0, n = 0, c = 0, triples = 0;
    };
    const std::int64_t block = 64;  // c-values per block; fixed for reproducibility
    const std::int64_t n_blocks = (c_max + block - 1) / block;
    std::vector<block_result> results(static_cast<std::size_t>(n_blocks));

    run_blocks(n_blocks, workers, [&](std::int64_t bi) {
        block_result& res = results[static_cast<std::size_t>(bi)];
        const std::int64_t c_lo = 1 + bi * block;
        const std::int64_t c_hi = std::min(c_max, c_lo + block - 1);
        std::vector<double> wre, wim;
        std::vector<double> sre, sim;
        for (std::int64_t c = c_lo; c <= c_hi; ++c) {
            const std::size_t pairs = static_cast<std::size_t>(m_max * n_max);
            sre.assign(pairs, 0.0);
            sim.assign(pairs, 0.0);
            if (c == 1) {
                for (std::size_t i = 0; i < pairs; ++i) sre[i] = 1.0;
            } else {
                // Root-of-unity table for this modulus, then incremental
                // index stepping: (m d + n dbar) mod c advances by d in m and
                // by dbar in n, so the inner grid needs no divisions.
                wre.resize(static_cast<std::size_t>(c));
                wim.resize(static_cast<std::size_t>(c));
                const double step = 2.0 * M_PI / static_cast<double>(c);
                for (std::int64_t k = 0; k < c; ++k) {
                    wre[static_cast<std::size_t>(k)] = std::cos(step * static_cast<double>(k));
                    wim[static_cast<std::size_t>(k)] = std::sin(step * static_cast<double>(k));
                }
                for (std::int64_t d = 1; d < c; ++d) {
                    if (std::gcd(d, c) != 1) continue;
                    const std::int64_t dbar = mod_inverse(d, c);
                    std::int64_t md = 0;
                    std::size_t slot = 0;
                    for (std::int64_t m = 1; m <= m_max; ++m) {
                        md += d;
                        if (md >= c) md -= c;
                        std::int64_t idx = md;
                        for (std::int64_t n = 1; n <= n_max; ++n, ++slot) {
                            idx += dbar;
                            if (idx >= c) idx -= c;
                            sre[slot] += wre[static_cast<std::size_t>(idx)];
                            sim[slot] += wim[static_cast<std::size_t>(idx)];
                        }
                    }
                }
            }
            const double dcsqrtc =
                static_cast<double>(dtab.at_int(c)) * std::sqrt(static_cast<double>(c));
            std::size_t slot = 0;
            for (std::int64_t m = 1; m <= m_max; ++m) {
                for (std::int64_t n = 1; n <= n_max; ++n, ++slot) {
                    const double mag = std::hypot(sre[slot], sim[slot]);
                    const double bound =
                        dcsqrtc * std::sqrt(static_cast<double>(std::gcd(std::gcd(m, n), c)));
                    const double ratio = mag / bound;
                    res.triples += 1;
                    if (ratio > res.worst_ratio) {
                        res.worst_ratio = ratio;
                        res.m = m;
                        res.n = n;
                        res.c = c;
                    }
                }
            }
        }
    });

    weil_report rep;
    for (const auto& res : results) {
        rep.triples_checked += res.triples;
        if (res.worst_ratio > rep.worst_ratio) {
            rep.worst_ratio = res.worst_ratio;
            rep.worst_m = res.m;
            rep.worst_n = res.n;
            rep.worst_c = res.c;
        }
    }
    // Allow a whisker of floating slack over exact equality cases
    // (e.g. |S| = bound when c is prime and m n is a quadratic residue setup).
    rep.pass = rep.worst_ratio <= 1.0 + 1e-9;
    return rep;
}

}  // namespace shiftconv
