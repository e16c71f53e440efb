#pragma once

// Sieves and exact evaluators for the arithmetic functions feeding the
// shifted-convolution series: r2(n) (lattice representations by two squares),
// sigma_nu(n) (divisor power sums, complex exponent allowed), d(n), the
// conductor-4 character chi4, and Kloosterman sums with optional chi4 twist.

#include <complex>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "shiftconv/errors.hpp"

namespace shiftconv {

using cplx = std::complex<double>;

enum class table_kind { r2, sigma_nu, divisor_count };

// Immutable table of an arithmetic function on [0, N]. Integer-valued kinds
// (r2, d) fill `ivalues`; sigma_nu fills `cvalues`. Safe for concurrent reads.
struct arithmetic_table {
    table_kind kind;
    cplx nu{0.0, 0.0};          // sigma_nu only
    std::int64_t max_index = 0; // N; values indexed 0..N
    std::vector<std::int64_t> ivalues;
    std::vector<cplx> cvalues;

    bool is_integer_kind() const { return kind != table_kind::sigma_nu; }
    std::int64_t at_int(std::int64_t n) const { return ivalues[static_cast<std::size_t>(n)]; }
    cplx at(std::int64_t n) const {
        return is_integer_kind() ? cplx(static_cast<double>(ivalues[static_cast<std::size_t>(n)]), 0.0)
                                 : cvalues[static_cast<std::size_t>(n)];
    }
    // CSV rows `n,value` (integer kinds) or `n,re,im` (sigma_nu), after a header line.
    void write_csv(std::ostream& os) const;
};

// chi4(n): 1 for n = 1 mod 4, -1 for n = 3 mod 4, 0 for even n.
inline int chi4(std::int64_t n) {
    std::int64_t r = n % 4;
    if (r < 0) r += 4;
    if (r == 1) return 1;
    if (r == 3) return -1;
    return 0;
}

// r2 sieve by direct lattice enumeration over a^2 + b^2 <= N.
// `memory_budget` (bytes) caps the table allocation; 0 means unlimited.
// `workers` partitions the a-range into fixed blocks (deterministic result).
arithmetic_table sieve_r2(std::int64_t N, std::uint64_t memory_budget = 0, int workers = 1);

// sigma_nu sieve: one pow per divisor d, accumulated over multiples.
// Entry 0 is stored as 0 and is never read by consumers.
arithmetic_table sieve_sigma(std::int64_t N, cplx nu, std::uint64_t memory_budget = 0);

// d(n) sieve (equals sieve_sigma at nu = 0 but stays in integer arithmetic).
arithmetic_table sieve_divisor_count(std::int64_t N, std::uint64_t memory_budget = 0);

enum class kloosterman_twist { none, chi4 };

struct kloosterman_spec {
    std::int64_t m = 0;
    std::int64_t n = 0;
    std::int64_t c = 1;  // positive modulus
    kloosterman_twist twist = kloosterman_twist::none;
};

// S(m,n;c) = sum_{d mod c, gcd(d,c)=1} eps(d) e((m d + n dbar)/c), with
// eps = 1 or chi4(d). The twisted sum requires 4 | c. S(m,n;1) = 1 by the
// empty-product convention (the sum over residues mod 1 has one empty term).
// Cost is O(c log c), so c is capped (default 1e6).
cplx kloosterman(const kloosterman_spec& spec, std::int64_t c_cap = 1000000);

// Modular inverse of a mod m (gcd(a,m) = 1) via extended gcd.
std::int64_t mod_inverse(std::int64_t a, std::int64_t m);

struct identity_failure {
    std::string identity;
    std::int64_t n = 0;
    double lhs = 0.0, rhs = 0.0;
};

struct r2_identity_report {
    bool pass = true;
    std::int64_t checked_n = 0;
    std::optional<identity_failure> first_failure;
};

// Exact checks for n <= N: r2(n) = 4 sum_{d|n} chi4(d), r2(2n) = r2(n),
// r2(4n) = r2(n). The divisor-sum side is sieved independently of the
// lattice enumeration.
r2_identity_report verify_r2_identities(std::int64_t N, std::uint64_t memory_budget = 0,
                                        int workers = 1);

struct weil_report {
    bool pass = true;
    std::int64_t triples_checked = 0;
    double worst_ratio = 0.0;  // max |S| / (d(c) gcd(m,n,c)^{1/2} c^{1/2})
    std::int64_t worst_m = 0, worst_n = 0, worst_c = 0;
};

// |S(m,n;c)| <= d(c) gcd(m,n,c)^{1/2} c^{1/2} over the full grid
// 1 <= m <= m_max, 1 <= n <= n_max, 1 <= c <= c_max. Blocked so that the
// root-of-unity table and inverse for each d mod c are reused across the
// whole (m,n) grid.
weil_report verify_weil_bound(std::int64_t m_max, std::int64_t n_max, std::int64_t c_max,
                              int workers = 1);

}  // namespace shiftconv
