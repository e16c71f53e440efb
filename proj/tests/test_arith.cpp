#include <doctest.h>

#include <cmath>
#include <numeric>
#include <array>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "shiftconv/arith.hpp"

using namespace shiftconv;

TEST_CASE("chi4 on residues") {
    CHECK(chi4(1) == 1);
    CHECK(chi4(2) == 0);
    CHECK(chi4(3) == -1);
    CHECK(chi4(4) == 0);
    CHECK(chi4(-1) == -1);  // -1 = 3 mod 4
    CHECK(chi4(-3) == 1);
    for (std::int64_t n = 1; n < 200; ++n) CHECK(chi4(n) * chi4(n + 4) == chi4(n) * chi4(n));
}

TEST_CASE("sieve_r2 small table matches enumeration") {
    const arithmetic_table t = sieve_r2(5);
    const std::int64_t expect[] = {1, 4, 4, 0, 4, 8};
    for (std::int64_t n = 0; n <= 5; ++n) CHECK(t.at_int(n) == expect[n]);
}

TEST_CASE("sieve_r2 against the direct count up to 3000") {
    const arithmetic_table t = sieve_r2(3000);
    for (std::int64_t n = 0; n <= 3000; ++n) CHECK(t.at_int(n) == oracles::r2_direct(n));
    CHECK(t.at_int(3) == 0);
    CHECK(t.at_int(25) == 12);
}

TEST_CASE("sieve_r2 memory budget") {
    CHECK_THROWS_AS(sieve_r2(1000000, 1000), resource_error);
}

TEST_CASE("table invariants: r2 multiples of 4, divisor counts positive") {
    const arithmetic_table r2 = sieve_r2(5000);
    CHECK(r2.at_int(0) == 1);
    for (std::int64_t n = 1; n <= 5000; ++n) {
        CHECK(r2.at_int(n) >= 0);
        CHECK(r2.at_int(n) % 4 == 0);
    }
    const arithmetic_table d = sieve_divisor_count(5000);
    for (std::int64_t n = 1; n <= 5000; ++n) CHECK(d.at_int(n) >= 1);
}

TEST_CASE("kloosterman modulus cap") {
    CHECK_THROWS_AS(kloosterman({1, 1, 2000000, kloosterman_twist::none}), resource_error);
    // a custom cap admits larger moduli
    CHECK(std::abs(kloosterman({0, 0, 2000000, kloosterman_twist::none}, 3000000)) > 0.0);
}

TEST_CASE("sieve_sigma values and conventions") {
    const arithmetic_table s0 = sieve_sigma(600, cplx(0.0, 0.0));
    const arithmetic_table d = sieve_divisor_count(600);
    CHECK(s0.at(6).real() == doctest::Approx(4.0).epsilon(1e-14));
    for (std::int64_t n = 1; n <= 600; ++n)
        CHECK(std::abs(s0.at(n) - d.at(n)) < 1e-11);

    const arithmetic_table s1 = sieve_sigma(10, cplx(1.0, 0.0));
    CHECK(s1.at(6).real() == doctest::Approx(12.0).epsilon(1e-14));
    const arithmetic_table sm1 = sieve_sigma(10, cplx(-1.0, 0.0));
    CHECK(sm1.at(4).real() == doctest::Approx(1.75).epsilon(1e-14));
    CHECK(sm1.at(0) == cplx(0.0, 0.0));  // stored as 0, never read

    // complex exponent spot-check against trial division
    const cplx nu(0.3, -1.2);
    const arithmetic_table sc = sieve_sigma(500, nu);
    std::mt19937 rng(5);
    std::uniform_int_distribution<std::int64_t> pick(1, 500);
    for (int i = 0; i < 40; ++i) {
        const std::int64_t n = pick(rng);
        CHECK(std::abs(sc.at(n) - oracles::sigma_direct(n, nu)) < 1e-10);
    }
}

TEST_CASE("sigma reflection sigma_nu(n) = n^nu sigma_{-nu}(n)") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<std::int64_t> pick(1, 4000);
    const cplx nus[] = {{0.7, 0.0}, {-0.2, 1.5}, {0.0, -2.3}};
    for (const cplx& nu : nus) {
        for (int i = 0; i < 30; ++i) {
            const std::int64_t n = pick(rng);
            const cplx lhs = oracles::sigma_direct(n, nu);
            const cplx rhs =
                std::exp(nu * std::log(double(n))) * oracles::sigma_direct(n, -nu);
            CHECK(std::abs(lhs - rhs) / std::abs(lhs) < 1e-12);
        }
    }
}

TEST_CASE("kloosterman small moduli") {
    CHECK(kloosterman({1, 1, 1, kloosterman_twist::none}) == cplx(1.0, 0.0));
    CHECK(std::abs(kloosterman({1, 1, 2, kloosterman_twist::none}) - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(kloosterman({1, 1, 3, kloosterman_twist::none}) - cplx(-1.0, 0.0)) < 1e-14);
    // S(0, 0; c) = phi(c)
    CHECK(std::abs(kloosterman({0, 0, 12, kloosterman_twist::none}) - cplx(4.0, 0.0)) < 1e-12);
}

TEST_CASE("kloosterman twist contract") {
    CHECK_THROWS_AS(kloosterman({1, 1, 6, kloosterman_twist::chi4}), contract_error);
    const cplx tw = kloosterman({1, 1, 8, kloosterman_twist::chi4});
    // direct evaluation: d in {1,3,5,7}, inverses {1,3,5,7}, chi4 = 1,-1,1,-1
    cplx direct(0.0, 0.0);
    const std::int64_t inv[] = {0, 1, 0, 3, 0, 5, 0, 7};
    for (std::int64_t d = 1; d < 8; d += 2) {
        const double phase = 2.0 * M_PI * static_cast<double>(d + inv[d]) / 8.0;
        direct += static_cast<double>(chi4(d)) * cplx(std::cos(phase), std::sin(phase));
    }
    CHECK(std::abs(tw - direct) < 1e-13);
}

TEST_CASE("kloosterman symmetry and reality on random triples") {
    std::mt19937 rng(23);
    std::uniform_int_distribution<std::int64_t> pick_mn(1, 30), pick_c(1, 400);
    for (int i = 0; i < 25; ++i) {
        const std::int64_t m = pick_mn(rng), n = pick_mn(rng), c = pick_c(rng);
        const cplx a = kloosterman({m, n, c, kloosterman_twist::none});
        const cplx b = kloosterman({n, m, c, kloosterman_twist::none});
        CHECK(std::abs(a - b) < 1e-9);
        CHECK(std::abs(a.imag()) < 1e-9);
    }
}

TEST_CASE("weil bound on a small grid") {
    const weil_report rep = verify_weil_bound(8, 8, 600, 2);
    CHECK(rep.pass);
    CHECK(rep.triples_checked == 8 * 8 * 600);
    // blocked evaluator agrees with the direct one on a sample
    for (const auto& [m, n, c] : std::vector<std::array<std::int64_t, 3>>{
             {3, 5, 7}, {4, 6, 35}, {2, 2, 64}}) {
        const cplx direct = kloosterman({m, n, c, kloosterman_twist::none});
        const double bound = static_cast<double>(oracles::divisor_count_direct(c)) *
                             std::sqrt(double(std::gcd(std::gcd(m, n), c))) * std::sqrt(double(c));
        CHECK(std::abs(direct) <= bound * (1.0 + 1e-9));
    }
}

TEST_CASE("verify_r2_identities passes at 1e4") {
    const r2_identity_report rep = verify_r2_identities(10000);
    CHECK(rep.pass);
    CHECK(rep.checked_n == 10000);
    CHECK_FALSE(rep.first_failure.has_value());
}

TEST_CASE("csv export shape") {
    const arithmetic_table t = sieve_r2(10);
    std::ostringstream os;
    t.write_csv(os);
    std::istringstream is(os.str());
    std::string line;
    std::getline(is, line);
    CHECK(line == "n,value");
    std::getline(is, line);
    CHECK(line == "0,1");
    std::getline(is, line);
    CHECK(line == "1,4");
    int rows = 2;
    while (std::getline(is, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 11);
}
