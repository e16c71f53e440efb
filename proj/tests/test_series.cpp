#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "shiftconv/series.hpp"

using namespace shiftconv;

namespace {
constexpr double pi = 3.14159265358979323846264338327950288;
}

TEST_CASE("spectral point region flags") {
    CHECK(spectral_point{cplx(2.0, 5.0), cplx(0.5, 0.0)}.converges_dh());
    CHECK_FALSE(spectral_point{cplx(1.2, 0.0), cplx(0.9, 0.0)}.converges_dh());
    CHECK(spectral_point{cplx(2.0, 0.0), cplx(0.5, 0.0)}.w_is_half());
    CHECK_FALSE(spectral_point{cplx(2.0, 0.0), cplx(0.5, 1e-14)}.w_is_half());
    CHECK(spectral_point{cplx(2.0, 0.0), cplx(0.99, 3.0)}.w_in_strip());
}

TEST_CASE("dh_truncated: N = 0 reduces to the n = 0 term") {
    const cplx s(4.0, 0.0), w(0.7, 0.0);
    const std::int64_t h = 3;
    const arithmetic_table r2 = sieve_r2(1);
    const arithmetic_table sigma = sieve_sigma(h + 1, 1.0 - 2.0 * w);
    const dh_partial v = dh_truncated({s, w}, h, 0, r2, sigma);
    const cplx expect =
        oracles::sigma_direct(h, 1.0 - 2.0 * w) *
        std::exp(-(s + 0.5 - w) * std::log(static_cast<double>(h)));
    CHECK(std::abs(v.value - expect) < 1e-14);
}

TEST_CASE("dh_truncated region guard and table validation") {
    const arithmetic_table r2 = sieve_r2(10);
    const arithmetic_table sigma = sieve_sigma(11, cplx(-0.4, 0.0));
    CHECK_THROWS_AS(dh_truncated({cplx(1.0, 0.0), cplx(0.7, 0.0)}, 1, 10, r2, sigma),
                    region_error);
    // mismatched sigma exponent
    CHECK_THROWS_AS(dh_truncated({cplx(4.0, 0.0), cplx(0.3, 0.0)}, 1, 10, r2, sigma),
                    contract_error);
}

TEST_CASE("dh_truncated against the lattice double-loop oracle") {
    const cplx s(4.0, 0.0), w(0.7, 0.0);
    const std::int64_t h = 1, N = 4000;
    const arithmetic_table r2 = sieve_r2(N);
    const arithmetic_table sigma = sieve_sigma(N + h, 1.0 - 2.0 * w);
    const dh_partial v = dh_truncated({s, w}, h, N, r2, sigma);
    const cplx brute = oracles::dh_bruteforce(s, w, h, N);
    CHECK(std::abs(v.value - brute) < 1e-10);
}

TEST_CASE("dh truncation self-consistency within the certificate") {
    const cplx s(4.0, 0.0), w(0.7, 0.0);
    const std::int64_t h = 1;
    const arithmetic_table r2 = sieve_r2(200000);
    const arithmetic_table sigma = sieve_sigma(200001, 1.0 - 2.0 * w);
    const dh_partial a = dh_truncated({s, w}, h, 100000, r2, sigma);
    const dh_partial b = dh_truncated({s, w}, h, 200000, r2, sigma);
    CHECK(std::abs(a.value - b.value) <= a.tail_bound);
    CHECK(a.tail_bound < 1e-4);
}

TEST_CASE("d0 closed form symmetry and pole guards") {
    const cplx s(3.0, 0.0), w(0.7, 0.0);
    CHECK(std::abs(d0_closed_form(s, w).value - d0_closed_form(s, 1.0 - w).value) < 1e-10);
    CHECK_THROWS_AS(d0_closed_form(cplx(1.2, 0.0), cplx(0.7, 0.0)), pole_error);
    CHECK_THROWS_AS(d0_closed_form(cplx(0.8, 0.0), cplx(0.7, 0.0)), pole_error);
}

TEST_CASE("d0 closed form vs truncated series at (3, 0.7)") {
    const cplx s(3.0, 0.0), w(0.7, 0.0);
    const std::int64_t N = 300000;
    const arithmetic_table r2 = sieve_r2(N);
    const arithmetic_table sigma = sieve_sigma(N, 1.0 - 2.0 * w);
    const dh_partial trunc = d0_truncated({s, w}, N, r2, sigma);
    const special_value closed = d0_closed_form(s, w);
    CHECK(std::abs(closed.value - trunc.value) <= trunc.tail_bound + closed.abs_error_estimate);
    CHECK(std::abs(closed.value - trunc.value) < 1e-6);
}

TEST_CASE("d0 pole blow-up probe") {
    const cplx w(0.7, 0.0);
    CHECK(std::abs(d0_closed_form(cplx(1.2 + 1e-4, 0.0), w).value) > 1e3);
    CHECK(std::abs(d0_closed_form(cplx(1.2, 0.1), w).value) < 1e2);
}

TEST_CASE("main_term closed-form example at w = 1/2") {
    main_term_inputs in;
    in.h = 1;
    in.w = cplx(0.5, 0.0);
    in.phi_at = cplx(1.0, 0.0);
    in.phi_prime = cplx(0.0, 0.0);
    const double X = 10.0;
    const double expect = std::sqrt(4.0 * pi) *
                          (X * std::log(X) + (euler_gamma - std::log(4.0 * pi) - 1.0) * X);
    CHECK(main_term(X, in).real() == doctest::Approx(expect).epsilon(1e-14));
    // missing phi' is a contract violation
    main_term_inputs missing = in;
    missing.phi_prime.reset();
    CHECK_THROWS_AS(main_term(10.0, missing), contract_error);
}

TEST_CASE("main_term linearity and exponent scaling") {
    main_term_inputs in;
    in.h = 2;
    in.w = cplx(0.7, 0.0);
    in.phi_at = cplx(0.8, -0.1);
    in.phi_at_reflected = cplx(0.3, 0.4);
    main_term_inputs doubled = in;
    doubled.phi_at *= 2.0;
    doubled.phi_at_reflected *= 2.0;
    CHECK(std::abs(main_term(100.0, doubled) - 2.0 * main_term(100.0, in)) < 1e-10);

    // second component scales as X^{2-2w} = X^{0.6}
    const auto [c1, c2] = main_term_coefficients(in);
    const cplx second_x = main_term(100.0, in) - c1 * 100.0;
    const cplx second_2x = main_term(200.0, in) - c1 * 200.0;
    CHECK(std::abs(second_2x / second_x - std::pow(2.0, 0.6)) < 1e-12);
    (void)c2;
}

TEST_CASE("residue formulas and consistency") {
    main_term_inputs in;
    in.h = 1;
    in.w = cplx(0.7, 0.0);
    in.phi_at = cplx(1.0, 0.0);
    in.phi_at_reflected = cplx(1.0, 0.0);
    const residue_pair res = residue_formulas(in);
    CHECK(res.consistency_residual < 1e-12);

    // h-scaling: res(h=4)/res(h=1) = 4^{1/2-w} at phi = 1
    main_term_inputs in4 = in;
    in4.h = 4;
    const cplx ratio = residue_formulas(in4).at_half_plus_w / res.at_half_plus_w;
    CHECK(std::abs(ratio - std::pow(4.0, 1.0 - in.w.real() - 0.5 + 0.5 - 0.5)) < 1e-12);
    CHECK(std::abs(ratio - std::exp((0.5 - in.w) * std::log(4.0))) < 1e-12);

    // w = 1/2 rejected; principal part accessor takes over
    main_term_inputs half = in;
    half.w = cplx(0.5, 0.0);
    half.phi_prime = cplx(0.25, 0.0);
    CHECK_THROWS_AS(residue_formulas(half), contract_error);
    const auto [c2, c1] = double_pole_principal_part(half);
    CHECK(std::abs(c2 - std::sqrt(4.0 * pi) * half.phi_at) < 1e-14);
    CHECK(std::abs(c1 - std::sqrt(4.0 * pi) *
                            ((euler_gamma - std::log(4.0 * pi)) * half.phi_at + *half.phi_prime)) <
          1e-14);
}

TEST_CASE("residues swap under w -> 1-w with swapped phi pair") {
    main_term_inputs in;
    in.h = 5;
    in.w = cplx(0.64, 0.0);
    in.phi_at = cplx(0.3, 0.7);
    in.phi_at_reflected = cplx(-0.2, 0.1);
    main_term_inputs refl = in;
    refl.w = 1.0 - in.w;
    std::swap(refl.phi_at, refl.phi_at_reflected);
    const residue_pair a = residue_formulas(in);
    const residue_pair b = residue_formulas(refl);
    CHECK(std::abs(a.at_half_plus_w - b.at_three_half_minus_w) < 1e-12);
    CHECK(std::abs(a.at_three_half_minus_w - b.at_half_plus_w) < 1e-12);
}
