#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "dyson/bounds.hpp"
#include "dyson/census.hpp"
#include "oracles.hpp"

using namespace dyson;

// Reference values below were computed once with mpmath (30 digits) from the
// defining double sums and frozen here.

TEST_CASE("harmonic numbers") {
    CHECK(harmonic(1, 0.37) == 1.0);
    CHECK(harmonic(3, 1.0) == doctest::Approx(11.0 / 6.0).epsilon(1e-15));
    CHECK(std::abs(harmonic(100, 0.8) - 8.13443642804101322951) < 1e-10);
    CHECK_THROWS_AS(harmonic(0, 1.0), std::domain_error);
}

TEST_CASE("W values at small L") {
    CHECK(std::abs(w_direct(1, 0.0) - 2.0 * (2.0 - std::numbers::pi * std::numbers::pi / 6.0)) < 1e-12);
    CHECK(std::abs(w_direct(1, 0.0) - 0.710131866303547) < 1e-12);
    CHECK(std::abs(w_direct(2, 0.0) - 1.864708177051539) < 1e-12);
    CHECK(std::abs(w_direct(3, 0.0) - 2.623728932243975) < 1e-12);
    CHECK(std::abs(w_direct(10, 0.0) - 4.991165201319691) < 1e-11);
    CHECK(std::abs(w_direct(1, 0.2) - 0.235540763794356) < 1e-12);
    CHECK(std::abs(w_direct(2, 0.2) - 1.322136432967456) < 1e-12);
    CHECK(std::abs(w_direct(10, 0.2) - 5.050701265983550) < 1e-11);
    CHECK(std::abs(w_closed(1, 0.0) - 0.710131866303547) < 1e-12);
    CHECK(std::abs(w_closed(2, 0.0) - 1.864708177051539) < 1e-12);
    CHECK(std::abs(w_closed(10, 0.2) - w_direct(10, 0.2)) < 1e-12);
}

TEST_CASE("W(1) vanishes at the threshold exponent") {
    const double a = alpha_star();
    CHECK(std::abs(w_closed(1, a)) < 1e-9);
    CHECK(w_closed(1, a - 1e-3) > 0.0);
    CHECK(w_closed(1, a + 1e-3) < 0.0);
}

TEST_CASE("closed form equals the defining sum") {
    for (double alpha : {0.0, 0.1, 0.2, 0.27}) {
        for (long L = 1; L <= 200; ++L) CHECK(std::abs(w_closed(L, alpha) - w_direct(L, alpha)) <= 1e-9);
    }
}

TEST_CASE("w_values table matches the closed form") {
    for (double alpha : {0.0, 0.15, 0.27}) {
        const auto w = w_values(alpha, 500);
        for (long L : {1L, 2L, 3L, 50L, 499L, 500L}) {
            CHECK(std::abs(w[static_cast<std::size_t>(L - 1)] - w_closed(L, alpha)) < 1e-9);
        }
    }
}

TEST_CASE("delta_w formula") {
    CHECK(std::abs(delta_w(1, 0.0) - 1.154576310747992) < 1e-12);
    CHECK(std::abs(delta_w(2, 0.0) - 0.759020755192436) < 1e-12);
    CHECK(std::abs(delta_w(10, 0.2) - 0.266872543921423) < 1e-12);
    CHECK(delta_w(5, 0.0) > 0.0);
    for (double alpha : {0.0, 0.1, 0.2, 0.27}) {
        CHECK(delta_w(1, alpha) >= w_closed(1, alpha));
        for (long L = 1; L <= 150; ++L) {
            CHECK(std::abs(delta_w(L, alpha) - (w_closed(L + 1, alpha) - w_closed(L, alpha))) < 1e-9);
        }
    }
}

TEST_CASE("W increases for every L up to the search limit") {
    for (double alpha : {0.0, 0.1, 0.2, 0.27, 0.29}) {
        const auto w = w_values(alpha, 10001);
        for (std::size_t i = 0; i + 1 < w.size(); ++i) {
            if (!(w[i + 1] > w[i])) {
                FAIL("W not increasing at alpha=" << alpha << " L=" << i + 1);
            }
        }
    }
}

TEST_CASE("chi and zeta_star") {
    CHECK(chi(1.0, 0.0) == 4.0);
    CHECK(chi(1.0, 0.2) == 1.0);
    CHECK(chi(std::numbers::e, 0.0) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(chi(8.0, 0.5) == doctest::Approx(std::sqrt(8.0)));
    CHECK_THROWS_AS(chi(0.0, 0.2), std::domain_error);
    CHECK(zeta_star(0.0) == 2.0);
    CHECK(std::abs(zeta_star(alpha_plus())) < 1e-14);
    CHECK(std::abs(zeta_star(0.2) - 1.756508225014826) < 1e-12);
}

TEST_CASE("special exponents") {
    CHECK(alpha_star() > 0.2713);
    CHECK(alpha_star() < 0.2715);
    CHECK(std::abs(alpha_star() - 0.271352761001816) < 1e-12);
    CHECK(std::abs(alpha_bar() - 0.29044) < 1e-4);
    CHECK(std::abs(alpha_plus() - 0.58496) < 1e-4);
    CHECK(alpha_star() < alpha_bar());
    CHECK(alpha_bar() < alpha_plus());
}

TEST_CASE("zeta_alpha reports") {
    const auto z0 = zeta_alpha(0.0);
    CHECK(z0.certified);
    CHECK(z0.delta_w_positive);
    CHECK(z0.zeta_alpha > 0.0);
    CHECK(z0.zeta_alpha <= 0.710131866303547 / 4.0 + 1e-15);
    CHECK(z0.checked_up_to == 10000);

    const auto z2 = zeta_alpha(0.2);
    CHECK(z2.certified);
    CHECK(std::abs(z2.zeta_alpha - 0.235540763794356) < 1e-12);  // attained at L = 1
    CHECK(z2.zeta_star == doctest::Approx(1.756508225014826));

    const auto z25 = zeta_alpha(0.25);
    CHECK(z25.certified);
    CHECK(z25.zeta_alpha > 0.0);

    CHECK_THROWS_AS(zeta_alpha(0.3), std::domain_error);
    CHECK_THROWS_AS(zeta_alpha(alpha_star()), std::domain_error);
}

TEST_CASE("zeta_alpha certificate holds pointwise") {
    for (double alpha : {0.0, 0.05, 0.1, 0.15, 0.2, 0.25}) {
        const auto r = zeta_alpha(alpha, 2000);
        const auto w = w_values(alpha, 2000);
        for (long L = 1; L <= 2000; ++L) {
            const double rhs = r.zeta_alpha * chi(static_cast<double>(L), alpha);
            CHECK(w[static_cast<std::size_t>(L - 1)] >= rhs * (1.0 - 1e-12));
        }
        // past the threshold the asymptotic form takes over
        for (long L = r.threshold_L + 1; L <= 2000; ++L) {
            const double asym = alpha == 0.0 ? chi(static_cast<double>(L), 0.0) : r.zeta_star * chi(static_cast<double>(L), alpha);
            CHECK(w[static_cast<std::size_t>(L - 1)] >= asym);
        }
    }
}

TEST_CASE("asymptotic bracket approaches its limit") {
    const double alpha = 0.2;
    const long L = 1'000'000;
    const double limit = (3.0 - std::pow(2.0, 1.0 + alpha)) / alpha;
    const double bracket = asymptotic_bracket(L, alpha);
    // The bracket carries a zeta(1-alpha) L^-alpha correction (about -0.28
    // here), so the plain difference cannot reach 1e-3 at this L.
    // zeta(0.8) from mpmath.
    const double zeta_08 = -4.43753841589555157878;
    CHECK(std::abs(bracket - limit - zeta_08 * std::pow(static_cast<double>(L), -alpha)) < 1e-3);
    CHECK(std::abs(bracket - limit) < 0.3);
}

TEST_CASE("C_alpha and K_c variants") {
    CHECK(c_alpha(0.2) == doctest::Approx((3.0 - std::pow(2.0, 1.2)) / (0.2 * 0.8)));
    CHECK(std::abs(c_alpha(alpha_plus() - 1e-9)) < 1e-7);
    CHECK_THROWS_AS(c_alpha(0.0), std::domain_error);

    const auto corrected = k_c(0.3, 100.0, KcVariant::Corrected);
    CHECK(std::abs(corrected.value - 0.971607444214913) < 1e-12);
    CHECK_FALSE(corrected.in_range);

    const auto printed = k_c(0.3, 100.0, KcVariant::Printed);
    CHECK(printed.value < 0.0);
    CHECK_FALSE(printed.in_range);

    const auto capped = k_c(0.3, 100.0, KcVariant::Capped);
    CHECK(capped.value == 0.5);
    CHECK(capped.in_range);

    CHECK(parse_kc_variant("printed") == KcVariant::Printed);
    CHECK(to_string(KcVariant::Capped) == "capped");
    CHECK_THROWS_AS(parse_kc_variant("other"), std::invalid_argument);
    CHECK_THROWS_AS(k_c(0.3, 1.0, KcVariant::Corrected), std::domain_error);
}

TEST_CASE("field contribution") {
    const FieldProfile fp{1.0, 1.0, 1000};
    CHECK(field_contribution(Contour({Triangle::from_sites(-999, 999)}), fp) == 0.0);

    const long L = 100000;
    const double sum = field_contribution(Contour({Triangle::from_sites(L, 2 * L - 1)}), FieldProfile{1.0, 1.0, L});
    CHECK(std::abs(sum - std::log(2.0)) < 1e-5);

    const Contour g({Triangle::from_sites(-3, 4), Triangle::from_sites(0, 0)});
    const double one = field_contribution(g, FieldProfile{1.0, 0.7, 0});
    CHECK(field_contribution(g, FieldProfile{2.0, 0.7, 0}) == doctest::Approx(2.0 * one));
    CHECK(field_contribution(g, FieldProfile{-2.0, 0.7, 0}) == doctest::Approx(2.0 * one));
    CHECK(field_contribution(Contour{}, fp) == 0.0);
}

TEST_CASE("field bound constant") {
    std::vector<Contour> samples;
    for (long m : {1L, 2L, 5L, 40L}) samples.emplace_back(std::vector<Triangle>{Triangle::from_sites(10, 9 + m)});
    samples.emplace_back();
    const FieldProfile fp{1.5, 0.8, 10};
    const double alpha = 0.5;
    const double c = field_bound_constant(samples, fp, alpha);
    CHECK(std::isfinite(c));
    CHECK(c > 0.0);
    const double p = fp.gamma + alpha - 1.0;
    for (const auto& g : samples) {
        if (g.empty()) continue;
        const double bound = c * 1.5 / (1.0 - fp.gamma) * std::pow(10.0, -p) * contour_norm(g, 1.0 - fp.gamma);
        CHECK(field_contribution(g, fp) <= bound * (1.0 + 1e-12));
    }
    // p = 0: the cutoff drops out of the scale
    const FieldProfile critical{1.0, 0.5, 0};
    CHECK(field_bound_constant(samples, critical, 0.5) > 0.0);
    CHECK_THROWS_AS(field_bound_constant(samples, FieldProfile{1.0, 1.0, 0}, 0.5), std::domain_error);
    CHECK(field_bound_constant(samples, FieldProfile{0.0, 0.5, 0}, 0.5) == 0.0);
}

TEST_CASE("logarithmic field estimate misses mass-one triangles") {
    const FieldProfile fp{1.0, 1.0, 0};
    const Contour unit({Triangle::from_sites(5, 5)});
    CHECK(log_field_bound(unit, fp) == 0.0);
    CHECK(field_contribution(unit, fp) > log_field_bound(unit, fp));
    const Contour wide({Triangle::from_sites(0, 63)});
    CHECK(field_contribution(wide, fp) <= log_field_bound(wide, fp));
}
