#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "dyson/bounds.hpp"
#include "dyson/lattice.hpp"
#include "oracles.hpp"

using namespace dyson;

namespace {
constexpr double kZeta2 = 1.64493406684822643647;
constexpr double kZeta15 = 2.61237534868548834335;

FieldProfile no_field() { return FieldProfile{0.0, 1.0, 0}; }
}  // namespace

TEST_CASE("coupling_at follows the power law with a separate nearest-neighbour strength") {
    CHECK(coupling_at({0.5, 1.0}, 1) == 1.0);
    CHECK(coupling_at({0.0, 1.0}, 2) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(coupling_at({0.5, 1.0}, 4) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(coupling_at({0.3, 7.0}, 1) == 7.0);
    CHECK_THROWS_AS(coupling_at({0.5, 1.0}, 0), std::domain_error);
    for (long d = 1; d < 50; ++d) CHECK(coupling_at({0.7, 1.0}, d) > coupling_at({0.7, 1.0}, d + 1));
}

TEST_CASE("parameter validation") {
    CHECK_THROWS_AS((CouplingParams{1.0, 1.0}.validate()), std::domain_error);
    CHECK_THROWS_AS((CouplingParams{-0.1, 1.0}.validate()), std::domain_error);
    CHECK_THROWS_AS((CouplingParams{0.2, 0.0}.validate()), std::domain_error);
    CHECK_THROWS_AS((FieldProfile{1.0, 0.0, 0}.validate()), std::domain_error);
    CHECK_THROWS_AS((FieldProfile{1.0, 1.0, -1}.validate()), std::domain_error);
    CHECK_NOTHROW((FieldProfile{-3.0, 0.5, 4}.validate()));
}

TEST_CASE("field_at honours the cutoff") {
    const FieldProfile fp{2.0, 1.0, 3};
    CHECK(field_at(fp, 0) == 0.0);
    CHECK(field_at(fp, -2) == 0.0);
    CHECK(field_at(fp, 3) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(field_at(fp, -3) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(field_at(FieldProfile{1.0, 1.0, 0}, 0) == 1.0);
}

TEST_CASE("tail_sum against zeta values") {
    CHECK(tail_sum(0.0, 1) == doctest::Approx(kZeta2).epsilon(1e-14));
    CHECK(std::abs(tail_sum(0.0, 3) - (std::numbers::pi * std::numbers::pi / 6.0 - 1.25)) < 1e-12);
    CHECK(std::abs(tail_sum(0.5, 1) - kZeta15) < 1e-12);
    // Hurwitz zeta values, mpmath at 30 digits
    CHECK(std::abs(tail_sum(0.5, 100) - 0.200501249981771907421) < 1e-12);
    CHECK(std::abs(tail_sum(0.1, 7) - 0.205782334163848428570) < 1e-12);
    CHECK(std::abs(tail_sum(0.99, 5) - 98.5051475799308690340) < 1e-10);
    CHECK(std::abs(tail_sum(0.2, 1) - 1.88222961810282198015) < 1e-12);
    CHECK_THROWS_AS(tail_sum(1.0, 1), std::domain_error);
    CHECK_THROWS_AS(tail_sum(0.2, 0), std::domain_error);
}

TEST_CASE("tail_sum telescopes by one coupling") {
    for (double alpha : {0.0, 0.13, 0.5, 0.9}) {
        for (long d : {1L, 2L, 5L, 63L, 64L, 65L, 1000L, 123456L}) {
            CHECK(std::abs(tail_sum(alpha, d) - tail_sum(alpha, d + 1) - std::pow(static_cast<double>(d), alpha - 2.0)) <
                  1e-12);
        }
    }
}

TEST_CASE("tail_sum matches brute summation") {
    for (double alpha : {0.0, 0.27, 0.6}) {
        const oracle::TailTable tails(alpha, 300);
        for (long d : {1L, 2L, 17L, 100L, 300L}) CHECK(std::abs(tail_sum(alpha, d) - tails(d)) < 1e-11);
    }
}

TEST_CASE("tail_sum at the threshold exponent equals two") {
    CHECK(std::abs(tail_sum(alpha_star(), 1) - 2.0) < 1e-10);
    CHECK(tail_sum(0.2714, 1) == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("hamiltonian examples") {
    const CouplingParams cp{0.0, 1.0};
    SpinConfiguration plus(3, Boundary::Plus);
    CHECK(hamiltonian(plus, {0.4, 2.0}, {1.0, 0.5, 0}).total == 0.0);

    SpinConfiguration one(1, {1, -1, 1}, Boundary::Plus);
    const auto e = hamiltonian(one, cp, no_field());
    CHECK(e.total == doctest::Approx(2.0 * kZeta2).epsilon(1e-13));
    CHECK(e.total == doctest::Approx(e.bulk + e.boundary + e.field).epsilon(1e-15));
    CHECK(e.bulk == doctest::Approx(2.0).epsilon(1e-15));

    const auto f = hamiltonian(one, cp, FieldProfile{1.0, 1.0, 0});
    CHECK(f.field == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("hamiltonian agrees with the brute-force oracle") {
    std::mt19937_64 rng(20240601);
    for (double alpha : {0.0, 0.35, 0.8}) {
        const oracle::TailTable tails(alpha, 2 * 40 + 2);
        for (int k = 0; k < 40; ++k) {
            const long n = static_cast<long>(rng() % 40);
            const auto b = rng() % 2 ? Boundary::Plus : Boundary::Minus;
            const auto sigma = oracle::random_spins(rng, n, b, 0.3);
            const double j1 = 0.5 + static_cast<double>(rng() % 100) / 40.0;
            const FieldProfile fp{1.7, 0.6, static_cast<long>(rng() % 5)};
            const double expect = oracle::hamiltonian(sigma, alpha, j1, fp.h_star, fp.gamma, fp.cutoff_L, tails);
            CHECK(hamiltonian(sigma, {alpha, j1}, fp).total == doctest::Approx(expect).epsilon(1e-11));
        }
    }
}

TEST_CASE("global flip symmetry at zero field") {
    std::mt19937_64 rng(7);
    for (int k = 0; k < 1000; ++k) {
        const long n = static_cast<long>(rng() % 20);
        const auto sigma = oracle::random_spins(rng, n, Boundary::Plus, 0.4);
        const CouplingParams cp{static_cast<double>(rng() % 100) / 101.0, 1.0};
        const double a = hamiltonian(sigma, cp, no_field()).total;
        const double b = hamiltonian(sigma.negated(), cp, no_field()).total;
        CHECK(std::abs(a - b) < 1e-9);
    }
}

TEST_CASE("energy is non-decreasing in alpha") {
    std::mt19937_64 rng(99);
    for (int k = 0; k < 50; ++k) {
        const auto sigma = oracle::random_spins(rng, 12, Boundary::Plus, 0.35);
        double prev = -1.0;
        for (int a = 0; a <= 9; ++a) {
            const double e = hamiltonian(sigma, {0.1 * a, 1.0}, no_field()).total;
            CHECK(e >= prev - 1e-12);
            prev = e;
        }
    }
}

TEST_CASE("flip_cost examples and involution") {
    const CouplingParams cp{0.0, 1.0};
    SpinConfiguration plus(4, Boundary::Plus);
    CHECK(flip_cost(plus, cp, no_field(), 0) == doctest::Approx(2.0 * kZeta2).epsilon(1e-13));
    CHECK(flip_cost(plus, cp, FieldProfile{-3.0, 2.5, 0}, 0) == doctest::Approx(2.0 * kZeta2 - 3.0).epsilon(1e-13));

    std::mt19937_64 rng(5);
    auto sigma = oracle::random_spins(rng, 6, Boundary::Minus, 0.5);
    const FieldProfile fp{0.8, 0.7, 1};
    const double first = flip_cost(sigma, {0.3, 1.2}, fp, 2);
    sigma.flip(2);
    CHECK(first + flip_cost(sigma, {0.3, 1.2}, fp, 2) == doctest::Approx(0.0));
    CHECK_THROWS_AS(flip_cost(sigma, cp, fp, 7), std::domain_error);
}

TEST_CASE("flip_cost equals the energy difference") {
    std::mt19937_64 rng(11);
    for (int k = 0; k < 1000; ++k) {
        const long n = static_cast<long>(rng() % 16);
        const auto b = rng() % 2 ? Boundary::Plus : Boundary::Minus;
        auto sigma = oracle::random_spins(rng, n, b, 0.5);
        const CouplingParams cp{static_cast<double>(rng() % 90) / 100.0, 0.5 + static_cast<double>(rng() % 10) / 4.0};
        const FieldProfile fp{static_cast<double>(rng() % 11) / 5.0 - 1.0, 0.2 + static_cast<double>(rng() % 10) / 10.0,
                              static_cast<long>(rng() % 3)};
        const long x = static_cast<long>(rng() % static_cast<std::uint64_t>(2 * n + 1)) - n;
        const double before = hamiltonian(sigma, cp, fp).total;
        const double cost = flip_cost(sigma, cp, fp, x);
        sigma.flip(x);
        CHECK(std::abs(cost - (hamiltonian(sigma, cp, fp).total - before)) < 1e-9);
    }
}

TEST_CASE("SpinConfiguration validates its spins") {
    CHECK_THROWS_AS(SpinConfiguration(1, {1, 0, 1}, Boundary::Plus), std::invalid_argument);
    CHECK_THROWS_AS(SpinConfiguration(1, {1, 1}, Boundary::Plus), std::invalid_argument);
    SpinConfiguration s(2, Boundary::Minus);
    CHECK(s.spin(100) == -1);
    CHECK(s.spin(0) == -1);
    s.set(0, 1);
    CHECK(s.negated().spin(0) == -1);
    CHECK(s.negated().boundary() == Boundary::Plus);
}

TEST_CASE("WindowCouplings energy equals the hamiltonian") {
    std::mt19937_64 rng(3);
    for (int k = 0; k < 50; ++k) {
        const long n = 1 + static_cast<long>(rng() % 10);
        const auto sigma = oracle::random_spins(rng, n, rng() % 2 ? Boundary::Plus : Boundary::Minus, 0.4);
        const CouplingParams cp{0.45, 1.3};
        const FieldProfile fp{0.9, 0.4, 2};
        const WindowCouplings wc(cp, fp, n);
        CHECK(wc.energy(sigma.spins(), sigma.boundary()) == doctest::Approx(hamiltonian(sigma, cp, fp).total).epsilon(1e-12));
    }
}

namespace {
// Plain enumeration with full energy evaluation for every state.
double naive_prob_origin_minus(const CouplingParams& cp, const FieldProfile& fp, long n, Boundary b, double beta) {
    const long sites = 2 * n + 1;
    double z = 0.0, minus = 0.0;
    const oracle::TailTable tails(cp.alpha, 2 * n + 2);
    for (long mask = 0; mask < (1L << sites); ++mask) {
        std::vector<std::int8_t> s(static_cast<std::size_t>(sites));
        for (long i = 0; i < sites; ++i) s[static_cast<std::size_t>(i)] = (mask >> i) & 1 ? -1 : 1;
        const SpinConfiguration sigma(n, s, b);
        const double w = std::exp(-beta * oracle::hamiltonian(sigma, cp.alpha, cp.j1, fp.h_star, fp.gamma, fp.cutoff_L, tails));
        z += w;
        if (sigma.spin(0) == -1) minus += w;
    }
    return minus / z;
}
}  // namespace

TEST_CASE("exact_partition examples") {
    CHECK(exact_partition({0.3, 1.0}, {1.0, 0.5, 0}, 2, Boundary::Plus, 0.0).prob_origin_minus == doctest::Approx(0.5));

    for (double h : {0.0, 0.7, -1.5}) {
        const double beta = 0.8;
        const double cost = 2.0 * kZeta2 + h;
        const double expect = std::exp(-beta * cost) / (1.0 + std::exp(-beta * cost));
        const auto r = exact_partition({0.0, 1.0}, {h, 1.0, 0}, 0, Boundary::Plus, beta);
        CHECK(r.prob_origin_minus == doctest::Approx(expect).epsilon(1e-12));
        CHECK(std::log(r.partition) == doctest::Approx(r.log_partition).epsilon(1e-12));
    }
    CHECK(exact_partition({0.0, 1.0}, {1e6, 1.0, 0}, 0, Boundary::Plus, 1.0).prob_origin_minus < 1e-300);
    CHECK_THROWS_AS(exact_partition({0.0, 1.0}, no_field(), 11, Boundary::Plus, 1.0), std::domain_error);
}

TEST_CASE("exact_partition agrees with plain enumeration") {
    std::mt19937_64 rng(42);
    for (int k = 0; k < 12; ++k) {
        const long n = static_cast<long>(rng() % 4);
        const CouplingParams cp{static_cast<double>(rng() % 95) / 100.0, 0.5 + static_cast<double>(rng() % 8) / 4.0};
        const FieldProfile fp{static_cast<double>(rng() % 9) / 4.0 - 1.0, 0.3 + static_cast<double>(rng() % 8) / 8.0,
                              static_cast<long>(rng() % 2)};
        const auto b = rng() % 2 ? Boundary::Plus : Boundary::Minus;
        const double beta = static_cast<double>(rng() % 20) / 10.0;
        CHECK(exact_partition(cp, fp, n, b, beta).prob_origin_minus ==
              doctest::Approx(naive_prob_origin_minus(cp, fp, n, b, beta)).epsilon(1e-10));
    }
}
