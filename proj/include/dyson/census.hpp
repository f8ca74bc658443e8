#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dyson/bounds.hpp"
#include "dyson/geometry.hpp"

namespace dyson {

inline constexpr long kMaxCensusMass = 4;
inline constexpr long kMaxCensusHorizon = 100000;

/// ceil(c m^4 + 2m): every contour of mass m through the origin fits in [-h, h].
long minimal_horizon(long m, double c);

/**
 * All contours of mass m whose base contains site 0.
 *
 * Triangle families are enumerated by increasing left endpoint with
 * compatibility pruning; a family is kept when it survives the
 * spins -> triangles round trip and groups into a single contour at the given
 * c. Consecutive pieces of one contour can sit at most c floor(m/2)^3 apart,
 * which bounds the search. Throws std::domain_error when m or horizon fall
 * outside [1, kMaxCensusMass] and [minimal_horizon, kMaxCensusHorizon].
 */
std::vector<Contour> enumerate_contours(long m, double c, long horizon);
std::vector<Contour> enumerate_contours(long m, double c);

struct EntropyCheck {
    long m = 0;
    double c = 0.0;
    double b = 0.0;
    double alpha = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
    long contour_count = 0;
};

/// sum over contours of exp(-b ||Gamma||_alpha) against 2m exp(-b chi_alpha(m)).
EntropyCheck entropy_check(long m, double c, double b, double alpha);
EntropyCheck entropy_check(const std::vector<Contour>& contours, long m, double c, double b, double alpha);

struct QuasiAdditivityReport {
    long samples = 0;
    std::uint64_t seed = 0;
    double c = 0.0;
    double alpha = 0.0;
    double alpha_prime = 0.0;
    double zeta_prime = 0.0;
    long contours_checked = 0;
    long violations = 0;            ///< conditional energy < (zeta'/2) ||Gamma||_alpha'
    double worst_margin = 0.0;      ///< min over contours of lhs - rhs
    long w_violations = 0;          ///< conditional energy < 1/2 sum W_alpha(|T|)
    double worst_w_margin = 0.0;
    long quasi_additive_violations = 0;  ///< conditional < (1/2) isolated energy
};

/// Seeded random chains (N <= 128, plus boundary); every contour of every sample is tested.
/// Throws std::domain_error unless alpha' <= alpha and alpha' < alpha_star().
QuasiAdditivityReport quasi_additivity_check(long samples, double c, double alpha, double alpha_prime,
                                             std::uint64_t seed);

/// One random spin configuration of the kind used by the checks above.
SpinConfiguration random_configuration(std::uint64_t seed);

struct PeierlsSum {
    double value = 0.0;
    double error_estimate = 0.0;
    bool divergent = false;
};

/**
 * 2 sum_{m >= 1} m exp(-rate chi_{alpha'}(m)).
 *
 * For alpha' = 0 this is 2 e^(-4 rate) zeta(rate - 1), evaluated through
 * tail_sum. For alpha' > 0 the first terms are summed directly and the rest
 * by Euler-Maclaurin around the incomplete-gamma integral. Divergent inputs
 * (rate <= 0, or rate <= 2 at alpha' = 0) are flagged, not thrown.
 */
PeierlsSum peierls_sum(double rate, double alpha_prime);

/// peierls_sum at rate beta K_c(alpha) zeta_{alpha'}.
PeierlsSum peierls_series(double beta, double alpha, double alpha_prime, double c, KcVariant variant);

enum class PeierlsRegime { ZeroField, DecayingField, Critical };
std::string to_string(PeierlsRegime r);

struct BetaCBound {
    double alpha = 0.0;
    double gamma = 0.0;
    double h_star = 0.0;
    double c = 0.0;
    KcVariant variant = KcVariant::Capped;
    PeierlsRegime regime = PeierlsRegime::ZeroField;

    double alpha_prime = 0.0;
    double zeta_prime = 0.0;
    double kc = 0.0;
    double field_constant = 0.0;    ///< empirical C of the field estimate (0 without field)
    double field_deficit = 0.0;     ///< subtracted from kc * zeta_prime
    double rate_per_beta = 0.0;     ///< kc * zeta_prime - field_deficit
    std::optional<double> beta_c;   ///< absent when the rate is not positive
    long L_required = 0;
    std::optional<double> h_threshold;
    std::string sample_set;
};

/**
 * Smallest beta with the Peierls bound below 1/2, minimised over a grid of
 * alpha'. Zero field follows the plain chain. With a decaying field, the
 * smallest cutoff L giving a positive rate is found first, using the
 * empirical field constant over a fixed sample set of contour shapes. On
 * the critical line gamma = 1 - alpha (alpha < alpha*) the largest admissible
 * |h*| is reported. Throws std::domain_error naming the violated hypothesis.
 */
BetaCBound beta_c_bound(double alpha, double gamma, double h_star, double c, KcVariant variant);

}  // namespace dyson
