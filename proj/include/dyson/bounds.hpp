#pragma once

#include <span>
#include <string>
#include <vector>

#include "dyson/geometry.hpp"
#include "dyson/lattice.hpp"

/**
 * @file bounds.hpp
 * @brief Closed-form constants and energy lower bounds for the pure power-law chain.
 *
 * Everything here assumes J(d) = d^(-2+alpha) including J(1) = 1. W_alpha(L)
 * is the interaction of the block [1, L] with its near neighbourhood
 * [-L+1, 0] u [L+1, 2L] minus its interaction with everything further out;
 * positivity of W for every L is what makes the contour energy estimate work
 * without a large nearest-neighbour coupling.
 */
namespace dyson {

/// H_n^(k) = sum_{y=1}^n y^-k.
double harmonic(long n, double k);

/// W_alpha(L) from the defining double sum, outer tails via tail_sum.
double w_direct(long L, double alpha);

/// W_alpha(L) = 6H_L^(1-a) - 4H_{2L-1}^(1-a) + 8L H_{2L-1}^(2-a) - 6L H_L^(2-a) - 2L zeta(2-a).
double w_closed(long L, double alpha);

/// W_alpha(L+1) - W_alpha(L) from its simplified series.
double delta_w(long L, double alpha);

/// W_alpha(1..limit) in O(limit) from prefix harmonic tables; element L-1 holds W(L).
std::vector<double> w_values(double alpha, long limit);

/// L^alpha for alpha > 0, log L + 4 for alpha = 0.
double chi(double L, double alpha);

/// 2 (3 - 2^(1+alpha)) / (1 - alpha).
double zeta_star(double alpha);

/// (3/L^a) H_L^(1-a) - (2/L^a) H_{2L-1}^(1-a) - 4/L, which tends to (3 - 2^(1+a))/a.
double asymptotic_bracket(long L, double alpha);

/// Root of sum_n n^(-2+a) = 2 by bisection on [0, 0.5]; about 0.27135.
double alpha_star();
/// log(8/9) / log(2/3).
double alpha_bar();
/// log 3 / log 2 - 1.
double alpha_plus();

struct BoundReport {
    double alpha = 0.0;
    double zeta_alpha = 0.0;
    double zeta_star = 0.0;  ///< asymptotic constant; 1 plays this role at alpha = 0
    long threshold_L = 1;    ///< L1 (alpha > 0) or L2 (alpha = 0)
    long checked_up_to = 0;
    bool certified = false;
    long first_failure = 0;  ///< smallest L with W(L) < zeta chi(L), 0 if none
    double min_delta_w = 0.0;
    bool delta_w_positive = false;
};

inline constexpr long kDefaultSearchLimit = 10000;

/**
 * The constant zeta_alpha with W_alpha(L) >= zeta_alpha chi_alpha(L).
 *
 * L1 (resp. L2 at alpha = 0) is the last L <= search_limit where the
 * asymptotic bound W >= zeta* L^alpha (resp. W >= log L + 4) fails; zeta_alpha
 * is the minimum of W(L)/chi(L) over L <= L1 and the asymptotic constant.
 * Certification re-checks every L up to the limit. Throws std::domain_error
 * unless 0 <= alpha < alpha_star().
 */
BoundReport zeta_alpha(double alpha, long search_limit = kDefaultSearchLimit);

/// (3 - 2^(1+a)) / (a (1 - a)); throws std::domain_error outside (0, 1).
double c_alpha(double alpha);

/**
 * Which reading of the quasi-additivity constant to use.
 *
 * Printed: 1 - alpha / c^(alpha-1) - pi^2/(6c), negative for large c.
 * Corrected: 1 - alpha / c^(1-alpha) - pi^2/(6c), tends to 1.
 * Capped: Corrected clipped to the stated upper limit 1/2.
 */
enum class KcVariant { Printed, Corrected, Capped };

KcVariant parse_kc_variant(const std::string& name);
std::string to_string(KcVariant v);

struct KcValue {
    double value = 0.0;
    bool in_range = false;  ///< 0 < value <= 1/2
};

KcValue k_c(double alpha, double c, KcVariant variant);

/// sum over triangles of the sum of |h_x| over the triangle base (nested sites counted per triangle).
double field_contribution(const Contour& gamma0, const FieldProfile& fp);

/**
 * Smallest C with field_contribution <= C |h*| / (1 - gamma) L^-p ||Gamma||_{1-gamma}
 * over the samples, p = gamma + alpha - 1 and L = max(cutoff, 1). Empty
 * contours are skipped. Throws std::domain_error unless 0 < gamma < 1.
 */
double field_bound_constant(std::span<const Contour> samples, const FieldProfile& fp, double alpha);

/// 8 |h*| sum_T log |T|, the logarithmic field estimate at alpha = 0, gamma = 1.
double log_field_bound(const Contour& gamma0, const FieldProfile& fp);

}  // namespace dyson
