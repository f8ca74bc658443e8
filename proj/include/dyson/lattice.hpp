#pragma once

#include <cstdint>
#include <span>
#include <vector>

/**
 * @file lattice.hpp
 * @brief Spin configurations, couplings and fields of the long-range Ising chain.
 *
 * The chain lives on Z with couplings J(1) = j1 and J(d) = d^(-2+alpha) for
 * d >= 2. A finite window [-N, N] carries the free spins; every site outside
 * the window is pinned to a uniform boundary value.
 *
 * Energies count disagreeing pairs and minus spins:
 *
 *   H = 1/2 sum_{x,y in window} J(|x-y|) [s_x != s_y]
 *     + sum_{x in window, y outside} J(|x-y|) [s_x != w]
 *     + sum_{x in window} h_x [s_x = -1]
 *
 * so a positive field amplitude favours plus spins. This differs from the
 * -sum h_x s_x convention by a constant and a factor two in h; no rescaling
 * is applied anywhere.
 */
namespace dyson {

enum class Boundary : std::int8_t { Plus = 1, Minus = -1 };

inline int boundary_sign(Boundary b) noexcept { return static_cast<int>(b); }

struct CouplingParams {
    double alpha = 0.0;
    double j1 = 1.0;

    /// Throws std::domain_error unless 0 <= alpha < 1 and j1 > 0.
    void validate() const;
};

struct FieldProfile {
    double h_star = 0.0;
    double gamma = 1.0;
    /// Sites with |x| < cutoff_L carry no field; 0 disables the cutoff.
    long cutoff_L = 0;

    void validate() const;
    [[nodiscard]] bool is_zero() const noexcept { return h_star == 0.0; }
};

/// J(d). Throws std::domain_error for d < 1.
double coupling_at(const CouplingParams& cp, long d);

/// sum_{d >= from_d} d^(-2+alpha), pure power law (j1 is not involved).
/// Prefix summation plus an Euler-Maclaurin remainder; accurate to ~1e-13.
double tail_sum(double alpha, long from_d);
inline double tail_sum(const CouplingParams& cp, long from_d) { return tail_sum(cp.alpha, from_d); }

/// sum_{d >= from_d} J(d), i.e. tail_sum with the d = 1 term replaced by j1.
double coupling_tail(const CouplingParams& cp, long from_d);

/// h_x, honouring the cutoff.
double field_at(const FieldProfile& fp, long x);

class SpinConfiguration {
public:
    /// All spins equal to the boundary value.
    SpinConfiguration(long window_radius, Boundary boundary);
    /// Throws std::invalid_argument unless spins has 2N+1 entries of +-1.
    SpinConfiguration(long window_radius, std::vector<std::int8_t> spins, Boundary boundary);

    [[nodiscard]] long window_radius() const noexcept { return radius_; }
    [[nodiscard]] long size() const noexcept { return static_cast<long>(spins_.size()); }
    [[nodiscard]] Boundary boundary() const noexcept { return boundary_; }
    [[nodiscard]] std::span<const std::int8_t> spins() const noexcept { return spins_; }

    [[nodiscard]] bool in_window(long x) const noexcept { return x >= -radius_ && x <= radius_; }
    /// Spin at any site of Z; sites outside the window report the boundary.
    [[nodiscard]] int spin(long x) const noexcept {
        return in_window(x) ? spins_[static_cast<std::size_t>(x + radius_)] : boundary_sign(boundary_);
    }
    void set(long x, int value);
    void flip(long x);

    /// Global spin flip, boundary included.
    [[nodiscard]] SpinConfiguration negated() const;

    friend bool operator==(const SpinConfiguration&, const SpinConfiguration&) = default;

private:
    long radius_;
    std::vector<std::int8_t> spins_;
    Boundary boundary_;
};

struct EnergyBreakdown {
    double bulk = 0.0;
    double boundary = 0.0;
    double field = 0.0;
    double total = 0.0;
};

EnergyBreakdown hamiltonian(const SpinConfiguration& sigma, const CouplingParams& cp, const FieldProfile& fp);

/// H(sigma with x flipped) - H(sigma) in O(window). Throws std::domain_error if x is outside.
double flip_cost(const SpinConfiguration& sigma, const CouplingParams& cp, const FieldProfile& fp, long x);

/**
 * Couplings and boundary tails of one window, precomputed.
 *
 * Shared by the exact enumerator and the Monte Carlo engine. pair(d) covers
 * 0 <= d <= 2N (pair(0) is zero); boundary_tail(x) is the total coupling of
 * site x to the complement of the window.
 */
class WindowCouplings {
public:
    WindowCouplings(const CouplingParams& cp, const FieldProfile& fp, long window_radius);

    [[nodiscard]] long window_radius() const noexcept { return radius_; }
    [[nodiscard]] long size() const noexcept { return 2 * radius_ + 1; }
    [[nodiscard]] double pair(long d) const noexcept { return pair_[static_cast<std::size_t>(d)]; }
    [[nodiscard]] std::span<const double> pairs() const noexcept { return pair_; }
    /// Index i runs over 0..2N (site x = i - N).
    [[nodiscard]] double boundary_tail(long i) const noexcept { return tail_[static_cast<std::size_t>(i)]; }
    [[nodiscard]] double field(long i) const noexcept { return field_[static_cast<std::size_t>(i)]; }

    /// Full energy of a spin array in index order.
    [[nodiscard]] double energy(std::span<const std::int8_t> spins, Boundary boundary) const;

private:
    long radius_;
    std::vector<double> pair_;
    std::vector<double> tail_;
    std::vector<double> field_;
};

struct ExactMarginal {
    double log_partition = 0.0;
    double partition = 0.0;  ///< may overflow to inf; log_partition stays finite
    double prob_origin_minus = 0.0;
};

inline constexpr long kMaxExactWindowRadius = 10;

/// Brute force over all 2^(2N+1) window configurations (Gray-code order).
/// Throws std::domain_error if window_radius > kMaxExactWindowRadius.
ExactMarginal exact_partition(const CouplingParams& cp, const FieldProfile& fp, long window_radius,
                              Boundary boundary, double beta);

}  // namespace dyson
