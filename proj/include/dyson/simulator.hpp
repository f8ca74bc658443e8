#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dyson/lattice.hpp"

namespace dyson {

struct SimParams {
    CouplingParams coupling;
    FieldProfile field;
    double beta = 1.0;
    long window_radius = 0;
    Boundary boundary = Boundary::Plus;
    long sweeps = 1000;
    long burn_in = 100;
    std::uint64_t seed = 0;
    long measure_every = 1;

    /// Throws std::domain_error on beta < 0, negative radius, burn_in >= sweeps or measure_every < 1.
    void validate() const;
};

struct Measurement {
    double mean_spin_origin = 0.0;
    double mean_magnetization = 0.0;
    double prob_origin_minus = 0.0;
    double std_error = 0.0;  ///< of mean_spin_origin, batch means
    long samples = 0;
    double acceptance_rate = 0.0;
};

/// sum_{y != x} J(|x-y|) s_y for every window site, boundary tail included, in index order.
std::vector<double> local_field_cache(const SpinConfiguration& sigma, const CouplingParams& cp);

/**
 * Single-site Metropolis chain on one window.
 *
 * The local-field cache is kept in sync on every accepted flip, so a
 * proposal costs O(1) and an acceptance O(window). The chain starts from the
 * configuration aligned with the boundary.
 */
class MetropolisChain {
public:
    explicit MetropolisChain(const SimParams& params);

    [[nodiscard]] const SpinConfiguration& state() const noexcept { return sigma_; }
    [[nodiscard]] const std::vector<double>& local_fields() const noexcept { return local_; }

    /// Energy change of flipping window index i (site i - N).
    [[nodiscard]] double flip_cost(long i) const noexcept;
    /// min(1, exp(-beta * flip_cost(i))).
    [[nodiscard]] double acceptance_probability(long i) const noexcept;

    /// Unconditional flip of index i with cache update.
    void flip(long i) noexcept;
    /// One proposal; returns true if accepted.
    bool step();
    /// 2N+1 proposals; returns the number accepted.
    long sweep();

private:
    SimParams params_;
    WindowCouplings couplings_;
    SpinConfiguration sigma_;
    std::vector<double> centred_;  // J(|k|) at offset k + 2N, zero at k = 0
    std::vector<double> local_;
    std::vector<double> field_;
    std::mt19937_64 rng_;
};

/// Deterministic in params (seed included), bit for bit.
Measurement run(const SimParams& params);

/// splitmix64(master ^ stream) finalised; used to seed independent grid points.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream);

struct ScanGrid {
    std::vector<double> betas;
    std::vector<double> gammas;  ///< empty: keep the base gamma
    std::vector<long> radii;     ///< empty: keep the base radius
};

struct ScanRow {
    SimParams params;  ///< the plus run; the minus run differs in boundary and seed
    Measurement plus;
    Measurement minus;
    std::uint64_t plus_seed = 0;
    std::uint64_t minus_seed = 0;
    double gap = 0.0;  ///< plus.mean_spin_origin - minus.mean_spin_origin
};

/**
 * Paired +/- runs over the Cartesian grid, sorted by (beta, gamma, radius).
 * Seeds derive from the master seed and the canonical row index, so the
 * result does not depend on the number of worker threads.
 */
std::vector<ScanRow> gap_scan(const ScanGrid& grid, const SimParams& base, std::uint64_t master_seed,
                              unsigned threads = 0);

}  // namespace dyson
