#include "dyson/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <tuple>

namespace dyson {

void SimParams::validate() const {
    coupling.validate();
    field.validate();
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::domain_error("beta must be finite and non-negative");
    if (window_radius < 0) throw std::domain_error("window_radius must be non-negative");
    if (sweeps < 1) throw std::domain_error("sweeps must be positive");
    if (burn_in < 0 || burn_in >= sweeps) throw std::domain_error("burn_in must satisfy 0 <= burn_in < sweeps");
    if (measure_every < 1) throw std::domain_error("measure_every must be >= 1");
}

std::vector<double> local_field_cache(const SpinConfiguration& sigma, const CouplingParams& cp) {
    const WindowCouplings wc(cp, FieldProfile{}, sigma.window_radius());
    const long n = wc.size();
    const auto s = sigma.spins();
    const int w = boundary_sign(sigma.boundary());
    std::vector<double> out(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        double acc = w * wc.boundary_tail(i);
        for (long j = 0; j < n; ++j) {
            if (j != i) acc += wc.pair(std::abs(i - j)) * s[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

MetropolisChain::MetropolisChain(const SimParams& params)
    : params_(params),
      couplings_((params.validate(), params.coupling), params.field, params.window_radius),
      sigma_(params.window_radius, params.boundary),
      rng_(params.seed) {
    const long n = couplings_.size();
    centred_.assign(static_cast<std::size_t>(2 * n - 1), 0.0);
    for (long k = 1; k < n; ++k) {
        centred_[static_cast<std::size_t>(n - 1 + k)] = couplings_.pair(k);
        centred_[static_cast<std::size_t>(n - 1 - k)] = couplings_.pair(k);
    }
    local_ = local_field_cache(sigma_, params_.coupling);
    field_.resize(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) field_[static_cast<std::size_t>(i)] = couplings_.field(i);
}

double MetropolisChain::flip_cost(long i) const noexcept {
    const auto u = static_cast<std::size_t>(i);
    return sigma_.spins()[u] * (local_[u] + field_[u]);
}

double MetropolisChain::acceptance_probability(long i) const noexcept {
    const double de = flip_cost(i);
    return de <= 0.0 ? 1.0 : std::exp(-params_.beta * de);
}

void MetropolisChain::flip(long i) noexcept {
    const long n = couplings_.size();
    const long radius = params_.window_radius;
    const int before = sigma_.spin(i - radius);
    sigma_.flip(i - radius);
    const double delta = -2.0 * before;
    const double* row = centred_.data() + (n - 1 - i);
    double* loc = local_.data();
    for (long j = 0; j < n; ++j) loc[j] += delta * row[j];
}

bool MetropolisChain::step() {
    const auto n = static_cast<std::uint64_t>(couplings_.size());
    // rejection sampling keeps the site choice exactly uniform
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t draw;
    do {
        draw = rng_();
    } while (draw >= limit);
    const auto i = static_cast<long>(draw % n);
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    const double de = flip_cost(i);
    if (de <= 0.0 || u < std::exp(-params_.beta * de)) {
        flip(i);
        return true;
    }
    return false;
}

long MetropolisChain::sweep() {
    long accepted = 0;
    for (long k = 0; k < couplings_.size(); ++k) accepted += step() ? 1 : 0;
    return accepted;
}

Measurement run(const SimParams& params) {
    params.validate();
    MetropolisChain chain(params);
    const long n = 2 * params.window_radius + 1;
    const auto origin = static_cast<std::size_t>(params.window_radius);

    std::vector<double> origin_samples;
    double magnetization = 0.0;
    long accepted = 0;
    for (long s = 0; s < params.sweeps; ++s) {
        accepted += chain.sweep();
        if (s < params.burn_in || (s - params.burn_in) % params.measure_every != 0) continue;
        const auto spins = chain.state().spins();
        origin_samples.push_back(spins[origin]);
        long total = 0;
        for (auto v : spins) total += v;
        magnetization += static_cast<double>(total) / static_cast<double>(n);
    }

    Measurement m;
    m.samples = static_cast<long>(origin_samples.size());
    m.acceptance_rate = static_cast<double>(accepted) / (static_cast<double>(params.sweeps) * static_cast<double>(n));
    if (m.samples == 0) return m;
    double sum = 0.0;
    for (double v : origin_samples) sum += v;
    m.mean_spin_origin = sum / static_cast<double>(m.samples);
    m.mean_magnetization = magnetization / static_cast<double>(m.samples);
    m.prob_origin_minus = 0.5 * (1.0 - m.mean_spin_origin);

    const long batches = std::min<long>(32, m.samples);
    const long per = m.samples / batches;
    if (batches >= 2) {
        std::vector<double> means(static_cast<std::size_t>(batches), 0.0);
        for (long b = 0; b < batches; ++b) {
            for (long k = 0; k < per; ++k) means[static_cast<std::size_t>(b)] += origin_samples[static_cast<std::size_t>(b * per + k)];
            means[static_cast<std::size_t>(b)] /= static_cast<double>(per);
        }
        double mu = 0.0;
        for (double v : means) mu += v;
        mu /= static_cast<double>(batches);
        double var = 0.0;
        for (double v : means) var += (v - mu) * (v - mu);
        var /= static_cast<double>(batches - 1);
        m.std_error = std::sqrt(var / static_cast<double>(batches));
    }
    return m;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream) {
    std::uint64_t z = master ^ (stream * 0x9e3779b97f4a7c15ULL);
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::vector<ScanRow> gap_scan(const ScanGrid& grid, const SimParams& base, std::uint64_t master_seed,
                              unsigned threads) {
    auto betas = grid.betas.empty() ? std::vector<double>{base.beta} : grid.betas;
    auto gammas = grid.gammas.empty() ? std::vector<double>{base.field.gamma} : grid.gammas;
    auto radii = grid.radii.empty() ? std::vector<long>{base.window_radius} : grid.radii;
    std::sort(betas.begin(), betas.end());
    std::sort(gammas.begin(), gammas.end());
    std::sort(radii.begin(), radii.end());

    std::vector<ScanRow> rows;
    for (double b : betas) {
        for (double g : gammas) {
            for (long r : radii) {
                ScanRow row;
                row.params = base;
                row.params.beta = b;
                row.params.field.gamma = g;
                row.params.window_radius = r;
                row.params.boundary = Boundary::Plus;
                row.params.validate();
                const auto index = static_cast<std::uint64_t>(rows.size());
                row.plus_seed = derive_seed(master_seed, 2 * index);
                row.minus_seed = derive_seed(master_seed, 2 * index + 1);
                row.params.seed = row.plus_seed;
                rows.push_back(row);
            }
        }
    }

    const std::size_t jobs = 2 * rows.size();
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(jobs, 1)));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t job = next++; job < jobs; job = next++) {
            auto& row = rows[job / 2];
            SimParams p = row.params;
            if (job % 2 == 1) {
                p.boundary = Boundary::Minus;
                p.seed = row.minus_seed;
                row.minus = run(p);
            } else {
                row.plus = run(p);
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    for (auto& row : rows) row.gap = row.plus.mean_spin_origin - row.minus.mean_spin_origin;
    return rows;
}

}  // namespace dyson
