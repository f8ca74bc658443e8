#include "dyson/lattice.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>

namespace dyson {

void CouplingParams::validate() const {
    if (!(alpha >= 0.0 && alpha < 1.0)) {
        throw std::domain_error("coupling exponent alpha must lie in [0, 1), got " + std::to_string(alpha));
    }
    if (!(j1 > 0.0)) {
        throw std::domain_error("nearest-neighbour coupling j1 must be positive");
    }
}

void FieldProfile::validate() const {
    if (!std::isfinite(h_star)) throw std::domain_error("field amplitude h_star must be finite");
    if (!(gamma > 0.0)) throw std::domain_error("field decay exponent gamma must be positive");
    if (cutoff_L < 0) throw std::domain_error("field cutoff L must be non-negative");
}

double coupling_at(const CouplingParams& cp, long d) {
    if (d < 1) throw std::domain_error("coupling distance must be >= 1, got " + std::to_string(d));
    if (d == 1) return cp.j1;
    return std::pow(static_cast<double>(d), cp.alpha - 2.0);
}

double tail_sum(double alpha, long from_d) {
    if (!(alpha < 1.0)) throw std::domain_error("tail sum diverges for alpha >= 1");
    if (from_d < 1) throw std::domain_error("tail sum must start at d >= 1");

    const double s = 2.0 - alpha;
    const long prefix = std::max<long>(64, static_cast<long>(std::ceil(10.0 / (1.0 - alpha))));
    const double m = static_cast<double>(from_d + prefix);

    // Euler-Maclaurin remainder for sum_{d >= m} d^-s, through the f''' term.
    const double fm = std::pow(m, -s);
    double rest = m * fm / (s - 1.0)            // integral m^(1-s)/(s-1)
                  + 0.5 * fm                    // f(m)/2
                  + s * fm / (12.0 * m)         // -f'(m)/12
                  - s * (s + 1.0) * (s + 2.0) * fm / (720.0 * m * m * m);  // f'''(m)/720

    // Smallest terms first.
    for (long d = from_d + prefix - 1; d >= from_d; --d) rest += std::pow(static_cast<double>(d), -s);
    return rest;
}

double coupling_tail(const CouplingParams& cp, long from_d) {
    const double t = tail_sum(cp.alpha, from_d);
    return from_d == 1 ? t - 1.0 + cp.j1 : t;
}

double field_at(const FieldProfile& fp, long x) {
    const long ax = x < 0 ? -x : x;
    if (ax < fp.cutoff_L || fp.h_star == 0.0) return 0.0;
    return fp.h_star * std::pow(1.0 + static_cast<double>(ax), -fp.gamma);
}

// ---------------------------------------------------------------------------

SpinConfiguration::SpinConfiguration(long window_radius, Boundary boundary)
    : radius_(window_radius), boundary_(boundary) {
    if (window_radius < 0) throw std::invalid_argument("window radius must be non-negative");
    spins_.assign(static_cast<std::size_t>(2 * window_radius + 1), static_cast<std::int8_t>(boundary_sign(boundary)));
}

SpinConfiguration::SpinConfiguration(long window_radius, std::vector<std::int8_t> spins, Boundary boundary)
    : radius_(window_radius), spins_(std::move(spins)), boundary_(boundary) {
    if (window_radius < 0) throw std::invalid_argument("window radius must be non-negative");
    if (static_cast<long>(spins_.size()) != 2 * window_radius + 1) {
        throw std::invalid_argument("expected " + std::to_string(2 * window_radius + 1) + " spins, got " +
                                    std::to_string(spins_.size()));
    }
    for (auto s : spins_) {
        if (s != 1 && s != -1) throw std::invalid_argument("spin values must be +1 or -1");
    }
}

void SpinConfiguration::set(long x, int value) {
    if (!in_window(x)) throw std::domain_error("site " + std::to_string(x) + " outside window");
    if (value != 1 && value != -1) throw std::invalid_argument("spin values must be +1 or -1");
    spins_[static_cast<std::size_t>(x + radius_)] = static_cast<std::int8_t>(value);
}

void SpinConfiguration::flip(long x) {
    if (!in_window(x)) throw std::domain_error("site " + std::to_string(x) + " outside window");
    auto& s = spins_[static_cast<std::size_t>(x + radius_)];
    s = static_cast<std::int8_t>(-s);
}

SpinConfiguration SpinConfiguration::negated() const {
    std::vector<std::int8_t> flipped(spins_.size());
    std::transform(spins_.begin(), spins_.end(), flipped.begin(), [](std::int8_t s) { return static_cast<std::int8_t>(-s); });
    return {radius_, std::move(flipped), boundary_ == Boundary::Plus ? Boundary::Minus : Boundary::Plus};
}

// ---------------------------------------------------------------------------

WindowCouplings::WindowCouplings(const CouplingParams& cp, const FieldProfile& fp, long window_radius)
    : radius_(window_radius) {
    cp.validate();
    fp.validate();
    if (window_radius < 0) throw std::invalid_argument("window radius must be non-negative");
    const long n = size();
    pair_.resize(static_cast<std::size_t>(2 * window_radius + 1));
    pair_[0] = 0.0;
    for (long d = 1; d <= 2 * window_radius; ++d) pair_[static_cast<std::size_t>(d)] = coupling_at(cp, d);

    tail_.resize(static_cast<std::size_t>(n));
    field_.resize(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        const long x = i - window_radius;
        // nearest outside sites are N+1 (right) and -N-1 (left)
        tail_[static_cast<std::size_t>(i)] = coupling_tail(cp, window_radius + 1 - x) + coupling_tail(cp, x + window_radius + 1);
        field_[static_cast<std::size_t>(i)] = field_at(fp, x);
    }
}

double WindowCouplings::energy(std::span<const std::int8_t> spins, Boundary boundary) const {
    const long n = size();
    const int w = boundary_sign(boundary);
    double e = 0.0;
    for (long i = 0; i < n; ++i) {
        const int si = spins[static_cast<std::size_t>(i)];
        for (long j = i + 1; j < n; ++j) {
            if (si != spins[static_cast<std::size_t>(j)]) e += pair_[static_cast<std::size_t>(j - i)];
        }
        if (si != w) e += tail_[static_cast<std::size_t>(i)];
        if (si == -1) e += field_[static_cast<std::size_t>(i)];
    }
    return e;
}

EnergyBreakdown hamiltonian(const SpinConfiguration& sigma, const CouplingParams& cp, const FieldProfile& fp) {
    const WindowCouplings wc(cp, fp, sigma.window_radius());
    const auto spins = sigma.spins();
    const long n = sigma.size();
    const int w = boundary_sign(sigma.boundary());

    EnergyBreakdown out;
    for (long i = 0; i < n; ++i) {
        const int si = spins[static_cast<std::size_t>(i)];
        for (long j = i + 1; j < n; ++j) {
            if (si != spins[static_cast<std::size_t>(j)]) out.bulk += wc.pair(j - i);
        }
        if (si != w) out.boundary += wc.boundary_tail(i);
        if (si == -1) out.field += wc.field(i);
    }
    out.total = out.bulk + out.boundary + out.field;
    return out;
}

double flip_cost(const SpinConfiguration& sigma, const CouplingParams& cp, const FieldProfile& fp, long x) {
    if (!sigma.in_window(x)) throw std::domain_error("site " + std::to_string(x) + " outside window");
    cp.validate();
    fp.validate();
    const long radius = sigma.window_radius();
    const int sx = sigma.spin(x);

    // Flipping x toggles every pair (x, y): aligned pairs start to cost, anti-aligned ones stop.
    double local = 0.0;
    for (long y = -radius; y <= radius; ++y) {
        if (y == x) continue;
        local += coupling_at(cp, y > x ? y - x : x - y) * sigma.spin(y);
    }
    local += boundary_sign(sigma.boundary()) *
             (coupling_tail(cp, radius + 1 - x) + coupling_tail(cp, x + radius + 1));
    return sx * (local + field_at(fp, x));
}

ExactMarginal exact_partition(const CouplingParams& cp, const FieldProfile& fp, long window_radius,
                              Boundary boundary, double beta) {
    if (window_radius > kMaxExactWindowRadius) {
        throw std::domain_error("exact enumeration refused: window radius " + std::to_string(window_radius) +
                                " exceeds " + std::to_string(kMaxExactWindowRadius));
    }
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw std::domain_error("beta must be finite and non-negative");

    const WindowCouplings wc(cp, fp, window_radius);
    const long n = wc.size();
    const int w = boundary_sign(boundary);
    std::vector<std::int8_t> spins(static_cast<std::size_t>(n), 1);

    // local[i] = sum_j J(|i-j|) s_j + w * tail(i); flip cost of i is s_i * (local[i] + h_i).
    std::vector<double> local(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        double acc = w * wc.boundary_tail(i);
        for (long j = 0; j < n; ++j) acc += wc.pair(i > j ? i - j : j - i);
        local[static_cast<std::size_t>(i)] = acc;
    }

    double energy = wc.energy(spins, boundary);
    const auto origin = static_cast<std::size_t>(window_radius);

    // Streaming log-sum-exp over -beta*E for Z and for the origin-minus subset.
    double ref = -beta * energy;
    double z_acc = 1.0;
    double minus_acc = 0.0;

    const std::uint64_t count = std::uint64_t{1} << n;
    for (std::uint64_t k = 1; k < count; ++k) {
        const auto i = static_cast<std::size_t>(std::countr_zero(k));
        const int si = spins[i];
        energy += si * (local[i] + wc.field(static_cast<long>(i)));
        spins[i] = static_cast<std::int8_t>(-si);
        const double delta = -2.0 * si;
        for (long j = 0; j < n; ++j) {
            if (static_cast<std::size_t>(j) == i) continue;
            local[static_cast<std::size_t>(j)] += delta * wc.pair(j > static_cast<long>(i) ? j - static_cast<long>(i) : static_cast<long>(i) - j);
        }

        const double x = -beta * energy;
        if (x > ref) {
            const double scale = std::exp(ref - x);
            z_acc *= scale;
            minus_acc *= scale;
            ref = x;
        }
        const double weight = std::exp(x - ref);
        z_acc += weight;
        if (spins[origin] == -1) minus_acc += weight;
    }

    ExactMarginal out;
    out.log_partition = ref + std::log(z_acc);
    out.partition = std::exp(out.log_partition);
    out.prob_origin_minus = minus_acc / z_acc;
    return out;
}

}  // namespace dyson
