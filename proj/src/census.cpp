#include "dyson/census.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <stdexcept>

#include <boost/math/special_functions/gamma.hpp>

namespace dyson {

long minimal_horizon(long m, double c) {
    const double md = static_cast<double>(m);
    return static_cast<long>(std::ceil(c * md * md * md * md + 2.0 * md));
}

namespace {

struct Enumerator {
    long m;
    double c;
    long horizon;
    long gap_max;
    std::vector<Triangle> chosen;
    std::vector<Contour> found;

    bool compatible(const Triangle& t) const {
        for (const auto& s : chosen) {
            const bool crossing = s.first_site() < t.first_site() && t.first_site() <= s.last_site() &&
                                  s.last_site() < t.last_site();
            if (crossing) return false;
            if (triangle_distance(s, t) < std::min(s.mass(), t.mass())) return false;
        }
        return true;
    }

    bool covers_origin() const {
        return std::any_of(chosen.begin(), chosen.end(), [](const Triangle& t) { return t.contains(0); });
    }

    void accept() {
        if (!covers_origin()) return;
        TriangleFamily family{chosen};
        std::sort(family.triangles.begin(), family.triangles.end());
        const auto sigma = triangles_to_spins(family, horizon, Boundary::Plus);
        if (build_triangles(sigma) != family) return;
        auto cfg = group_contours(family, c);
        if (cfg.contours.size() == 1) found.push_back(std::move(cfg.contours.front()));
    }

    void extend(long remaining, long prev_first, long reach) {
        if (remaining == 0) {
            accept();
            return;
        }
        const long hi = std::min(horizon, reach + 1 + gap_max);
        for (long a = prev_first + 1; a <= hi; ++a) {
            if (a > 0 && !covers_origin()) return;  // later pieces start right of 0
            for (long k = 1; k <= remaining && a + k - 1 <= horizon; ++k) {
                const auto t = Triangle::from_sites(a, a + k - 1);
                if (!compatible(t)) continue;
                chosen.push_back(t);
                extend(remaining - k, a, std::max(reach, t.last_site()));
                chosen.pop_back();
            }
        }
    }
};

}  // namespace

std::vector<Contour> enumerate_contours(long m, double c, long horizon) {
    if (m < 1 || m > kMaxCensusMass) {
        throw std::domain_error("contour enumeration supports 1 <= m <= " + std::to_string(kMaxCensusMass) +
                                ", got m = " + std::to_string(m));
    }
    if (!(c > 1.0)) throw std::domain_error("grouping constant c must exceed 1");
    if (horizon < minimal_horizon(m, c)) {
        throw std::domain_error("horizon " + std::to_string(horizon) + " is below c m^4 + 2m = " +
                                std::to_string(minimal_horizon(m, c)));
    }
    if (horizon > kMaxCensusHorizon) {
        throw std::domain_error("horizon " + std::to_string(horizon) + " exceeds the enumeration guard " +
                                std::to_string(kMaxCensusHorizon));
    }

    const long half = m / 2;
    Enumerator e{m, c, horizon, static_cast<long>(std::floor(c * static_cast<double>(half * half * half))), {}, {}};
    const long span = m + (m - 1) * (e.gap_max + 1);
    const long first_min = std::max(-horizon, -span);

    for (long a = first_min; a <= 0; ++a) {
        for (long k = 1; k <= m; ++k) {
            const auto t = Triangle::from_sites(a, a + k - 1);
            e.chosen.push_back(t);
            e.extend(m - k, a, t.last_site());
            e.chosen.pop_back();
        }
    }
    std::sort(e.found.begin(), e.found.end());
    e.found.erase(std::unique(e.found.begin(), e.found.end()), e.found.end());
    return e.found;
}

std::vector<Contour> enumerate_contours(long m, double c) { return enumerate_contours(m, c, minimal_horizon(m, c)); }

EntropyCheck entropy_check(const std::vector<Contour>& contours, long m, double c, double b, double alpha) {
    if (!(b > 0.0)) throw std::domain_error("entropy check needs b > 0");
    EntropyCheck r{m, c, b, alpha, 0.0, 0.0, false, static_cast<long>(contours.size())};
    for (const auto& g : contours) r.lhs += std::exp(-b * contour_norm(g, alpha));
    r.rhs = 2.0 * static_cast<double>(m) * std::exp(-b * chi(static_cast<double>(m), alpha));
    r.pass = r.lhs <= r.rhs;
    return r;
}

EntropyCheck entropy_check(long m, double c, double b, double alpha) {
    return entropy_check(enumerate_contours(m, c), m, c, b, alpha);
}

// ---------------------------------------------------------------------------

SpinConfiguration random_configuration(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    const long radius = 8 + static_cast<long>(rng() % 121);  // 8..128
    SpinConfiguration sigma(radius, Boundary::Plus);
    if (rng() % 2 == 0) {
        const double p = 0.02 + 0.48 * uniform();
        for (long x = -radius; x <= radius; ++x) {
            if (uniform() < p) sigma.set(x, -1);
        }
    } else {
        // alternating runs, lengths up to a quarter of the window
        const long max_run = std::max<long>(1, (2 * radius + 1) / 4);
        int s = rng() % 2 == 0 ? 1 : -1;
        for (long x = -radius; x <= radius;) {
            const long len = 1 + static_cast<long>(rng() % static_cast<std::uint64_t>(max_run));
            for (long k = 0; k < len && x <= radius; ++k, ++x) sigma.set(x, s);
            s = -s;
        }
    }
    return sigma;
}

QuasiAdditivityReport quasi_additivity_check(long samples, double c, double alpha, double alpha_prime,
                                             std::uint64_t seed) {
    if (alpha_prime > alpha) throw std::domain_error("need alpha' <= alpha");
    const auto bound = zeta_alpha(alpha_prime);
    const CouplingParams cp{alpha, 1.0};
    const auto w_table = w_values(alpha, 2 * 128 + 1);

    QuasiAdditivityReport r;
    r.samples = samples;
    r.seed = seed;
    r.c = c;
    r.alpha = alpha;
    r.alpha_prime = alpha_prime;
    r.zeta_prime = bound.zeta_alpha;
    r.worst_margin = std::numeric_limits<double>::infinity();
    r.worst_w_margin = std::numeric_limits<double>::infinity();

    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    std::mt19937_64 master(seq);
    for (long s = 0; s < samples; ++s) {
        const auto sigma = random_configuration(master());
        const auto cfg = contours_of(sigma, c);
        const double total = triangles_energy(cfg.all_triangles(), cp);
        for (const auto& g : cfg.contours) {
            std::vector<Triangle> rest;
            for (const auto& other : cfg.contours) {
                if (&other == &g) continue;
                rest.insert(rest.end(), other.triangles().begin(), other.triangles().end());
            }
            const double cond = total - triangles_energy(rest, cp);
            const double rhs = 0.5 * bound.zeta_alpha * contour_norm(g, alpha_prime);
            double w_half = 0.0;
            for (const auto& t : g.triangles()) w_half += 0.5 * w_table[static_cast<std::size_t>(t.mass() - 1)];

            ++r.contours_checked;
            r.worst_margin = std::min(r.worst_margin, cond - rhs);
            r.worst_w_margin = std::min(r.worst_w_margin, cond - w_half);
            if (cond < rhs) ++r.violations;
            if (cond < w_half) ++r.w_violations;
            if (cond < 0.5 * contour_energy(g, cp)) ++r.quasi_additive_violations;
        }
    }
    if (r.contours_checked == 0) r.worst_margin = r.worst_w_margin = 0.0;
    return r;
}

// ---------------------------------------------------------------------------

PeierlsSum peierls_sum(double rate, double alpha_prime) {
    PeierlsSum out;
    if (!(alpha_prime >= 0.0)) throw std::domain_error("alpha' must be non-negative");
    if (std::isinf(rate) && rate > 0) return out;

    if (alpha_prime == 0.0) {
        // 2 sum m^(1-rate) e^(-4 rate) = 2 e^(-4 rate) zeta(rate - 1)
        if (!(rate > 2.0)) {
            out.divergent = true;
            out.value = std::numeric_limits<double>::infinity();
            return out;
        }
        out.value = 2.0 * std::exp(-4.0 * rate) * tail_sum(3.0 - rate, 1);
        out.error_estimate = 1e-13 * out.value;
        return out;
    }
    if (!(rate > 0.0)) {
        out.divergent = true;
        out.value = std::numeric_limits<double>::infinity();
        return out;
    }

    const double a = alpha_prime;
    const double b = rate;
    constexpr long head = 256;
    double sum = 0.0;
    for (long m = head - 1; m >= 1; --m) {
        const double md = static_cast<double>(m);
        sum += md * std::exp(-b * std::pow(md, a));
    }

    // Euler-Maclaurin from M = head: integral + f/2 - f'/12 + f'''/720, with
    // f(x) = x e^u, u = -b x^a, u' = a u / x.
    const double M = static_cast<double>(head);
    const double u = -b * std::pow(M, a);
    const double eu = std::exp(u);
    const double f = M * eu;
    const double f1 = eu * (1.0 + a * u);
    const double f3 = a * eu * u * (a * a * u * u + 3.0 * a * a * u + a * a - 1.0) / (M * M);

    const double s = 2.0 / a;
    const double z = -u;
    double integral = 0.0;
    const double q = boost::math::gamma_q(s, z);
    if (q > 0.0) integral = std::exp(std::lgamma(s) + std::log(q) - std::log(a) - s * std::log(b));

    sum += integral + 0.5 * f - f1 / 12.0 + f3 / 720.0;
    out.value = 2.0 * sum;
    out.error_estimate = 2.0 * std::abs(f3) / 720.0;
    return out;
}

PeierlsSum peierls_series(double beta, double alpha, double alpha_prime, double c, KcVariant variant) {
    if (!(beta >= 0.0)) throw std::domain_error("beta must be non-negative");
    if (alpha_prime > alpha) throw std::domain_error("need alpha' <= alpha");
    const auto kc = k_c(alpha, c, variant);
    if (!(kc.value > 0.0)) {
        throw std::domain_error("K_c(alpha) = " + std::to_string(kc.value) + " is not positive for the " +
                                to_string(variant) + " variant");
    }
    const double zeta = zeta_alpha(alpha_prime).zeta_alpha;
    return peierls_sum(beta * kc.value * zeta, alpha_prime);
}

std::string to_string(PeierlsRegime r) {
    switch (r) {
        case PeierlsRegime::ZeroField: return "zero-field";
        case PeierlsRegime::DecayingField: return "decaying-field";
        case PeierlsRegime::Critical: return "critical";
    }
    return "unknown";
}

namespace {

constexpr double kHalf = 0.5;

// Smallest rate with peierls_sum(rate) < 1/2, to relative precision 1e-12.
double critical_rate(double alpha_prime) {
    auto below = [alpha_prime](double rate) {
        const auto s = peierls_sum(rate, alpha_prime);
        return !s.divergent && s.value < kHalf;
    };
    double lo = alpha_prime == 0.0 ? 2.0 : 0.0;
    double hi = std::max(1.0, 2.0 * lo);
    while (!below(hi)) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw std::runtime_error("Peierls bound does not drop below 1/2");
    }
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        (below(mid) ? hi : lo) = mid;
    }
    return hi;
}

std::vector<double> alpha_prime_grid(double upper_inclusive, double lower_exclusive, bool include_zero) {
    const double astar = alpha_star();
    std::vector<double> grid;
    if (include_zero && lower_exclusive < 0.0) grid.push_back(0.0);
    for (int k = 1; k < 100; ++k) {
        const double a = 0.01 * k;
        if (a >= astar || a > upper_inclusive) break;
        if (a > lower_exclusive) grid.push_back(a);
    }
    if (upper_inclusive < astar && upper_inclusive > lower_exclusive && upper_inclusive > 0.0 &&
        std::find(grid.begin(), grid.end(), upper_inclusive) == grid.end()) {
        grid.push_back(upper_inclusive);
    }
    return grid;
}

Contour shifted(const Contour& g, long offset) {
    std::vector<Triangle> ts;
    for (const auto& t : g.triangles()) ts.push_back(Triangle::from_sites(t.first_site() + offset, t.last_site() + offset));
    return Contour(std::move(ts));
}

// Shapes normalised to start at site 0.
std::vector<Contour> field_sample_shapes(double c) {
    std::vector<Contour> shapes;
    for (long m = 1; m <= 32; ++m) shapes.emplace_back(std::vector<Triangle>{Triangle::from_sites(0, m - 1)});
    for (long m = 64; m <= 4096; m *= 2) shapes.emplace_back(std::vector<Triangle>{Triangle::from_sites(0, m - 1)});
    for (long m = 1; m <= 2; ++m) {
        for (const auto& g : enumerate_contours(m, c)) {
            if (g.triangles().size() > 1) shapes.push_back(shifted(g, -g.min_site()));
        }
    }
    return shapes;
}

constexpr const char* kSampleSetDescription =
    "single triangles of mass 1..32 and 64..4096 (powers of two) plus multi-triangle contours of mass 2, "
    "each placed with its left end at the cutoff L and centred on the origin";

std::vector<Contour> place_samples(const std::vector<Contour>& shapes, long cutoff) {
    std::vector<Contour> out;
    out.reserve(2 * shapes.size());
    for (const auto& g : shapes) {
        out.push_back(shifted(g, cutoff));
        out.push_back(shifted(g, -(g.max_site() + 1) / 2));
    }
    return out;
}

}  // namespace

BetaCBound beta_c_bound(double alpha, double gamma, double h_star, double c, KcVariant variant) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in [0, 1)");
    if (!(c > 1.0)) throw std::domain_error("grouping constant c must exceed 1");
    if (!std::isfinite(h_star)) throw std::domain_error("h_star must be finite");

    const double astar = alpha_star();
    BetaCBound r;
    r.alpha = alpha;
    r.gamma = gamma;
    r.h_star = h_star;
    r.c = c;
    r.variant = variant;

    const auto kc = k_c(alpha, c, variant);
    if (!(kc.value > 0.0)) {
        throw std::domain_error("K_c(alpha) = " + std::to_string(kc.value) + " <= 0 for the " + to_string(variant) +
                                " variant at c = " + std::to_string(c));
    }
    r.kc = kc.value;

    constexpr double eps = 1e-12;
    const double h_abs = std::abs(h_star);
    if (h_abs == 0.0) {
        r.regime = PeierlsRegime::ZeroField;
    } else {
        if (!(gamma > 0.0)) throw std::domain_error("gamma must be positive");
        if (gamma > std::max(1.0 - alpha, 1.0 - astar) + eps) {
            r.regime = PeierlsRegime::DecayingField;
        } else if (std::abs(gamma - (1.0 - alpha)) <= eps && alpha < astar) {
            r.regime = PeierlsRegime::Critical;
        } else if (gamma <= 1.0 - alpha + eps) {
            throw std::domain_error("gamma <= 1-alpha: the field outweighs the interaction (need gamma > 1-alpha)");
        } else {
            throw std::domain_error("gamma <= 1-alpha_star: need gamma > max{1-alpha, 1-alpha_star}");
        }
    }

    std::map<double, double> rate_cache;
    auto rate_for = [&rate_cache](double ap) {
        auto it = rate_cache.find(ap);
        if (it == rate_cache.end()) it = rate_cache.emplace(ap, critical_rate(ap)).first;
        return it->second;
    };
    auto zeta_for = [](double ap) { return zeta_alpha(ap).zeta_alpha; };

    auto consider = [&r](double ap, double zeta, double deficit, double constant, long L, double beta) {
        if (!r.beta_c || beta < *r.beta_c) {
            r.beta_c = beta;
            r.alpha_prime = ap;
            r.zeta_prime = zeta;
            r.field_deficit = deficit;
            r.field_constant = constant;
            r.rate_per_beta = r.kc * zeta - deficit;
            r.L_required = L;
        }
    };

    if (r.regime == PeierlsRegime::ZeroField) {
        for (double ap : alpha_prime_grid(alpha, -1.0, true)) {
            const double zeta = zeta_for(ap);
            consider(ap, zeta, 0.0, 0.0, 0, rate_for(ap) / (r.kc * zeta));
        }
    } else {
        const auto shapes = field_sample_shapes(c);
        r.sample_set = kSampleSetDescription;

        if (r.regime == PeierlsRegime::Critical) {
            // alpha' = alpha, no cutoff, L^-p = 1
            const double ap = alpha;
            const double zeta = zeta_for(ap);
            const FieldProfile fp{h_star, gamma, 0};
            const auto placed = place_samples(shapes, 0);
            double constant = 0.0;
            double deficit = 0.0;
            if (alpha == 0.0) {
                for (const auto& g : placed) constant = std::max(constant, field_contribution(g, fp) / (h_abs * contour_norm(g, 0.0)));
                r.h_threshold = r.kc * zeta / constant;
                deficit = constant * h_abs;
            } else {
                constant = field_bound_constant(placed, fp, alpha);
                r.h_threshold = r.kc * zeta * (1.0 - gamma) / constant;
                deficit = constant * h_abs / (1.0 - gamma);
            }
            r.alpha_prime = ap;
            r.zeta_prime = zeta;
            r.field_constant = constant;
            r.field_deficit = deficit;
            r.rate_per_beta = r.kc * zeta - deficit;
            if (r.rate_per_beta > 0.0) r.beta_c = rate_for(ap) / r.rate_per_beta;
        } else {
            // Deficit at cutoff L; gamma < 1 goes through the field_bound_constant form,
            // gamma >= 1 is normalised by ||Gamma||_alpha' directly.
            std::map<std::pair<long, double>, std::pair<double, double>> deficit_cache;
            auto deficit_at = [&](long L, double ap) {
                const double key_ap = gamma < 1.0 ? -1.0 : ap;
                auto key = std::make_pair(L, key_ap);
                if (auto it = deficit_cache.find(key); it != deficit_cache.end()) return it->second;
                const FieldProfile fp{h_star, gamma, L};
                const auto placed = place_samples(shapes, L);
                std::pair<double, double> value;
                if (gamma < 1.0) {
                    const double constant = field_bound_constant(placed, fp, alpha);
                    const double p = gamma + alpha - 1.0;
                    value = {constant * h_abs / (1.0 - gamma) * std::pow(static_cast<double>(std::max<long>(L, 1)), -p),
                             constant};
                } else {
                    double worst = 0.0;
                    for (const auto& g : placed) worst = std::max(worst, field_contribution(g, fp) / contour_norm(g, ap));
                    value = {worst, worst / h_abs};
                }
                deficit_cache.emplace(key, value);
                return value;
            };

            const double lower = gamma < 1.0 ? 1.0 - gamma : -1.0;
            const auto grid = alpha_prime_grid(alpha, lower, alpha == 0.0 || gamma >= 1.0);
            if (grid.empty()) throw std::domain_error("no admissible alpha' in (1-gamma, min{alpha, alpha_star})");

            for (double ap : grid) {
                const double zeta = zeta_for(ap);
                const double target = r.kc * zeta;
                auto positive = [&](long L) { return deficit_at(L, ap).first < target; };
                long hi = 1;
                while (!positive(hi)) {
                    hi *= 2;
                    if (hi > (1L << 40)) break;
                }
                if (hi > (1L << 40)) continue;
                long lo = hi / 2;  // lo fails (or is 0)
                while (hi - lo > 1) {
                    const long mid = lo + (hi - lo) / 2;
                    (positive(mid) ? hi : lo) = mid;
                }
                const auto [deficit, constant] = deficit_at(hi, ap);
                consider(ap, zeta, deficit, constant, hi, rate_for(ap) / (target - deficit));
            }
            if (!r.beta_c) throw std::domain_error("no cutoff L up to 2^40 makes the Peierls rate positive");
        }
    }

    // Nudge so the bound holds strictly at the reported value.
    if (r.beta_c) {
        double beta = *r.beta_c;
        for (int k = 0; k < 64 && !(peierls_sum(beta * r.rate_per_beta, r.alpha_prime).value < kHalf); ++k) {
            beta *= 1.0 + 1e-12;
        }
        r.beta_c = beta;
    }
    return r;
}

}  // namespace dyson
