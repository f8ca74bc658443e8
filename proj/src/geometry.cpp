#include "dyson/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <queue>
#include <stdexcept>

#include "dyson/bounds.hpp"

namespace dyson {

DualPoint DualPoint::from_value(double v) {
    const double shifted = v - 0.5;
    if (!std::isfinite(v) || std::floor(shifted) != shifted) {
        throw std::invalid_argument("dual-lattice coordinate must be a half-integer, got " + std::to_string(v));
    }
    return DualPoint{static_cast<long>(shifted)};
}

Triangle Triangle::from_sites(long first_site, long last_site) {
    if (last_site < first_site) throw std::invalid_argument("triangle base must be non-empty");
    return Triangle{DualPoint{first_site - 1}, DualPoint{last_site}};
}

long triangle_distance(const Triangle& a, const Triangle& b) noexcept {
    return std::min({distance(a.left, b.left), distance(a.left, b.right), distance(a.right, b.left),
                     distance(a.right, b.right)});
}

long TriangleFamily::total_mass() const noexcept {
    long m = 0;
    for (const auto& t : triangles) m += t.mass();
    return m;
}

std::vector<std::pair<std::size_t, std::size_t>> compatibility_violations(const TriangleFamily& family) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    const auto& ts = family.triangles;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        for (std::size_t j = i + 1; j < ts.size(); ++j) {
            if (triangle_distance(ts[i], ts[j]) < std::min(ts[i].mass(), ts[j].mass())) out.emplace_back(i, j);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

Contour::Contour(std::vector<Triangle> triangles) : triangles_(std::move(triangles)) {
    std::sort(triangles_.begin(), triangles_.end());
    for (const auto& t : triangles_) mass_ += t.mass();
}

std::vector<SiteInterval> Contour::base() const {
    std::vector<SiteInterval> out;
    for (const auto& t : triangles_) {  // sorted by left endpoint
        if (!out.empty() && t.first_site() <= out.back().hi + 1) {
            out.back().hi = std::max(out.back().hi, t.last_site());
        } else {
            out.push_back({t.first_site(), t.last_site()});
        }
    }
    return out;
}

bool Contour::base_contains(long x) const noexcept {
    return std::any_of(triangles_.begin(), triangles_.end(), [x](const Triangle& t) { return t.contains(x); });
}

long Contour::min_site() const noexcept {
    return triangles_.empty() ? 0 : triangles_.front().first_site();
}

long Contour::max_site() const noexcept {
    long hi = std::numeric_limits<long>::min();
    for (const auto& t : triangles_) hi = std::max(hi, t.last_site());
    return triangles_.empty() ? 0 : hi;
}

void Contour::absorb(const Contour& other) {
    triangles_.insert(triangles_.end(), other.triangles_.begin(), other.triangles_.end());
    std::sort(triangles_.begin(), triangles_.end());
    mass_ += other.mass_;
}

long contour_distance(const Contour& a, const Contour& b) noexcept {
    long best = std::numeric_limits<long>::max();
    for (const auto& s : a.triangles()) {
        for (const auto& t : b.triangles()) best = std::min(best, triangle_distance(s, t));
    }
    return best;
}

std::vector<Triangle> ContourConfiguration::all_triangles() const {
    std::vector<Triangle> out;
    for (const auto& g : contours) out.insert(out.end(), g.triangles().begin(), g.triangles().end());
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------------------

std::vector<DualPoint> spin_flip_points(const SpinConfiguration& sigma) {
    std::vector<DualPoint> out;
    const long n = sigma.window_radius();
    for (long x = -n - 1; x <= n; ++x) {
        if (sigma.spin(x) != sigma.spin(x + 1)) out.push_back(DualPoint{x});
    }
    return out;
}

std::vector<double> assign_bases(const std::vector<DualPoint>& flips) {
    if (flips.size() % 2 != 0) throw std::logic_error("odd number of spin-flip points");
    std::vector<double> out;
    out.reserve(flips.size());
    double scale = 1.0 / 100.0;
    for (const auto& p : flips) {
        scale /= 3.0;
        out.push_back(p.value() + scale);
    }
    return out;
}

std::strong_ordering compare_perturbed_distance(const std::vector<DualPoint>& flips, std::size_t a, std::size_t b,
                                                std::size_t c, std::size_t d) {
    // r_b - r_a = (i_b - i_a) + (3^-(b+1) - 3^-(a+1))/100; the perturbation never
    // reaches the integer part, and its sign and size are set by the smaller index.
    const long d1 = distance(flips[a], flips[b]);
    const long d2 = distance(flips[c], flips[d]);
    if (d1 != d2) return d1 <=> d2;
    if (a != c) return a < c ? std::strong_ordering::less : std::strong_ordering::greater;
    if (b != d) return b > d ? std::strong_ordering::less : std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

TriangleFamily build_triangles(const std::vector<DualPoint>& flips) {
    if (flips.size() % 2 != 0) throw std::logic_error("odd number of spin-flip points");
    if (!std::is_sorted(flips.begin(), flips.end())) throw std::invalid_argument("flip points must be sorted");

    const std::size_t n = flips.size();
    constexpr std::size_t none = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> prev(n), next(n);
    std::vector<bool> active(n, true);
    for (std::size_t i = 0; i < n; ++i) {
        prev[i] = i == 0 ? none : i - 1;
        next[i] = i + 1 == n ? none : i + 1;
    }

    // The nearest active pair is always adjacent in the active list.
    using Pair = std::pair<std::size_t, std::size_t>;
    auto further = [&flips](const Pair& x, const Pair& y) {
        return compare_perturbed_distance(flips, x.first, x.second, y.first, y.second) > 0;
    };
    std::priority_queue<Pair, std::vector<Pair>, decltype(further)> heap(further);
    for (std::size_t i = 0; i + 1 < n; ++i) heap.emplace(i, i + 1);

    TriangleFamily family;
    while (!heap.empty()) {
        const auto [a, b] = heap.top();
        heap.pop();
        if (!active[a] || !active[b] || next[a] != b) continue;
        family.triangles.push_back(Triangle{flips[a], flips[b]});
        active[a] = active[b] = false;
        const std::size_t l = prev[a];
        const std::size_t r = next[b];
        if (l != none) next[l] = r;
        if (r != none) prev[r] = l;
        if (l != none && r != none) heap.emplace(l, r);
    }
    std::sort(family.triangles.begin(), family.triangles.end());
    return family;
}

TriangleFamily build_triangles(const SpinConfiguration& sigma) { return build_triangles(spin_flip_points(sigma)); }

SpinConfiguration triangles_to_spins(const std::vector<Triangle>& triangles, long window_radius, Boundary boundary) {
    const long n = 2 * window_radius + 1;
    std::vector<long> depth(static_cast<std::size_t>(n + 1), 0);
    for (const auto& t : triangles) {
        if (t.first_site() < -window_radius || t.last_site() > window_radius) {
            throw std::domain_error("triangle base [" + std::to_string(t.first_site()) + ", " +
                                    std::to_string(t.last_site()) + "] leaves the window");
        }
        ++depth[static_cast<std::size_t>(t.first_site() + window_radius)];
        --depth[static_cast<std::size_t>(t.last_site() + window_radius + 1)];
    }
    const int w = boundary_sign(boundary);
    std::vector<std::int8_t> spins(static_cast<std::size_t>(n));
    long running = 0;
    for (long i = 0; i < n; ++i) {
        running += depth[static_cast<std::size_t>(i)];
        spins[static_cast<std::size_t>(i)] = static_cast<std::int8_t>(running % 2 == 0 ? w : -w);
    }
    return {window_radius, std::move(spins), boundary};
}

SpinConfiguration triangles_to_spins(const TriangleFamily& family, long window_radius, Boundary boundary) {
    return triangles_to_spins(family.triangles, window_radius, boundary);
}

// ---------------------------------------------------------------------------

namespace {

double separation_threshold(const Contour& a, const Contour& b, double c) {
    const double m = static_cast<double>(std::min(a.mass(), b.mass()));
    return c * m * m * m;
}

bool intervals_intersect(const std::vector<SiteInterval>& xs, const std::vector<SiteInterval>& ys) {
    std::size_t i = 0, j = 0;
    while (i < xs.size() && j < ys.size()) {
        if (xs[i].hi < ys[j].lo) {
            ++i;
        } else if (ys[j].hi < xs[i].lo) {
            ++j;
        } else {
            return true;
        }
    }
    return false;
}

bool intervals_cover(const std::vector<SiteInterval>& outer, const std::vector<SiteInterval>& inner) {
    for (const auto& s : inner) {
        const bool inside = std::any_of(outer.begin(), outer.end(),
                                        [&s](const SiteInterval& o) { return o.lo <= s.lo && s.hi <= o.hi; });
        if (!inside) return false;
    }
    return true;
}

// Inner contour nested in outer: every triangle of outer either holds all of inner or none of it.
bool nested_within_triangles(const std::vector<SiteInterval>& inner_base, const Contour& outer) {
    const long lo = inner_base.front().lo;
    const long hi = inner_base.back().hi;
    for (const auto& t : outer.triangles()) {
        const bool holds = t.first_site() <= lo && hi <= t.last_site();
        const bool misses = !intervals_intersect(inner_base, {SiteInterval{t.first_site(), t.last_site()}});
        if (!holds && !misses) return false;
    }
    return true;
}

// Returns the failing part of the base alternative, if any.
std::optional<SeparationFailure> base_alternative_failure(const Contour& a, const Contour& b) {
    const auto base_a = a.base();
    const auto base_b = b.base();
    if (base_a.empty() || base_b.empty() || !intervals_intersect(base_a, base_b)) return std::nullopt;
    if (intervals_cover(base_b, base_a)) {
        return nested_within_triangles(base_a, b) ? std::nullopt : std::optional{SeparationFailure::BaseNesting};
    }
    if (intervals_cover(base_a, base_b)) {
        return nested_within_triangles(base_b, a) ? std::nullopt : std::optional{SeparationFailure::BaseNesting};
    }
    return SeparationFailure::BaseOverlap;
}

}  // namespace

bool well_separated(const Contour& a, const Contour& b, double c) {
    if (!(static_cast<double>(contour_distance(a, b)) > separation_threshold(a, b, c))) return false;
    return !base_alternative_failure(a, b).has_value();
}

SeparationReport check_separation(const ContourConfiguration& cfg) {
    SeparationReport report;
    const auto& gs = cfg.contours;
    for (std::size_t i = 0; i < gs.size(); ++i) {
        for (std::size_t j = i + 1; j < gs.size(); ++j) {
            const long d = contour_distance(gs[i], gs[j]);
            const double thr = separation_threshold(gs[i], gs[j], cfg.c);
            if (!(static_cast<double>(d) > thr)) {
                report.violations.push_back({i, j, SeparationFailure::Distance, d, thr});
            } else if (auto failure = base_alternative_failure(gs[i], gs[j])) {
                report.violations.push_back({i, j, *failure, d, thr});
            }
        }
    }
    report.ok = report.violations.empty();
    return report;
}

ContourConfiguration group_contours(const TriangleFamily& family, double c) {
    if (!(c > 1.0)) throw std::domain_error("grouping constant c must exceed 1");

    const auto& ts = family.triangles;
    std::vector<Contour> groups;
    groups.reserve(ts.size());
    for (const auto& t : ts) groups.emplace_back(std::vector<Triangle>{t});

    // Group distance matrix, shrunk by row-wise min on each merge.
    const std::size_t n = groups.size();
    std::vector<long> dist(n * n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) dist[i * n + j] = dist[j * n + i] = triangle_distance(ts[i], ts[j]);
    }
    std::vector<bool> alive(n, true);

    struct Candidate {
        std::size_t i, j;
        long d;
        long left;
    };
    auto better = [](const Candidate& x, const Candidate& y) {
        if (x.d != y.d) return x.d < y.d;
        return x.left < y.left;
    };

    auto merge = [&](std::size_t i, std::size_t j) {
        groups[i].absorb(groups[j]);
        alive[j] = false;
        for (std::size_t k = 0; k < n; ++k) {
            if (!alive[k] || k == i) continue;
            const long d = std::min(dist[i * n + k], dist[j * n + k]);
            dist[i * n + k] = dist[k * n + i] = d;
        }
    };

    for (;;) {
        std::optional<Candidate> pick;
        for (std::size_t i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!alive[j]) continue;
                const long d = dist[i * n + j];
                if (static_cast<double>(d) > separation_threshold(groups[i], groups[j], c)) continue;
                Candidate cand{i, j, d, std::min(groups[i].min_site(), groups[j].min_site())};
                if (!pick || better(cand, *pick)) pick = cand;
            }
        }
        if (!pick) {
            for (std::size_t i = 0; i < n; ++i) {
                if (!alive[i]) continue;
                for (std::size_t j = i + 1; j < n; ++j) {
                    if (!alive[j] || !base_alternative_failure(groups[i], groups[j])) continue;
                    Candidate cand{i, j, dist[i * n + j], std::min(groups[i].min_site(), groups[j].min_site())};
                    if (!pick || better(cand, *pick)) pick = cand;
                }
            }
        }
        if (!pick) break;
        merge(pick->i, pick->j);
    }

    ContourConfiguration cfg;
    cfg.c = c;
    for (std::size_t i = 0; i < n; ++i) {
        if (alive[i]) cfg.contours.push_back(std::move(groups[i]));
    }
    std::sort(cfg.contours.begin(), cfg.contours.end());
    return cfg;
}

ContourConfiguration contours_of(const SpinConfiguration& sigma, double c) {
    return group_contours(build_triangles(sigma), c);
}

// ---------------------------------------------------------------------------

double triangles_energy(const std::vector<Triangle>& triangles, const CouplingParams& cp) {
    if (triangles.empty()) return 0.0;
    long radius = 0;
    for (const auto& t : triangles) radius = std::max({radius, std::labs(t.first_site()), std::labs(t.last_site())});
    const auto sigma = triangles_to_spins(triangles, radius, Boundary::Plus);
    const WindowCouplings wc(cp, FieldProfile{0.0, 1.0, 0}, radius);
    return wc.energy(sigma.spins(), Boundary::Plus);
}

double contour_energy(const Contour& gamma0, const CouplingParams& cp) {
    return triangles_energy(gamma0.triangles(), cp);
}

double conditional_energy(const Contour& gamma0, const ContourConfiguration& cfg, const CouplingParams& cp) {
    const auto it = std::find(cfg.contours.begin(), cfg.contours.end(), gamma0);
    if (it == cfg.contours.end()) throw std::domain_error("contour is not part of the configuration");
    std::vector<Triangle> rest;
    for (const auto& g : cfg.contours) {
        if (&g == &*it) continue;
        rest.insert(rest.end(), g.triangles().begin(), g.triangles().end());
    }
    std::vector<Triangle> all = rest;
    all.insert(all.end(), gamma0.triangles().begin(), gamma0.triangles().end());
    return triangles_energy(all, cp) - triangles_energy(rest, cp);
}

double contour_norm(const Contour& gamma0, double alpha) {
    double s = 0.0;
    for (const auto& t : gamma0.triangles()) s += chi(static_cast<double>(t.mass()), alpha);
    return s;
}

}  // namespace dyson
