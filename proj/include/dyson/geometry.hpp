#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

#include "dyson/lattice.hpp"

namespace dyson {

/// A site of the dual lattice Z + 1/2, stored as the lattice site on its left.
struct DualPoint {
    long left_site = 0;

    [[nodiscard]] double value() const noexcept { return static_cast<double>(left_site) + 0.5; }
    /// Throws std::invalid_argument unless v is a half-integer.
    static DualPoint from_value(double v);

    friend auto operator<=>(const DualPoint&, const DualPoint&) = default;
};

/// |p - q| on the dual lattice (always an integer).
inline long distance(DualPoint p, DualPoint q) noexcept {
    return p.left_site > q.left_site ? p.left_site - q.left_site : q.left_site - p.left_site;
}

/**
 * One triangle: a pair of matched spin-flip points. Its base is the set of
 * lattice sites strictly between them and its mass the number of such sites.
 */
struct Triangle {
    DualPoint left;
    DualPoint right;

    /// Throws std::invalid_argument unless left < right.
    static Triangle from_sites(long first_site, long last_site);

    [[nodiscard]] long first_site() const noexcept { return left.left_site + 1; }
    [[nodiscard]] long last_site() const noexcept { return right.left_site; }
    [[nodiscard]] long mass() const noexcept { return right.left_site - left.left_site; }
    [[nodiscard]] bool contains(long x) const noexcept { return x >= first_site() && x <= last_site(); }

    friend auto operator<=>(const Triangle&, const Triangle&) = default;
};

/// min distance between the endpoint pairs of two triangles.
long triangle_distance(const Triangle& a, const Triangle& b) noexcept;

struct TriangleFamily {
    std::vector<Triangle> triangles;  ///< sorted by left endpoint

    [[nodiscard]] long total_mass() const noexcept;
    friend bool operator==(const TriangleFamily&, const TriangleFamily&) = default;
};

/// Pairs (i, j) violating d(T, T') >= min{|T|, |T'|}.
std::vector<std::pair<std::size_t, std::size_t>> compatibility_violations(const TriangleFamily& family);

/// Closed integer interval [lo, hi].
struct SiteInterval {
    long lo = 0;
    long hi = 0;
    friend bool operator==(const SiteInterval&, const SiteInterval&) = default;
};

class Contour {
public:
    Contour() = default;
    explicit Contour(std::vector<Triangle> triangles);

    [[nodiscard]] const std::vector<Triangle>& triangles() const noexcept { return triangles_; }
    [[nodiscard]] long mass() const noexcept { return mass_; }
    [[nodiscard]] bool empty() const noexcept { return triangles_.empty(); }
    /// Union of the triangle bases as disjoint sorted intervals.
    [[nodiscard]] std::vector<SiteInterval> base() const;
    [[nodiscard]] bool base_contains(long x) const noexcept;
    [[nodiscard]] long min_site() const noexcept;
    [[nodiscard]] long max_site() const noexcept;

    void absorb(const Contour& other);

    friend bool operator==(const Contour& a, const Contour& b) { return a.triangles_ == b.triangles_; }
    friend auto operator<=>(const Contour& a, const Contour& b) { return a.triangles_ <=> b.triangles_; }

private:
    std::vector<Triangle> triangles_;  // kept sorted
    long mass_ = 0;
};

/// min over triangle pairs of triangle_distance.
long contour_distance(const Contour& a, const Contour& b) noexcept;

inline constexpr double kDefaultGroupingC = 10.0;

struct ContourConfiguration {
    std::vector<Contour> contours;  ///< sorted canonically
    double c = kDefaultGroupingC;

    [[nodiscard]] std::vector<Triangle> all_triangles() const;
};

// --- spin <-> triangles ------------------------------------------------------

/// Sorted dual sites where neighbouring spins (boundary included) disagree.
std::vector<DualPoint> spin_flip_points(const SpinConfiguration& sigma);

/// Perturbed bases r_k = i_k + 3^(-k)/100, k = 1..n. Display only: for large n
/// the perturbation underflows; comparisons use compare_perturbed_distance.
std::vector<double> assign_bases(const std::vector<DualPoint>& flips);

/**
 * Exact comparison of |r_a - r_b| with |r_c - r_d| for the perturbed bases
 * of assign_bases (0-based indices, a < b, c < d). Distinct pairs never
 * compare equal.
 */
std::strong_ordering compare_perturbed_distance(const std::vector<DualPoint>& flips, std::size_t a, std::size_t b,
                                                std::size_t c, std::size_t d);

/// Repeated nearest-pair matching of the flip points. Throws std::logic_error on odd flip count.
TriangleFamily build_triangles(const std::vector<DualPoint>& flips);
TriangleFamily build_triangles(const SpinConfiguration& sigma);

/// Each site takes the boundary value flipped once per triangle containing it.
/// Throws std::domain_error if a base leaves the window.
SpinConfiguration triangles_to_spins(const TriangleFamily& family, long window_radius, Boundary boundary);
SpinConfiguration triangles_to_spins(const std::vector<Triangle>& triangles, long window_radius, Boundary boundary);

// --- contours ----------------------------------------------------------------

enum class SeparationFailure { Distance, BaseOverlap, BaseNesting };

struct SeparationViolation {
    std::size_t first = 0;
    std::size_t second = 0;
    SeparationFailure kind = SeparationFailure::Distance;
    long distance = 0;
    double threshold = 0.0;
};

struct SeparationReport {
    bool ok = true;
    std::vector<SeparationViolation> violations;
};

/// True when the pair satisfies both the distance and the base alternative.
bool well_separated(const Contour& a, const Contour& b, double c);

/// Pairwise check of every contour pair.
SeparationReport check_separation(const ContourConfiguration& cfg);

/**
 * Greedy grouping: start from singletons and merge, while any pair violates
 * the separation predicate, the violating pair of minimal distance (ties to
 * the leftmost base). Throws std::domain_error unless c > 1.
 */
ContourConfiguration group_contours(const TriangleFamily& family, double c = kDefaultGroupingC);

/// Contours of a spin configuration with the given boundary.
ContourConfiguration contours_of(const SpinConfiguration& sigma, double c = kDefaultGroupingC);

/// Zero-field energy of the plus-boundary configuration made of the given triangles.
double triangles_energy(const std::vector<Triangle>& triangles, const CouplingParams& cp);

double contour_energy(const Contour& gamma0, const CouplingParams& cp);

/// H(cfg) - H(cfg without gamma0). Throws std::domain_error if gamma0 is not in cfg.
double conditional_energy(const Contour& gamma0, const ContourConfiguration& cfg, const CouplingParams& cp);

/// sum over triangles of chi_alpha(|T|).
double contour_norm(const Contour& gamma0, double alpha);

}  // namespace dyson
