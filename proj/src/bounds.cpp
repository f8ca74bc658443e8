#include "dyson/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dyson {

namespace {

// Prefix sums H_n^(k), n = 0..n_max, compensated.
std::vector<double> harmonic_prefix(long n_max, double k) {
    std::vector<double> out(static_cast<std::size_t>(n_max + 1), 0.0);
    double sum = 0.0, comp = 0.0;
    for (long y = 1; y <= n_max; ++y) {
        const double term = std::pow(static_cast<double>(y), -k) - comp;
        const double t = sum + term;
        comp = (t - sum) - term;
        sum = t;
        out[static_cast<std::size_t>(y)] = sum;
    }
    return out;
}

// T(n) = sum_{y >= n} y^-(2-alpha) for n = 1..n_max+1, accumulated from the far end.
std::vector<double> tail_table(long n_max, double alpha) {
    std::vector<double> out(static_cast<std::size_t>(n_max + 2), 0.0);
    double acc = tail_sum(alpha, n_max + 1);
    out[static_cast<std::size_t>(n_max + 1)] = acc;
    for (long n = n_max; n >= 1; --n) {
        acc += std::pow(static_cast<double>(n), alpha - 2.0);
        out[static_cast<std::size_t>(n)] = acc;
    }
    return out;
}

void require_alpha(double alpha) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::domain_error("alpha must lie in [0, 1)");
}

}  // namespace

double harmonic(long n, double k) {
    if (n < 1) throw std::domain_error("harmonic number needs n >= 1");
    double s = 0.0;
    for (long y = n; y >= 1; --y) s += std::pow(static_cast<double>(y), -k);
    return s;
}

double w_direct(long L, double alpha) {
    if (L < 1) throw std::domain_error("W_alpha(L) needs L >= 1");
    require_alpha(alpha);
    const CouplingParams cp{alpha, 1.0};
    double w = 0.0;
    for (long x = 1; x <= L; ++x) {
        double near = 0.0;
        for (long y = L + 1; y <= 2 * L; ++y) near += coupling_at(cp, y - x);
        for (long y = -L + 1; y <= 0; ++y) near += coupling_at(cp, x - y);
        // y >= 2L+1 sits at distance >= 2L+1-x, y <= -L at distance >= x+L
        const double far = tail_sum(alpha, 2 * L + 1 - x) + tail_sum(alpha, x + L);
        w += near - far;
    }
    return w;
}

double w_closed(long L, double alpha) {
    if (L < 1) throw std::domain_error("W_alpha(L) needs L >= 1");
    require_alpha(alpha);
    const double l = static_cast<double>(L);
    return 6.0 * harmonic(L, 1.0 - alpha) - 4.0 * harmonic(2 * L - 1, 1.0 - alpha) +
           8.0 * l * harmonic(2 * L - 1, 2.0 - alpha) - 6.0 * l * harmonic(L, 2.0 - alpha) -
           2.0 * l * tail_sum(alpha, 1);
}

double delta_w(long L, double alpha) {
    if (L < 1) throw std::domain_error("Delta W_alpha(L) needs L >= 1");
    require_alpha(alpha);
    const double s = 2.0 - alpha;
    const double l = static_cast<double>(L);
    double mid = 0.0;
    for (long y = 2 * L - 1; y >= L + 1; --y) mid += std::pow(static_cast<double>(y), -s);
    return 6.0 / std::pow(2.0 * l, s) + 4.0 / std::pow(2.0 * l + 1.0, s) + 6.0 * mid - 2.0 * tail_sum(alpha, 2 * L + 1);
}

std::vector<double> w_values(double alpha, long limit) {
    require_alpha(alpha);
    if (limit < 1) return {};
    const auto h1 = harmonic_prefix(2 * limit, 1.0 - alpha);
    const auto t2 = tail_table(2 * limit, alpha);
    std::vector<double> out(static_cast<std::size_t>(limit));
    for (long L = 1; L <= limit; ++L) {
        const auto u = static_cast<std::size_t>(L);
        // 8L H_{2L-1} - 6L H_L - 2L zeta  ==  2L (3 T(L+1) - 4 T(2L))
        out[u - 1] = 6.0 * h1[u] - 4.0 * h1[2 * u - 1] +
                     2.0 * static_cast<double>(L) * (3.0 * t2[u + 1] - 4.0 * t2[2 * u]);
    }
    return out;
}

double chi(double L, double alpha) {
    if (!(L > 0.0)) throw std::domain_error("chi needs L > 0");
    if (alpha < 0.0) throw std::domain_error("chi needs alpha >= 0");
    return alpha == 0.0 ? std::log(L) + 4.0 : std::pow(L, alpha);
}

double zeta_star(double alpha) { return 2.0 * (3.0 - std::pow(2.0, 1.0 + alpha)) / (1.0 - alpha); }

double asymptotic_bracket(long L, double alpha) {
    if (L < 1) throw std::domain_error("bracket needs L >= 1");
    const double la = std::pow(static_cast<double>(L), alpha);
    return 3.0 / la * harmonic(L, 1.0 - alpha) - 2.0 / la * harmonic(2 * L - 1, 1.0 - alpha) -
           4.0 / static_cast<double>(L);
}

double alpha_star() {
    static const double root = [] {
        double lo = 0.0, hi = 0.5;
        for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid == lo || mid == hi) break;
            (tail_sum(mid, 1) < 2.0 ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
    }();
    return root;
}

double alpha_bar() { return std::log(8.0 / 9.0) / std::log(2.0 / 3.0); }

double alpha_plus() { return std::log(3.0) / std::log(2.0) - 1.0; }

BoundReport zeta_alpha(double alpha, long search_limit) {
    if (!(alpha >= 0.0)) throw std::domain_error("alpha must be non-negative");
    if (alpha >= alpha_star()) {
        throw std::domain_error("alpha >= alpha_star: W_alpha(1) is not positive, no constant exists");
    }
    if (search_limit < 1) throw std::domain_error("search limit must be >= 1");

    const auto w = w_values(alpha, search_limit + 1);
    BoundReport r;
    r.alpha = alpha;
    r.checked_up_to = search_limit;
    r.zeta_star = alpha == 0.0 ? 1.0 : zeta_star(alpha);

    // Asymptotic bound: W >= zeta* L^alpha, or W >= log L + 4 at alpha = 0.
    long last_fail = 0;
    for (long L = 1; L <= search_limit; ++L) {
        const double asym = alpha == 0.0 ? chi(static_cast<double>(L), 0.0) : r.zeta_star * chi(static_cast<double>(L), alpha);
        if (w[static_cast<std::size_t>(L - 1)] < asym) last_fail = L;
    }
    r.threshold_L = std::max<long>(1, last_fail);

    double z = r.zeta_star;
    for (long L = 1; L <= r.threshold_L; ++L) {
        z = std::min(z, w[static_cast<std::size_t>(L - 1)] / chi(static_cast<double>(L), alpha));
    }
    r.zeta_alpha = z;

    r.certified = z > 0.0;
    for (long L = 1; L <= search_limit; ++L) {
        const double lhs = w[static_cast<std::size_t>(L - 1)];
        const double rhs = z * chi(static_cast<double>(L), alpha);
        // the minimising L meets the bound with equality; allow rounding only
        if (lhs < rhs - 1e-12 * std::abs(rhs)) {
            r.certified = false;
            r.first_failure = L;
            break;
        }
    }

    r.min_delta_w = w[1] - w[0];
    for (long L = 1; L <= search_limit; ++L) {
        r.min_delta_w = std::min(r.min_delta_w, w[static_cast<std::size_t>(L)] - w[static_cast<std::size_t>(L - 1)]);
    }
    r.delta_w_positive = r.min_delta_w > 0.0;
    return r;
}

double c_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("C_alpha is defined for alpha in (0, 1)");
    return (3.0 - std::pow(2.0, 1.0 + alpha)) / (alpha * (1.0 - alpha));
}

KcVariant parse_kc_variant(const std::string& name) {
    if (name == "printed") return KcVariant::Printed;
    if (name == "corrected") return KcVariant::Corrected;
    if (name == "capped") return KcVariant::Capped;
    throw std::invalid_argument("unknown K_c variant '" + name + "' (expected printed, corrected or capped)");
}

std::string to_string(KcVariant v) {
    switch (v) {
        case KcVariant::Printed: return "printed";
        case KcVariant::Corrected: return "corrected";
        case KcVariant::Capped: return "capped";
    }
    return "unknown";
}

KcValue k_c(double alpha, double c, KcVariant variant) {
    require_alpha(alpha);
    if (!(c > 1.0)) throw std::domain_error("K_c needs c > 1");
    const double tail = std::numbers::pi * std::numbers::pi / (6.0 * c);
    double value = 0.0;
    switch (variant) {
        case KcVariant::Printed: value = 1.0 - alpha / std::pow(c, alpha - 1.0) - tail; break;
        case KcVariant::Corrected: value = 1.0 - alpha / std::pow(c, 1.0 - alpha) - tail; break;
        case KcVariant::Capped: value = std::min(0.5, 1.0 - alpha / std::pow(c, 1.0 - alpha) - tail); break;
    }
    return {value, value > 0.0 && value <= 0.5};
}

double field_contribution(const Contour& gamma0, const FieldProfile& fp) {
    double s = 0.0;
    for (const auto& t : gamma0.triangles()) {
        for (long x = t.first_site(); x <= t.last_site(); ++x) s += std::abs(field_at(fp, x));
    }
    return s;
}

double field_bound_constant(std::span<const Contour> samples, const FieldProfile& fp, double alpha) {
    if (!(fp.gamma > 0.0 && fp.gamma < 1.0)) {
        throw std::domain_error("field bound constant needs 0 < gamma < 1");
    }
    const double h = std::abs(fp.h_star);
    if (h == 0.0) return 0.0;
    const double p = fp.gamma + alpha - 1.0;
    const double L = static_cast<double>(std::max<long>(fp.cutoff_L, 1));
    const double scale = h / (1.0 - fp.gamma) * std::pow(L, -p);
    double best = 0.0;
    for (const auto& g : samples) {
        if (g.empty()) continue;
        best = std::max(best, field_contribution(g, fp) / (scale * contour_norm(g, 1.0 - fp.gamma)));
    }
    return best;
}

double log_field_bound(const Contour& gamma0, const FieldProfile& fp) {
    double s = 0.0;
    for (const auto& t : gamma0.triangles()) s += std::log(static_cast<double>(t.mass()));
    return 8.0 * std::abs(fp.h_star) * s;
}

}  // namespace dyson
