#include "dyson/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace dyson::io {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return s.substr(first, last - first + 1);
}

Json dual_point(DualPoint p) { return p.value(); }

const char* failure_name(SeparationFailure f) {
    switch (f) {
        case SeparationFailure::Distance: return "distance";
        case SeparationFailure::BaseOverlap: return "base-overlap";
        case SeparationFailure::BaseNesting: return "base-nesting";
    }
    return "unknown";
}

double parse_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw FormatError("config key '" + key + "': expected a number, got '" + text + "'");
    }
}

long parse_long(const std::string& key, const std::string& text) {
    long v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw FormatError("config key '" + key + "': expected an integer, got '" + text + "'");
    }
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
    std::uint64_t v = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end) {
        throw FormatError("config key '" + key + "': expected an unsigned 64-bit integer, got '" + text + "'");
    }
    return v;
}

}  // namespace

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string to_string(Boundary b) { return b == Boundary::Plus ? "plus" : "minus"; }

Boundary parse_boundary(const std::string& text) {
    if (text == "plus" || text == "+") return Boundary::Plus;
    if (text == "minus" || text == "-") return Boundary::Minus;
    throw FormatError("boundary must be 'plus' or 'minus', got '" + text + "'");
}

Json to_json(const SpinConfiguration& sigma) {
    Json spins = Json::array();
    for (auto s : sigma.spins()) spins.push_back(static_cast<int>(s));
    return Json{{"N", sigma.window_radius()}, {"boundary", to_string(sigma.boundary())}, {"spins", spins}};
}

SpinConfiguration spins_from_json(const Json& j) {
    const Json* arr = &j;
    Boundary boundary = Boundary::Plus;
    std::optional<long> radius;
    if (j.is_object()) {
        if (!j.contains("spins")) throw FormatError("spin configuration object needs a \"spins\" array");
        arr = &j.at("spins");
        if (j.contains("boundary")) {
            if (!j.at("boundary").is_string()) throw FormatError("\"boundary\" must be \"plus\" or \"minus\"");
            boundary = parse_boundary(j.at("boundary").get<std::string>());
        }
        if (j.contains("N")) {
            if (!j.at("N").is_number_integer()) throw FormatError("\"N\" must be a non-negative integer");
            radius = j.at("N").get<long>();
        }
    } else if (!j.is_array()) {
        throw FormatError("spin configuration must be an object or an array of +-1");
    }
    if (!arr->is_array()) throw FormatError("\"spins\" must be an array of +-1");

    std::vector<std::int8_t> spins;
    for (std::size_t k = 0; k < arr->size(); ++k) {
        const auto& v = (*arr)[k];
        if (!v.is_number_integer() || (v.get<long>() != 1 && v.get<long>() != -1)) {
            throw FormatError("spin " + std::to_string(k) + " is " + v.dump() + ", expected 1 or -1");
        }
        spins.push_back(static_cast<std::int8_t>(v.get<long>()));
    }
    if (spins.size() % 2 == 0) {
        throw FormatError("a window [-N, N] holds an odd number of spins, got " + std::to_string(spins.size()));
    }
    const long n = static_cast<long>(spins.size() - 1) / 2;
    if (radius && *radius != n) {
        throw FormatError("\"N\" = " + std::to_string(*radius) + " does not match " + std::to_string(spins.size()) +
                          " spins");
    }
    return SpinConfiguration(n, std::move(spins), boundary);
}

Json to_json(const Triangle& t) {
    return Json{{"left", dual_point(t.left)}, {"right", dual_point(t.right)}, {"mass", t.mass()}};
}

Json to_json(const Contour& g) {
    Json ts = Json::array();
    for (const auto& t : g.triangles()) ts.push_back(to_json(t));
    Json base = Json::array();
    for (const auto& iv : g.base()) base.push_back(Json::array({iv.lo, iv.hi}));
    return Json{{"triangles", ts}, {"mass", g.mass()}, {"base", base}};
}

Json to_json(const ContourConfiguration& cfg) {
    Json cs = Json::array();
    for (const auto& g : cfg.contours) cs.push_back(to_json(g));
    return Json{{"c", cfg.c}, {"contours", cs}};
}

Json to_json(const SeparationReport& r) {
    Json vs = Json::array();
    for (const auto& v : r.violations) {
        vs.push_back(Json{{"first", v.first},
                          {"second", v.second},
                          {"kind", failure_name(v.kind)},
                          {"distance", v.distance},
                          {"threshold", v.threshold}});
    }
    return Json{{"ok", r.ok}, {"violations", vs}};
}

Json to_json(const BoundReport& r) {
    Json j{{"alpha", r.alpha},
           {"zeta_alpha", r.zeta_alpha},
           {"zeta_star", r.zeta_star},
           {r.alpha == 0.0 ? "L2" : "L1", r.threshold_L},
           {"checked_up_to", r.checked_up_to},
           {"certified", r.certified},
           {"first_failure", r.first_failure == 0 ? Json(nullptr) : Json(r.first_failure)},
           {"min_delta_w", r.min_delta_w},
           {"delta_w_positive", r.delta_w_positive}};
    return j;
}

Json to_json(const EntropyCheck& r) {
    return Json{{"m", r.m},       {"c", r.c},       {"b", r.b},         {"alpha", r.alpha},
                {"lhs", r.lhs},   {"rhs", r.rhs},   {"pass", r.pass},   {"contour_count", r.contour_count}};
}

Json to_json(const QuasiAdditivityReport& r) {
    return Json{{"samples", r.samples},
                {"seed", r.seed},
                {"c", r.c},
                {"alpha", r.alpha},
                {"alpha_prime", r.alpha_prime},
                {"zeta_prime", r.zeta_prime},
                {"contours_checked", r.contours_checked},
                {"violations", r.violations},
                {"worst_margin", r.worst_margin},
                {"w_violations", r.w_violations},
                {"worst_w_margin", r.worst_w_margin},
                {"quasi_additive_violations", r.quasi_additive_violations}};
}

Json to_json(const BetaCBound& r) {
    auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
    Json j{{"alpha", r.alpha},
           {"gamma", r.gamma},
           {"h_star", r.h_star},
           {"beta_c", opt(r.beta_c)},
           {"L_required", r.L_required},
           {"h_threshold", opt(r.h_threshold)},
           {"regime", to_string(r.regime)},
           {"c", r.c},
           {"kc_variant", to_string(r.variant)},
           {"kc", r.kc},
           {"alpha_prime", r.alpha_prime},
           {"zeta_prime", r.zeta_prime},
           {"field_constant", r.field_constant},
           {"field_deficit", r.field_deficit},
           {"rate_per_beta", r.rate_per_beta}};
    if (!r.sample_set.empty()) j["sample_set"] = r.sample_set;
    return j;
}

Json to_json(const Measurement& m) {
    return Json{{"mean_spin_origin", m.mean_spin_origin},
                {"mean_magnetization", m.mean_magnetization},
                {"prob_origin_minus", m.prob_origin_minus},
                {"std_error", m.std_error},
                {"samples", m.samples},
                {"acceptance_rate", m.acceptance_rate}};
}

// ---------------------------------------------------------------------------

ConfigMap parse_config(std::istream& in) {
    ConfigMap cfg;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw FormatError("config line " + std::to_string(line_no) + ": expected key = value");
        }
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty()) throw FormatError("config line " + std::to_string(line_no) + ": empty key");
        if (!cfg.emplace(key, value).second) throw FormatError("config key '" + key + "' appears twice");
    }
    return cfg;
}

ConfigMap read_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open config file '" + path + "'");
    return parse_config(in);
}

const std::vector<std::string>& required_sim_keys() {
    static const std::vector<std::string> keys{"alpha", "beta", "window_radius", "sweeps", "burn_in"};
    return keys;
}

SimParams sim_params_from_config(const ConfigMap& cfg, std::optional<std::uint64_t> seed_override) {
    std::vector<std::string> missing;
    for (const auto& k : required_sim_keys()) {
        if (!cfg.count(k)) missing.push_back(k);
    }
    if (!seed_override && !cfg.count("seed")) missing.push_back("seed");
    if (!missing.empty()) {
        std::string msg = "missing config key";
        msg += missing.size() > 1 ? "s: " : ": ";
        for (std::size_t k = 0; k < missing.size(); ++k) msg += (k ? ", " : "") + missing[k];
        throw FormatError(msg);
    }
    auto get = [&cfg](const std::string& k) -> std::optional<std::string> {
        auto it = cfg.find(k);
        return it == cfg.end() ? std::nullopt : std::optional<std::string>(it->second);
    };

    SimParams p;
    p.coupling.alpha = parse_double("alpha", *get("alpha"));
    if (auto v = get("j1")) p.coupling.j1 = parse_double("j1", *v);
    if (auto v = get("h_star")) p.field.h_star = parse_double("h_star", *v);
    if (auto v = get("gamma")) p.field.gamma = parse_double("gamma", *v);
    if (auto v = get("cutoff_L")) p.field.cutoff_L = parse_long("cutoff_L", *v);
    p.beta = parse_double("beta", *get("beta"));
    p.window_radius = parse_long("window_radius", *get("window_radius"));
    if (auto v = get("boundary")) p.boundary = parse_boundary(*v);
    p.sweeps = parse_long("sweeps", *get("sweeps"));
    p.burn_in = parse_long("burn_in", *get("burn_in"));
    if (auto v = get("measure_every")) p.measure_every = parse_long("measure_every", *v);
    p.seed = seed_override ? *seed_override : parse_u64("seed", *get("seed"));
    return p;
}

namespace {

template <class T, class F>
std::vector<T> parse_list(const std::string& text, F parse) {
    std::vector<T> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw FormatError("empty entry in list '" + text + "'");
        out.push_back(parse(item));
    }
    if (out.empty()) throw FormatError("empty list");
    return out;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& text) {
    return parse_list<double>(text, [](const std::string& s) { return parse_double("list", s); });
}

std::vector<long> parse_long_list(const std::string& text) {
    return parse_list<long>(text, [](const std::string& s) { return parse_long("list", s); });
}

const std::string& sim_csv_header() {
    static const std::string header = "alpha,gamma,h_star,beta,N,boundary,mean_spin_origin,std_error,samples,seed";
    return header;
}

std::string sim_csv_row(const SimParams& p, const Measurement& m) {
    std::ostringstream os;
    os << format_double(p.coupling.alpha) << ',' << format_double(p.field.gamma) << ',' << format_double(p.field.h_star)
       << ',' << format_double(p.beta) << ',' << p.window_radius << ',' << to_string(p.boundary) << ','
       << format_double(m.mean_spin_origin) << ',' << format_double(m.std_error) << ',' << m.samples << ',' << p.seed;
    return os.str();
}

void write_param_comments(std::ostream& out, const SimParams& p) {
    out << "# alpha=" << format_double(p.coupling.alpha) << '\n'
        << "# j1=" << format_double(p.coupling.j1) << '\n'
        << "# h_star=" << format_double(p.field.h_star) << '\n'
        << "# gamma=" << format_double(p.field.gamma) << '\n'
        << "# cutoff_L=" << p.field.cutoff_L << '\n'
        << "# beta=" << format_double(p.beta) << '\n'
        << "# window_radius=" << p.window_radius << '\n'
        << "# boundary=" << to_string(p.boundary) << '\n'
        << "# sweeps=" << p.sweeps << '\n'
        << "# burn_in=" << p.burn_in << '\n'
        << "# measure_every=" << p.measure_every << '\n'
        << "# seed=" << p.seed << '\n';
}

}  // namespace dyson::io
