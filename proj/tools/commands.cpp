#include "commands.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "dyson/bounds.hpp"
#include "dyson/census.hpp"
#include "dyson/geometry.hpp"
#include "dyson/io.hpp"
#include "dyson/simulator.hpp"

namespace dyson::cli {

namespace {

using io::Json;

// Output either goes to --out or, without it, to stdout.
void emit(const std::string& path, const std::string& content, std::ostream& out) {
    if (path.empty()) {
        out << content;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw io::FormatError("cannot write '" + path + "'");
    f << content;
}

std::string sibling_csv(const std::string& json_path) {
    const auto dot = json_path.rfind('.');
    const auto slash = json_path.rfind('/');
    if (dot != std::string::npos && (slash == std::string::npos || dot > slash)) return json_path.substr(0, dot) + ".csv";
    return json_path + ".csv";
}

std::optional<std::uint64_t> resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return flag;
    if (const char* env = std::getenv("DYSON_SEED"); env && *env) {
        char* end = nullptr;
        errno = 0;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (errno != 0 || *end != '\0' || env[0] == '-') {
            throw io::FormatError(std::string("DYSON_SEED is not an unsigned 64-bit integer: '") + env + "'");
        }
        return static_cast<std::uint64_t>(v);
    }
    return std::nullopt;
}

void reject_unknown_keys(const io::ConfigMap& cfg, const std::set<std::string>& allowed) {
    for (const auto& [key, value] : cfg) {
        if (!allowed.count(key)) throw io::FormatError("unknown config key '" + key + "'");
    }
}

const std::set<std::string> kSimKeys{"alpha",         "j1",       "h_star",  "gamma", "cutoff_L",      "beta",
                                     "window_radius", "boundary", "sweeps",  "burn_in", "measure_every", "seed"};

std::string read_spins_argument(const std::string& arg) {
    const auto first = arg.find_first_not_of(" \t\n");
    if (first != std::string::npos && (arg[first] == '[' || arg[first] == '{')) return arg;
    std::ifstream f(arg);
    if (!f) throw io::FormatError("cannot open spin file '" + arg + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// --- commands -----------------------------------------------------------------

struct BoundsArgs {
    double alpha = 0.0;
    long limit = kDefaultSearchLimit;
    std::string out;
};

int cmd_bounds(const BoundsArgs& a, std::ostream& out) {
    const auto report = zeta_alpha(a.alpha, a.limit);
    const Json j = io::to_json(report);
    if (a.out.empty()) {
        out << j.dump(2) << '\n';
    } else {
        emit(a.out, j.dump(2) + "\n", out);
        const auto w = w_values(a.alpha, a.limit + 1);
        std::ostringstream csv;
        csv << "# alpha=" << io::format_double(a.alpha) << "\n# limit=" << a.limit << '\n';
        csv << "L,W,chi,zeta_chi,delta_W\n";
        for (long L = 1; L <= a.limit; ++L) {
            const auto u = static_cast<std::size_t>(L - 1);
            const double c = chi(static_cast<double>(L), a.alpha);
            csv << L << ',' << io::format_double(w[u]) << ',' << io::format_double(c) << ','
                << io::format_double(report.zeta_alpha * c) << ',' << io::format_double(w[u + 1] - w[u]) << '\n';
        }
        emit(sibling_csv(a.out), csv.str(), out);
        out << "alpha=" << io::format_double(a.alpha) << " zeta_alpha=" << io::format_double(report.zeta_alpha)
            << (report.certified ? " certified" : " NOT certified") << '\n';
    }
    return report.certified && report.delta_w_positive ? kExitOk : kExitViolation;
}

struct ContoursArgs {
    std::string spins;
    double c = kDefaultGroupingC;
    std::string out;
};

int cmd_contours(const ContoursArgs& a, std::ostream& out) {
    Json input;
    try {
        input = Json::parse(read_spins_argument(a.spins));
    } catch (const Json::parse_error& e) {
        throw io::FormatError(std::string("spin input is not valid JSON: ") + e.what());
    }
    const auto sigma = io::spins_from_json(input);
    const auto family = build_triangles(sigma);
    const auto cfg = group_contours(family, a.c);
    const auto report = check_separation(cfg);

    Json triangles = Json::array();
    for (const auto& t : family.triangles) triangles.push_back(io::to_json(t));
    Json j{{"spins", io::to_json(sigma)},
           {"triangles", triangles},
           {"configuration", io::to_json(cfg)},
           {"separation", io::to_json(report)}};
    emit(a.out, j.dump(2) + "\n", out);
    if (!a.out.empty()) {
        out << family.triangles.size() << " triangles, " << cfg.contours.size() << " contours, separation "
            << (report.ok ? "ok" : "violated") << '\n';
    }
    return report.ok ? kExitOk : kExitViolation;
}

struct CensusArgs {
    long m = 1;
    double c = 2.0;
    double b = 5.0;
    double alpha = 0.0;
    std::optional<long> horizon;
    bool quasi = false;
    long samples = 1000;
    double alpha_prime = 0.0;
    std::optional<std::uint64_t> seed;
    std::string out;
};

int cmd_census(const CensusArgs& a, std::ostream& out) {
    if (a.quasi) {
        const auto seed = resolve_seed(a.seed);
        if (!seed) throw io::FormatError("quasi-additivity sampling needs --seed or DYSON_SEED");
        const auto r = quasi_additivity_check(a.samples, a.c, a.alpha, a.alpha_prime, *seed);
        emit(a.out, io::to_json(r).dump(2) + "\n", out);
        return r.violations == 0 ? kExitOk : kExitViolation;
    }
    const auto contours = enumerate_contours(a.m, a.c, a.horizon.value_or(minimal_horizon(a.m, a.c)));
    const auto r = entropy_check(contours, a.m, a.c, a.b, a.alpha);
    emit(a.out, io::to_json(r).dump(2) + "\n", out);
    if (!a.out.empty()) out << "m=" << a.m << " contours=" << r.contour_count << (r.pass ? " pass" : " FAIL") << '\n';
    return r.pass ? kExitOk : kExitViolation;
}

struct PeierlsArgs {
    double alpha = 0.0;
    std::optional<double> gamma;
    std::optional<double> h_star;
    double c = kDefaultGroupingC;
    std::string variant = "capped";
    std::optional<double> beta;
    std::optional<double> alpha_prime;
    std::string out;
};

int cmd_peierls(const PeierlsArgs& a, std::ostream& out) {
    const auto variant = parse_kc_variant(a.variant);
    // a decay exponent on its own means a unit-amplitude field
    const double h_star = a.h_star.value_or(a.gamma ? 1.0 : 0.0);
    const double gamma = a.gamma.value_or(1.0);

    if (a.beta) {
        const double ap = a.alpha_prime.value_or(std::min(a.alpha, 0.2));
        const auto s = peierls_series(*a.beta, a.alpha, ap, a.c, variant);
        Json j{{"alpha", a.alpha},         {"alpha_prime", ap},    {"c", a.c},
               {"kc_variant", a.variant},  {"beta", *a.beta},      {"value", s.divergent ? Json(nullptr) : Json(s.value)},
               {"error_estimate", s.error_estimate}, {"divergent", s.divergent}};
        emit(a.out, j.dump(2) + "\n", out);
        return s.divergent ? kExitViolation : kExitOk;
    }

    const auto r = beta_c_bound(a.alpha, gamma, h_star, a.c, variant);
    emit(a.out, io::to_json(r).dump(2) + "\n", out);
    if (!a.out.empty()) {
        out << "beta_c=" << (r.beta_c ? io::format_double(*r.beta_c) : std::string("none")) << " L_required=" << r.L_required
            << '\n';
    }
    return r.beta_c ? kExitOk : kExitViolation;
}

struct SimArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string out;
    unsigned threads = 0;
};

int cmd_simulate(const SimArgs& a, std::ostream& out) {
    const auto cfg = io::read_config_file(a.config);
    reject_unknown_keys(cfg, kSimKeys);
    const auto p = io::sim_params_from_config(cfg, resolve_seed(a.seed));
    p.validate();
    const auto m = run(p);

    std::ostringstream csv;
    io::write_param_comments(csv, p);
    if (p.window_radius <= kMaxExactWindowRadius) {
        const auto exact = exact_partition(p.coupling, p.field, p.window_radius, p.boundary, p.beta);
        const double se = 0.5 * m.std_error;
        const double diff = m.prob_origin_minus - exact.prob_origin_minus;
        csv << "# exact_prob_origin_minus=" << io::format_double(exact.prob_origin_minus)
            << "\n# mc_prob_origin_minus=" << io::format_double(m.prob_origin_minus)
            << "\n# oracle_z=" << (se > 0.0 ? io::format_double(diff / se) : std::string(diff == 0.0 ? "0" : "inf"))
            << '\n';
    }
    csv << io::sim_csv_header() << '\n' << io::sim_csv_row(p, m) << '\n';
    emit(a.out, csv.str(), out);
    if (!a.out.empty()) {
        out << "mean_spin_origin=" << io::format_double(m.mean_spin_origin) << " +- " << io::format_double(m.std_error)
            << '\n';
    }
    return kExitOk;
}

int cmd_scan(const SimArgs& a, std::ostream& out) {
    auto cfg = io::read_config_file(a.config);
    auto allowed = kSimKeys;
    allowed.insert({"betas", "gammas", "radii"});
    reject_unknown_keys(cfg, allowed);

    ScanGrid grid;
    if (auto it = cfg.find("betas"); it != cfg.end()) grid.betas = io::parse_double_list(it->second);
    if (auto it = cfg.find("gammas"); it != cfg.end()) grid.gammas = io::parse_double_list(it->second);
    if (auto it = cfg.find("radii"); it != cfg.end()) grid.radii = io::parse_long_list(it->second);
    // the grid axes stand in for their scalar keys
    if (!grid.betas.empty() && !cfg.count("beta")) cfg["beta"] = std::to_string(grid.betas.front());
    if (!grid.radii.empty() && !cfg.count("window_radius")) cfg["window_radius"] = std::to_string(grid.radii.front());

    const auto base = io::sim_params_from_config(cfg, resolve_seed(a.seed));
    const auto rows = gap_scan(grid, base, base.seed, a.threads);

    std::ostringstream csv;
    io::write_param_comments(csv, base);
    csv << "# master_seed=" << base.seed << '\n';
    csv << io::sim_csv_header() << ",gap\n";
    for (const auto& row : rows) {
        SimParams minus = row.params;
        minus.boundary = Boundary::Minus;
        minus.seed = row.minus_seed;
        csv << io::sim_csv_row(row.params, row.plus) << ',' << io::format_double(row.gap) << '\n';
        csv << io::sim_csv_row(minus, row.minus) << ',' << io::format_double(row.gap) << '\n';
    }
    emit(a.out, csv.str(), out);
    if (!a.out.empty()) {
        for (const auto& row : rows) {
            out << "beta=" << io::format_double(row.params.beta) << " gamma=" << io::format_double(row.params.field.gamma)
                << " N=" << row.params.window_radius << " gap=" << io::format_double(row.gap) << '\n';
        }
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Long-range Ising chain: bounds, contours, census, Peierls estimates and Monte Carlo"};
    app.name("dyson");
    app.require_subcommand(1);

    std::function<int()> action;

    BoundsArgs bounds;
    auto* sc_bounds = app.add_subcommand("bounds", "certify W_alpha(L) >= zeta_alpha chi_alpha(L)");
    sc_bounds->add_option("--alpha", bounds.alpha, "coupling exponent, 0 <= alpha < alpha_star")->required();
    sc_bounds->add_option("--limit", bounds.limit, "largest L checked")->check(CLI::PositiveNumber);
    sc_bounds->add_option("--out", bounds.out, "JSON report path; the table goes next to it as .csv");
    sc_bounds->callback([&] { action = [&] { return cmd_bounds(bounds, out); }; });

    ContoursArgs contours;
    auto* sc_contours = app.add_subcommand("contours", "triangles and contours of a spin configuration");
    sc_contours->add_option("--spins", contours.spins, "JSON file, or inline JSON")->required();
    sc_contours->add_option("--c", contours.c, "grouping constant");
    sc_contours->add_option("--out", contours.out, "JSON output path");
    sc_contours->callback([&] { action = [&] { return cmd_contours(contours, out); }; });

    CensusArgs census;
    auto* sc_census = app.add_subcommand("census", "enumerate contours through the origin and check the entropy bound");
    sc_census->add_option("--m", census.m, "contour mass (1..4)");
    sc_census->add_option("--c", census.c, "grouping constant");
    sc_census->add_option("--b", census.b, "exponent scale b > 0");
    sc_census->add_option("--alpha", census.alpha, "exponent of the contour norm");
    sc_census->add_option("--horizon", census.horizon, "enumeration window radius");
    sc_census->add_flag("--quasi", census.quasi, "run the random conditional-energy check instead");
    sc_census->add_option("--samples", census.samples, "random configurations for --quasi");
    sc_census->add_option("--alpha-prime", census.alpha_prime, "norm exponent for --quasi");
    sc_census->add_option("--seed", census.seed, "seed for --quasi (else DYSON_SEED)");
    sc_census->add_option("--out", census.out, "JSON output path");
    sc_census->callback([&] { action = [&] { return cmd_census(census, out); }; });

    PeierlsArgs peierls;
    auto* sc_peierls = app.add_subcommand("peierls", "Peierls threshold beta_c, or the series at a given beta");
    sc_peierls->add_option("--alpha", peierls.alpha, "coupling exponent")->required();
    sc_peierls->add_option("--gamma", peierls.gamma, "field decay exponent");
    sc_peierls->add_option("--hstar", peierls.h_star, "field amplitude (1 when only --gamma is given)");
    sc_peierls->add_option("--c", peierls.c, "grouping constant");
    sc_peierls->add_option("--kc-variant", peierls.variant, "printed | corrected | capped")
        ->check(CLI::IsMember({"printed", "corrected", "capped"}));
    sc_peierls->add_option("--beta", peierls.beta, "evaluate the series at this beta instead");
    sc_peierls->add_option("--alpha-prime", peierls.alpha_prime, "norm exponent for --beta (default min(alpha, 0.2))");
    sc_peierls->add_option("--out", peierls.out, "JSON output path");
    sc_peierls->callback([&] { action = [&] { return cmd_peierls(peierls, out); }; });

    SimArgs simulate;
    auto* sc_simulate = app.add_subcommand("simulate", "one Metropolis run from a key=value config");
    sc_simulate->add_option("--config", simulate.config, "config file")->required();
    sc_simulate->add_option("--seed", simulate.seed, "seed (overrides DYSON_SEED and the config)");
    sc_simulate->add_option("--out", simulate.out, "CSV output path");
    sc_simulate->callback([&] { action = [&] { return cmd_simulate(simulate, out); }; });

    SimArgs scan;
    auto* sc_scan = app.add_subcommand("scan", "paired +/- runs over betas, gammas and radii");
    sc_scan->add_option("--config", scan.config, "config file")->required();
    sc_scan->add_option("--seed", scan.seed, "master seed (overrides DYSON_SEED and the config)");
    sc_scan->add_option("--out", scan.out, "CSV output path");
    sc_scan->add_option("--threads", scan.threads, "worker threads (0 = hardware)");
    sc_scan->callback([&] { action = [&] { return cmd_scan(scan, out); }; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        return action();
    } catch (const std::domain_error& e) {
        err << "domain error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "invalid argument: " << e.what() << '\n';
    } catch (const io::FormatError& e) {
        err << "input error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return kExitUsage;
}

}  // namespace dyson::cli
