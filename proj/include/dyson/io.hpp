#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "dyson/bounds.hpp"
#include "dyson/census.hpp"
#include "dyson/geometry.hpp"
#include "dyson/lattice.hpp"
#include "dyson/simulator.hpp"

namespace dyson::io {

using Json = nlohmann::ordered_json;

/// Malformed input files; the message names the offending key or value.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Json to_json(const SpinConfiguration& sigma);
/// {"N", "boundary", "spins"} or a bare array of 2N+1 spins (plus boundary).
SpinConfiguration spins_from_json(const Json& j);

Json to_json(const Triangle& t);
Json to_json(const Contour& g);
Json to_json(const ContourConfiguration& cfg);
Json to_json(const SeparationReport& r);
Json to_json(const BoundReport& r);
Json to_json(const EntropyCheck& r);
Json to_json(const QuasiAdditivityReport& r);
Json to_json(const BetaCBound& r);
Json to_json(const Measurement& m);

/// Shortest round-tripping decimal form of a double.
std::string format_double(double v);

// --- flat key=value configuration ------------------------------------------

using ConfigMap = std::map<std::string, std::string>;

/// Lines of key = value; '#' starts a comment. Duplicate keys are an error.
ConfigMap parse_config(std::istream& in);
ConfigMap read_config_file(const std::string& path);

/// Keys that a simulation config must define.
const std::vector<std::string>& required_sim_keys();

/**
 * Builds SimParams from the config. Missing required keys are reported all at
 * once. The seed is taken from `seed_override` when given, else from the
 * "seed" key; if neither exists "seed" is reported missing.
 */
SimParams sim_params_from_config(const ConfigMap& cfg, std::optional<std::uint64_t> seed_override);

/// Comma-separated list of numbers, e.g. "0.05,0.5,2".
std::vector<double> parse_double_list(const std::string& text);
std::vector<long> parse_long_list(const std::string& text);

Boundary parse_boundary(const std::string& text);
std::string to_string(Boundary b);

// --- CSV --------------------------------------------------------------------

/// alpha,gamma,h_star,beta,N,boundary,mean_spin_origin,std_error,samples,seed
const std::string& sim_csv_header();
std::string sim_csv_row(const SimParams& p, const Measurement& m);
/// "# key=value" lines describing every simulation parameter.
void write_param_comments(std::ostream& out, const SimParams& p);

}  // namespace dyson::io
