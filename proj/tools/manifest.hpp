#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "secrecy/mc_oracle.hpp"
#include "secrecy/sop.hpp"

namespace secrecy::cli {

// Bad manifest contents; the message names the offending field.
class ManifestError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Scheme { no_jam, uniform, algo1, algo2, algo3 };

const char* to_string(Scheme s);

enum class SweepParam { none, phi, bob_dist, bob_theta_deg, r_th, n_antennas, alpha, n_eves, d_min, d_max };

const char* to_string(SweepParam p);

struct Sweep {
    SweepParam param = SweepParam::none;
    std::vector<double> values;
};

struct McSettings {
    std::int64_t n_samples = 10000;
    std::uint64_t seed = 1;
    std::optional<int> finite_nt;
    double k_factor = 1e4;
};

struct ExperimentManifest {
    ScenarioConfig scenario;
    std::optional<SuspiciousRegion> region;
    Scheme scheme = Scheme::uniform;
    std::optional<double> phi;
    std::optional<std::string> objective;   // "sop" or "area" for uniform optimization
    Sweep sweep;
    std::optional<McSettings> mc;
    std::optional<std::string> output_path;
    std::optional<int> points_per_lobe;
    double phi_step = 1e-3;
};

ExperimentManifest parse_manifest(const nlohmann::json& j);
ExperimentManifest load_manifest(const std::string& path);

// Scenario and region with one sweep value applied.
struct SweepPoint {
    ScenarioConfig cfg;
    std::optional<SuspiciousRegion> region;
    std::optional<double> phi;
};

SweepPoint apply_sweep(const ExperimentManifest& m, double value);

} // namespace secrecy::cli
