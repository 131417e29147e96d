#include "secrecy/scenario.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace secrecy {

void ScenarioConfig::validate() const
{
    geometry.validate();
    if (!(p_tot > 0.0)) throw std::invalid_argument("ScenarioConfig: p_tot must be positive");
    if (!(n0 > 0.0)) throw std::invalid_argument("ScenarioConfig: n0 must be positive");
    if (!(r_th > 0.0)) throw std::invalid_argument("ScenarioConfig: r_th must be positive");
    if (!(bob_dist > 0.0)) throw std::invalid_argument("ScenarioConfig: bob_dist must be positive");
    if (!(alpha >= 2.0 && alpha <= 6.0)) throw std::invalid_argument("ScenarioConfig: alpha must lie in [2, 6]");
    if (!(k_eb >= 0.0 && k_eb <= 1.0)) throw std::invalid_argument("ScenarioConfig: k_eb must lie in [0, 1]");
    if (n_eves < 1) throw std::invalid_argument("ScenarioConfig: n_eves must be >= 1");
    if (!(std::abs(bob_theta) <= kHalfPi + 1e-12))
        throw std::invalid_argument("ScenarioConfig: bob_theta must lie in [-pi/2, pi/2]");
}

double ScenarioConfig::rate_factor() const { return std::exp2(r_th); }

double ScenarioConfig::path_gain(double dist) const { return std::pow(dist, -alpha); }

CrosstalkProfile ScenarioConfig::bob_profile() const
{
    return CrosstalkProfile::make(geometry, bob_theta, k_eb);
}

ScenarioConfig paper_defaults(int n_antennas, double r_th, double bob_dist)
{
    ScenarioConfig cfg;
    cfg.geometry = {n_antennas, 0.5};
    cfg.alpha = 3.0;
    cfg.p_tot = 1.0;
    cfg.n0 = 1e-8;
    cfg.r_th = r_th;
    cfg.bob_theta = 0.0;
    cfg.bob_dist = bob_dist;
    cfg.k_eb = 1.0;
    cfg.n_eves = 1;
    return cfg;
}

const char* to_string(BasisKind kind)
{
    switch (kind) {
    case BasisKind::null_space_uniform: return "null_space_uniform";
    case BasisKind::dft_selected: return "dft_selected";
    case BasisKind::custom: return "custom";
    }
    return "unknown";
}

PowerAllocation PowerAllocation::uniform(double phi)
{
    PowerAllocation a;
    a.phi = phi;
    return a;
}

PowerAllocation PowerAllocation::directional(std::shared_ptr<const JammingBasis> basis, std::vector<double> powers,
                                             double p_tot)
{
    if (!basis)
        throw std::invalid_argument("PowerAllocation: directional allocation needs a basis");
    if (static_cast<int>(powers.size()) != basis->size())
        throw std::invalid_argument("PowerAllocation: one power per basis column required");
    PowerAllocation a;
    a.beam_powers = std::move(powers);
    a.basis = std::move(basis);
    a.phi = a.jam_power_sum() / p_tot;
    return a;
}

double PowerAllocation::jam_power_sum() const
{
    return std::accumulate(beam_powers.begin(), beam_powers.end(), 0.0);
}

void PowerAllocation::validate(const ScenarioConfig& cfg) const
{
    if (!(phi >= 0.0 && phi <= 1.0))
        throw std::invalid_argument("PowerAllocation: phi must lie in [0, 1]");
    if (is_uniform())
        return;
    if (static_cast<int>(beam_powers.size()) != basis->size())
        throw std::invalid_argument("PowerAllocation: beam_powers length does not match the basis");
    if (basis->columns.rows() != cfg.geometry.n_antennas)
        throw std::invalid_argument("PowerAllocation: basis rows do not match n_antennas");
    for (double p : beam_powers)
        if (!(p >= 0.0))
            throw std::invalid_argument("PowerAllocation: beam powers must be non-negative");
    const double target = phi * cfg.p_tot;
    if (std::abs(jam_power_sum() - target) > 1e-9 * std::max(cfg.p_tot, 1e-300))
        throw std::invalid_argument("PowerAllocation: beam powers must sum to phi * p_tot");
}

} // namespace secrecy
