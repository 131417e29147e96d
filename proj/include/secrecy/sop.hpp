#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "secrecy/asymptotic.hpp"

namespace secrecy {

struct ConstantDistance {
    double d_min = 0.0;
    double d_max = 0.0;
};

// Distance limits sampled on an angle grid; linearly interpolated in between.
struct SampledDistance {
    std::vector<double> thetas;
    std::vector<double> d_min;
    std::vector<double> d_max;

    double lower(double theta) const;
    double upper(double theta) const;
};

struct SuspiciousRegion {
    AngleRange angles;
    std::variant<ConstantDistance, SampledDistance> distances;

    static SuspiciousRegion constant(AngleRange angles, double d_min, double d_max);

    void validate() const;
    bool is_constant() const { return std::holds_alternative<ConstantDistance>(distances); }
    const ConstantDistance& constant_distances() const;
    double d_min(double theta) const;
    double d_max(double theta) const;
};

// Closed-form SOP for uniform jamming and a constant-distance region. Equal
// to 1 when phi reaches phi_max or the rate is unreachable.
double sop_closed_form(const ScenarioConfig& cfg, double phi, const SuspiciousRegion& region);

// Same, reusing a prebuilt CDF of Bob's crosstalk over the region's angles.
double sop_closed_form(const ScenarioConfig& cfg, double phi, const SuspiciousRegion& region,
                       const CrosstalkCdf& cdf);

// Single-Eve outage probability: the area fraction of the region covered by the SOR.
double outage_fraction(const SorBoundary& boundary, const SuspiciousRegion& region);

double sop_intersection(const SorBoundary& boundary, const SuspiciousRegion& region, int n_eves);

// Grid for intersection work: the default lobe grid plus breaks at the region
// edges and, for uniform jamming, at the angles where the boundary crosses
// the region's distance limits.
std::vector<double> intersection_theta_grid(const ScenarioConfig& cfg, double phi, const SuspiciousRegion& region,
                                            int points_per_lobe = 64);

double sop_uniform_intersection(const ScenarioConfig& cfg, double phi, const SuspiciousRegion& region,
                                int points_per_lobe = 64);

// Bound on d_max below which some jamming strictly lowers the SOP, using the
// largest crosstalk reachable from the given angle range.
double jamming_beneficial_dmax(const ScenarioConfig& cfg, const AngleRange& range);
double jamming_beneficial_dmax(const ScenarioConfig& cfg);

struct BenefitCheck {
    bool beneficial = false;
    double bound = 0.0;
    double sop_no_jam = 0.0;
    std::optional<double> witness_phi;
    double sop_witness = 0.0;
    bool meets_power_bound = false;   // witness jam power above jam_power_threshold at d_max
};

// h(x) = x N 2^R / (1 + x d_b^-alpha N - 2^R), the SOR scale at signal power x.
double sor_scale(const ScenarioConfig& cfg, double p_signal_tilde);

// Lower limit on the normalized jamming power that makes jamming raise the
// CDF argument at distance z, for jamming fraction phi.
double jam_power_threshold(const ScenarioConfig& cfg, double phi, double z);

BenefitCheck is_jamming_beneficial(const ScenarioConfig& cfg, const SuspiciousRegion& region, int n_phi = 400);

} // namespace secrecy
