#pragma once

// Large-array SINRs and secrecy outage region boundaries.

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "secrecy/scenario.hpp"

namespace secrecy {

double sinr_bob_uniform(const ScenarioConfig& cfg, double phi);
double sinr_eve_uniform(const ScenarioConfig& cfg, double phi, double eve_theta, double eve_dist);

// Largest jamming fraction that still lets Bob reach the target rate.
// Throws InfeasibleRateError when even phi = 0 does not.
double phi_max(const ScenarioConfig& cfg);

struct SorConstants {
    double c1 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;
};

SorConstants sor_constants(const ScenarioConfig& cfg, double phi);

struct SorLobe {
    int index = 0;       // 0 = main lobe
    int side = 0;        // -1 left of Bob, +1 right, 0 for the main lobe
    double theta_lo = 0.0;
    double theta_hi = 0.0;
    double max_radius = 0.0;
    double area = 0.0;
    int n_points = 0;
};

struct SorBoundary {
    std::vector<double> thetas;
    std::vector<double> radii;
    std::vector<SorLobe> lobes;
};

// Angles in [-pi/2, pi/2] where the kernel around theta_b has a null, plus the
// two endfire angles. Sorted.
std::vector<double> null_angles(const ArrayGeometry& geom, double theta_b);

// Angles where K s(theta) crosses the level u (u in sine-kernel units after
// dividing by K); used to put grid breaks at cutoff kinks.
std::vector<double> level_crossing_angles(const CrosstalkProfile& profile, double u);

struct GridOptions {
    int points_per_lobe = 64;
    std::vector<double> extra_breaks;
};

// Nonuniform grid over [-pi/2, pi/2]: lobe edges at nulls, cosine-clustered
// points inside each piece.
std::vector<double> default_theta_grid(const ArrayGeometry& geom, double theta_b, const GridOptions& opt = {});

// Default grid plus breaks at the C3 cutoff of the uniform boundary.
std::vector<double> uniform_theta_grid(const ScenarioConfig& cfg, double phi, int points_per_lobe = 64);

// Radius 0 for |theta| > pi/2, where the model is undefined.
SorBoundary sor_boundary_uniform(const ScenarioConfig& cfg, double phi, const std::vector<double>& thetas);
SorBoundary sor_boundary_nojam(const ScenarioConfig& cfg, const std::vector<double>& thetas);
SorBoundary sor_boundary_directional(const ScenarioConfig& cfg, const PowerAllocation& alloc,
                                     const std::vector<double>& thetas);

// Largest radius of the main lobe (element 0) and of each side lobe m = 1..M.
std::vector<double> lobe_radii(const ScenarioConfig& cfg, double phi, int n_lobes = -1);

double delta_theta_max(const ScenarioConfig& cfg, double phi);

double sor_area(const SorBoundary& boundary, std::vector<std::string>* warnings = nullptr);

// Sum of lobe areas for the given side-lobe indices (both sides).
double partial_area(const SorBoundary& boundary, const std::vector<int>& lobe_indices);

// Upper bound on a single side lobe's area; needs alpha = 2 and theta_b = 0.
double side_lobe_area_bound(const ScenarioConfig& cfg, double phi, int m);

// Response |s(theta)^H v|^2 of every basis column on a grid (rows = angles).
Eigen::MatrixXd beam_response(const JammingBasis& basis, const ArrayGeometry& geom, const std::vector<double>& thetas);

// Repeated evaluation of directional boundaries on one grid and one basis.
class DirectionalEvaluator {
public:
    DirectionalEvaluator(const ScenarioConfig& cfg, std::shared_ptr<const JammingBasis> basis,
                         std::vector<double> thetas);

    const std::vector<double>& thetas() const { return thetas_; }
    const Eigen::MatrixXd& response() const { return response_; }
    const std::shared_ptr<const JammingBasis>& basis() const { return basis_; }

    // Signal term of the boundary before jamming, for the given phi.
    std::vector<double> signal_term(double phi) const;

    // Jamming term sum_b response(i, b) * p_b / N0.
    std::vector<double> jam_term(const std::vector<double>& beam_powers) const;

    std::vector<double> radii(double phi, const std::vector<double>& beam_powers) const;
    std::vector<double> radii_from_terms(const std::vector<double>& signal, const std::vector<double>& jam) const;

    double area(double phi, const std::vector<double>& beam_powers) const;
    double area_from_radii(const std::vector<double>& radii) const;

    SorBoundary boundary(double phi, const std::vector<double>& beam_powers) const;

private:
    ScenarioConfig cfg_;
    std::shared_ptr<const JammingBasis> basis_;
    std::vector<double> thetas_;
    std::vector<double> s_values_;
    Eigen::MatrixXd response_;
};

// Attaches lobe decomposition (supports, max radius, area) to a sampled boundary.
void attach_lobes(SorBoundary& boundary, const ArrayGeometry& geom, double theta_b);

} // namespace secrecy
