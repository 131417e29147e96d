#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "secrecy/sop.hpp"

namespace secrecy {

struct AllocationResult {
    double phi_opt = 0.0;
    PowerAllocation allocation;
    double objective = 0.0;
    std::vector<double> trace;
    std::vector<std::string> warnings;
};

enum class UniformObjective { sop, sor_area, partial_area };

struct UniformSearchOptions {
    UniformObjective objective = UniformObjective::sop;
    std::vector<int> lobe_indices;   // for partial_area
    double phi_step = 1e-3;
    double refine_tol = 1e-5;
    int points_per_lobe = 64;
};

// Objective of uniform jamming at one phi; 1 (sop) or +inf (areas) at or
// beyond phi_max.
double uniform_objective(const ScenarioConfig& cfg, const SuspiciousRegion* region, double phi,
                         const UniformSearchOptions& opt);

// Grid search over [0, phi_max] followed by golden-section refinement around
// the best grid point. Ties go to the smaller phi.
AllocationResult optimize_phi_uniform(const ScenarioConfig& cfg, const SuspiciousRegion* region,
                                      const UniformSearchOptions& opt = {});

enum class PhiBranch { phi_g, phi_0 };

const char* to_string(PhiBranch branch);

struct ClosedFormPhi {
    double phi = 0.0;
    PhiBranch branch = PhiBranch::phi_g;
    double phi_g = 0.0;
    double phi_0 = 0.0;
};

// Optimal jamming fraction for an Eve with fixed crosstalk s_eb, nearest
// possible distance d_min.
ClosedFormPhi phi_opt_closed_form(const ScenarioConfig& cfg, double s_eb, double d_min);

// Distance threshold (z^alpha form) below which an Eve with crosstalk s_eb
// causes outage at jamming fraction phi.
double distance_threshold(const ScenarioConfig& cfg, double s_eb, double phi);

// Brute-force counterpart of the closed form on a phi grid of the given step:
// the smallest phi with threshold <= d_min^alpha, else the minimizer.
double grid_oracle_phi(const ScenarioConfig& cfg, double s_eb, double d_min, double step = 1e-4);

struct DftJammingBasis {
    std::shared_ptr<JammingBasis> basis;   // all N columns
    std::vector<int> wrapped_index;        // k wrapped to (-N/2, N/2]
    std::vector<double> grid_angles;       // argmax of the response on a dense grid
};

// check_grid_points > 0 also fills grid_angles by dense-grid argmax.
DftJammingBasis build_dft_basis(const ArrayGeometry& geom, int check_grid_points = 0);

// Columns whose beams are mappable, outside Bob's main lobe and, when a range
// is given, pointing into it.
std::vector<int> select_beams(const DftJammingBasis& dft, const ScenarioConfig& cfg, const AngleRange* range);

// A basis holding only the given columns of another.
std::shared_ptr<JammingBasis> sub_basis(const JammingBasis& basis, const std::vector<int>& columns,
                                        BasisKind kind = BasisKind::dft_selected);

// Equal split of phi * p_tot over the DFT beams pointing into the region.
PowerAllocation directional_allocation(const ScenarioConfig& cfg, double phi, const AngleRange& range,
                                       std::vector<std::string>* warnings = nullptr);

// SOP of a directional allocation via region intersection.
double sop_directional(const ScenarioConfig& cfg, const PowerAllocation& alloc, const SuspiciousRegion& region,
                       int points_per_lobe = 64);

AllocationResult algorithm1_directional(const ScenarioConfig& cfg, const SuspiciousRegion& region,
                                        const UniformSearchOptions& opt = {});

struct IterativeOptions {
    double epsilon = 0.0;       // Watts; 0 selects 1e-6 * p_tot
    int line_points = 200;
    int max_sweeps = 100;
    int points_per_lobe = 256;
};

// Default starting point: phi_max / 2 spread equally over the usable DFT beams.
PowerAllocation algorithm2_default_initial(const ScenarioConfig& cfg);

AllocationResult algorithm2_iterative(const ScenarioConfig& cfg, const PowerAllocation& initial,
                                      const IterativeOptions& opt = {});

enum class LobeAngleRule { peak, midpoint };

struct TwoLobeOptions {
    double phi_step = 1e-2;
    int split_points = 101;
    double refine_tol = 1e-4;
    LobeAngleRule angle_rule = LobeAngleRule::midpoint;
    int points_per_lobe = 256;
};

// Angle of side lobe m on the given side (+1 or -1) of Bob.
double side_lobe_angle(const ScenarioConfig& cfg, int m, int side, LobeAngleRule rule);

AllocationResult algorithm3_two_lobes(const ScenarioConfig& cfg, const TwoLobeOptions& opt = {});

// Surrogate of the two-lobe problem: sum over lobes of (a_m - p_m)^(2/alpha).
double surrogate_objective(const std::vector<double>& a, const std::vector<double>& p, double alpha);

// Best point of the surrogate on the part of the budget line sum p = budget
// where 0 <= p_m <= a_m, restricted to its end points (the boundary set).
std::vector<double> surrogate_boundary_minimizer(const std::vector<double>& a, double budget, double alpha);

// Sector upper bound of an SOR area from the radii at the lobe angles of
// every lobe (main lobe and all side lobes on both sides).
double area_upper_bound(const std::vector<double>& lobe_radii_at_angles);

struct SplitResult {
    double t = 0.0;       // share of the budget on the first beam
    double value = 0.0;
};

// One-dimensional search over t in [0, 1]: grid of the given size, then
// golden-section refinement between the neighbours of the best grid point.
SplitResult split_search(const std::function<double(double)>& f, int points, double tol);

} // namespace secrecy
