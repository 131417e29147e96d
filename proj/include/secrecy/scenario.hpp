#pragma once

#include <memory>
#include <vector>

#include <Eigen/Dense>

#include "secrecy/crosstalk.hpp"

namespace secrecy {

// Physical setup of one experiment. Powers in Watts, distances in meters,
// angles in radians.
struct ScenarioConfig {
    ArrayGeometry geometry;
    double alpha = 3.0;
    double p_tot = 1.0;
    double n0 = 1e-8;
    double r_th = 10.0;
    double bob_theta = 0.0;
    double bob_dist = 100.0;
    double k_eb = 1.0;
    int n_eves = 1;

    void validate() const;

    double p_tilde() const { return p_tot / n0; }
    double rate_factor() const;              // 2^R_th
    double path_gain(double dist) const;     // dist^-alpha
    CrosstalkProfile bob_profile() const;
};

// Defaults shared by all figure reproductions: half-wavelength spacing,
// alpha = 3, 1 W total power, N0 = 1e-5 mW, strong LOS.
ScenarioConfig paper_defaults(int n_antennas, double r_th, double bob_dist);

enum class BasisKind { null_space_uniform, dft_selected, custom };

const char* to_string(BasisKind kind);

struct JammingBasis {
    BasisKind kind = BasisKind::custom;
    Eigen::MatrixXcd columns;          // N_t x n_beams, orthonormal columns
    std::vector<double> beam_angles;   // radians, one per column
    std::vector<bool> mappable;

    int size() const { return static_cast<int>(columns.cols()); }
};

struct PowerAllocation {
    double phi = 0.0;
    std::vector<double> beam_powers;   // Watts, one per basis column
    std::shared_ptr<const JammingBasis> basis;

    // Uniform jamming over the null space of Bob's channel; no explicit beams.
    static PowerAllocation uniform(double phi);
    static PowerAllocation directional(std::shared_ptr<const JammingBasis> basis, std::vector<double> powers,
                                       double p_tot);

    bool is_uniform() const { return basis == nullptr || basis->kind == BasisKind::null_space_uniform; }
    double jam_power_sum() const;
    void validate(const ScenarioConfig& cfg) const;
};

} // namespace secrecy
