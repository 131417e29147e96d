#pragma once

// Finite-array Monte Carlo simulation of Rician channels with MRT towards
// Bob and artificial-noise jamming; ground truth for the large-array formulas.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "secrecy/sop.hpp"

namespace secrecy {

enum class McQuantity { sinr_bob, sinr_eve, crosstalk_cdf, sop };

const char* to_string(McQuantity q);

struct McRunSpec {
    std::int64_t n_samples = 10000;
    std::uint64_t master_seed = 1;
    int finite_nt = 400;
    McQuantity estimate = McQuantity::sop;
    double k_factor = 1e4;   // Rician factor of every simulated link

    void validate() const;
};

// Independent generator for one (sample, receiver) pair; receiver 0 is Bob,
// receiver l >= 1 is the l-th Eve.
std::mt19937_64 substream(std::uint64_t master_seed, std::uint64_t sample, std::uint64_t receiver);

struct ChannelDraw {
    Eigen::VectorXcd h;
    double k_factor = 0.0;
    double theta = 0.0;
    double dist = 0.0;
};

ChannelDraw draw_channel(double theta, double dist, double k_factor, const ArrayGeometry& geom,
                         std::mt19937_64& rng);

// Orthonormal basis (N x (N-1)) of the complement of h_b, via a Householder reflector.
Eigen::MatrixXcd null_space_basis(const Eigen::VectorXcd& h_b);

struct SinrPair {
    double bob = 0.0;
    double eve = 0.0;
};

// Exact SINRs with MRT w_b = h_b / |h_b|. Uniform allocations spread
// phi * p_tot over the null space of h_b; directional ones use their basis.
SinrPair sinr_exact(const ChannelDraw& bob, const ChannelDraw& eve, const PowerAllocation& alloc,
                    const ScenarioConfig& cfg);

struct McResult {
    double value = 0.0;
    double std_error = 0.0;
    std::vector<double> samples;   // per-sample values for SINR / crosstalk runs
};

// Fraction of trials in secrecy outage with L Eves placed uniformly in area.
McResult empirical_sop(const ScenarioConfig& cfg, const SuspiciousRegion& region, const PowerAllocation& alloc,
                       const McRunSpec& spec);

// |h_e^H h_b / N|^2 for Eves at angles uniform over the range.
McResult crosstalk_samples(const ScenarioConfig& cfg, const AngleRange& range, const McRunSpec& spec);

// Dispatches on spec.estimate. SINR runs place Eves like empirical_sop and
// report the median.
McResult run_mc(const ScenarioConfig& cfg, const SuspiciousRegion& region, const PowerAllocation& alloc,
                const McRunSpec& spec);

} // namespace secrecy
