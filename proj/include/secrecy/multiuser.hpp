#pragma once

// Several scheduled users, each served by its own MRT beam. For one user the
// other users' beams act as additional jamming.

#include <vector>

#include "secrecy/asymptotic.hpp"

namespace secrecy {

struct UserSpec {
    double theta = 0.0;
    double dist = 100.0;
    double power = 0.0;   // Watts
};

struct MultiuserScenario {
    ScenarioConfig cfg;            // bob_theta / bob_dist are ignored
    std::vector<UserSpec> users;
    PowerAllocation jam_alloc;     // jamming in the users' common null space

    // Users must sit outside each other's main lobe and the powers must fit
    // in p_tot.
    void validate() const;

    ScenarioConfig user_config(int u) const;
};

SorBoundary mu_sor_boundary(const MultiuserScenario& scn, int u, const std::vector<double>& thetas);

struct WorstArea {
    double area = 0.0;
    int user = 0;
    std::vector<double> areas;
};

// Largest per-user SOR area; ties within 1e-9 relative go to the lowest
// user index. Each user gets
// its own default grid unless a shared one is given.
WorstArea mu_worst_area(const MultiuserScenario& scn, int points_per_lobe = 64);
WorstArea mu_worst_area(const MultiuserScenario& scn, const std::vector<double>& thetas);

} // namespace secrecy
