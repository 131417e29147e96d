#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "secrecy/errors.hpp"
#include "secrecy/multiuser.hpp"

using namespace secrecy;

namespace {

MultiuserScenario two_users(double jam_phi)
{
    MultiuserScenario m;
    m.cfg = paper_defaults(64, 4.0, 100.0);
    m.users = {{deg_to_rad(-20), 90.0, 0.4}, {deg_to_rad(25), 110.0, 0.3}};
    m.jam_alloc = PowerAllocation::uniform(jam_phi);
    return m;
}

// Outage distance for user u from the SINRs themselves: bisection on the
// secrecy rate along the ray at theta.
double ray_oracle(const MultiuserScenario& m, int u, double theta)
{
    const auto& c = m.cfg;
    const double n = c.geometry.n_antennas;
    const auto& me = m.users[static_cast<std::size_t>(u)];
    const double sinr_b = me.power / c.n0 * n * std::pow(me.dist, -c.alpha);
    auto rate_gap = [&](double d) {
        double g = std::pow(d, -c.alpha);
        double other = 0.0, leak = 0.0;
        for (std::size_t v = 0; v < m.users.size(); ++v) {
            double s = oracle::kernel_direct(std::sin(theta) - std::sin(m.users[v].theta), c.geometry.n_antennas,
                                             c.geometry.spacing);
            leak += s;
            if (static_cast<int>(v) != u) other += m.users[v].power * n * s;
        }
        double s_me = oracle::kernel_direct(std::sin(theta) - std::sin(me.theta), c.geometry.n_antennas,
                                            c.geometry.spacing);
        double jam = m.jam_alloc.phi * c.p_tot * std::max(1.0 - leak, 0.0);
        double sinr_e = me.power * n * s_me * g / (c.n0 + g * (other + jam));
        return std::log2(1 + sinr_b) - std::log2(1 + sinr_e) - c.r_th;
    };
    if (rate_gap(1e-3) >= 0.0) return 0.0;
    double lo = 1e-3, hi = 1e7;
    for (int i = 0; i < 200; ++i) {
        double mid = std::sqrt(lo * hi);
        (rate_gap(mid) < 0.0 ? lo : hi) = mid;
    }
    return lo;
}

} // namespace

TEST_CASE("single user reduces to the one-user boundary")
{
    const double phi = 0.25;
    MultiuserScenario m;
    m.cfg = paper_defaults(64, 5.0, 100.0);
    m.users = {{m.cfg.bob_theta, m.cfg.bob_dist, (1 - phi) * m.cfg.p_tot}};
    m.jam_alloc = PowerAllocation::uniform(phi);
    auto grid = default_theta_grid(m.cfg.geometry, m.cfg.bob_theta);
    auto mu = mu_sor_boundary(m, 0, grid);
    auto su = sor_boundary_uniform(m.cfg, phi, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(mu.radii[i] == doctest::Approx(su.radii[i]).epsilon(1e-10).scale(1e-9));
    m.jam_alloc = PowerAllocation::uniform(0.0);
    m.users[0].power = m.cfg.p_tot;
    auto nj = sor_boundary_nojam(m.cfg, grid);
    auto mu0 = mu_sor_boundary(m, 0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i)
        CHECK(mu0.radii[i] == doctest::Approx(nj.radii[i]).epsilon(1e-10).scale(1e-9));
}

TEST_CASE("multiuser boundary matches the SINR ray oracle")
{
    auto m = two_users(0.2);
    for (int u : {0, 1})
        for (double deg : {-60.0, -22.0, -5.0, 10.0, 24.0, 70.0}) {
            auto b = mu_sor_boundary(m, u, {deg_to_rad(deg)});
            CHECK(b.radii[0] == doctest::Approx(ray_oracle(m, u, deg_to_rad(deg))).epsilon(1e-8).scale(1e-6));
        }
}

TEST_CASE("another user's beam shrinks the outage region")
{
    MultiuserScenario one;
    one.cfg = paper_defaults(64, 4.0, 100.0);
    one.users = {{deg_to_rad(-20), 90.0, 0.4}};
    one.jam_alloc = PowerAllocation::uniform(0.0);
    auto two = one;
    two.users.push_back({deg_to_rad(25), 110.0, 0.3});
    auto grid = default_theta_grid(one.cfg.geometry, one.users[0].theta);
    auto a = mu_sor_boundary(one, 0, grid), b = mu_sor_boundary(two, 0, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(b.radii[i] <= a.radii[i] + 1e-12);
    CHECK(sor_area(b) < sor_area(a));
}

TEST_CASE("mirrored users tie and the lower index wins")
{
    MultiuserScenario m;
    m.cfg = paper_defaults(50, 4.0, 100.0);
    m.users = {{0.4, 100.0, 0.3}, {-0.4, 100.0, 0.3}};
    m.jam_alloc = PowerAllocation::uniform(0.2);
    auto w = mu_worst_area(m);
    REQUIRE(w.areas.size() == 2);
    CHECK(w.areas[0] == doctest::Approx(w.areas[1]).epsilon(1e-9));
    CHECK(w.user == 0);
    m.users[1].dist = 120.0;
    auto w2 = mu_worst_area(m);
    CHECK(w2.user == 1);
    CHECK(w2.area == w2.areas[1]);
    CHECK(w2.areas[1] > w2.areas[0]);
}

TEST_CASE("multiuser validation")
{
    auto m = two_users(0.2);
    CHECK_NOTHROW(m.validate());
    auto close = m;
    close.users[1].theta = close.users[0].theta + 0.01;
    CHECK_THROWS_AS(close.validate(), std::invalid_argument);
    auto on_null = m;
    on_null.users[1].theta = std::asin(std::sin(m.users[0].theta) + m.cfg.geometry.lobe_width());
    CHECK_NOTHROW(on_null.validate());
    auto over = m;
    over.users[0].power = 0.7;
    CHECK_THROWS_AS(over.validate(), std::invalid_argument);
    auto none = m;
    none.users.clear();
    CHECK_THROWS_AS(none.validate(), std::invalid_argument);
    auto weak = m;
    weak.users[1].dist = 2000.0;
    CHECK_THROWS_WITH_AS(mu_sor_boundary(weak, 1, {0.0}), doctest::Contains("user 1"), InfeasibleRateError);
    CHECK_THROWS_AS(m.user_config(2), std::out_of_range);
}
