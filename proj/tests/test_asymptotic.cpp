#include <doctest.h>

#include "oracles.hpp"
#include "secrecy/asymptotic.hpp"
#include "secrecy/errors.hpp"

using namespace secrecy;

namespace {

oracle::Setup setup_of(const ScenarioConfig& c)
{
    oracle::Setup s;
    s.n = c.geometry.n_antennas;
    s.d = c.geometry.spacing;
    s.alpha = c.alpha;
    s.p_tilde = c.p_tilde();
    s.r_th = c.r_th;
    s.bob_theta = c.bob_theta;
    s.bob_dist = c.bob_dist;
    s.k = c.k_eb;
    return s;
}

} // namespace

TEST_CASE("SINRs follow the large-array model")
{
    auto cfg = paper_defaults(100, 10.0, 100.0);
    cfg.k_eb = 0.8;
    auto s = setup_of(cfg);
    for (double phi : {0.0, 0.2, 0.75}) {
        CHECK(sinr_bob_uniform(cfg, phi) == doctest::Approx(oracle::sinr_bob(s, phi)));
        for (double th : {-0.9, 0.0, 0.013, 0.3})
            for (double d : {20.0, 90.0, 400.0})
                CHECK(sinr_eve_uniform(cfg, phi, th, d) == doctest::Approx(oracle::sinr_eve(s, phi, th, d)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(sinr_bob_uniform(cfg, 1.0), std::domain_error);
    CHECK_THROWS_AS(sinr_eve_uniform(cfg, 0.1, 0.0, 0.0), std::domain_error);
}

TEST_CASE("phi_max leaves Bob exactly at the target rate")
{
    auto cfg = paper_defaults(100, 10.0, 100.0);
    double pm = phi_max(cfg);
    CHECK(pm == doctest::Approx(0.8977).epsilon(1e-4));
    CHECK(sinr_bob_uniform(cfg, pm) == doctest::Approx(std::exp2(10.0) - 1.0).epsilon(1e-12));
    auto far = paper_defaults(10, 20.0, 1000.0);
    try {
        phi_max(far);
        FAIL("expected InfeasibleRateError");
    } catch (const InfeasibleRateError& e) {
        CHECK(e.deficit() == doctest::Approx(std::exp2(20.0) - 1.0 - 1e8 * 10 * 1e-9));
    }
}

TEST_CASE("uniform boundary equals the outage radius found by bisection")
{
    for (double th_b : {0.0, 0.35}) {
        auto cfg = paper_defaults(64, 8.0, 120.0);
        cfg.bob_theta = th_b;
        cfg.k_eb = 0.9;
        auto s = setup_of(cfg);
        std::vector<double> thetas{-1.2, -0.4, th_b - 0.01, th_b, th_b + 0.02, 0.05, 0.6, 1.3};
        std::sort(thetas.begin(), thetas.end());
        for (double phi : {0.0, 0.3, 0.7}) {
            auto b = sor_boundary_uniform(cfg, phi, thetas);
            for (std::size_t i = 0; i < thetas.size(); ++i) {
                double ref = oracle::outage_radius(s, phi, thetas[i]);
                CHECK(b.radii[i] == doctest::Approx(ref).epsilon(1e-7).scale(1e-6));
                CHECK(b.radii[i] == doctest::Approx(oracle::radius_closed(s, phi, thetas[i])).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("angles behind the array get radius zero")
{
    auto cfg = paper_defaults(32, 5.0, 100.0);
    auto b = sor_boundary_uniform(cfg, 0.2, {-2.0, 0.0, 1.7});
    CHECK(b.radii[0] == 0.0);
    CHECK(b.radii[1] > 0.0);
    CHECK(b.radii[2] == 0.0);
}

TEST_CASE("no-jam boundary equals uniform at phi = 0")
{
    auto cfg = paper_defaults(50, 5.0, 80.0);
    auto g = default_theta_grid(cfg.geometry, 0.0);
    auto a = sor_boundary_nojam(cfg, g);
    auto b = sor_boundary_uniform(cfg, 0.0, g);
    CHECK(a.radii == b.radii);
}

TEST_CASE("lobe radii match the boundary at the lobe midpoints")
{
    auto cfg = paper_defaults(100, 10.0, 100.0);
    auto s = setup_of(cfg);
    const double w = cfg.geometry.lobe_width();
    for (double phi : {0.0, 0.1, 0.6}) {
        auto r = lobe_radii(cfg, phi, 8);
        CHECK(r.size() == 9);
        CHECK(r[0] == doctest::Approx(oracle::radius_closed(s, phi, 0.0)).epsilon(1e-10));
        for (int m = 1; m <= 8; ++m)
            CHECK(r[m] == doctest::Approx(oracle::radius_closed(s, phi, std::asin((m + 0.5) * w))).epsilon(1e-9).scale(1e-9));
    }
}

TEST_CASE("main-lobe radius grows with phi")
{
    auto cfg = paper_defaults(100, 10.0, 100.0);
    double prev = 0.0;
    for (double phi = 0.0; phi < phi_max(cfg); phi += 0.01) {
        double r = lobe_radii(cfg, phi, 0)[0];
        CHECK(r > prev);
        prev = r;
    }
}

TEST_CASE("sor_area agrees with a dense trapezoid of the outage radius")
{
    for (double th_b : {0.0, -0.5}) {
        auto cfg = paper_defaults(40, 6.0, 90.0);
        cfg.bob_theta = th_b;
        auto s = setup_of(cfg);
        for (double phi : {0.0, 0.25, 0.6}) {
            auto grid = uniform_theta_grid(cfg, phi, 64);
            double a = sor_area(sor_boundary_uniform(cfg, phi, grid));
            double ref = oracle::trapezoid(
                [&](double t) {
                    double r = oracle::radius_closed(s, phi, t);
                    return 0.5 * r * r;
                },
                -kHalfPi, kHalfPi, 400000);
            CHECK(a == doctest::Approx(ref).epsilon(1e-4));
        }
    }
}

TEST_CASE("lobe decomposition partitions the area")
{
    auto cfg = paper_defaults(30, 5.0, 100.0);
    auto b = sor_boundary_uniform(cfg, 0.0, uniform_theta_grid(cfg, 0.0));
    double total = sor_area(b);
    double sum = 0.0;
    std::vector<int> all;
    for (const auto& l : b.lobes) {
        sum += l.area;
        all.push_back(l.index);
        CHECK(l.theta_lo <= l.theta_hi);
        CHECK(l.max_radius >= 0.0);
    }
    CHECK(sum == doctest::Approx(total).epsilon(1e-9));
    CHECK(partial_area(b, all) == doctest::Approx(total).epsilon(1e-9));
    CHECK(partial_area(b, {0}) < total);
}

TEST_CASE("coarse lobes raise a warning")
{
    auto cfg = paper_defaults(30, 5.0, 100.0);
    std::vector<std::string> w;
    sor_area(sor_boundary_uniform(cfg, 0.3, default_theta_grid(cfg.geometry, 0.0, {4, {}})), &w);
    CHECK(!w.empty());
    w.clear();
    sor_area(sor_boundary_uniform(cfg, 0.3, default_theta_grid(cfg.geometry, 0.0, {64, {}})), &w);
    CHECK(w.empty());
}

TEST_CASE("the boundary vanishes beyond delta_theta_max")
{
    auto cfg = paper_defaults(100, 10.0, 100.0);
    auto s = setup_of(cfg);
    for (double phi : {0.3, 0.5, 0.8}) {
        double dt = delta_theta_max(cfg, phi);
        CHECK(dt > 0.0);
        CHECK(dt < kHalfPi);
        double beyond = 0.0, inside = 0.0;
        for (int i = 0; i <= 200000; ++i) {
            double t = -kHalfPi + kPi * i / 200000.0;
            double r = oracle::radius_closed(s, phi, t);
            if (std::abs(t) > dt + 1e-9) beyond = std::max(beyond, r);
            else if (std::abs(t) > dt - 1e-3) inside = std::max(inside, r);
        }
        CHECK(beyond == 0.0);
        CHECK(inside > 0.0);
    }
    CHECK(delta_theta_max(cfg, 0.0) == doctest::Approx(kPi));
}

TEST_CASE("null angles and the default grid")
{
    ArrayGeometry g{20, 0.5};
    auto nulls = null_angles(g, 0.0);
    CHECK(std::is_sorted(nulls.begin(), nulls.end()));
    for (double t : nulls)
        if (std::abs(t) < kHalfPi) CHECK(oracle::crosstalk_direct(t, 0.0, 20, 0.5) < 1e-20);
    auto grid = default_theta_grid(g, 0.0, {16, {0.123}});
    CHECK(std::is_sorted(grid.begin(), grid.end()));
    CHECK(grid.front() == -kHalfPi);
    CHECK(grid.back() == kHalfPi);
    CHECK(std::find(grid.begin(), grid.end(), 0.123) != grid.end());
    for (double t : nulls) CHECK(std::find(grid.begin(), grid.end(), t) != grid.end());
}

TEST_CASE("level crossings hit the requested crosstalk")
{
    auto prof = CrosstalkProfile::make({50, 0.5}, 0.2, 1.0);
    for (double t : level_crossing_angles(prof, 0.01))
        CHECK(oracle::crosstalk_direct(t, 0.2, 50, 0.5) == doctest::Approx(0.01).epsilon(1e-6));
}

TEST_CASE("side-lobe area bound needs alpha = 2 and broadside")
{
    auto cfg = paper_defaults(64, 10.0, 100.0);
    CHECK_THROWS_AS(side_lobe_area_bound(cfg, 0.3, 1), PreconditionError);
    cfg.alpha = 2.0;
    cfg.bob_theta = 0.1;
    CHECK_THROWS_AS(side_lobe_area_bound(cfg, 0.3, 1), PreconditionError);
    cfg.bob_theta = 0.0;
    CHECK_THROWS_AS(side_lobe_area_bound(cfg, 0.3, 0), PreconditionError);
    CHECK(side_lobe_area_bound(cfg, 0.0, 1) > side_lobe_area_bound(cfg, 0.0, 2));
}

TEST_CASE("beam response of a steering column is N times the kernel")
{
    ArrayGeometry g{24, 0.5};
    JammingBasis basis;
    basis.columns.resize(24, 1);
    auto sv = steering_vector(0.4, g);
    for (int i = 0; i < 24; ++i) basis.columns(i, 0) = sv[i] / std::sqrt(24.0);
    std::vector<double> th{-0.3, 0.0, 0.4, 1.0};
    auto r = beam_response(basis, g, th);
    for (int i = 0; i < 4; ++i)
        CHECK(r(i, 0) == doctest::Approx(24.0 * oracle::crosstalk_direct(th[i], 0.4, 24, 0.5)).epsilon(1e-9).scale(1e-12));
}

TEST_CASE("directional jamming over a full null-space basis is uniform jamming scaled by N/(N-1)")
{
    auto cfg = paper_defaults(16, 4.0, 80.0);
    const int n = 16;
    // orthonormal complement of Bob's steering vector via Gram-Schmidt on the identity
    auto sb = steering_vector(0.0, cfg.geometry);
    Eigen::VectorXcd b(n);
    for (int i = 0; i < n; ++i) b(i) = sb[i] / std::sqrt(double(n));
    std::vector<Eigen::VectorXcd> cols{b};
    for (int k = 0; k < n && (int)cols.size() < n; ++k) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Unit(n, k);
        for (const auto& c : cols) v -= c * c.dot(v);
        if (v.norm() > 1e-6) cols.push_back(v / v.norm());
    }
    auto basis = std::make_shared<JammingBasis>();
    basis->kind = BasisKind::custom;
    basis->columns.resize(n, n - 1);
    for (int j = 1; j < n; ++j) basis->columns.col(j - 1) = cols[j];
    const double phi = 0.4;
    std::vector<double> powers(n - 1, phi * cfg.p_tot / (n - 1));
    auto alloc = PowerAllocation::directional(basis, powers, cfg.p_tot);
    std::vector<double> th{-1.0, -0.2, 0.05, 0.3, 0.9};
    auto dir = sor_boundary_directional(cfg, alloc, th);
    auto s = setup_of(cfg);
    const double t = (1.0 + oracle::sinr_bob(s, phi)) / std::exp2(s.r_th) - 1.0;
    for (std::size_t i = 0; i < th.size(); ++i) {
        double x = oracle::crosstalk_direct(th[i], 0.0, n, 0.5);
        double da = (1.0 - phi) * s.p_tilde * n * x / t - phi * s.p_tilde * n * (1.0 - x) / (n - 1);
        double ref = da > 0 ? std::cbrt(da) : 0.0;
        CHECK(dir.radii[i] == doctest::Approx(ref).epsilon(1e-7).scale(1e-6));
    }
}

TEST_CASE("directional evaluator with zero powers reproduces the no-jam boundary")
{
    auto cfg = paper_defaults(32, 6.0, 100.0);
    auto basis = std::make_shared<JammingBasis>();
    basis->columns = Eigen::MatrixXcd::Identity(32, 3);
    auto grid = default_theta_grid(cfg.geometry, 0.0);
    DirectionalEvaluator ev(cfg, basis, grid);
    auto r = ev.radii(0.0, {0.0, 0.0, 0.0});
    auto ref = sor_boundary_nojam(cfg, grid);
    for (std::size_t i = 0; i < r.size(); ++i) CHECK(r[i] == doctest::Approx(ref.radii[i]).epsilon(1e-12));
    CHECK(ev.area(0.0, {0.0, 0.0, 0.0}) == doctest::Approx(sor_area(ref)).epsilon(1e-12));
    CHECK_THROWS_AS(ev.jam_term({1.0}), std::invalid_argument);
}

TEST_CASE("sor_constants and infeasible phi")
{
    auto cfg = paper_defaults(100, 10.0, 100.0);
    auto c = sor_constants(cfg, 0.5);
    CHECK(c.c3 == doctest::Approx(c.c2 / c.c1));
    CHECK(c.c2 == doctest::Approx(0.5e8));
    CHECK_THROWS_AS(sor_constants(cfg, 0.95), InfeasibleRateError);
    CHECK_THROWS_AS(sor_constants(cfg, -0.1), std::domain_error);
    CHECK_THROWS_AS(sor_boundary_uniform(cfg, 0.3, {0.2, 0.1}), std::invalid_argument);
}
