#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "secrecy/crosstalk.hpp"

using namespace secrecy;

TEST_CASE("kernel matches the explicit steering sum")
{
    for (int n : {8, 50, 100, 129}) {
        ArrayGeometry g{n, 0.5};
        for (double x : {0.0, 1e-9, 0.003, 0.0171, 0.25, 0.5, 0.999, 1.4, 2.0})
            CHECK(s_kernel(x, g) == doctest::Approx(oracle::kernel_direct(x, n, 0.5)).epsilon(1e-9));
    }
    ArrayGeometry g{16, 0.37};
    for (double x : {0.01, 0.2, 0.7, 1.9})
        CHECK(s_kernel(x, g) == doctest::Approx(oracle::kernel_direct(x, 16, 0.37)).epsilon(1e-9));
}

TEST_CASE("kernel has nulls at multiples of the lobe width and a unit peak")
{
    ArrayGeometry g{100, 0.5};
    CHECK(s_kernel(0.0, g) == 1.0);
    for (int k = 1; k < 10; ++k) CHECK(s_kernel(k * g.lobe_width(), g) < 1e-20);
    // grating lobe at x = 1 / d
    CHECK(s_kernel(2.0, g) == doctest::Approx(1.0));
}

TEST_CASE("derivative agrees with a central difference")
{
    ArrayGeometry g{40, 0.5};
    for (double x : {0.013, 0.07, 0.31, 0.8}) {
        double h = 1e-7;
        double fd = (s_kernel(x + h, g) - s_kernel(x - h, g)) / (2 * h);
        CHECK(s_kernel_derivative(x, g) == doctest::Approx(fd).epsilon(1e-5));
    }
}

TEST_CASE("normalized crosstalk scales with the K product")
{
    auto p = CrosstalkProfile::make({100, 0.5}, 0.2, 0.25);
    for (double th : {-1.0, 0.0, 0.21, 0.5})
        CHECK(normalized_crosstalk(th, p) == doctest::Approx(0.25 * oracle::crosstalk_direct(th, 0.2, 100, 0.5)));
    CHECK(k_factor_product(1.0, 1.0) == doctest::Approx(0.25));
    CHECK(k_factor_product(INFINITY, INFINITY) == 1.0);
    CHECK(k_factor_product(0.0, 5.0) == 0.0);
    CHECK_THROWS_AS(k_factor_product(-1.0, 1.0), std::invalid_argument);
}

TEST_CASE("lobe apex is the maximum of a dense scan")
{
    ArrayGeometry g{100, 0.5};
    for (int m : {1, 2, 5, 30, 99}) {
        auto [lo, hi] = lobe_interval(m, g);
        double best = 0.0;
        for (int i = 0; i <= 200000; ++i) best = std::max(best, oracle::kernel_direct(lo + (hi - lo) * i / 200000.0, 100, 0.5));
        auto apex = lobe_apex(m, g);
        CHECK(apex.x > lo);
        CHECK(apex.x < hi);
        CHECK(apex.value >= best * (1 - 1e-8));
        CHECK(apex.value == doctest::Approx(best).epsilon(1e-8));
        // the tabulated peak sits at the lobe midpoint, never above the apex
        CHECK(peak_value(m, g) == doctest::Approx(oracle::kernel_direct(0.5 * (lo + hi), 100, 0.5)).epsilon(1e-9));
        CHECK(peak_value(m, g) <= apex.value + 1e-15);
    }
}

TEST_CASE("large-array peak approximation is close for big N")
{
    ArrayGeometry g{1000, 0.5};
    for (int m = 1; m <= 5; ++m)
        CHECK(peak_value(m, g, PeakForm::large_array) ==
              doctest::Approx(peak_value(m, g)).epsilon(0.02));
    CHECK(peak_value(1, g, PeakForm::large_array) == doctest::Approx(4.0 / (9.0 * oracle::pi * oracle::pi)));
}

TEST_CASE("peak values decrease and out-of-range lobes are rejected")
{
    ArrayGeometry g{64, 0.5};
    double prev = peak_value(0, g);
    CHECK(prev == 1.0);
    for (int m = 1; m < 32; ++m) {
        double v = peak_value(m, g);
        CHECK(v < prev);
        prev = v;
    }
    CHECK_THROWS_AS(peak_value(-1, g), std::domain_error);
    CHECK_THROWS_AS(peak_value(max_lobe_index(g) + 1, g), std::out_of_range);
    CHECK(max_lobe_index(g) == 63);
}

TEST_CASE("side lobe count covers the reachable offsets")
{
    ArrayGeometry g{100, 0.5};
    CHECK(default_side_lobe_count(g, 0.0) == 49);
    int m = default_side_lobe_count(g, 0.5);
    CHECK(m * g.lobe_width() < 1.0 + std::sin(0.5));
    CHECK((m + 1) * g.lobe_width() >= 1.0 + std::sin(0.5) - 1e-12);
}

TEST_CASE("delta CDF matches sampling")
{
    AngleRange r{-0.4, 1.1};
    for (double th_b : {0.0, 0.3, -1.2}) {
        for (double z : {0.0, 0.05, 0.3, 0.8, 1.5, 2.0}) {
            double ref = oracle::grid_cdf([&](double t) { return std::abs(std::sin(t) - std::sin(th_b)); }, r.lo,
                                          r.hi, z);
            CHECK(delta_cdf(z, th_b, r) == doctest::Approx(ref).epsilon(1e-4).scale(1));
        }
    }
}

TEST_CASE("crosstalk CDF matches dense angle sampling")
{
    struct Case {
        int n;
        double th_b, k, lo, hi;
    };
    for (auto c : {Case{100, 0.0, 1.0, -0.26, 0.26}, Case{50, 0.0, 0.25, -1.5, 1.5}, Case{64, 0.4, 0.9, -0.2, 1.0},
                   Case{20, -0.7, 1.0, -1.5707963, 1.5707963}}) {
        ArrayGeometry g{c.n, 0.5};
        auto prof = CrosstalkProfile::make(g, c.th_b, c.k);
        CrosstalkCdf cdf(prof, {c.lo, c.hi});
        auto f = [&](double t) { return c.k * oracle::crosstalk_direct(t, c.th_b, c.n, 0.5); };
        auto sample = oracle::grid_sample(f, c.lo, c.hi);
        double worst = 0.0;
        for (double x : {1e-6, 1e-4, 1e-3, 0.005, 0.01, 0.02, 0.04, 0.1, 0.3, 0.6, 0.9 * c.k}) {
            double ref = oracle::fraction_below(sample, x);
            worst = std::max(worst, std::abs(cdf(x) - ref));
        }
        CHECK(worst < 2e-4);
        CHECK(cdf(0.0) >= 0.0);
        CHECK(cdf(c.k) == 1.0);
        CHECK(cdf(-1.0) == 0.0);
    }
}

TEST_CASE("crosstalk CDF is monotone and its kinks are sorted")
{
    auto prof = CrosstalkProfile::make({100, 0.5}, 0.0, 1.0);
    CrosstalkCdf cdf(prof, {-0.3, 0.5});
    double prev = 0.0;
    for (int i = 0; i <= 2000; ++i) {
        double v = cdf(i / 2000.0);
        CHECK(v >= prev - 1e-15);
        prev = v;
    }
    auto k = cdf.kinks();
    CHECK(std::is_sorted(k.begin(), k.end()));
    CHECK(!k.empty());
    CHECK(cdf.s_max() == doctest::Approx(1.0));
}

TEST_CASE("largest crosstalk over a range excludes the main lobe when it is out of reach")
{
    ArrayGeometry g{100, 0.5};
    auto prof = CrosstalkProfile::make(g, 0.0, 1.0);
    AngleRange r{0.3, 0.6};
    double best = 0.0;
    for (int i = 0; i <= 100000; ++i)
        best = std::max(best, oracle::crosstalk_direct(r.lo + r.width() * i / 100000.0, 0.0, 100, 0.5));
    CHECK(s_max_feasible(prof, r) == doctest::Approx(best).epsilon(1e-6));
}

TEST_CASE("cross points bracket the threshold")
{
    ArrayGeometry g{100, 0.5};
    auto prof = CrosstalkProfile::make(g, 0.0, 1.0);
    double u = 0.01;
    auto lm = cross_points(u, prof);
    CHECK(s_kernel(lm.cross_point_main, g) == doctest::Approx(u).epsilon(1e-9));
    CHECK(!lm.cross_points_side.empty());
    for (const auto& c : lm.cross_points_side) {
        CHECK(c.lower < c.upper);
        CHECK(s_kernel(c.lower, g) == doctest::Approx(u).epsilon(1e-8));
        CHECK(s_kernel(c.upper, g) == doctest::Approx(u).epsilon(1e-8));
        CHECK(peak_value(c.lobe, g) > u);
    }
    CHECK_THROWS_AS(cross_points(1.5, prof), std::domain_error);
}

TEST_CASE("monotone solver inverts the kernel")
{
    ArrayGeometry g{50, 0.5};
    double x = solve_monotone_piece(0.3, 0.0, g.lobe_width(), false, g);
    CHECK(s_kernel(x, g) == doctest::Approx(0.3).epsilon(1e-10));
}

TEST_CASE("steering vector has unit-modulus entries")
{
    ArrayGeometry g{32, 0.5};
    auto v = steering_vector(0.7, g);
    CHECK(v.size() == 32);
    for (auto z : v) CHECK(std::abs(z) == doctest::Approx(1.0));
    CHECK_THROWS_AS(steering_vector(2.0, g), std::domain_error);
}

TEST_CASE("geometry and range validation")
{
    CHECK_THROWS_AS((ArrayGeometry{1, 0.5}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((ArrayGeometry{10, 0.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((AngleRange{0.5, 0.2}.validate()), std::domain_error);
    CHECK_THROWS_AS((AngleRange{-2.0, 0.2}.validate()), std::domain_error);
    CHECK_NOTHROW(half_space().validate());
}
