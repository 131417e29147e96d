#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "secrecy/kernels.hpp"
#include "secrecy/quadrature.hpp"
#include "secrecy/search.hpp"

using namespace secrecy;

TEST_CASE("nonuniform Simpson is exact for quadratics, and for cubics on symmetric pairs")
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int pairs : {1, 2, 5}) {
        std::vector<double> x{0.0};
        for (int i = 0; i < pairs; ++i) {
            double h = 0.1 + u(rng);
            x.push_back(x.back() + h);
            x.push_back(x.back() + h);
        }
        std::vector<double> y;
        for (double v : x) y.push_back(2 * v * v * v - v * v + 3 * v - 1);
        double b = x.back();
        CHECK(simpson_nonuniform(x, y) ==
              doctest::Approx(0.5 * b * b * b * b - b * b * b / 3 + 1.5 * b * b - b).epsilon(1e-12));
    }
    for (int n : {3, 4, 7, 10}) {
        std::vector<double> x{0.0};
        for (int i = 1; i < n; ++i) x.push_back(x.back() + 0.1 + u(rng));
        double b = x.back();
        std::vector<double> q;
        for (double v : x) q.push_back(v * v - 2 * v);
        CHECK(simpson_nonuniform(x, q) == doctest::Approx(b * b * b / 3 - b * b).epsilon(1e-12));
    }
    CHECK(simpson_nonuniform(std::vector<double>{1.0}, std::vector<double>{5.0}) == 0.0);
    CHECK(simpson_nonuniform(std::vector<double>{0.0, 2.0}, std::vector<double>{1.0, 3.0}) == doctest::Approx(4.0));
    CHECK_THROWS_AS(simpson_nonuniform(std::vector<double>{0.0, 1.0}, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("piecewise Gauss-Kronrod handles kinks at the breaks")
{
    auto f = [](double x) { return std::abs(x - 0.3) + (x > 0.7 ? 1.0 : 0.0); };
    double exact = 0.5 * 0.09 + 0.5 * 0.49 + 0.3;
    CHECK(integrate_piecewise(f, 0.0, 1.0, {0.3, 0.7}) == doctest::Approx(exact).epsilon(1e-12));
    CHECK(integrate_piecewise([](double x) { return std::exp(x); }, 0.0, 2.0, {}) ==
          doctest::Approx(std::exp(2.0) - 1.0).epsilon(1e-12));
    // breaks outside the interval are ignored
    CHECK(integrate_piecewise([](double x) { return x; }, 0.0, 1.0, {-1.0, 5.0}) == doctest::Approx(0.5));
    CHECK(integrate_piecewise([](double x) { return x; }, 1.0, 1.0, {}) == 0.0);
}

TEST_CASE("grid argmin breaks ties towards the smaller index")
{
    std::vector<double> x{0.0, 0.1, 0.2, 0.3};
    std::vector<double> v{3.0, 1.0, 1.0, 2.0};
    auto a = grid_argmin(x, v);
    CHECK(a.index == 1);
    CHECK(a.x == 0.1);
    CHECK(a.value == 1.0);
    CHECK_THROWS_AS(grid_argmin(std::vector<double>{}, std::vector<double>{}), std::invalid_argument);
}

TEST_CASE("golden section finds a smooth minimum")
{
    auto r = golden_section([](double x) { return (x - 0.37) * (x - 0.37) + 2.0; }, 0.0, 1.0, 1e-8);
    CHECK(r.x == doctest::Approx(0.37).epsilon(1e-7));
    CHECK(r.value == doctest::Approx(2.0));
}

TEST_CASE("grids")
{
    auto l = linspace(0.0, 1.0, 5);
    CHECK(l == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    auto s = step_grid(0.0, 1.0, 0.3);
    CHECK(s.size() == 5);
    CHECK(s.back() == 1.0);
    auto e = step_grid(0.0, 1.0, 0.25);
    CHECK(e.size() == 5);
    CHECK(e.back() == 1.0);
    CHECK_THROWS_AS(step_grid(0.0, 1.0, 0.0), std::invalid_argument);
}

namespace {

std::vector<double> random_vec(std::size_t n, unsigned seed, double lo = 0.0, double hi = 1.0)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

} // namespace

TEST_CASE("serial and OpenMP kernels are bit-identical")
{
    for (int threads : {1, 2, 4, 7}) {
        set_thread_count(threads);
        auto s = random_vec(10007, 11);
        UniformTerms t{5.0, 1.0, 0.2, 3.0};
        std::vector<double> a(s.size()), b(s.size());
        serial::uniform_radii(s, t, a);
        omp::uniform_radii(s, t, b);
        CHECK(a == b);

        auto sig = random_vec(3001, 12, 0.0, 1e4);
        Eigen::MatrixXd resp = Eigen::MatrixXd::Random(3001, 9).cwiseAbs();
        auto p = random_vec(9, 13, 0.0, 100.0);
        std::vector<double> c(3001), d(3001);
        serial::directional_radii(sig, resp, p, 2.5, c);
        omp::directional_radii(sig, resp, p, 2.5, d);
        CHECK(c == d);

        auto f = [](double x) { return std::sin(x) * std::exp(-x); };
        std::vector<double> m1(s.size()), m2(s.size());
        serial::map(s, f, m1);
        omp::map(s, f, m2);
        CHECK(m1 == m2);

        auto trial = [](std::int64_t i) -> std::uint8_t { return (i * 2654435761u) % 7 < 3; };
        std::vector<std::uint8_t> f1(5000), f2(5000);
        serial::map_trials(5000, trial, f1);
        omp::map_trials(5000, trial, f2);
        CHECK(f1 == f2);
        CHECK(count_set(f1) == count_set(f2));

        std::vector<double> i1(777), i2(777);
        serial::map_index(777, [](std::int64_t i) { return std::sqrt(double(i)); }, i1);
        omp::map_index(777, [](std::int64_t i) { return std::sqrt(double(i)); }, i2);
        CHECK(i1 == i2);
    }
    set_thread_count(1);
}

TEST_CASE("uniform radii kernel formula")
{
    std::vector<double> s{0.0, 0.1, 0.5, 1.0};
    std::vector<double> out(4);
    serial::uniform_radii(s, {10.0, 2.0, 0.2, 2.0}, out);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.0);
    CHECK(out[2] == doctest::Approx(std::sqrt(3.0)));
    CHECK(out[3] == doctest::Approx(std::sqrt(8.0)));
}

TEST_CASE("dispatch follows the serial switch")
{
    auto s = random_vec(100, 5);
    use_serial_kernels(true);
    CHECK(serial_kernels());
    auto a = map(s, [](double x) { return x * x; });
    use_serial_kernels(false);
    CHECK(!serial_kernels());
    auto b = map(s, [](double x) { return x * x; });
    CHECK(a == b);
}

TEST_CASE("exceptions inside parallel loops reach the caller")
{
    set_thread_count(3);
    std::vector<double> out(1000);
    CHECK_THROWS_AS(omp::map_index(1000,
                                   [](std::int64_t i) -> double {
                                       if (i == 517) throw std::domain_error("boom");
                                       return 0.0;
                                   },
                                   out),
                    std::domain_error);
    CHECK_THROWS_AS(omp::uniform_radii(std::vector<double>(3), {}, std::span<double>(out.data(), 2)),
                    std::invalid_argument);
    set_thread_count(1);
}

TEST_CASE("pairwise sum is order-fixed and accurate")
{
    std::vector<double> v(100001, 0.1);
    CHECK(pairwise_sum(v) == doctest::Approx(10000.1).epsilon(1e-14));
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
}
