#include <benchmark/benchmark.h>

#include <cmath>
#include <random>
#include <vector>

#include "secrecy/alloc.hpp"
#include "secrecy/kernels.hpp"
#include "secrecy/mc_oracle.hpp"

using namespace secrecy;

namespace {

std::vector<double> crosstalk_grid(std::size_t n)
{
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> s(n);
    for (auto& v : s) v = u(rng) * u(rng);
    return s;
}

template <bool Omp>
void BM_uniform_radii(benchmark::State& st)
{
    const auto s = crosstalk_grid(static_cast<std::size_t>(st.range(0)));
    std::vector<double> out(s.size());
    const UniformTerms t{3.2e7, 2e7, 0.6, 3.0};
    for (auto _ : st) {
        if constexpr (Omp) omp::uniform_radii(s, t, out);
        else serial::uniform_radii(s, t, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Omp>
void BM_directional_radii(benchmark::State& st)
{
    const auto n = static_cast<Eigen::Index>(st.range(0));
    const Eigen::Index beams = 48;
    const auto signal = crosstalk_grid(static_cast<std::size_t>(n));
    Eigen::MatrixXd resp = Eigen::MatrixXd::Random(n, beams).cwiseAbs();
    std::vector<double> p(static_cast<std::size_t>(beams), 1e3);
    std::vector<double> out(signal.size());
    for (auto _ : st) {
        if constexpr (Omp) omp::directional_radii(signal, resp, p, 3.0, out);
        else serial::directional_radii(signal, resp, p, 3.0, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

// SOP closed form over a phi sweep: the map kernel with a costly body.
template <bool Omp>
void BM_sop_sweep(benchmark::State& st)
{
    auto cfg = paper_defaults(100, 10.0, 100.0);
    cfg.n_eves = 10;
    const auto region = SuspiciousRegion::constant({deg_to_rad(-15), deg_to_rad(15)}, 50, 100);
    const CrosstalkCdf cdf(cfg.bob_profile(), region.angles);
    std::vector<double> phis;
    for (int i = 0; i < st.range(0); ++i) phis.push_back(0.85 * i / st.range(0));
    std::vector<double> out(phis.size());
    auto f = [&](double phi) { return sop_closed_form(cfg, phi, region, cdf); };
    for (auto _ : st) {
        if constexpr (Omp) omp::map(phis, f, out);
        else serial::map(phis, f, out);
        benchmark::DoNotOptimize(out.data());
    }
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

template <bool Omp>
void BM_mc_trials(benchmark::State& st)
{
    auto cfg = paper_defaults(64, 8.0, 100.0);
    cfg.n_eves = 4;
    const auto region = SuspiciousRegion::constant({-0.4, 0.4}, 40, 120);
    McRunSpec spec;
    spec.n_samples = st.range(0);
    spec.finite_nt = 64;
    use_serial_kernels(!Omp);
    for (auto _ : st) benchmark::DoNotOptimize(empirical_sop(cfg, region, PowerAllocation::uniform(0.3), spec).value);
    use_serial_kernels(false);
    st.SetItemsProcessed(st.iterations() * st.range(0));
}

} // namespace

BENCHMARK(BM_uniform_radii<false>)->Arg(1 << 16)->Arg(1 << 20);
BENCHMARK(BM_uniform_radii<true>)->Arg(1 << 16)->Arg(1 << 20)->UseRealTime();
BENCHMARK(BM_directional_radii<false>)->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(BM_directional_radii<true>)->Arg(1 << 14)->Arg(1 << 17)->UseRealTime();
BENCHMARK(BM_sop_sweep<false>)->Arg(200);
BENCHMARK(BM_sop_sweep<true>)->Arg(200)->UseRealTime();
BENCHMARK(BM_mc_trials<false>)->Arg(2000);
BENCHMARK(BM_mc_trials<true>)->Arg(2000)->UseRealTime();

BENCHMARK_MAIN();
