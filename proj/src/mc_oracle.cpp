#include "secrecy/mc_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/QR>

#include "secrecy/errors.hpp"
#include "secrecy/kernels.hpp"

namespace secrecy {

namespace {

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// The simulation runs at a finite array size; everything else comes from cfg.
ScenarioConfig finite_config(const ScenarioConfig& cfg, const McRunSpec& spec)
{
    if (!(cfg.r_th >= 0.0)) throw std::invalid_argument("mc: r_th must be non-negative");
    ScenarioConfig c = cfg;
    c.geometry.n_antennas = spec.finite_nt;
    ScenarioConfig probe = c;
    probe.r_th = std::max(c.r_th, 1.0);
    probe.validate();
    return c;
}

void check_allocation(const PowerAllocation& alloc, const ScenarioConfig& c)
{
    if (alloc.is_uniform()) {
        if (!(alloc.phi >= 0.0 && alloc.phi <= 1.0)) throw std::invalid_argument("mc: phi must lie in [0, 1]");
        return;
    }
    alloc.validate(c);
}

double eve_distance(const SuspiciousRegion& region, double theta, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    if (region.is_constant()) {
        const auto& cd = region.constant_distances();
        double a = cd.d_min * cd.d_min, b = cd.d_max * cd.d_max;
        return std::sqrt(a + (b - a) * u01(rng));
    }
    double lo = region.d_min(theta), hi = region.d_max(theta);
    return std::sqrt(lo * lo + (hi * hi - lo * lo) * u01(rng));
}

// Uniform in area: theta by rejection against the per-angle annulus size.
std::pair<double, double> eve_position(const SuspiciousRegion& region, double dmax2_bound, std::mt19937_64& rng)
{
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    const AngleRange& r = region.angles;
    for (int tries = 0; tries < 100000; ++tries) {
        double th = r.lo + (r.hi - r.lo) * u01(rng);
        if (!region.is_constant()) {
            double lo = region.d_min(th), hi = region.d_max(th);
            double weight = (hi * hi - lo * lo) / dmax2_bound;
            if (u01(rng) > weight) continue;
        }
        return {th, eve_distance(region, th, rng)};
    }
    throw std::runtime_error("mc: could not place an eavesdropper in the region");
}

double region_area_bound(const SuspiciousRegion& region)
{
    if (region.is_constant()) return 1.0;
    const auto& sd = std::get<SampledDistance>(region.distances);
    double best = 0.0;
    for (std::size_t i = 0; i < sd.thetas.size(); ++i)
        best = std::max(best, sd.d_max[i] * sd.d_max[i] - sd.d_min[i] * sd.d_min[i]);
    if (!(best > 0.0)) throw std::invalid_argument("mc: region has zero area");
    return best;
}

double jam_leak(const Eigen::VectorXcd& h, const Eigen::VectorXcd& w_b, const PowerAllocation& alloc,
                const ScenarioConfig& c)
{
    if (alloc.is_uniform()) {
        if (alloc.phi == 0.0) return 0.0;
        // |P_perp h|^2 = |h|^2 - |w_b^H h|^2 for the orthogonal projector onto null(h_b).
        double proj = std::max(h.squaredNorm() - std::norm(w_b.dot(h)), 0.0);
        return alloc.phi * c.p_tot / (c.geometry.n_antennas - 1) * proj;
    }
    const auto& V = alloc.basis->columns;
    double sum = 0.0;
    for (Eigen::Index n = 0; n < V.cols(); ++n)
        sum += alloc.beam_powers[static_cast<std::size_t>(n)] * std::norm(V.col(n).dot(h));
    return sum;
}

double sinr_at(const ChannelDraw& rx, const Eigen::VectorXcd& w_b, double p_b, const PowerAllocation& alloc,
               const ScenarioConfig& c)
{
    double g = std::pow(rx.dist, -c.alpha);
    double signal = p_b * g * std::norm(w_b.dot(rx.h));
    return signal / (c.n0 + g * jam_leak(rx.h, w_b, alloc, c));
}

double median(std::vector<double> v)
{
    if (v.empty()) return std::nan("");
    auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    double hi = *mid;
    if (v.size() % 2 == 1) return hi;
    double lo = *std::max_element(v.begin(), mid);
    return 0.5 * (lo + hi);
}

} // namespace

const char* to_string(McQuantity q)
{
    switch (q) {
    case McQuantity::sinr_bob: return "sinr_bob";
    case McQuantity::sinr_eve: return "sinr_eve";
    case McQuantity::crosstalk_cdf: return "crosstalk_cdf";
    case McQuantity::sop: return "sop";
    }
    return "?";
}

void McRunSpec::validate() const
{
    if (n_samples < 1) throw std::invalid_argument("McRunSpec: n_samples must be >= 1");
    if (finite_nt < 2) throw std::invalid_argument("McRunSpec: finite_nt must be >= 2");
    if (!(k_factor >= 0.0)) throw std::invalid_argument("McRunSpec: k_factor must be non-negative");
}

std::mt19937_64 substream(std::uint64_t master_seed, std::uint64_t sample, std::uint64_t receiver)
{
    std::uint64_t h = splitmix64(master_seed);
    h = splitmix64(h ^ sample);
    h = splitmix64(h ^ (receiver * 0xd1b54a32d192ed03ULL));
    return std::mt19937_64(h);
}

ChannelDraw draw_channel(double theta, double dist, double k_factor, const ArrayGeometry& geom,
                         std::mt19937_64& rng)
{
    geom.validate();
    if (!(k_factor >= 0.0)) throw std::invalid_argument("draw_channel: k_factor must be non-negative");
    const int n = geom.n_antennas;
    double los = std::isinf(k_factor) ? 1.0 : std::sqrt(k_factor / (1.0 + k_factor));
    double nlos = std::isinf(k_factor) ? 0.0 : std::sqrt(1.0 / (1.0 + k_factor));
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    auto sv = steering_vector(theta, geom);
    ChannelDraw d;
    d.h.resize(n);
    for (int i = 0; i < n; ++i) {
        double re = g(rng);
        double im = g(rng);
        d.h[i] = los * sv[static_cast<std::size_t>(i)] + nlos * std::complex<double>(re, im);
    }
    d.k_factor = k_factor;
    d.theta = theta;
    d.dist = dist;
    return d;
}

Eigen::MatrixXcd null_space_basis(const Eigen::VectorXcd& h_b)
{
    const Eigen::Index n = h_b.size();
    if (n < 2) throw std::invalid_argument("null_space_basis: need at least two antennas");
    if (!(h_b.norm() > 0.0)) throw std::invalid_argument("null_space_basis: zero channel");
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(h_b);
    Eigen::MatrixXcd q = qr.householderQ() * Eigen::MatrixXcd::Identity(n, n);
    return q.rightCols(n - 1);
}

SinrPair sinr_exact(const ChannelDraw& bob, const ChannelDraw& eve, const PowerAllocation& alloc,
                    const ScenarioConfig& cfg)
{
    if (bob.h.size() != cfg.geometry.n_antennas || eve.h.size() != cfg.geometry.n_antennas)
        throw std::invalid_argument("sinr_exact: channel length does not match n_antennas");
    Eigen::VectorXcd w_b = bob.h / bob.h.norm();
    double p_b = (1.0 - alloc.phi) * cfg.p_tot;
    return {sinr_at(bob, w_b, p_b, alloc, cfg), sinr_at(eve, w_b, p_b, alloc, cfg)};
}

McResult empirical_sop(const ScenarioConfig& cfg, const SuspiciousRegion& region, const PowerAllocation& alloc,
                       const McRunSpec& spec)
{
    spec.validate();
    region.validate();
    ScenarioConfig c = finite_config(cfg, spec);
    check_allocation(alloc, c);
    const double bound = region_area_bound(region);
    const double r_th = c.r_th;

    auto trial = [&](std::int64_t t) -> std::uint8_t {
        auto t_u = static_cast<std::uint64_t>(t);
        auto rb = substream(spec.master_seed, t_u, 0);
        ChannelDraw bob = draw_channel(c.bob_theta, c.bob_dist, spec.k_factor, c.geometry, rb);
        Eigen::VectorXcd w_b = bob.h / bob.h.norm();
        double p_b = (1.0 - alloc.phi) * c.p_tot;
        double sinr_b = sinr_at(bob, w_b, p_b, alloc, c);
        double worst = 0.0;
        for (int l = 1; l <= c.n_eves; ++l) {
            auto re = substream(spec.master_seed, t_u, static_cast<std::uint64_t>(l));
            auto [th, dist] = eve_position(region, bound, re);
            ChannelDraw eve = draw_channel(th, dist, spec.k_factor, c.geometry, re);
            worst = std::max(worst, sinr_at(eve, w_b, p_b, alloc, c));
        }
        double rs = std::max(std::log2(1.0 + sinr_b) - std::log2(1.0 + worst), 0.0);
        return (rs < r_th || rs <= 0.0) ? 1 : 0;
    };
    auto flags = map_trials(spec.n_samples, trial);
    double n = static_cast<double>(spec.n_samples);
    McResult res;
    res.value = static_cast<double>(count_set(flags)) / n;
    res.std_error = std::sqrt(res.value * (1.0 - res.value) / n);
    return res;
}

McResult crosstalk_samples(const ScenarioConfig& cfg, const AngleRange& range, const McRunSpec& spec)
{
    spec.validate();
    range.validate();
    ScenarioConfig c = finite_config(cfg, spec);
    const double n_t = c.geometry.n_antennas;
    auto sample = [&](std::int64_t t) {
        auto t_u = static_cast<std::uint64_t>(t);
        auto rb = substream(spec.master_seed, t_u, 0);
        auto re = substream(spec.master_seed, t_u, 1);
        ChannelDraw bob = draw_channel(c.bob_theta, c.bob_dist, spec.k_factor, c.geometry, rb);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        double th = range.lo + range.width() * u01(re);
        ChannelDraw eve = draw_channel(th, 1.0, spec.k_factor, c.geometry, re);
        return std::norm(eve.h.dot(bob.h) / n_t);
    };
    McResult res;
    res.samples = map_index(spec.n_samples, sample);
    res.value = median(res.samples);
    return res;
}

McResult run_mc(const ScenarioConfig& cfg, const SuspiciousRegion& region, const PowerAllocation& alloc,
                const McRunSpec& spec)
{
    switch (spec.estimate) {
    case McQuantity::sop: return empirical_sop(cfg, region, alloc, spec);
    case McQuantity::crosstalk_cdf: return crosstalk_samples(cfg, region.angles, spec);
    case McQuantity::sinr_bob:
    case McQuantity::sinr_eve: break;
    }
    spec.validate();
    region.validate();
    ScenarioConfig c = finite_config(cfg, spec);
    check_allocation(alloc, c);
    const double bound = region_area_bound(region);
    const bool want_bob = spec.estimate == McQuantity::sinr_bob;
    auto sample = [&](std::int64_t t) {
        auto t_u = static_cast<std::uint64_t>(t);
        auto rb = substream(spec.master_seed, t_u, 0);
        ChannelDraw bob = draw_channel(c.bob_theta, c.bob_dist, spec.k_factor, c.geometry, rb);
        Eigen::VectorXcd w_b = bob.h / bob.h.norm();
        double p_b = (1.0 - alloc.phi) * c.p_tot;
        if (want_bob) return sinr_at(bob, w_b, p_b, alloc, c);
        auto re = substream(spec.master_seed, t_u, 1);
        auto [th, dist] = eve_position(region, bound, re);
        ChannelDraw eve = draw_channel(th, dist, spec.k_factor, c.geometry, re);
        return sinr_at(eve, w_b, p_b, alloc, c);
    };
    McResult res;
    res.samples = map_index(spec.n_samples, sample);
    res.value = median(res.samples);
    return res;
}

} // namespace secrecy
