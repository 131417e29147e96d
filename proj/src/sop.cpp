#include "secrecy/sop.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "secrecy/errors.hpp"
#include "secrecy/kernels.hpp"
#include "secrecy/quadrature.hpp"

namespace secrecy {

namespace {

double interp(const std::vector<double>& xs, const std::vector<double>& ys, double x)
{
    if (x <= xs.front())
        return ys.front();
    if (x >= xs.back())
        return ys.back();
    const auto it = std::upper_bound(xs.begin(), xs.end(), x);
    const auto i = static_cast<std::size_t>(it - xs.begin());
    const double t = (x - xs[i - 1]) / (xs[i] - xs[i - 1]);
    return ys[i - 1] + t * (ys[i] - ys[i - 1]);
}

// phi_max, or nullopt when the rate is unreachable.
std::optional<double> try_phi_max(const ScenarioConfig& cfg)
{
    try {
        return phi_max(cfg);
    } catch (const InfeasibleRateError&) {
        return std::nullopt;
    }
}

} // namespace

double SampledDistance::lower(double theta) const { return interp(thetas, d_min, theta); }
double SampledDistance::upper(double theta) const { return interp(thetas, d_max, theta); }

SuspiciousRegion SuspiciousRegion::constant(AngleRange angles, double d_min, double d_max)
{
    SuspiciousRegion r{angles, ConstantDistance{d_min, d_max}};
    r.validate();
    return r;
}

void SuspiciousRegion::validate() const
{
    angles.validate();
    if (const auto* c = std::get_if<ConstantDistance>(&distances)) {
        if (!(c->d_min >= 0.0 && c->d_min < c->d_max))
            throw std::domain_error("SuspiciousRegion: need 0 <= d_min < d_max");
        return;
    }
    const auto& s = std::get<SampledDistance>(distances);
    if (s.thetas.size() < 2 || s.d_min.size() != s.thetas.size() || s.d_max.size() != s.thetas.size())
        throw std::domain_error("SuspiciousRegion: sampled limits need matching tables of >= 2 points");
    if (!std::is_sorted(s.thetas.begin(), s.thetas.end()))
        throw std::domain_error("SuspiciousRegion: sampled angles must be sorted");
    for (std::size_t i = 0; i < s.thetas.size(); ++i)
        if (!(s.d_min[i] >= 0.0 && s.d_min[i] < s.d_max[i]))
            throw std::domain_error("SuspiciousRegion: need 0 <= D_min(theta) < D_max(theta)");
}

const ConstantDistance& SuspiciousRegion::constant_distances() const
{
    if (!is_constant())
        throw PreconditionError("SuspiciousRegion: distance limits are not constant");
    return std::get<ConstantDistance>(distances);
}

double SuspiciousRegion::d_min(double theta) const
{
    if (const auto* c = std::get_if<ConstantDistance>(&distances))
        return c->d_min;
    return std::get<SampledDistance>(distances).lower(theta);
}

double SuspiciousRegion::d_max(double theta) const
{
    if (const auto* c = std::get_if<ConstantDistance>(&distances))
        return c->d_max;
    return std::get<SampledDistance>(distances).upper(theta);
}

double sop_closed_form(const ScenarioConfig& cfg, double phi, const SuspiciousRegion& region)
{
    region.validate();
    if (!region.is_constant())
        throw PreconditionError("sop_closed_form: needs constant distance limits; use sop_intersection");
    return sop_closed_form(cfg, phi, region, CrosstalkCdf(cfg.bob_profile(), region.angles));
}

double sop_closed_form(const ScenarioConfig& cfg, double phi, const SuspiciousRegion& region,
                       const CrosstalkCdf& cdf)
{
    cfg.validate();
    const auto& dist = region.constant_distances();
    if (!(phi >= 0.0 && phi <= 1.0))
        throw std::domain_error("sop_closed_form: phi must lie in [0, 1]");
    const auto pm = try_phi_max(cfg);
    if (!pm || phi >= *pm)
        return 1.0;
    const auto c = sor_constants(cfg, phi);
    const double a = dist.d_min;
    const double b = dist.d_max;
    const double norm = b * b - a * a;
    const double alpha = cfg.alpha;
    auto integrand = [&](double z) { return cdf((std::pow(z, alpha) + c.c2) / c.c1) * 2.0 * z / norm; };

    std::vector<double> breaks;
    auto kinks = cdf.kinks();
    kinks.push_back(cdf.profile().k_factor_product);
    for (double x : kinks) {
        const double v = c.c1 * x - c.c2;
        if (v > 0.0)
            breaks.push_back(std::pow(v, 1.0 / alpha));
    }
    const double inner = std::clamp(integrate_piecewise(integrand, a, b, breaks, 1e-10), 0.0, 1.0);
    return std::clamp(1.0 - std::pow(inner, cfg.n_eves), 0.0, 1.0);
}

double outage_fraction(const SorBoundary& boundary, const SuspiciousRegion& region)
{
    region.validate();
    const auto& th = boundary.thetas;
    const auto& r = boundary.radii;
    if (th.size() != r.size() || th.size() < 2)
        throw std::invalid_argument("outage_fraction: boundary needs at least two samples");
    const double lo = region.angles.lo;
    const double hi = region.angles.hi;

    std::vector<double> x{lo};
    std::vector<double> rad{interp(th, r, lo)};
    for (std::size_t i = 0; i < th.size(); ++i)
        if (th[i] > lo && th[i] < hi) {
            x.push_back(th[i]);
            rad.push_back(r[i]);
        }
    x.push_back(hi);
    rad.push_back(interp(th, r, hi));

    std::vector<double> num(x.size());
    std::vector<double> den(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dl = region.d_min(x[i]);
        const double du = region.d_max(x[i]);
        const double clipped = std::clamp(rad[i], dl, du);
        num[i] = 0.5 * (clipped * clipped - dl * dl);
        den[i] = 0.5 * (du * du - dl * dl);
    }
    double total;
    if (region.is_constant()) {
        const auto& c = region.constant_distances();
        total = 0.5 * (c.d_max * c.d_max - c.d_min * c.d_min) * (hi - lo);
    } else {
        total = simpson_nonuniform(x, den);
    }
    if (!(total > 0.0))
        throw std::domain_error("outage_fraction: suspicious region has zero area");
    return std::clamp(simpson_nonuniform(x, num) / total, 0.0, 1.0);
}

double sop_intersection(const SorBoundary& boundary, const SuspiciousRegion& region, int n_eves)
{
    if (n_eves < 1)
        throw std::invalid_argument("sop_intersection: need at least one eavesdropper");
    const double p1 = outage_fraction(boundary, region);
    return std::clamp(1.0 - std::pow(1.0 - p1, n_eves), 0.0, 1.0);
}

std::vector<double> intersection_theta_grid(const ScenarioConfig& cfg, double phi, const SuspiciousRegion& region,
                                            int points_per_lobe)
{
    GridOptions opt;
    opt.points_per_lobe = points_per_lobe;
    opt.extra_breaks = {region.angles.lo, region.angles.hi};
    const auto pm = try_phi_max(cfg);
    if (pm && phi < *pm && cfg.k_eb > 0.0) {
        const auto c = sor_constants(cfg, phi);
        std::vector<double> levels{c.c3};
        if (region.is_constant()) {
            const auto& d = region.constant_distances();
            levels.push_back((std::pow(d.d_min, cfg.alpha) + c.c2) / c.c1);
            levels.push_back((std::pow(d.d_max, cfg.alpha) + c.c2) / c.c1);
        }
        const auto profile = cfg.bob_profile();
        for (double s : levels) {
            const auto extra = level_crossing_angles(profile, s / cfg.k_eb);
            opt.extra_breaks.insert(opt.extra_breaks.end(), extra.begin(), extra.end());
        }
    }
    return default_theta_grid(cfg.geometry, cfg.bob_theta, opt);
}

double sop_uniform_intersection(const ScenarioConfig& cfg, double phi, const SuspiciousRegion& region,
                                int points_per_lobe)
{
    const auto pm = try_phi_max(cfg);
    if (!pm || phi >= *pm)
        return 1.0;
    const auto grid = intersection_theta_grid(cfg, phi, region, points_per_lobe);
    return sop_intersection(sor_boundary_uniform(cfg, phi, grid), region, cfg.n_eves);
}

double sor_scale(const ScenarioConfig& cfg, double p_signal_tilde)
{
    const double n = cfg.geometry.n_antennas;
    const double den = 1.0 + p_signal_tilde * cfg.path_gain(cfg.bob_dist) * n - cfg.rate_factor();
    if (den <= 0.0)
        return std::numeric_limits<double>::infinity();
    return p_signal_tilde * n * cfg.rate_factor() / den;
}

double jamming_beneficial_dmax(const ScenarioConfig& cfg, const AngleRange& range)
{
    cfg.validate();
    phi_max(cfg);
    const double s_max = s_max_feasible(cfg.bob_profile(), range);
    return std::pow(s_max * sor_scale(cfg, cfg.p_tilde()), 1.0 / cfg.alpha);
}

double jamming_beneficial_dmax(const ScenarioConfig& cfg)
{
    return jamming_beneficial_dmax(cfg, half_space());
}

double jam_power_threshold(const ScenarioConfig& cfg, double phi, double z)
{
    const double a1 = sor_scale(cfg, (1.0 - phi) * cfg.p_tilde());
    const double a2 = sor_scale(cfg, cfg.p_tilde());
    const double za = std::pow(z, cfg.alpha);
    if (za >= a2)
        return std::numeric_limits<double>::infinity();
    return (a1 - a2) * za / (a2 - za);
}

BenefitCheck is_jamming_beneficial(const ScenarioConfig& cfg, const SuspiciousRegion& region, int n_phi)
{
    region.validate();
    const auto& d = region.constant_distances();
    BenefitCheck out;
    out.bound = jamming_beneficial_dmax(cfg, region.angles);
    const CrosstalkCdf cdf(cfg.bob_profile(), region.angles);
    out.sop_no_jam = sop_closed_form(cfg, 0.0, region, cdf);
    out.beneficial = d.d_max < out.bound;
    if (!out.beneficial)
        return out;

    const double pm = phi_max(cfg);
    std::vector<double> phis;
    for (int i = 1; i <= n_phi; ++i)
        phis.push_back(pm * i / (n_phi + 1));
    const auto sops = map(phis, [&](double phi) { return sop_closed_form(cfg, phi, region, cdf); });
    for (std::size_t i = 0; i < phis.size(); ++i)
        if (sops[i] < out.sop_no_jam && (!out.witness_phi || sops[i] < out.sop_witness)) {
            out.witness_phi = phis[i];
            out.sop_witness = sops[i];
        }
    if (out.witness_phi)
        out.meets_power_bound = *out.witness_phi * cfg.p_tilde() > jam_power_threshold(cfg, *out.witness_phi, d.d_max);
    return out;
}

} // namespace secrecy
