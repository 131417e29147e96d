#include "secrecy/asymptotic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <stdexcept>

#include "secrecy/errors.hpp"
#include "secrecy/kernels.hpp"
#include "secrecy/quadrature.hpp"

namespace secrecy {

namespace {

double bob_gain(const ScenarioConfig& cfg)
{
    return cfg.path_gain(cfg.bob_dist) * cfg.geometry.n_antennas;
}

// Signal part of the boundary: 2^R (1 - phi) P N s / (1 + (1 - phi) P g N - 2^R),
// with s factored out. Infinite when Bob cannot reach the rate.
double signal_scale(const ScenarioConfig& cfg, double phi)
{
    const double pb = (1.0 - phi) * cfg.p_tilde();
    const double den = 1.0 + pb * bob_gain(cfg) - cfg.rate_factor();
    if (den <= 0.0)
        return std::numeric_limits<double>::infinity();
    return pb * cfg.geometry.n_antennas * cfg.rate_factor() / den;
}

std::vector<double> crosstalk_on_grid(const ScenarioConfig& cfg, const std::vector<double>& thetas)
{
    const auto profile = cfg.bob_profile();
    std::vector<double> s(thetas.size(), 0.0);
    for (std::size_t i = 0; i < thetas.size(); ++i)
        if (std::abs(thetas[i]) <= kHalfPi)
            s[i] = normalized_crosstalk(thetas[i], profile);
    return s;
}

void check_grid(const std::vector<double>& thetas)
{
    if (thetas.empty())
        throw std::invalid_argument("theta grid is empty");
    if (!std::is_sorted(thetas.begin(), thetas.end()))
        throw std::invalid_argument("theta grid must be sorted");
}

void check_phi(double phi)
{
    if (!(phi >= 0.0 && phi <= 1.0))
        throw std::domain_error("phi must lie in [0, 1]");
}

std::vector<double> half_square(const std::vector<double>& radii)
{
    std::vector<double> y(radii.size());
    for (std::size_t i = 0; i < radii.size(); ++i)
        y[i] = 0.5 * radii[i] * radii[i];
    return y;
}

} // namespace

double sinr_bob_uniform(const ScenarioConfig& cfg, double phi)
{
    if (!(phi >= 0.0 && phi < 1.0))
        throw std::domain_error("sinr_bob_uniform: phi must lie in [0, 1)");
    return (1.0 - phi) * cfg.p_tilde() * bob_gain(cfg);
}

double sinr_eve_uniform(const ScenarioConfig& cfg, double phi, double eve_theta, double eve_dist)
{
    check_phi(phi);
    if (!(eve_dist > 0.0))
        throw std::domain_error("sinr_eve_uniform: eve_dist must be positive");
    const double s = normalized_crosstalk(eve_theta, cfg.bob_profile());
    const double g = cfg.path_gain(eve_dist);
    const double pb = (1.0 - phi) * cfg.p_tilde();
    const double pj = phi * cfg.p_tilde();
    return pb * g * cfg.geometry.n_antennas * s / (1.0 + g * pj * (1.0 - s));
}

double phi_max(const ScenarioConfig& cfg)
{
    const double need = cfg.rate_factor() - 1.0;
    const double have = cfg.p_tilde() * bob_gain(cfg);
    const double value = 1.0 - need / have;
    if (value <= 0.0)
        throw InfeasibleRateError("target rate unreachable: Bob's SINR " + std::to_string(have) +
                                      " is below 2^R_th - 1 = " + std::to_string(need),
                                  need - have);
    return value;
}

SorConstants sor_constants(const ScenarioConfig& cfg, double phi)
{
    if (phi < 0.0)
        throw std::domain_error("sor_constants: phi must be non-negative");
    const double pm = phi_max(cfg);
    if (phi > pm)
        throw InfeasibleRateError("sor_constants: phi exceeds phi_max", phi - pm);
    SorConstants c;
    c.c2 = cfg.p_tilde() * phi;
    c.c1 = signal_scale(cfg, phi) + c.c2;
    c.c3 = std::isinf(c.c1) ? 0.0 : c.c2 / c.c1;
    return c;
}

std::vector<double> null_angles(const ArrayGeometry& geom, double theta_b)
{
    const double w = geom.lobe_width();
    const double sb = std::sin(theta_b);
    std::vector<double> out{-kHalfPi, kHalfPi};
    const int kmin = static_cast<int>(std::ceil((-1.0 - sb) / w));
    const int kmax = static_cast<int>(std::floor((1.0 - sb) / w));
    for (int k = kmin; k <= kmax; ++k) {
        if (k == 0)
            continue;
        const double v = sb + k * w;
        if (v > -1.0 && v < 1.0)
            out.push_back(std::asin(v));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> level_crossing_angles(const CrosstalkProfile& profile, double u)
{
    std::vector<double> out;
    if (!(u > 0.0 && u < 1.0))
        return out;
    const auto lm = cross_points(u, CrosstalkProfile{profile.geometry, profile.theta_ref, 1.0,
                                                     max_lobe_index(profile.geometry)});
    std::vector<double> xs{lm.cross_point_main};
    for (const auto& c : lm.cross_points_side) {
        xs.push_back(c.lower);
        xs.push_back(c.upper);
    }
    const double sb = std::sin(profile.theta_ref);
    for (double x : xs)
        for (double sign : {-1.0, 1.0}) {
            const double v = sb + sign * x;
            if (v > -1.0 && v < 1.0)
                out.push_back(std::asin(v));
        }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<double> default_theta_grid(const ArrayGeometry& geom, double theta_b, const GridOptions& opt)
{
    geom.validate();
    if (opt.points_per_lobe < 2)
        throw std::invalid_argument("default_theta_grid: need at least 2 points per lobe");
    auto breaks = null_angles(geom, theta_b);
    for (double b : opt.extra_breaks)
        if (b > -kHalfPi && b < kHalfPi)
            breaks.push_back(b);
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> merged;
    for (double b : breaks)
        if (merged.empty() || b - merged.back() > 1e-12)
            merged.push_back(b);
    merged.back() = kHalfPi;

    const int n = opt.points_per_lobe + (opt.points_per_lobe % 2);
    std::vector<double> grid;
    grid.reserve(merged.size() * static_cast<std::size_t>(n) + 1);
    for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
        const double a = merged[i];
        const double b = merged[i + 1];
        for (int j = 0; j < n; ++j)
            grid.push_back(a + (b - a) * 0.5 * (1.0 - std::cos(kPi * j / n)));
    }
    grid.push_back(kHalfPi);
    return grid;
}

std::vector<double> uniform_theta_grid(const ScenarioConfig& cfg, double phi, int points_per_lobe)
{
    GridOptions opt;
    opt.points_per_lobe = points_per_lobe;
    const auto c = sor_constants(cfg, phi);
    if (cfg.k_eb > 0.0 && c.c3 > 0.0)
        opt.extra_breaks = level_crossing_angles(cfg.bob_profile(), c.c3 / cfg.k_eb);
    return default_theta_grid(cfg.geometry, cfg.bob_theta, opt);
}

void attach_lobes(SorBoundary& boundary, const ArrayGeometry& geom, double theta_b)
{
    boundary.lobes.clear();
    const auto& th = boundary.thetas;
    const auto& r = boundary.radii;
    if (th.size() < 2)
        return;
    const double w = geom.lobe_width();
    const double sb = std::sin(theta_b);
    auto key_of = [&](double theta) {
        const double diff = std::sin(theta) - sb;
        const int m = static_cast<int>(std::floor(std::abs(diff) / w));
        const int side = m == 0 ? 0 : (diff < 0.0 ? -1 : 1);
        return std::pair{m, side};
    };
    const auto y = half_square(r);
    std::size_t start = 0;
    while (start + 1 < th.size()) {
        if (std::abs(0.5 * (th[start] + th[start + 1])) > kHalfPi) {
            ++start;
            continue;
        }
        const auto key = key_of(0.5 * (th[start] + th[start + 1]));
        std::size_t end = start + 1;
        while (end + 1 < th.size() && key_of(0.5 * (th[end] + th[end + 1])) == key &&
               std::abs(0.5 * (th[end] + th[end + 1])) <= kHalfPi)
            ++end;
        SorLobe lobe;
        lobe.index = key.first;
        lobe.side = key.second;
        lobe.theta_lo = th[start];
        lobe.theta_hi = th[end];
        lobe.n_points = static_cast<int>(end - start + 1);
        for (std::size_t i = start; i <= end; ++i)
            lobe.max_radius = std::max(lobe.max_radius, r[i]);
        lobe.area = simpson_nonuniform(std::span(th).subspan(start, end - start + 1),
                                       std::span(y).subspan(start, end - start + 1));
        boundary.lobes.push_back(lobe);
        start = end;
    }
}

SorBoundary sor_boundary_uniform(const ScenarioConfig& cfg, double phi, const std::vector<double>& thetas)
{
    cfg.validate();
    check_grid(thetas);
    const auto c = sor_constants(cfg, phi);
    SorBoundary out;
    out.thetas = thetas;
    out.radii.assign(thetas.size(), 0.0);
    const auto s = crosstalk_on_grid(cfg, thetas);
    if (std::isinf(c.c1)) {
        for (std::size_t i = 0; i < s.size(); ++i)
            if (s[i] > 0.0)
                out.radii[i] = std::numeric_limits<double>::infinity();
    } else {
        uniform_radii(s, UniformTerms{c.c1, c.c2, c.c3, cfg.alpha}, out.radii);
    }
    attach_lobes(out, cfg.geometry, cfg.bob_theta);
    return out;
}

SorBoundary sor_boundary_nojam(const ScenarioConfig& cfg, const std::vector<double>& thetas)
{
    return sor_boundary_uniform(cfg, 0.0, thetas);
}

SorBoundary sor_boundary_directional(const ScenarioConfig& cfg, const PowerAllocation& alloc,
                                     const std::vector<double>& thetas)
{
    cfg.validate();
    alloc.validate(cfg);
    if (alloc.is_uniform())
        return sor_boundary_uniform(cfg, alloc.phi, thetas);
    const double pm = phi_max(cfg);
    if (alloc.phi > pm)
        throw InfeasibleRateError("sor_boundary_directional: phi exceeds phi_max", alloc.phi - pm);
    DirectionalEvaluator ev(cfg, alloc.basis, thetas);
    return ev.boundary(alloc.phi, alloc.beam_powers);
}

std::vector<double> lobe_radii(const ScenarioConfig& cfg, double phi, int n_lobes)
{
    const auto c = sor_constants(cfg, phi);
    const int m_count = n_lobes >= 0 ? n_lobes : default_side_lobe_count(cfg.geometry, cfg.bob_theta);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(m_count) + 1);
    for (int m = 0; m <= m_count; ++m) {
        const double v = c.c1 * cfg.k_eb * peak_value(m, cfg.geometry) - c.c2;
        out.push_back(v > 0.0 ? std::pow(v, 1.0 / cfg.alpha) : 0.0);
    }
    return out;
}

double delta_theta_max(const ScenarioConfig& cfg, double phi)
{
    const auto c = sor_constants(cfg, phi);
    if (c.c3 <= 0.0)
        return kPi;
    if (cfg.k_eb <= 0.0)
        return 0.0;
    const double u = c.c3 / cfg.k_eb;
    if (u >= 1.0)
        return 0.0;
    const auto& geom = cfg.geometry;
    const double x_cap = 1.0 + std::abs(std::sin(cfg.bob_theta));
    int last = 0;
    for (int m = 1; m <= max_lobe_index(geom); ++m) {
        const auto [lo, hi] = lobe_interval(m, geom);
        if (lo >= x_cap)
            break;
        if (s_max_on_interval(lo, std::min(hi, x_cap), geom) > u)
            last = m;
    }
    const double hi = std::min(lobe_interval(last, geom).second, x_cap);
    const double apex = std::min(lobe_apex(last, geom).x, hi);
    const double x = solve_monotone_piece(u, apex, hi, false, geom);
    const double sb = std::sin(cfg.bob_theta);
    double best = 0.0;
    if (sb + x < 1.0)
        best = std::max(best, std::asin(sb + x) - cfg.bob_theta);
    else
        best = std::max(best, kHalfPi - cfg.bob_theta);
    if (sb - x > -1.0)
        best = std::max(best, cfg.bob_theta - std::asin(sb - x));
    else
        best = std::max(best, cfg.bob_theta + kHalfPi);
    return best;
}

double sor_area(const SorBoundary& boundary, std::vector<std::string>* warnings)
{
    if (boundary.thetas.size() != boundary.radii.size())
        throw std::invalid_argument("sor_area: thetas and radii differ in length");
    if (warnings) {
        for (const auto& lobe : boundary.lobes)
            if (lobe.max_radius > 0.0 && lobe.n_points < 32)
                warnings->push_back("lobe " + std::to_string(lobe.index) + " (side " + std::to_string(lobe.side) +
                                    ") resolved by only " + std::to_string(lobe.n_points) + " grid points");
    }
    std::vector<double> th;
    std::vector<double> y;
    for (std::size_t i = 0; i < boundary.thetas.size(); ++i) {
        if (std::abs(boundary.thetas[i]) > kHalfPi)
            continue;
        th.push_back(boundary.thetas[i]);
        y.push_back(0.5 * boundary.radii[i] * boundary.radii[i]);
    }
    return simpson_nonuniform(th, y);
}

double partial_area(const SorBoundary& boundary, const std::vector<int>& lobe_indices)
{
    const std::set<int> wanted(lobe_indices.begin(), lobe_indices.end());
    double total = 0.0;
    for (const auto& lobe : boundary.lobes)
        if (wanted.count(lobe.index))
            total += lobe.area;
    return total;
}

double side_lobe_area_bound(const ScenarioConfig& cfg, double phi, int m)
{
    if (std::abs(cfg.alpha - 2.0) > 1e-12)
        throw PreconditionError("side_lobe_area_bound: requires alpha = 2");
    if (std::abs(cfg.bob_theta) > 1e-12)
        throw PreconditionError("side_lobe_area_bound: requires theta_b = 0");
    if (m < 1)
        throw PreconditionError("side_lobe_area_bound: side-lobe index must be >= 1");
    const auto c = sor_constants(cfg, phi);
    const double nd = cfg.geometry.n_antennas * cfg.geometry.spacing;
    return (cfg.k_eb * c.c1 / (kPi * kPi * m * m) - 2.0 * c.c2) / (4.0 * nd);
}

Eigen::MatrixXd beam_response(const JammingBasis& basis, const ArrayGeometry& geom, const std::vector<double>& thetas)
{
    const auto n = geom.n_antennas;
    if (basis.columns.rows() != n)
        throw std::invalid_argument("beam_response: basis rows do not match n_antennas");
    const auto g = static_cast<Eigen::Index>(thetas.size());
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(g, n);
    for (Eigen::Index i = 0; i < g; ++i) {
        const double theta = thetas[static_cast<std::size_t>(i)];
        if (std::abs(theta) > kHalfPi)
            continue;
        const auto sv = steering_vector(theta, geom);
        for (int k = 0; k < n; ++k)
            a(i, k) = std::conj(sv[static_cast<std::size_t>(k)]);
    }
    return (a * basis.columns).cwiseAbs2();
}

DirectionalEvaluator::DirectionalEvaluator(const ScenarioConfig& cfg, std::shared_ptr<const JammingBasis> basis,
                                           std::vector<double> thetas)
    : cfg_(cfg), basis_(std::move(basis)), thetas_(std::move(thetas))
{
    cfg_.validate();
    check_grid(thetas_);
    if (!basis_)
        throw std::invalid_argument("DirectionalEvaluator: basis required");
    s_values_ = crosstalk_on_grid(cfg_, thetas_);
    response_ = beam_response(*basis_, cfg_.geometry, thetas_);
}

std::vector<double> DirectionalEvaluator::signal_term(double phi) const
{
    check_phi(phi);
    const double scale = signal_scale(cfg_, phi);
    std::vector<double> out(s_values_.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = s_values_[i] > 0.0 ? scale * s_values_[i] : 0.0;
    return out;
}

std::vector<double> DirectionalEvaluator::jam_term(const std::vector<double>& beam_powers) const
{
    if (static_cast<Eigen::Index>(beam_powers.size()) != response_.cols())
        throw std::invalid_argument("DirectionalEvaluator: one power per beam required");
    Eigen::VectorXd p(response_.cols());
    for (Eigen::Index b = 0; b < p.size(); ++b)
        p(b) = beam_powers[static_cast<std::size_t>(b)] / cfg_.n0;
    const Eigen::VectorXd j = response_ * p;
    return {j.data(), j.data() + j.size()};
}

std::vector<double> DirectionalEvaluator::radii_from_terms(const std::vector<double>& signal,
                                                           const std::vector<double>& jam) const
{
    std::vector<double> out(signal.size());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double v = signal[i] - jam[i];
        out[i] = v > 0.0 ? std::pow(v, 1.0 / cfg_.alpha) : 0.0;
    }
    return out;
}

std::vector<double> DirectionalEvaluator::radii(double phi, const std::vector<double>& beam_powers) const
{
    const auto signal = signal_term(phi);
    std::vector<double> p(beam_powers.size());
    for (std::size_t b = 0; b < p.size(); ++b)
        p[b] = beam_powers[b] / cfg_.n0;
    std::vector<double> out(signal.size());
    directional_radii(signal, response_, p, cfg_.alpha, out);
    return out;
}

double DirectionalEvaluator::area_from_radii(const std::vector<double>& radii) const
{
    return simpson_nonuniform(thetas_, half_square(radii));
}

double DirectionalEvaluator::area(double phi, const std::vector<double>& beam_powers) const
{
    return area_from_radii(radii(phi, beam_powers));
}

SorBoundary DirectionalEvaluator::boundary(double phi, const std::vector<double>& beam_powers) const
{
    SorBoundary out;
    out.thetas = thetas_;
    out.radii = radii(phi, beam_powers);
    attach_lobes(out, cfg_.geometry, cfg_.bob_theta);
    return out;
}

} // namespace secrecy
