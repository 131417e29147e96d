#include "secrecy/alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "secrecy/errors.hpp"
#include "secrecy/kernels.hpp"
#include "secrecy/quadrature.hpp"
#include "secrecy/search.hpp"

namespace secrecy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// phi grid over [0, phi_max), the end point excluded.
std::vector<double> phi_grid(double pm, double step)
{
    auto grid = step_grid(0.0, pm, step);
    while (!grid.empty() && grid.back() >= pm)
        grid.pop_back();
    if (grid.empty())
        grid.push_back(0.0);
    return grid;
}

struct RefinedMin {
    double x;
    double value;
};

// Best grid point, then golden section between its neighbours; the refined
// point is kept only when strictly better.
RefinedMin refine_grid_min(const std::vector<double>& xs, const std::vector<double>& values,
                           const std::function<double(double)>& f, double tol)
{
    const auto best = grid_argmin(xs, values);
    RefinedMin out{best.x, best.value};
    if (xs.size() < 2 || !std::isfinite(best.value))
        return out;
    const double lo = xs[best.index == 0 ? 0 : best.index - 1];
    const double hi = xs[std::min(best.index + 1, xs.size() - 1)];
    if (hi - lo <= tol)
        return out;
    const auto g = golden_section(f, lo, hi, tol);
    if (g.value < out.value)
        out = {g.x, g.value};
    return out;
}

double h_scale(const ScenarioConfig& cfg, double p_signal_tilde) { return sor_scale(cfg, p_signal_tilde); }

std::vector<double> equal_split(std::size_t n, double total)
{
    return std::vector<double>(n, n == 0 ? 0.0 : total / static_cast<double>(n));
}

} // namespace

double uniform_objective(const ScenarioConfig& cfg, const SuspiciousRegion* region, double phi,
                         const UniformSearchOptions& opt)
{
    const double pm = phi_max(cfg);
    if (opt.objective == UniformObjective::sop) {
        if (!region)
            throw PreconditionError("uniform_objective: the SOP objective needs a suspicious region");
        if (phi >= pm)
            return 1.0;
        return region->is_constant() ? sop_closed_form(cfg, phi, *region)
                                     : sop_uniform_intersection(cfg, phi, *region, opt.points_per_lobe);
    }
    if (phi >= pm)
        return kInf;
    const auto boundary = sor_boundary_uniform(cfg, phi, uniform_theta_grid(cfg, phi, opt.points_per_lobe));
    if (opt.objective == UniformObjective::sor_area)
        return sor_area(boundary);
    return partial_area(boundary, opt.lobe_indices);
}

AllocationResult optimize_phi_uniform(const ScenarioConfig& cfg, const SuspiciousRegion* region,
                                      const UniformSearchOptions& opt)
{
    cfg.validate();
    const double pm = phi_max(cfg);
    std::function<double(double)> f;
    if (opt.objective == UniformObjective::sop && region && region->is_constant()) {
        auto cdf = std::make_shared<CrosstalkCdf>(cfg.bob_profile(), region->angles);
        f = [&cfg, region, pm, cdf](double phi) {
            return phi >= pm ? 1.0 : sop_closed_form(cfg, phi, *region, *cdf);
        };
    } else {
        f = [&](double phi) { return uniform_objective(cfg, region, phi, opt); };
    }
    const auto grid = phi_grid(pm, opt.phi_step);
    const auto values = map(grid, f);
    const auto best = refine_grid_min(grid, values, f, opt.refine_tol);

    AllocationResult out;
    out.phi_opt = best.x;
    out.allocation = PowerAllocation::uniform(best.x);
    out.objective = best.value;
    out.trace = values;
    return out;
}

const char* to_string(PhiBranch branch) { return branch == PhiBranch::phi_g ? "phi_g" : "phi_0"; }

double distance_threshold(const ScenarioConfig& cfg, double s_eb, double phi)
{
    const double p = cfg.p_tilde();
    return s_eb * h_scale(cfg, (1.0 - phi) * p) - (1.0 - s_eb) * phi * p;
}

ClosedFormPhi phi_opt_closed_form(const ScenarioConfig& cfg, double s_eb, double d_min)
{
    cfg.validate();
    if (!(s_eb > 0.0))
        throw std::domain_error("phi_opt_closed_form: s_eb must be positive");
    if (s_eb >= 1.0)
        throw std::domain_error("phi_opt_closed_form: s_eb = 1 is perfect alignment with Bob; no optimum");
    if (!(d_min > 0.0))
        throw std::domain_error("phi_opt_closed_form: d_min must be positive");
    const double n = cfg.geometry.n_antennas;
    const double p = cfg.p_tilde();
    const double r = cfg.rate_factor();
    const double root = std::sqrt((r - 1.0) * r * s_eb / (1.0 - s_eb) * n);
    ClosedFormPhi out;
    out.phi_g = 1.0 - ((r - 1.0) + root) / (cfg.path_gain(cfg.bob_dist) * n * p);
    out.phi_0 = (s_eb * h_scale(cfg, p) - std::pow(d_min, cfg.alpha)) / ((1.0 - s_eb) * p);
    if (out.phi_0 >= 0.0 && out.phi_0 <= 1.0 && out.phi_0 < out.phi_g) {
        out.phi = out.phi_0;
        out.branch = PhiBranch::phi_0;
    } else {
        out.phi = out.phi_g;
        out.branch = PhiBranch::phi_g;
    }
    return out;
}

double grid_oracle_phi(const ScenarioConfig& cfg, double s_eb, double d_min, double step)
{
    const double pm = phi_max(cfg);
    const double target = std::pow(d_min, cfg.alpha);
    const auto grid = phi_grid(pm, step);
    double best_phi = grid.front();
    double best_val = kInf;
    for (double phi : grid) {
        const double g = distance_threshold(cfg, s_eb, phi);
        if (g <= target)
            return phi;
        if (g < best_val) {
            best_val = g;
            best_phi = phi;
        }
    }
    return best_phi;
}

DftJammingBasis build_dft_basis(const ArrayGeometry& geom, int check_grid_points)
{
    geom.validate();
    const int n = geom.n_antennas;
    DftJammingBasis out;
    auto basis = std::make_shared<JammingBasis>();
    basis->kind = BasisKind::dft_selected;
    basis->columns.resize(n, n);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k) {
        for (int i = 0; i < n; ++i) {
            const long long phase_idx = (static_cast<long long>(i) * k) % n;
            basis->columns(i, k) = std::polar(norm, -2.0 * kPi * static_cast<double>(phase_idx) / n);
        }
        const int wrapped = k <= n / 2 ? k : k - n;
        out.wrapped_index.push_back(wrapped);
        const double u = wrapped / (n * geom.spacing);
        const bool ok = std::abs(u) <= 1.0;
        basis->mappable.push_back(ok);
        basis->beam_angles.push_back(ok ? std::asin(u) : std::copysign(kHalfPi, u));
    }
    if (check_grid_points > 1) {
        const auto thetas = linspace(-kHalfPi, kHalfPi, static_cast<std::size_t>(check_grid_points));
        const auto resp = beam_response(*basis, geom, thetas);
        for (int k = 0; k < n; ++k) {
            Eigen::Index row = 0;
            resp.col(k).maxCoeff(&row);
            out.grid_angles.push_back(thetas[static_cast<std::size_t>(row)]);
        }
    }
    out.basis = std::move(basis);
    return out;
}

std::vector<int> select_beams(const DftJammingBasis& dft, const ScenarioConfig& cfg, const AngleRange* range)
{
    const auto& b = *dft.basis;
    const double w = cfg.geometry.lobe_width();
    const double sb = std::sin(cfg.bob_theta);
    std::vector<int> out;
    for (int k = 0; k < b.size(); ++k) {
        if (!b.mappable[static_cast<std::size_t>(k)])
            continue;
        const double theta = b.beam_angles[static_cast<std::size_t>(k)];
        if (std::abs(std::sin(theta) - sb) < w * (1.0 - 1e-9))
            continue;
        if (range && !range->contains(theta))
            continue;
        out.push_back(k);
    }
    return out;
}

std::shared_ptr<JammingBasis> sub_basis(const JammingBasis& basis, const std::vector<int>& columns, BasisKind kind)
{
    auto out = std::make_shared<JammingBasis>();
    out->kind = kind;
    out->columns.resize(basis.columns.rows(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t j = 0; j < columns.size(); ++j) {
        const int c = columns[j];
        out->columns.col(static_cast<Eigen::Index>(j)) = basis.columns.col(c);
        out->beam_angles.push_back(basis.beam_angles[static_cast<std::size_t>(c)]);
        out->mappable.push_back(basis.mappable[static_cast<std::size_t>(c)]);
    }
    return out;
}

PowerAllocation directional_allocation(const ScenarioConfig& cfg, double phi, const AngleRange& range,
                                       std::vector<std::string>* warnings)
{
    const auto dft = build_dft_basis(cfg.geometry);
    const auto beams = select_beams(dft, cfg, &range);
    if (beams.empty()) {
        if (warnings)
            warnings->push_back("no DFT beam points into the suspicious angles; falling back to uniform jamming");
        return PowerAllocation::uniform(phi);
    }
    auto basis = sub_basis(*dft.basis, beams);
    PowerAllocation a;
    a.phi = phi;
    a.beam_powers = equal_split(beams.size(), phi * cfg.p_tot);
    a.basis = std::move(basis);
    return a;
}

double sop_directional(const ScenarioConfig& cfg, const PowerAllocation& alloc, const SuspiciousRegion& region,
                       int points_per_lobe)
{
    if (alloc.is_uniform())
        return sop_uniform_intersection(cfg, alloc.phi, region, points_per_lobe);
    const double pm = phi_max(cfg);
    if (alloc.phi >= pm)
        return 1.0;
    GridOptions opt;
    opt.points_per_lobe = points_per_lobe;
    opt.extra_breaks = {region.angles.lo, region.angles.hi};
    const auto grid = default_theta_grid(cfg.geometry, cfg.bob_theta, opt);
    return sop_intersection(sor_boundary_directional(cfg, alloc, grid), region, cfg.n_eves);
}

AllocationResult algorithm1_directional(const ScenarioConfig& cfg, const SuspiciousRegion& region,
                                        const UniformSearchOptions& opt)
{
    UniformSearchOptions uopt = opt;
    uopt.objective = UniformObjective::sop;
    const auto uniform = optimize_phi_uniform(cfg, &region, uopt);
    AllocationResult out;
    out.phi_opt = uniform.phi_opt;
    out.allocation = directional_allocation(cfg, uniform.phi_opt, region.angles, &out.warnings);
    out.objective = sop_directional(cfg, out.allocation, region, opt.points_per_lobe);
    out.trace = {uniform.objective, out.objective};
    return out;
}

PowerAllocation algorithm2_default_initial(const ScenarioConfig& cfg)
{
    const auto dft = build_dft_basis(cfg.geometry);
    const auto beams = select_beams(dft, cfg, nullptr);
    if (beams.empty())
        throw std::domain_error("algorithm2: no usable jamming beams outside Bob's main lobe");
    const double pm = phi_max(cfg);
    return PowerAllocation::directional(sub_basis(*dft.basis, beams),
                                        equal_split(beams.size(), 0.5 * pm * cfg.p_tot), cfg.p_tot);
}

AllocationResult algorithm2_iterative(const ScenarioConfig& cfg, const PowerAllocation& initial,
                                      const IterativeOptions& opt)
{
    cfg.validate();
    if (initial.is_uniform())
        throw PreconditionError("algorithm2: initial allocation needs an explicit beam basis");
    const double pm = phi_max(cfg);
    const double budget = cfg.p_tot * pm;
    if (initial.jam_power_sum() > budget * (1.0 + 1e-12))
        throw PreconditionError("algorithm2: initial allocation exceeds p_tot * phi_max");
    if (opt.line_points < 2)
        throw std::invalid_argument("algorithm2: need at least 2 line-search points");
    if (initial.beam_powers.empty())
        throw PreconditionError("algorithm2: initial allocation has no beams");
    const double eps = opt.epsilon > 0.0 ? opt.epsilon : 1e-6 * cfg.p_tot;

    const DirectionalEvaluator ev(cfg, initial.basis, default_theta_grid(cfg.geometry, cfg.bob_theta,
                                                                         GridOptions{opt.points_per_lobe, {}}));
    const auto& thetas = ev.thetas();
    const auto& resp = ev.response();
    const std::vector<double> s_unit = ev.signal_term(0.0);
    const double n_ant = cfg.geometry.n_antennas;
    const double rf = cfg.rate_factor();
    const double gb = cfg.path_gain(cfg.bob_dist);
    // signal_term(phi) = scale(phi) / scale(0) * signal_term(0)
    auto scale = [&](double phi) {
        const double pb = (1.0 - phi) * cfg.p_tilde();
        const double den = 1.0 + pb * gb * n_ant - rf;
        return den <= 0.0 ? kInf : pb * n_ant * rf / den;
    };
    const double scale_at_0 = scale(0.0);
    const double exponent = 2.0 / cfg.alpha;

    std::vector<double> p = initial.beam_powers;
    std::vector<double> jam = ev.jam_term(p);
    auto area_with = [&](double phi, const std::vector<double>& jam_base, int col, double x_tilde) {
        const double ratio = scale(phi) / scale_at_0;
        std::vector<double> y(thetas.size());
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double v = ratio * s_unit[i] - jam_base[i] - resp(static_cast<Eigen::Index>(i), col) * x_tilde;
            y[i] = v > 0.0 ? 0.5 * std::pow(v, exponent) : 0.0;
        }
        return simpson_nonuniform(thetas, y);
    };

    AllocationResult out;
    double current = area_with(std::accumulate(p.begin(), p.end(), 0.0) / cfg.p_tot, jam, 0, 0.0);
    out.trace.push_back(current);
    const int n_beams = static_cast<int>(p.size());
    int sweep = 0;
    for (; sweep < opt.max_sweeps; ++sweep) {
        const auto prev = p;
        for (int n = 0; n < n_beams; ++n) {
            const double others = std::accumulate(p.begin(), p.end(), 0.0) - p[static_cast<std::size_t>(n)];
            const double x_max = std::max(0.0, budget - others);
            std::vector<double> jam_base = jam;
            const double old_tilde = p[static_cast<std::size_t>(n)] / cfg.n0;
            for (std::size_t i = 0; i < jam_base.size(); ++i)
                jam_base[i] -= resp(static_cast<Eigen::Index>(i), n) * old_tilde;

            std::vector<double> xs;
            for (int i = 0; i < opt.line_points; ++i)
                xs.push_back(x_max * i / opt.line_points);
            xs.push_back(std::min(p[static_cast<std::size_t>(n)], x_max));
            std::sort(xs.begin(), xs.end());
            xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
            const auto vals = map(xs, [&](double x) { return area_with((others + x) / cfg.p_tot, jam_base, n, x / cfg.n0); });
            const auto best = grid_argmin(xs, vals);
            if (best.value <= current) {
                p[static_cast<std::size_t>(n)] = best.x;
                current = best.value;
            }
            const double new_tilde = p[static_cast<std::size_t>(n)] / cfg.n0;
            for (std::size_t i = 0; i < jam.size(); ++i)
                jam[i] = jam_base[i] + resp(static_cast<Eigen::Index>(i), n) * new_tilde;
            out.trace.push_back(current);
        }
        double delta = 0.0;
        for (std::size_t i = 0; i < p.size(); ++i)
            delta += (p[i] - prev[i]) * (p[i] - prev[i]);
        if (std::sqrt(delta) < eps) {
            ++sweep;
            break;
        }
    }
    if (sweep >= opt.max_sweeps)
        out.warnings.push_back("algorithm2: sweep cap reached before convergence");
    out.allocation = PowerAllocation::directional(initial.basis, p, cfg.p_tot);
    out.phi_opt = out.allocation.phi;
    out.objective = ev.area(out.allocation.phi, p);
    return out;
}

double side_lobe_angle(const ScenarioConfig& cfg, int m, int side, LobeAngleRule rule)
{
    if (m < 1 || (side != 1 && side != -1))
        throw std::invalid_argument("side_lobe_angle: need m >= 1 and side = +1 or -1");
    const auto& geom = cfg.geometry;
    const double x = rule == LobeAngleRule::peak ? lobe_apex(m, geom).x : (m + 0.5) * geom.lobe_width();
    const double v = std::sin(cfg.bob_theta) + side * x;
    if (std::abs(v) > 1.0)
        return std::numeric_limits<double>::quiet_NaN();
    return std::asin(v);
}

SplitResult split_search(const std::function<double(double)>& f, int points, double tol)
{
    if (points < 2)
        throw std::invalid_argument("split_search: need at least 2 points");
    const auto ts = linspace(0.0, 1.0, static_cast<std::size_t>(points));
    std::vector<double> vals(ts.size());
    for (std::size_t i = 0; i < ts.size(); ++i)
        vals[i] = f(ts[i]);
    const auto best = refine_grid_min(ts, vals, f, tol);
    return {best.x, best.value};
}

AllocationResult algorithm3_two_lobes(const ScenarioConfig& cfg, const TwoLobeOptions& opt)
{
    cfg.validate();
    const auto profile = cfg.bob_profile();
    struct Candidate {
        double theta;
        double s;
    };
    std::vector<Candidate> lobes;
    const double x_cap = 1.0 + std::abs(std::sin(cfg.bob_theta));
    for (int m = 1; m <= max_lobe_index(cfg.geometry); ++m) {
        if (lobe_interval(m, cfg.geometry).first >= x_cap)
            break;
        for (int side : {-1, 1}) {
            const double th = side_lobe_angle(cfg, m, side, opt.angle_rule);
            if (!std::isnan(th))
                lobes.push_back({th, normalized_crosstalk(th, profile)});
        }
    }
    if (lobes.size() < 2)
        throw std::domain_error("algorithm3: the array has fewer than two side lobes");
    std::stable_sort(lobes.begin(), lobes.end(), [](const Candidate& a, const Candidate& b) { return a.s > b.s; });

    auto basis = std::make_shared<JammingBasis>();
    basis->kind = BasisKind::custom;
    basis->columns.resize(cfg.geometry.n_antennas, 2);
    const double norm = 1.0 / std::sqrt(static_cast<double>(cfg.geometry.n_antennas));
    for (int j = 0; j < 2; ++j) {
        const auto sv = steering_vector(lobes[static_cast<std::size_t>(j)].theta, cfg.geometry);
        for (int i = 0; i < cfg.geometry.n_antennas; ++i)
            basis->columns(i, j) = sv[static_cast<std::size_t>(i)] * norm;
        basis->beam_angles.push_back(lobes[static_cast<std::size_t>(j)].theta);
        basis->mappable.push_back(true);
    }

    const double pm = phi_max(cfg);
    const DirectionalEvaluator ev(cfg, basis,
                                  default_theta_grid(cfg.geometry, cfg.bob_theta, GridOptions{opt.points_per_lobe, {}}));
    const auto phis = phi_grid(pm, opt.phi_step);
    auto best_split = [&](double phi) {
        const double total = phi * cfg.p_tot;
        auto f = [&](double t) { return ev.area(phi, {t * total, (1.0 - t) * total}); };
        return phi == 0.0 ? SplitResult{0.0, f(0.0)} : split_search(f, opt.split_points, opt.refine_tol);
    };
    const auto vals = map(phis, [&](double phi) { return best_split(phi).value; });
    const double phi = grid_argmin(phis, vals).x;
    const double total = phi * cfg.p_tot;
    const auto split = best_split(phi);

    AllocationResult out;
    out.allocation = PowerAllocation::directional(basis, {split.t * total, (1.0 - split.t) * total}, cfg.p_tot);
    out.allocation.phi = phi;
    out.phi_opt = phi;
    out.objective = ev.area(phi, out.allocation.beam_powers);
    out.trace = vals;
    return out;
}

double surrogate_objective(const std::vector<double>& a, const std::vector<double>& p, double alpha)
{
    if (a.size() != p.size())
        throw std::invalid_argument("surrogate_objective: size mismatch");
    double total = 0.0;
    for (std::size_t m = 0; m < a.size(); ++m) {
        const double v = a[m] - p[m];
        total += v > 0.0 ? std::pow(v, 2.0 / alpha) : 0.0;
    }
    return total;
}

std::vector<double> surrogate_boundary_minimizer(const std::vector<double>& a, double budget, double alpha)
{
    const std::size_t m = a.size();
    if (m == 0 || m > 20)
        throw std::invalid_argument("surrogate_boundary_minimizer: need 1..20 lobes");
    if (budget < 0.0 || budget > std::accumulate(a.begin(), a.end(), 0.0) * (1.0 + 1e-12))
        throw std::domain_error("surrogate_boundary_minimizer: budget outside [0, sum a]");
    std::vector<double> best;
    double best_val = kInf;
    // Vertices of {sum p = budget, 0 <= p <= a}: every entry at a bound except
    // at most one free entry.
    for (std::size_t free = 0; free < m; ++free)
        for (unsigned long mask = 0; mask < (1ul << (m - 1)); ++mask) {
            std::vector<double> p(m, 0.0);
            double used = 0.0;
            std::size_t bit = 0;
            for (std::size_t j = 0; j < m; ++j) {
                if (j == free)
                    continue;
                if (mask & (1ul << bit))
                    p[j] = a[j];
                used += p[j];
                ++bit;
            }
            p[free] = budget - used;
            const double slack = 1e-12 * std::max(1.0, budget);
            if (p[free] < -slack || p[free] > a[free] + slack)
                continue;
            p[free] = std::clamp(p[free], 0.0, a[free]);
            const double v = surrogate_objective(a, p, alpha);
            if (v < best_val) {
                best_val = v;
                best = p;
            }
        }
    return best;
}

double area_upper_bound(const std::vector<double>& lobe_radii_at_angles)
{
    if (lobe_radii_at_angles.empty())
        return 0.0;
    double total = 0.0;
    for (double r : lobe_radii_at_angles)
        total += r * r;
    return kPi / (2.0 * static_cast<double>(lobe_radii_at_angles.size())) * total;
}

} // namespace secrecy
