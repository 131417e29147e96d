#include "secrecy/multiuser.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "secrecy/errors.hpp"
#include "secrecy/sop.hpp"

namespace secrecy {

void MultiuserScenario::validate() const
{
    cfg.validate();
    if (users.empty()) throw std::invalid_argument("multiuser: at least one user required");
    const double w = cfg.geometry.lobe_width();
    double total = jam_alloc.phi * cfg.p_tot;
    for (std::size_t i = 0; i < users.size(); ++i) {
        const auto& u = users[i];
        if (!(std::abs(u.theta) <= kHalfPi))
            throw std::invalid_argument("multiuser: user " + std::to_string(i) + " angle outside [-pi/2, pi/2]");
        if (!(u.dist > 0.0))
            throw std::invalid_argument("multiuser: user " + std::to_string(i) + " distance must be positive");
        if (!(u.power > 0.0))
            throw std::invalid_argument("multiuser: user " + std::to_string(i) + " power must be positive");
        total += u.power;
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(std::sin(u.theta) - std::sin(users[j].theta)) < w * (1.0 - 1e-12))
                throw std::invalid_argument("multiuser: users " + std::to_string(j) + " and " + std::to_string(i) +
                                            " share a main lobe");
    }
    if (total > cfg.p_tot * (1.0 + 1e-9))
        throw std::invalid_argument("multiuser: user and jamming powers exceed p_tot");
    if (!jam_alloc.is_uniform()) jam_alloc.validate(cfg);
}

ScenarioConfig MultiuserScenario::user_config(int u) const
{
    if (u < 0 || u >= static_cast<int>(users.size())) throw std::out_of_range("multiuser: user index");
    ScenarioConfig c = cfg;
    c.bob_theta = users[static_cast<std::size_t>(u)].theta;
    c.bob_dist = users[static_cast<std::size_t>(u)].dist;
    return c;
}

SorBoundary mu_sor_boundary(const MultiuserScenario& scn, int u, const std::vector<double>& thetas)
{
    scn.validate();
    const ScenarioConfig c = scn.user_config(u);
    const auto& geom = c.geometry;
    const double n = geom.n_antennas;
    const auto& me = scn.users[static_cast<std::size_t>(u)];
    const double pt = me.power / c.n0;
    const double q = c.rate_factor();
    const double headroom = 1.0 + pt * c.path_gain(me.dist) * n - q;
    if (!(headroom > 0.0))
        throw InfeasibleRateError("multiuser: user " + std::to_string(u) + " cannot reach the target rate",
                                  q - 1.0 - pt * c.path_gain(me.dist) * n);
    const double scale = sor_scale(c, pt);

    Eigen::MatrixXd resp;
    if (!scn.jam_alloc.is_uniform()) resp = beam_response(*scn.jam_alloc.basis, geom, thetas);
    const double p_jam = scn.jam_alloc.phi * c.p_tot / c.n0;

    SorBoundary out;
    out.thetas = thetas;
    out.radii.resize(thetas.size());
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        const double th = thetas[i];
        if (std::abs(th) > kHalfPi) {
            out.radii[i] = 0.0;
            continue;
        }
        const double st = std::sin(th);
        double jam = 0.0;
        double leak_sum = 0.0;
        for (std::size_t v = 0; v < scn.users.size(); ++v) {
            const double sv = s_kernel(std::abs(st - std::sin(scn.users[v].theta)), geom);
            leak_sum += c.k_eb * sv;
            if (static_cast<int>(v) != u) jam += scn.users[v].power / c.n0 * n * sv;
        }
        if (scn.jam_alloc.is_uniform())
            jam += p_jam * std::max(1.0 - leak_sum, 0.0);
        else
            for (Eigen::Index b = 0; b < resp.cols(); ++b)
                jam += resp(static_cast<Eigen::Index>(i), b) * scn.jam_alloc.beam_powers[static_cast<std::size_t>(b)] / c.n0;
        const double sig = scale * c.k_eb * s_kernel(std::abs(st - std::sin(me.theta)), geom);
        const double v = sig - jam;
        out.radii[i] = v > 0.0 ? std::pow(v, 1.0 / c.alpha) : 0.0;
    }
    attach_lobes(out, geom, me.theta);
    return out;
}

namespace {

WorstArea pick_worst(std::vector<double> areas)
{
    WorstArea w;
    w.areas = std::move(areas);
    for (std::size_t i = 0; i < w.areas.size(); ++i)
        if (i == 0 || w.areas[i] > w.area * (1.0 + 1e-9)) {
            w.area = w.areas[i];
            w.user = static_cast<int>(i);
        }
    return w;
}

} // namespace

WorstArea mu_worst_area(const MultiuserScenario& scn, int points_per_lobe)
{
    scn.validate();
    std::vector<double> areas;
    for (std::size_t u = 0; u < scn.users.size(); ++u) {
        GridOptions opt;
        opt.points_per_lobe = points_per_lobe;
        for (std::size_t v = 0; v < scn.users.size(); ++v)
            for (double a : null_angles(scn.cfg.geometry, scn.users[v].theta)) opt.extra_breaks.push_back(a);
        const auto grid = default_theta_grid(scn.cfg.geometry, scn.users[u].theta, opt);
        areas.push_back(sor_area(mu_sor_boundary(scn, static_cast<int>(u), grid)));
    }
    return pick_worst(std::move(areas));
}

WorstArea mu_worst_area(const MultiuserScenario& scn, const std::vector<double>& thetas)
{
    std::vector<double> areas;
    for (std::size_t u = 0; u < scn.users.size(); ++u)
        areas.push_back(sor_area(mu_sor_boundary(scn, static_cast<int>(u), thetas)));
    return pick_worst(std::move(areas));
}

} // namespace secrecy
