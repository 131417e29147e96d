#include "commands.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "secrecy/alloc.hpp"
#include "secrecy/errors.hpp"
#include "secrecy/search.hpp"

namespace secrecy::cli {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct Evaluated {
    double phi = kNan;
    double sop = kNan;
    double area = kNan;
    double objective = kNan;
    long long n_beams = 0;
    std::string warning;
    std::optional<PowerAllocation> alloc;
};

std::string join(const std::vector<std::string>& parts)
{
    std::string out;
    for (const auto& p : parts) out += (out.empty() ? "" : "; ") + p;
    return out;
}

int grid_for(const ExperimentManifest& m, const RunOptions& opt, Scheme s)
{
    if (opt.grid) return *opt.grid;
    if (m.points_per_lobe) return *m.points_per_lobe;
    return (s == Scheme::algo2 || s == Scheme::algo3 || s == Scheme::algo1) ? 256 : 64;
}

double phi_step(const ExperimentManifest& m, const RunOptions& opt)
{
    return opt.phi_step ? *opt.phi_step : m.phi_step;
}

double uniform_sop(const ScenarioConfig& cfg, double phi, const SuspiciousRegion& region)
{
    return sop_closed_form(cfg, phi, region);
}

double uniform_area(const ScenarioConfig& cfg, double phi, int ppl)
{
    return sor_area(sor_boundary_uniform(cfg, phi, uniform_theta_grid(cfg, phi, ppl)));
}

double directional_area(const ScenarioConfig& cfg, const PowerAllocation& alloc, int ppl)
{
    GridOptions g;
    g.points_per_lobe = ppl;
    return sor_area(sor_boundary_directional(cfg, alloc, default_theta_grid(cfg.geometry, cfg.bob_theta, g)));
}

Evaluated evaluate(const ExperimentManifest& m, const SweepPoint& pt, bool force_optimize, const RunOptions& opt)
{
    const ScenarioConfig& cfg = pt.cfg;
    const SuspiciousRegion* region = pt.region ? &*pt.region : nullptr;
    const int ppl = grid_for(m, opt, m.scheme);
    Evaluated e;
    std::vector<std::string> warnings;
    try {
        const double pm = phi_max(cfg);
        std::optional<double> fixed = force_optimize ? std::nullopt : pt.phi;
        if (fixed && *fixed >= pm && (m.scheme == Scheme::uniform || m.scheme == Scheme::algo1)) {
            e.phi = *fixed;
            e.sop = 1.0;
            e.warning = "phi at or beyond phi_max";
            return e;
        }
        UniformSearchOptions uo;
        uo.phi_step = phi_step(m, opt);
        uo.points_per_lobe = grid_for(m, opt, Scheme::uniform);
        const bool sop_objective = m.objective ? *m.objective == "sop" : region != nullptr;
        uo.objective = sop_objective ? UniformObjective::sop : UniformObjective::sor_area;

        switch (m.scheme) {
        case Scheme::no_jam:
            e.phi = 0.0;
            e.alloc = PowerAllocation::uniform(0.0);
            e.area = sor_area(sor_boundary_nojam(cfg, default_theta_grid(cfg.geometry, cfg.bob_theta, {ppl, {}})));
            if (region) e.sop = uniform_sop(cfg, 0.0, *region);
            e.objective = region ? e.sop : e.area;
            break;
        case Scheme::uniform: {
            if (fixed) {
                e.phi = *fixed;
            } else {
                auto r = optimize_phi_uniform(cfg, region, uo);
                e.phi = r.phi_opt;
                e.objective = r.objective;
                warnings.insert(warnings.end(), r.warnings.begin(), r.warnings.end());
            }
            e.alloc = PowerAllocation::uniform(e.phi);
            e.area = uniform_area(cfg, e.phi, ppl);
            if (region) e.sop = uniform_sop(cfg, e.phi, *region);
            break;
        }
        case Scheme::algo1: {
            if (fixed) {
                e.phi = *fixed;
                e.alloc = directional_allocation(cfg, e.phi, region->angles, &warnings);
            } else {
                auto r = algorithm1_directional(cfg, *region, uo);
                e.phi = r.phi_opt;
                e.alloc = r.allocation;
                warnings.insert(warnings.end(), r.warnings.begin(), r.warnings.end());
            }
            e.sop = e.alloc->is_uniform() ? uniform_sop(cfg, e.phi, *region)
                                          : sop_directional(cfg, *e.alloc, *region, ppl);
            e.objective = e.sop;
            e.area = e.alloc->is_uniform() ? uniform_area(cfg, e.phi, ppl) : directional_area(cfg, *e.alloc, ppl);
            break;
        }
        case Scheme::algo2:
        case Scheme::algo3: {
            AllocationResult r;
            if (m.scheme == Scheme::algo2) {
                IterativeOptions io;
                io.points_per_lobe = ppl;
                r = algorithm2_iterative(cfg, algorithm2_default_initial(cfg), io);
            } else {
                TwoLobeOptions to;
                to.points_per_lobe = ppl;
                if (opt.phi_step) to.phi_step = *opt.phi_step;
                r = algorithm3_two_lobes(cfg, to);
            }
            warnings.insert(warnings.end(), r.warnings.begin(), r.warnings.end());
            e.phi = r.phi_opt;
            e.alloc = r.allocation;
            e.area = r.objective;
            e.objective = r.objective;
            if (region)
                e.sop = e.alloc->is_uniform() ? uniform_sop(cfg, e.phi, *region)
                                              : sop_directional(cfg, *e.alloc, *region, ppl);
            break;
        }
        }
        if (e.alloc && !e.alloc->is_uniform()) e.n_beams = e.alloc->basis->size();
    } catch (const InfeasibleRateError& err) {
        std::ostringstream os;
        os << "infeasible rate: " << err.what() << " (deficit " << format_double(err.deficit()) << ")";
        warnings.push_back(os.str());
        e.alloc.reset();
    }
    if (!warnings.empty()) e.warning = join(warnings);
    return e;
}

std::vector<double> sweep_values(const ExperimentManifest& m)
{
    return m.sweep.param == SweepParam::none ? std::vector<double>{kNan} : m.sweep.values;
}

void note(Log& log, const std::string& param, double v, const std::string& warning)
{
    if (!warning.empty()) log.warn(param + "=" + format_double(v) + ": " + warning);
}

} // namespace

void Log::info(const std::string& msg)
{
    os_ << "[secrecy-sor] " << msg << '\n';
}

void Log::warn(const std::string& msg)
{
    ++warnings_;
    os_ << "[secrecy-sor] warning: " << msg << '\n';
}

CsvTable run_manifest(const ExperimentManifest& m, const RunOptions& opt, Log& log)
{
    const std::string param = std::string("sweep_") + to_string(m.sweep.param);
    CsvTable t({param, "scheme", "phi", "sop", "area", "n_beams", "warning"});
    for (double v : sweep_values(m)) {
        auto e = evaluate(m, apply_sweep(m, v), false, opt);
        note(log, param, v, e.warning);
        t.add_row({v, std::string(to_string(m.scheme)), e.phi, e.sop, e.area, e.n_beams, e.warning});
    }
    return t;
}

CsvTable run_optimize(const ExperimentManifest& m, const RunOptions& opt, Log& log)
{
    if (m.sweep.param == SweepParam::phi) throw ManifestError("sweep.param: optimize cannot sweep phi");
    if (m.phi) log.warn("phi from the manifest is ignored by optimize");
    const std::string param = std::string("sweep_") + to_string(m.sweep.param);
    CsvTable t({param, "scheme", "phi_opt", "objective", "sop", "area", "n_beams", "warning"});
    for (double v : sweep_values(m)) {
        auto e = evaluate(m, apply_sweep(m, v), true, opt);
        note(log, param, v, e.warning);
        t.add_row({v, std::string(to_string(m.scheme)), e.phi, e.objective, e.sop, e.area, e.n_beams, e.warning});
    }
    return t;
}

CsvTable sor_map(const ExperimentManifest& m, const RunOptions& opt, Log& log)
{
    const std::string param = std::string("sweep_") + to_string(m.sweep.param);
    CsvTable t({param, "scheme", "phi", "theta_deg", "radius", "warning"});
    for (double v : sweep_values(m)) {
        auto pt = apply_sweep(m, v);
        auto e = evaluate(m, pt, false, opt);
        note(log, param, v, e.warning);
        if (!e.alloc) {
            t.add_row({v, std::string(to_string(m.scheme)), e.phi, kNan, kNan, e.warning});
            continue;
        }
        const int ppl = grid_for(m, opt, m.scheme);
        SorBoundary b;
        if (m.scheme == Scheme::no_jam) {
            b = sor_boundary_nojam(pt.cfg, default_theta_grid(pt.cfg.geometry, pt.cfg.bob_theta, {ppl, {}}));
        } else if (e.alloc->is_uniform()) {
            b = sor_boundary_uniform(pt.cfg, e.phi, uniform_theta_grid(pt.cfg, e.phi, ppl));
        } else {
            b = sor_boundary_directional(pt.cfg, *e.alloc,
                                         default_theta_grid(pt.cfg.geometry, pt.cfg.bob_theta, {ppl, {}}));
        }
        for (std::size_t i = 0; i < b.thetas.size(); ++i)
            t.add_row({v, std::string(to_string(m.scheme)), e.phi, rad_to_deg(b.thetas[i]), b.radii[i],
                       e.warning});
    }
    return t;
}

CsvTable mc_validate(const ExperimentManifest& m, const RunOptions& opt, Log& log)
{
    if (!m.region) throw ManifestError("region: required by mc-validate");
    McSettings mc = m.mc.value_or(McSettings{});
    if (opt.seed) mc.seed = *opt.seed;
    const std::string param = std::string("sweep_") + to_string(m.sweep.param);
    CsvTable t({param, "scheme", "phi", "sop_asymptotic", "sop_mc", "std_error", "z", "warning"});
    log.info("asymptotic side uses k_eb from mc.k_factor = " + format_double(mc.k_factor));
    for (double v : sweep_values(m)) {
        auto pt = apply_sweep(m, v);
        pt.cfg.k_eb = k_factor_product(mc.k_factor, mc.k_factor);
        auto e = evaluate(m, pt, false, opt);
        note(log, param, v, e.warning);
        double p = kNan, se = kNan, z = kNan;
        if (e.alloc) {
            McRunSpec spec;
            spec.n_samples = mc.n_samples;
            spec.master_seed = mc.seed;
            spec.finite_nt = mc.finite_nt.value_or(pt.cfg.geometry.n_antennas);
            spec.k_factor = mc.k_factor;
            if (!e.alloc->is_uniform() && spec.finite_nt != pt.cfg.geometry.n_antennas)
                throw ManifestError("mc.finite_nt: directional schemes need finite_nt equal to n_antennas");
            auto r = empirical_sop(pt.cfg, *pt.region, *e.alloc, spec);
            p = r.value;
            se = r.std_error;
            z = se > 0.0 ? (p - e.sop) / se : (p == e.sop ? 0.0 : kNan);
        }
        t.add_row({v, std::string(to_string(m.scheme)), e.phi, e.sop, p, se, z, e.warning});
    }
    return t;
}

namespace {

CsvTable fig2(const RunOptions& opt, Log& log)
{
    const double step = opt.phi_step.value_or(0.01);
    CsvTable t({"alpha", "phi", "r0", "r1", "r2", "r3", "r4", "r5", "r6"});
    std::vector<double> alphas = opt.both_alpha ? std::vector<double>{2.0, 3.0} : std::vector<double>{3.0};
    for (double a : alphas) {
        auto cfg = paper_defaults(100, 10.0, 100.0);
        cfg.alpha = a;
        const double pm = phi_max(cfg);
        log.info("fig2 alpha=" + format_double(a) + " phi_max=" + format_double(pm));
        for (double phi : step_grid(0.0, pm, step)) {
            if (phi >= pm) break;
            auto r = lobe_radii(cfg, phi, 6);
            t.add_row({a, phi, r[0], r[1], r[2], r[3], r[4], r[5], r[6]});
        }
    }
    return t;
}

CsvTable fig3(const RunOptions& opt, Log& log)
{
    const double step = opt.phi_step.value_or(0.01);
    const int ppl = opt.grid.value_or(64);
    CsvTable t({"n_antennas", "phi", "sop_uniform", "sop_algo1"});
    const auto region = SuspiciousRegion::constant({deg_to_rad(-15.0), deg_to_rad(15.0)}, 50.0, 100.0);
    for (int n : {50, 100}) {
        auto cfg = paper_defaults(n, 10.0, 100.0);
        cfg.n_eves = 10;
        const double pm = phi_max(cfg);
        for (double phi : step_grid(0.0, 1.0, step)) {
            double su = sop_closed_form(cfg, phi, region);
            double sd = 1.0;
            if (phi < pm) {
                auto alloc = directional_allocation(cfg, phi, region.angles);
                sd = alloc.is_uniform() ? su : sop_directional(cfg, alloc, region, ppl);
            }
            t.add_row({static_cast<long long>(n), phi, su, sd});
        }
        auto best = optimize_phi_uniform(cfg, &region);
        log.info("fig3 N=" + std::to_string(n) + " phi_opt=" + format_double(best.phi_opt) +
                 " sop=" + format_double(best.objective));
    }
    return t;
}

CsvTable fig4(const RunOptions& opt, Log&)
{
    const double step = opt.phi_step.value_or(1e-4);
    CsvTable t({"n_antennas", "bob_dist", "s_eb", "phi_closed_form", "branch", "phi_g", "phi_0", "phi_oracle"});
    const std::pair<int, double> cases[] = {{50, 100.0}, {100, 100.0}, {100, 150.0}};
    for (auto [n, db] : cases) {
        auto cfg = paper_defaults(n, 5.0, db);
        for (double s : linspace(0.05, 0.95, 20)) {
            auto cf = phi_opt_closed_form(cfg, s, 50.0);
            t.add_row({static_cast<long long>(n), db, s, cf.phi, std::string(to_string(cf.branch)), cf.phi_g,
                       cf.phi_0, grid_oracle_phi(cfg, s, 50.0, step)});
        }
    }
    return t;
}

CsvTable fig5(const RunOptions& opt, Log& log)
{
    CsvTable t({"bob_dist", "area_no_jam", "phi_uniform", "area_uniform", "area_algo2", "area_algo3"});
    const int ppl = opt.grid.value_or(256);
    for (double db : step_grid(60.0, 160.0, 10.0)) {
        auto cfg = paper_defaults(50, 5.0, db);
        const auto grid = default_theta_grid(cfg.geometry, cfg.bob_theta, {ppl, {}});
        const double nojam = sor_area(sor_boundary_nojam(cfg, grid));
        UniformSearchOptions uo;
        uo.objective = UniformObjective::sor_area;
        uo.phi_step = opt.phi_step.value_or(1e-3);
        uo.points_per_lobe = ppl;
        auto uni = optimize_phi_uniform(cfg, nullptr, uo);
        IterativeOptions io;
        TwoLobeOptions to;
        io.points_per_lobe = to.points_per_lobe = ppl;
        auto a2 = algorithm2_iterative(cfg, algorithm2_default_initial(cfg), io);
        auto a3 = algorithm3_two_lobes(cfg, to);
        for (const auto& w : a2.warnings) log.warn("fig5 d_b=" + format_double(db) + " algo2: " + w);
        log.info("fig5 d_b=" + format_double(db) + " done");
        t.add_row({db, nojam, uni.phi_opt, uni.objective, a2.objective, a3.objective});
    }
    return t;
}

CsvTable fig6(const RunOptions& opt, Log& log)
{
    CsvTable t({"bob_dist", "sop_no_jam", "phi_uniform", "sop_uniform", "sop_algo1", "sop_algo3"});
    const auto region = SuspiciousRegion::constant({deg_to_rad(-30.0), deg_to_rad(30.0)}, 50.0, 200.0);
    const int ppl = opt.grid.value_or(256);
    for (double db : step_grid(60.0, 200.0, 20.0)) {
        auto cfg = paper_defaults(100, 10.0, db);
        cfg.n_eves = 10;
        UniformSearchOptions uo;
        uo.phi_step = opt.phi_step.value_or(1e-3);
        auto a1 = algorithm1_directional(cfg, region, uo);
        TwoLobeOptions to;
        to.points_per_lobe = ppl;
        auto a3 = algorithm3_two_lobes(cfg, to);
        const double s3 = a3.allocation.is_uniform() ? sop_closed_form(cfg, a3.phi_opt, region)
                                                     : sop_directional(cfg, a3.allocation, region, ppl);
        const double s1 = a1.allocation.is_uniform() ? sop_closed_form(cfg, a1.phi_opt, region)
                                                     : sop_directional(cfg, a1.allocation, region, ppl);
        log.info("fig6 d_b=" + format_double(db) + " done");
        t.add_row({db, sop_closed_form(cfg, 0.0, region), a1.phi_opt, sop_closed_form(cfg, a1.phi_opt, region), s1,
                   s3});
    }
    return t;
}

} // namespace

CsvTable reproduce(const std::string& figure, const RunOptions& opt, Log& log)
{
    if (figure == "fig2") return fig2(opt, log);
    if (figure == "fig3") return fig3(opt, log);
    if (figure == "fig4") return fig4(opt, log);
    if (figure == "fig5") return fig5(opt, log);
    if (figure == "fig6") return fig6(opt, log);
    throw ManifestError("reproduce: unknown figure '" + figure + "'");
}

} // namespace secrecy::cli
