#include "manifest.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "secrecy/search.hpp"

namespace secrecy::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed)
{
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ManifestError(where + it.key() + ": unknown field");
}

const json& require_object(const json& j, const std::string& path)
{
    if (!j.is_object()) throw ManifestError(path + ": expected an object");
    return j;
}

double number(const json& obj, const std::string& key, const std::string& path, double fallback)
{
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) throw ManifestError(path + key + ": expected a number");
    double d = v.get<double>();
    if (!std::isfinite(d)) throw ManifestError(path + key + ": must be finite");
    return d;
}

double required_number(const json& obj, const std::string& key, const std::string& path)
{
    if (!obj.contains(key)) throw ManifestError(path + key + ": required field missing");
    return number(obj, key, path, 0.0);
}

int integer(const json& obj, const std::string& key, const std::string& path, int fallback)
{
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw ManifestError(path + key + ": expected an integer");
    return v.get<int>();
}

// Re-raises library validation failures with the manifest path prefixed.
template <class F>
void checked(const std::string& path, F&& f)
{
    try {
        f();
    } catch (const ManifestError&) {
        throw;
    } catch (const std::logic_error& e) {
        throw ManifestError(path + ": " + e.what());
    }
}

ScenarioConfig parse_scenario(const json& j)
{
    const std::string p = "scenario.";
    require_object(j, "scenario");
    reject_unknown(j, p, {"n_antennas", "spacing", "alpha", "p_tot", "n0", "r_th", "bob_theta_deg", "bob_dist",
                          "k_eb", "n_eves"});
    ScenarioConfig c = paper_defaults(100, 10.0, 100.0);
    c.geometry.n_antennas = integer(j, "n_antennas", p, c.geometry.n_antennas);
    c.geometry.spacing = number(j, "spacing", p, c.geometry.spacing);
    c.alpha = number(j, "alpha", p, c.alpha);
    c.p_tot = number(j, "p_tot", p, c.p_tot);
    c.n0 = number(j, "n0", p, c.n0);
    c.r_th = number(j, "r_th", p, c.r_th);
    c.bob_theta = deg_to_rad(number(j, "bob_theta_deg", p, 0.0));
    c.bob_dist = number(j, "bob_dist", p, c.bob_dist);
    c.k_eb = number(j, "k_eb", p, c.k_eb);
    c.n_eves = integer(j, "n_eves", p, c.n_eves);
    checked("scenario", [&] { c.validate(); });
    return c;
}

SuspiciousRegion parse_region(const json& j)
{
    const std::string p = "region.";
    require_object(j, "region");
    reject_unknown(j, p, {"theta_lo_deg", "theta_hi_deg", "d_min", "d_max"});
    const double lo = deg_to_rad(required_number(j, "theta_lo_deg", p));
    const double hi = deg_to_rad(required_number(j, "theta_hi_deg", p));
    const double d_min = required_number(j, "d_min", p), d_max = required_number(j, "d_max", p);
    SuspiciousRegion r;
    checked("region", [&] {
        r = SuspiciousRegion::constant({lo, hi}, d_min, d_max);
        r.validate();
    });
    return r;
}

SweepParam parse_param(const std::string& s)
{
    for (auto p : {SweepParam::phi, SweepParam::bob_dist, SweepParam::bob_theta_deg, SweepParam::r_th,
                   SweepParam::n_antennas, SweepParam::alpha, SweepParam::n_eves, SweepParam::d_min,
                   SweepParam::d_max})
        if (s == to_string(p)) return p;
    throw ManifestError("sweep.param: unknown parameter '" + s + "'");
}

Sweep parse_sweep(const json& j)
{
    const std::string p = "sweep.";
    require_object(j, "sweep");
    reject_unknown(j, p, {"param", "values", "start", "stop", "step"});
    if (!j.contains("param") || !j.at("param").is_string()) throw ManifestError("sweep.param: expected a string");
    Sweep s;
    s.param = parse_param(j.at("param").get<std::string>());
    if (j.contains("values")) {
        if (j.contains("start") || j.contains("stop") || j.contains("step"))
            throw ManifestError("sweep: give either values or start/stop/step");
        if (!j.at("values").is_array()) throw ManifestError("sweep.values: expected an array");
        for (const auto& v : j.at("values")) {
            if (!v.is_number()) throw ManifestError("sweep.values: expected numbers");
            s.values.push_back(v.get<double>());
        }
    } else {
        double a = required_number(j, "start", p), b = required_number(j, "stop", p);
        double st = required_number(j, "step", p);
        if (!(st > 0.0)) throw ManifestError("sweep.step: must be positive");
        if (b < a) throw ManifestError("sweep.stop: must not be below start");
        s.values = step_grid(a, b, st);
    }
    if (s.values.empty()) throw ManifestError("sweep: grid is empty");
    for (double v : s.values)
        if (!std::isfinite(v)) throw ManifestError("sweep.values: must be finite");
    if (s.param == SweepParam::n_antennas || s.param == SweepParam::n_eves)
        for (double v : s.values)
            if (v != std::floor(v)) throw ManifestError("sweep.values: integer parameter needs integer values");
    return s;
}

McSettings parse_mc(const json& j)
{
    const std::string p = "mc.";
    require_object(j, "mc");
    reject_unknown(j, p, {"n_samples", "seed", "finite_nt", "k_factor"});
    McSettings m;
    if (j.contains("n_samples")) {
        if (!j.at("n_samples").is_number_integer()) throw ManifestError("mc.n_samples: expected an integer");
        m.n_samples = j.at("n_samples").get<std::int64_t>();
    }
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned()) throw ManifestError("mc.seed: expected a non-negative integer");
        m.seed = j.at("seed").get<std::uint64_t>();
    }
    if (j.contains("finite_nt")) m.finite_nt = integer(j, "finite_nt", p, 0);
    m.k_factor = number(j, "k_factor", p, m.k_factor);
    if (m.n_samples < 1) throw ManifestError("mc.n_samples: must be >= 1");
    if (m.finite_nt && *m.finite_nt < 2) throw ManifestError("mc.finite_nt: must be >= 2");
    if (!(m.k_factor >= 0.0)) throw ManifestError("mc.k_factor: must be non-negative");
    return m;
}

Scheme parse_scheme(const std::string& s)
{
    for (auto v : {Scheme::no_jam, Scheme::uniform, Scheme::algo1, Scheme::algo2, Scheme::algo3})
        if (s == to_string(v)) return v;
    throw ManifestError("scheme: unknown scheme '" + s + "'");
}

} // namespace

const char* to_string(Scheme s)
{
    switch (s) {
    case Scheme::no_jam: return "no_jam";
    case Scheme::uniform: return "uniform";
    case Scheme::algo1: return "algo1";
    case Scheme::algo2: return "algo2";
    case Scheme::algo3: return "algo3";
    }
    return "?";
}

const char* to_string(SweepParam p)
{
    switch (p) {
    case SweepParam::none: return "none";
    case SweepParam::phi: return "phi";
    case SweepParam::bob_dist: return "bob_dist";
    case SweepParam::bob_theta_deg: return "bob_theta_deg";
    case SweepParam::r_th: return "r_th";
    case SweepParam::n_antennas: return "n_antennas";
    case SweepParam::alpha: return "alpha";
    case SweepParam::n_eves: return "n_eves";
    case SweepParam::d_min: return "d_min";
    case SweepParam::d_max: return "d_max";
    }
    return "?";
}

ExperimentManifest parse_manifest(const json& j)
{
    require_object(j, "manifest");
    reject_unknown(j, "", {"scenario", "region", "scheme", "phi", "objective", "sweep", "mc", "output_path",
                           "points_per_lobe", "phi_step"});
    ExperimentManifest m;
    m.scenario = parse_scenario(j.contains("scenario") ? j.at("scenario") : json::object());
    if (j.contains("region")) m.region = parse_region(j.at("region"));
    if (j.contains("scheme")) {
        if (!j.at("scheme").is_string()) throw ManifestError("scheme: expected a string");
        m.scheme = parse_scheme(j.at("scheme").get<std::string>());
    }
    if (j.contains("phi")) {
        double phi = number(j, "phi", "", 0.0);
        if (!(phi >= 0.0 && phi <= 1.0)) throw ManifestError("phi: must lie in [0, 1]");
        m.phi = phi;
    }
    if (j.contains("objective")) {
        if (!j.at("objective").is_string()) throw ManifestError("objective: expected a string");
        auto o = j.at("objective").get<std::string>();
        if (o != "sop" && o != "area") throw ManifestError("objective: expected 'sop' or 'area'");
        m.objective = o;
    }
    if (j.contains("sweep")) m.sweep = parse_sweep(j.at("sweep"));
    if (j.contains("mc")) m.mc = parse_mc(j.at("mc"));
    if (j.contains("output_path")) {
        if (!j.at("output_path").is_string()) throw ManifestError("output_path: expected a string");
        m.output_path = j.at("output_path").get<std::string>();
    }
    if (j.contains("points_per_lobe")) {
        m.points_per_lobe = integer(j, "points_per_lobe", "", 0);
        if (*m.points_per_lobe < 2) throw ManifestError("points_per_lobe: must be >= 2");
    }
    m.phi_step = number(j, "phi_step", "", m.phi_step);
    if (!(m.phi_step > 0.0 && m.phi_step < 1.0)) throw ManifestError("phi_step: must lie in (0, 1)");

    const bool needs_region = m.scheme == Scheme::algo1 || m.objective == std::optional<std::string>("sop");
    if (needs_region && !m.region) throw ManifestError("region: required by scheme or objective");
    if (m.sweep.param == SweepParam::phi && m.phi) throw ManifestError("phi: conflicts with a phi sweep");
    if ((m.sweep.param == SweepParam::d_min || m.sweep.param == SweepParam::d_max) && !m.region)
        throw ManifestError("sweep.param: distance sweeps need a region");
    if (m.sweep.param == SweepParam::phi &&
        (m.scheme == Scheme::no_jam || m.scheme == Scheme::algo2 || m.scheme == Scheme::algo3))
        throw ManifestError("sweep.param: phi sweeps apply to uniform and algo1 only");
    // Every sweep value must describe a valid scenario.
    for (double v : m.sweep.values) checked("sweep.values", [&] { apply_sweep(m, v); });
    return m;
}

ExperimentManifest load_manifest(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ManifestError("manifest: cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ManifestError(std::string("manifest: invalid JSON: ") + e.what());
    }
    return parse_manifest(j);
}

SweepPoint apply_sweep(const ExperimentManifest& m, double value)
{
    SweepPoint pt{m.scenario, m.region, m.phi};
    switch (m.sweep.param) {
    case SweepParam::none: break;
    case SweepParam::phi:
        if (!(value >= 0.0 && value <= 1.0)) throw std::invalid_argument("phi must lie in [0, 1]");
        pt.phi = value;
        break;
    case SweepParam::bob_dist: pt.cfg.bob_dist = value; break;
    case SweepParam::bob_theta_deg: pt.cfg.bob_theta = deg_to_rad(value); break;
    case SweepParam::r_th: pt.cfg.r_th = value; break;
    case SweepParam::n_antennas: pt.cfg.geometry.n_antennas = static_cast<int>(value); break;
    case SweepParam::alpha: pt.cfg.alpha = value; break;
    case SweepParam::n_eves: pt.cfg.n_eves = static_cast<int>(value); break;
    case SweepParam::d_min:
    case SweepParam::d_max: {
        auto cd = pt.region->constant_distances();
        (m.sweep.param == SweepParam::d_min ? cd.d_min : cd.d_max) = value;
        pt.region = SuspiciousRegion::constant(pt.region->angles, cd.d_min, cd.d_max);
        pt.region->validate();
        break;
    }
    }
    pt.cfg.validate();
    return pt;
}

} // namespace secrecy::cli
