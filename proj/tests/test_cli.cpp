#include <doctest.h>

#include <cmath>
#include <sstream>

#include "commands.hpp"

using namespace secrecy;
using namespace secrecy::cli;
using nlohmann::json;

TEST_CASE("CSV numbers carry nine significant digits")
{
    CHECK(format_double(1.0 / 3.0) == "0.333333333");
    CHECK(format_double(123456789012.0) == "1.23456789e+11");
    CHECK(format_double(2.0) == "2");
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(format_double(INFINITY) == "inf");
    CHECK(format_double(-INFINITY) == "-inf");
}

TEST_CASE("CSV table writes header, rows and quotes")
{
    CsvTable t({"a", "b", "c"});
    t.add_row({1.5, 7LL, std::string("x,y")});
    t.add_row({std::nan(""), -2LL, std::string("say \"hi\"")});
    std::ostringstream os;
    t.write(os);
    CHECK(os.str() == "a,b,c\n1.5,7,\"x,y\"\nnan,-2,\"say \"\"hi\"\"\"\n");
    CHECK_THROWS_AS(t.add_row({1.0}), std::logic_error);
}

TEST_CASE("manifest defaults and degree keys")
{
    auto m = parse_manifest(json::parse(R"({"scenario":{"bob_theta_deg":30,"n_antennas":64}})"));
    CHECK(m.scenario.bob_theta == doctest::Approx(std::asin(0.5)));
    CHECK(m.scenario.geometry.n_antennas == 64);
    CHECK(m.scheme == Scheme::uniform);
    CHECK(m.sweep.param == SweepParam::none);
    CHECK(!m.region);
    CHECK(m.phi_step == 1e-3);
}

TEST_CASE("manifest errors name the field")
{
    auto err = [](const char* text) {
        try {
            parse_manifest(json::parse(text));
        } catch (const ManifestError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(err(R"({"bogus":1})") == "bogus: unknown field");
    CHECK(err(R"({"scenario":{"theta":1}})") == "scenario.theta: unknown field");
    CHECK(err(R"({"scenario":{"n_antennas":1.5}})") == "scenario.n_antennas: expected an integer");
    CHECK(err(R"({"scenario":{"alpha":-1}})").rfind("scenario: ", 0) == 0);
    CHECK(err(R"({"region":{"theta_lo_deg":0,"theta_hi_deg":10,"d_min":5}})") == "region.d_max: required field missing");
    CHECK(err(R"({"sweep":{"param":"phi","values":[]}})") == "sweep: grid is empty");
    CHECK(err(R"({"sweep":{"param":"speed","values":[1]}})") == "sweep.param: unknown parameter 'speed'");
    CHECK(err(R"({"sweep":{"param":"n_eves","values":[1.5]}})") ==
          "sweep.values: integer parameter needs integer values");
    CHECK(err(R"({"scheme":"algo1"})") == "region: required by scheme or objective");
    CHECK(err(R"({"phi":0.2,"sweep":{"param":"phi","values":[0.1]}})") == "phi: conflicts with a phi sweep");
    CHECK(err(R"({"scheme":"algo3","sweep":{"param":"phi","values":[0.1]}})").find("phi sweeps") != std::string::npos);
    CHECK(err(R"({"sweep":{"param":"bob_dist","values":[100,-1]}})").rfind("sweep.values: ", 0) == 0);
    CHECK(err(R"({"region":{"theta_lo_deg":0,"theta_hi_deg":10,"d_min":50,"d_max":5}})").rfind("region: ", 0) == 0);
    CHECK(err(R"({"region":{"theta_lo_deg":0,"theta_hi_deg":10,"d_min":5,"d_max":50},"sweep":{"param":"d_min","values":[60]}})")
              .rfind("sweep.values: ", 0) == 0);
    CHECK(err(R"({"mc":{"n_samples":0}})") == "mc.n_samples: must be >= 1");
    CHECK(err(R"({"phi_step":0})") == "phi_step: must lie in (0, 1)");
    CHECK(err(R"([1,2])") == "manifest: expected an object");
    CHECK_THROWS_AS(load_manifest("/nonexistent/m.json"), ManifestError);
}

TEST_CASE("sweep grids and sweep points")
{
    auto m = parse_manifest(json::parse(
        R"({"region":{"theta_lo_deg":-10,"theta_hi_deg":10,"d_min":20,"d_max":60},
            "sweep":{"param":"d_max","start":40,"stop":60,"step":10}})"));
    REQUIRE(m.sweep.values.size() == 3);
    CHECK(m.sweep.values[2] == doctest::Approx(60.0));
    auto pt = apply_sweep(m, 50.0);
    CHECK(pt.region->constant_distances().d_max == 50.0);
    CHECK(pt.region->constant_distances().d_min == 20.0);
    CHECK_THROWS_AS(apply_sweep(m, 10.0), std::logic_error);

    auto n = parse_manifest(json::parse(R"({"sweep":{"param":"n_antennas","values":[32,64]}})"));
    CHECK(apply_sweep(n, 32).cfg.geometry.n_antennas == 32);
}

TEST_CASE("run_manifest evaluates each sweep value")
{
    auto m = parse_manifest(json::parse(
        R"({"scenario":{"n_antennas":50,"r_th":5,"bob_dist":100,"n_eves":3},
            "region":{"theta_lo_deg":-15,"theta_hi_deg":15,"d_min":30,"d_max":90},
            "scheme":"uniform","sweep":{"param":"phi","values":[0.0,0.3,0.999]}})"));
    std::ostringstream err;
    Log log(err);
    auto t = run_manifest(m, {}, log);
    CHECK(t.rows() == 3);
    CHECK(t.header().front() == "sweep_phi");
    std::ostringstream os;
    t.write(os);
    auto text = os.str();
    CHECK(text.find("0.999,uniform,0.999,1,nan") != std::string::npos);
    CHECK(log.warnings() >= 1);
    CHECK(err.str().find("[secrecy-sor]") != std::string::npos);
}

TEST_CASE("optimize rejects phi sweeps and reports the optimum")
{
    auto bad = parse_manifest(json::parse(R"({"sweep":{"param":"phi","values":[0.1]}})"));
    std::ostringstream err;
    Log log(err);
    CHECK_THROWS_AS(run_optimize(bad, {}, log), std::invalid_argument);
    auto m = parse_manifest(json::parse(
        R"({"scenario":{"n_antennas":50,"r_th":5,"bob_dist":100},"objective":"area","points_per_lobe":16})"));
    RunOptions opt;
    opt.phi_step = 0.05;
    auto t = run_optimize(m, opt, log);
    CHECK(t.rows() == 1);
    const auto& h = t.header();
    CHECK(std::find(h.begin(), h.end(), "phi_opt") != h.end());
    CHECK(std::find(h.begin(), h.end(), "objective") != h.end());
}

TEST_CASE("sor_map emits one row per grid angle")
{
    auto m = parse_manifest(json::parse(R"({"scenario":{"n_antennas":20,"r_th":5},"scheme":"no_jam"})"));
    std::ostringstream err;
    Log log(err);
    RunOptions opt;
    opt.grid = 8;
    auto t = sor_map(m, opt, log);
    CHECK(t.rows() > 100);
    CHECK(t.header()[3] == "theta_deg");
}

TEST_CASE("unknown figure is rejected")
{
    std::ostringstream err;
    Log log(err);
    CHECK_THROWS_AS(reproduce("fig9", {}, log), std::invalid_argument);
}
