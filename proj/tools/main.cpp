#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "secrecy/errors.hpp"
#include "secrecy/kernels.hpp"

using namespace secrecy::cli;

namespace {

int threads_from_env()
{
    const char* env = std::getenv("SECRECY_SOR_THREADS");
    if (!env || !*env) return 0;
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (*end != '\0' || v < 1 || v > 4096)
        throw ManifestError(std::string("SECRECY_SOR_THREADS: expected a positive integer, got '") + env + "'");
    return static_cast<int>(v);
}

void emit(const CsvTable& table, const std::string& out)
{
    if (out.empty() || out == "-") {
        table.write(std::cout);
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open output file '" + out + "'");
    table.write(f);
    if (!f) throw std::runtime_error("failed writing '" + out + "'");
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Secrecy outage regions and probabilities under artificial-noise jamming", "secrecy-sor"};
    app.require_subcommand(1);

    std::string manifest_path, out_path, figure;
    RunOptions opt;
    int threads = 0;
    std::uint64_t seed = 0;
    double phi_step = 0.0;
    int grid = 0;

    auto add_common = [&](CLI::App* sub, bool with_manifest) {
        if (with_manifest) sub->add_option("--manifest", manifest_path, "JSON experiment manifest")->required();
        sub->add_option("--out", out_path, "CSV output path (default: manifest output_path or stdout)");
        sub->add_option("--seed", seed, "Monte Carlo master seed");
        sub->add_option("--phi-step", phi_step, "phi grid step")->check(CLI::Range(1e-9, 0.5));
        sub->add_option("--grid", grid, "theta grid points per lobe")->check(CLI::Range(2, 100000));
        sub->add_option("--threads", threads, "worker threads (fallback: SECRECY_SOR_THREADS)")
            ->check(CLI::Range(1, 4096));
    };

    auto* rep = app.add_subcommand("reproduce", "Regenerate a figure's data");
    rep->add_option("figure", figure, "fig2 | fig3 | fig4 | fig5 | fig6")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5", "fig6"}));
    rep->add_flag("--both-alpha", opt.both_alpha, "fig2: emit alpha = 2 and alpha = 3");
    add_common(rep, false);
    auto* map = app.add_subcommand("sor-map", "Boundary samples (theta, radius) of the SOR");
    add_common(map, true);
    auto* sop = app.add_subcommand("sop", "SOP and SOR area per sweep value");
    add_common(sop, true);
    auto* optim = app.add_subcommand("optimize", "Optimized jamming allocation per sweep value");
    add_common(optim, true);
    auto* mcv = app.add_subcommand("mc-validate", "Asymptotic SOP against finite-array Monte Carlo");
    add_common(mcv, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    Log log(std::cerr);
    const auto t0 = std::chrono::steady_clock::now();
    CLI::App* used = app.get_subcommands().front();
    try {
        if (used->count("--seed")) opt.seed = seed;
        if (used->count("--phi-step")) opt.phi_step = phi_step;
        if (used->count("--grid")) opt.grid = grid;
        if (!used->count("--threads")) threads = threads_from_env();
        if (threads > 0) secrecy::set_thread_count(threads);

        CsvTable table({});
        std::string out = out_path;
        if (used == rep) {
            table = reproduce(figure, opt, log);
        } else {
            auto m = load_manifest(manifest_path);
            if (out.empty() && m.output_path) out = *m.output_path;
            if (used == map) table = sor_map(m, opt, log);
            else if (used == sop) table = run_manifest(m, opt, log);
            else if (used == optim) table = run_optimize(m, opt, log);
            else table = mc_validate(m, opt, log);
        }
        emit(table, out);
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::ostringstream s;
        s << used->get_name() << (figure.empty() ? "" : " " + figure) << ": " << table.rows() << " rows in "
          << format_double(secs) << " s, " << log.warnings() << " warning(s), " << secrecy::thread_count()
          << " thread(s)";
        log.info(s.str());
    } catch (const ManifestError& e) {
        std::cerr << "secrecy-sor: " << e.what() << '\n';
        return 2;
    } catch (const secrecy::PreconditionError& e) {
        std::cerr << "secrecy-sor: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "secrecy-sor: invalid input: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "secrecy-sor: invalid input: " << e.what() << '\n';
        return 2;
    } catch (const secrecy::InfeasibleRateError& e) {
        std::cerr << "secrecy-sor: infeasible rate: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "secrecy-sor: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
