#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

#include "csv.hpp"
#include "manifest.hpp"

namespace secrecy::cli {

// Command-line overrides shared by all subcommands.
struct RunOptions {
    std::optional<std::uint64_t> seed;
    std::optional<double> phi_step;
    std::optional<int> grid;   // points per lobe
    bool both_alpha = false;
};

// Progress and warnings go here (stderr in the tool).
class Log {
public:
    explicit Log(std::ostream& os) : os_(os) {}
    void info(const std::string& msg);
    void warn(const std::string& msg);
    int warnings() const { return warnings_; }

private:
    std::ostream& os_;
    int warnings_ = 0;
};

// SOP and area per sweep value; phi is fixed when the manifest gives one.
CsvTable run_manifest(const ExperimentManifest& m, const RunOptions& opt, Log& log);

// Like run_manifest, but always optimizes phi and reports the objective.
CsvTable run_optimize(const ExperimentManifest& m, const RunOptions& opt, Log& log);

CsvTable sor_map(const ExperimentManifest& m, const RunOptions& opt, Log& log);

CsvTable mc_validate(const ExperimentManifest& m, const RunOptions& opt, Log& log);

// fig2 .. fig6 with the published parameter settings.
CsvTable reproduce(const std::string& figure, const RunOptions& opt, Log& log);

} // namespace secrecy::cli
