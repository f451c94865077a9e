#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qlab/config.hpp"

namespace qlab {

struct RunContext {
    ExperimentConfig config;
    std::string command;
    std::optional<std::string> config_file;  // source path, when loaded from disk
    std::string config_text;                 // raw file bytes ("" when synthesized)
};

struct RunResult {
    std::filesystem::path output_dir;
    std::vector<std::string> outputs;  // filenames relative to output_dir
};

RunResult run_spectrum(const RunContext& ctx,
                       const std::optional<std::string>& dump_matrix = std::nullopt);
RunResult run_quench(const RunContext& ctx);
RunResult run_entropy(const RunContext& ctx);
RunResult run_ensembles(const RunContext& ctx);
RunResult run_observables(const RunContext& ctx);
RunResult run_interfere(const RunContext& ctx);

/// figure in {fig2b, fig3, fig4, fig5, fig6}; model parameters are pinned to
/// the published quenches, the grid/seed/output knobs come from the config.
RunResult run_reproduce(const RunContext& ctx, const std::string& figure);

}  // namespace qlab
