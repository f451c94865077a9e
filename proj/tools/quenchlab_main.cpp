#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "qlab/experiment.hpp"

namespace {

struct GlobalOptions {
    std::optional<std::string> config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<int> threads;
};

qlab::RunContext make_context(const GlobalOptions& options, const std::string& command) {
    qlab::RunContext ctx;
    ctx.command = command;

    if (options.config_path) {
        std::ifstream in(*options.config_path, std::ios::binary);
        if (!in) throw qlab::IoError("cannot read config file " + *options.config_path);
        std::ostringstream buffer;
        buffer << in.rdbuf();
        ctx.config_text = buffer.str();
        ctx.config_file = *options.config_path;
        ctx.config = qlab::parse_config(ctx.config_text);
    } else {
        ctx.config = qlab::parse_config("{}");  // all defaults
    }

    // precedence: CLI flag > environment > config file > default
    if (const char* env_out = std::getenv("QLAB_OUT")) ctx.config.output_dir = env_out;
    if (const char* env_threads = std::getenv("QLAB_THREADS")) {
        try {
            ctx.config.threads = std::stoi(env_threads);
        } catch (const std::exception&) {
            throw qlab::ConfigError("QLAB_THREADS is not an integer: " + std::string(env_threads));
        }
    }
    if (options.out_dir) ctx.config.output_dir = *options.out_dir;
    if (options.threads) ctx.config.threads = *options.threads;
    if (options.seed) ctx.config.seed = *options.seed;
    ctx.config.validate();
    return ctx;
}

void report_error(const char* type, const std::string& message) {
    nlohmann::json record;
    record["error"]["type"] = type;
    record["error"]["message"] = message;
    std::cerr << record.dump() << std::endl;
}

void print_outputs(const qlab::RunResult& result) {
    for (const auto& name : result.outputs) {
        std::cout << (result.output_dir / name).string() << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quenchlab: exact Bose-Hubbard quench-thermalization laboratory"};
    app.require_subcommand(1);

    GlobalOptions options;
    app.add_option("--config", options.config_path, "JSON config file");
    app.add_option("--seed", options.seed, "RNG seed (required for sampling)");
    app.add_option("--out", options.out_dir, "output directory");
    app.add_option("--threads", options.threads, "worker threads (0 = auto)");

    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues of the sector Hamiltonian");
    std::string dump_matrix;
    spectrum->add_option("--dump-matrix", dump_matrix,
                         "also write the Hamiltonian as 'row col value' triples");

    auto* quench = app.add_subcommand("quench", "unitary evolution of the unit-filling state");
    auto* entropy = app.add_subcommand("entropy", "Renyi-2 entanglement entropy dynamics");
    auto* ensembles = app.add_subcommand("ensembles", "the five comparison ensembles");
    auto* observables =
        app.add_subcommand("observables", "densities and thermalization metrics");
    auto* interfere =
        app.add_subcommand("interfere", "two-copy beam-splitter measurement simulation");

    auto* reproduce = app.add_subcommand("reproduce", "emit the data behind one figure");
    std::string figure;
    reproduce->add_option("figure", figure, "fig2b | fig3 | fig4 | fig5 | fig6")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        report_error("config", e.what());
        return 2;
    }

    try {
        qlab::RunResult result;
        if (spectrum->parsed()) {
            result = qlab::run_spectrum(
                make_context(options, "spectrum"),
                dump_matrix.empty() ? std::nullopt : std::optional<std::string>(dump_matrix));
        } else if (quench->parsed()) {
            result = qlab::run_quench(make_context(options, "quench"));
        } else if (entropy->parsed()) {
            result = qlab::run_entropy(make_context(options, "entropy"));
        } else if (ensembles->parsed()) {
            result = qlab::run_ensembles(make_context(options, "ensembles"));
        } else if (observables->parsed()) {
            result = qlab::run_observables(make_context(options, "observables"));
        } else if (interfere->parsed()) {
            result = qlab::run_interfere(make_context(options, "interfere"));
        } else if (reproduce->parsed()) {
            result = qlab::run_reproduce(make_context(options, "reproduce " + figure), figure);
        }
        print_outputs(result);
        return 0;
    } catch (const qlab::ConfigError& e) {
        report_error("config", e.what());
        return 2;
    } catch (const qlab::IoError& e) {
        report_error("io", e.what());
        return 4;
    } catch (const qlab::NumericalError& e) {
        report_error("numerical", e.what());
        return 3;
    } catch (const std::exception& e) {
        report_error("numerical", e.what());
        return 3;
    }
}
