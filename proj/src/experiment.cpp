#include "qlab/experiment.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "qlab/interference.hpp"
#include "qlab/observables.hpp"
#include "qlab/util/csv.hpp"
#include "qlab/util/parallel.hpp"
#include "qlab/util/sha1.hpp"

namespace qlab {

namespace {

using nlohmann::json;

constexpr double kTwoPi = 2.0 * 3.14159265358979323846;

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t stream) {
    // splitmix64 over disjoint stream offsets
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::string join_sites(const std::vector<int>& sites) {
    std::string label;
    for (std::size_t i = 0; i < sites.size(); ++i) {
        if (i > 0) label += '+';
        label += std::to_string(sites[i]);
    }
    return label;
}

/// Shared per-run machinery: output directory, manifest bookkeeping, and the
/// lazily built spectral objects of the configured model.
class Workspace {
public:
    explicit Workspace(const RunContext& ctx)
        : ctx_(ctx), config_(ctx.config), dir_(config_.output_dir) {
        std::error_code ec;
        std::filesystem::create_directories(dir_, ec);
        if (ec) throw IoError("cannot create output directory " + dir_.string());
    }

    const ExperimentConfig& config() const { return config_; }
    const std::filesystem::path& dir() const { return dir_; }

    CsvWriter csv(const std::string& name, const std::vector<std::string>& header) {
        outputs_.push_back(name);
        return CsvWriter(dir_ / name, header);
    }

    void note_output(const std::string& name) { outputs_.push_back(name); }

    double ms_of(double t_dimensionless) const {
        return config_.j_hz ? t_dimensionless * 1000.0 / (kTwoPi * *config_.j_hz)
                            : std::numeric_limits<double>::quiet_NaN();
    }

    std::uint64_t seed_for(std::uint64_t stream) const {
        if (!config_.seed) {
            throw ConfigError("/seed: a seed is mandatory whenever sampling is requested");
        }
        return derive_seed(*config_.seed, stream);
    }

    RunResult finish() {
        json manifest;
        manifest["tool"] = "quenchlab";
        manifest["version"] = kVersion;
        manifest["command"] = ctx_.command;
        manifest["config"] = json::parse(config_to_json(config_));
        if (ctx_.config_file) {
            manifest["input"]["config_file"] = *ctx_.config_file;
            manifest["input"]["hash_source"] = "file";
            manifest["input"]["config_sha1"] = git_blob_sha1(ctx_.config_text);
        } else {
            manifest["input"]["config_file"] = nullptr;
            manifest["input"]["hash_source"] = "resolved";
            manifest["input"]["config_sha1"] = git_blob_sha1(config_to_json(config_));
        }
        manifest["tolerances"]["dense_cap"] = EighOptions{}.dense_cap;
        manifest["tolerances"]["canonical_match_rel_tol"] = 1e-8;
        manifest["tolerances"]["grand_canonical_match_rel_tol"] = 1e-6;
        manifest["tolerances"]["purity_floor"] = config_.interference.purity_floor;
        manifest["conventions"]["saturated_window_tj"] =
            std::vector<double>{kSaturatedWindowStart, kSaturatedWindowEnd};
        manifest["conventions"]["saturated_window_samples"] = 21;
        manifest["conventions"]["entropy_log_base"] = "natural";
        manifest["conventions"]["partition_mode"] =
            config_.partition_mode == PartitionMode::contiguous ? "contiguous" : "all_subsets";
        manifest["conventions"]["grand_canonical_number_target"] =
            config_.particles - config_.ensembles.gc_number_target_delta;
        manifest["conventions"]["single_eigenstate_tie_break"] = "lowest index";
        manifest["outputs"] = outputs_;

        const std::filesystem::path path = dir_ / "manifest.json";
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write " + path.string());
        out << manifest.dump(2) << '\n';
        outputs_.push_back("manifest.json");

        RunResult result;
        result.output_dir = dir_;
        result.outputs = outputs_;
        return result;
    }

    // ---- lazily built physics objects -------------------------------------

    const SectorBasis& basis() {
        if (!basis_) basis_.emplace(config_.sites, config_.particles);
        return *basis_;
    }

    const SparseSymMatrix& hamiltonian() {
        if (!h_) {
            h_.emplace(build_hamiltonian(
                {config_.sites, config_.particles, 1.0, config_.interaction()}, basis()));
        }
        return *h_;
    }

    const SpectralDecomposition& decomposition() {
        if (!decomp_) decomp_.emplace(eigh(hamiltonian()));
        return *decomp_;
    }

    QuenchState unit_filling_state() {
        if (config_.particles != config_.sites) {
            throw ConfigError(
                "/model: quench pipelines start from the unit-filling product state and "
                "require particles == sites");
        }
        return fock_state(basis(), std::vector<int>(static_cast<std::size_t>(config_.sites), 1));
    }

private:
    RunContext ctx_;
    ExperimentConfig config_;
    std::filesystem::path dir_;
    std::vector<std::string> outputs_;
    std::optional<SectorBasis> basis_;
    std::optional<SparseSymMatrix> h_;
    std::optional<SpectralDecomposition> decomp_;
};

struct EnsembleSet {
    double e_target = 0.0;
    double temperature = 0.0;
    EnsembleState canonical_ens;
    EnsembleState microcanonical_ens;
    EnsembleState diagonal_ens;
    EnsembleState single_ens;
    GrandCanonicalFit gc_fit;
    EnsembleState gc_ens;
};

EnsembleSet build_ensembles(Workspace& ws, const MultiSectorDecomposition& multi) {
    const auto& config = ws.config();
    const auto& decomp = ws.decomposition();
    const auto psi0 = ws.unit_filling_state();

    EnsembleSet set;
    set.e_target =
        psi0.amplitudes.dot(ws.hamiltonian().matvec(psi0.amplitudes)).real();
    set.temperature = match_canonical_temperature(decomp, set.e_target);
    set.canonical_ens = canonical(decomp, set.temperature);
    set.microcanonical_ens =
        microcanonical(decomp, set.e_target, config.ensembles.microcanonical_window);
    set.diagonal_ens = diagonal_ensemble(evolve(decomp, psi0, 0.0).overlaps);
    set.single_ens = single_eigenstate(decomp, set.e_target);
    const double n_target = config.particles - config.ensembles.gc_number_target_delta;
    set.gc_fit = match_grand_canonical(multi, set.e_target, n_target);
    set.gc_ens = grand_canonical(multi, set.gc_fit.temperature, set.gc_fit.chemical_potential);
    return set;
}

// position-averaged P(n) over the partition family of one volume
std::vector<double> family_distribution(const std::vector<double>& probabilities,
                                        const SectorBasis& basis, int volume,
                                        PartitionMode mode) {
    const auto family = partition_family(basis.sites(), volume, mode);
    std::vector<double> averaged(static_cast<std::size_t>(basis.particles()) + 1, 0.0);
    for (const auto& subset : family) {
        const auto dist = number_distribution(probabilities, basis, subset);
        for (std::size_t n = 0; n < averaged.size(); ++n) {
            averaged[n] += dist.probabilities[n] / static_cast<double>(family.size());
        }
    }
    return averaged;
}

std::vector<double> family_distribution_multi(const EnsembleState& ens,
                                              const MultiSectorDecomposition& multi,
                                              const MultiSectorBasis& basis, int volume,
                                              PartitionMode mode) {
    const auto family = partition_family(basis.sites(), volume, mode);
    std::vector<double> averaged(static_cast<std::size_t>(basis.n_max()) + 1, 0.0);
    for (const auto& subset : family) {
        const auto dist = number_distribution(ens, multi, basis, subset);
        for (std::size_t n = 0; n < averaged.size(); ++n) {
            averaged[n] += dist.probabilities[n] / static_cast<double>(family.size());
        }
    }
    return averaged;
}

}  // namespace

RunResult run_spectrum(const RunContext& ctx, const std::optional<std::string>& dump_matrix) {
    Workspace ws(ctx);
    const auto& decomp = ws.decomposition();

    auto csv = ws.csv("eigenvalues.csv", {"index", "energy"});
    for (Eigen::Index n = 0; n < decomp.dim(); ++n) {
        csv.field(static_cast<int>(n)).field(decomp.eigenvalues[n]);
        csv.end_row();
    }

    if (dump_matrix) {
        const std::filesystem::path path = ws.dir() / *dump_matrix;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw IoError("cannot write " + path.string());
        ws.hamiltonian().dump(out);
        ws.note_output(*dump_matrix);
    }
    return ws.finish();
}

RunResult run_quench(const RunContext& ctx) {
    Workspace ws(ctx);
    const auto& config = ws.config();
    const auto& basis = ws.basis();
    const auto times = config.dimensionless_times();
    const auto states = trajectory(ws.decomposition(), ws.unit_filling_state(), times);

    PartitionMap full_map(basis, [&] {
        std::vector<int> all(static_cast<std::size_t>(config.sites));
        for (int s = 0; s < config.sites; ++s) all[static_cast<std::size_t>(s)] = s;
        return all;
    }());

    auto density_csv = ws.csv("quench_density.csv", {"time_tJ", "time_ms", "site", "density"});
    auto global_csv = ws.csv("quench_global.csv", {"time_tJ", "time_ms", "energy",
                                                   "interaction_energy", "global_renyi2",
                                                   "norm"});
    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& psi = states[k];
        const auto density = site_density(psi, basis);
        for (int s = 0; s < config.sites; ++s) {
            density_csv.field(times[k]).field(ws.ms_of(times[k])).field(s).field(density[s]);
            density_csv.end_row();
        }
        const double energy = psi.amplitudes.dot(ws.hamiltonian().matvec(psi.amplitudes)).real();
        global_csv.field(times[k])
            .field(ws.ms_of(times[k]))
            .field(energy)
            .field(interaction_energy(psi, basis, config.interaction()))
            .field(renyi2(reduce(psi.amplitudes, full_map)))
            .field(psi.norm());
        global_csv.end_row();
    }
    return ws.finish();
}

RunResult run_entropy(const RunContext& ctx) {
    Workspace ws(ctx);
    const auto& config = ws.config();
    const auto& basis = ws.basis();
    const auto times = config.dimensionless_times();
    const auto states = trajectory(ws.decomposition(), ws.unit_filling_state(), times);

    // entropy per (time, volume), volumes averaged over the partition family
    std::vector<std::vector<PartitionStats>> table(states.size());
    parallel_for(states.size(), config.threads, [&](std::size_t k) {
        table[k].reserve(config.volumes.size());
        for (int volume : config.volumes) {
            table[k].push_back(partition_average(states[k].amplitudes, basis, volume,
                                                 config.partition_mode));
        }
    });

    auto csv = ws.csv("entropy.csv", {"time_tJ", "time_ms", "volume", "renyi2_mean",
                                      "renyi2_spread", "partitions"});
    for (std::size_t k = 0; k < states.size(); ++k) {
        for (std::size_t v = 0; v < config.volumes.size(); ++v) {
            const auto& stats = table[k][v];
            const double offset = config.entropy_offset_per_site * config.volumes[v];
            csv.field(times[k])
                .field(ws.ms_of(times[k]))
                .field(config.volumes[v])
                .field(stats.mean - offset)
                .field(stats.spread)
                .field(stats.count);
            csv.end_row();
        }
    }

    auto fits = ws.csv("entropy_fits.csv", {"volume", "slope", "break_time_tJ", "plateau"});
    for (std::size_t v = 0; v < config.volumes.size(); ++v) {
        std::vector<double> series(states.size());
        for (std::size_t k = 0; k < states.size(); ++k) {
            series[k] = table[k][v].mean - config.entropy_offset_per_site * config.volumes[v];
        }
        const auto fit = piecewise_linear_fit(times, series);
        fits.field(config.volumes[v]).field(fit.slope).field(fit.break_time).field(fit.plateau);
        fits.end_row();
    }
    return ws.finish();
}

RunResult run_ensembles(const RunContext& ctx) {
    Workspace ws(ctx);
    const auto& config = ws.config();
    const auto& decomp = ws.decomposition();
    MultiSectorBasis multi_basis(config.sites, config.particles);
    const auto multi = diagonalize_sectors(multi_basis, 1.0, config.interaction());
    const auto set = build_ensembles(ws, multi);

    auto summary = ws.csv("ensembles_summary.csv",
                          {"kind", "temperature", "chemical_potential", "energy_window",
                           "energy", "number", "participation_ratio", "global_purity"});
    const auto sector_energy = [&](const EnsembleState& ens) {
        double energy = 0.0;
        for (Eigen::Index n = 0; n < decomp.dim(); ++n) {
            energy += ens.weights[static_cast<std::size_t>(n)] * decomp.eigenvalues[n];
        }
        return energy;
    };
    const auto emit = [&](const EnsembleState& ens, double energy, double number) {
        summary.field(std::string(to_string(ens.kind)))
            .field(ens.temperature)
            .field(ens.chemical_potential)
            .field(ens.energy_window)
            .field(energy)
            .field(number)
            .field(participation_ratio(ens))
            .field(ensemble_global_purity(ens));
        summary.end_row();
    };
    const double n_particles = config.particles;
    emit(set.canonical_ens, sector_energy(set.canonical_ens), n_particles);
    emit(set.microcanonical_ens, sector_energy(set.microcanonical_ens), n_particles);
    emit(set.gc_ens, grand_canonical_energy(multi, set.gc_ens),
         grand_canonical_number(multi, set.gc_ens));
    emit(set.diagonal_ens, sector_energy(set.diagonal_ens), n_particles);
    emit(set.single_ens, sector_energy(set.single_ens), n_particles);

    auto weights = ws.csv("ensemble_weights.csv", {"kind", "index", "sector_n", "energy",
                                                   "weight"});
    const auto emit_sector_weights = [&](const EnsembleState& ens) {
        for (Eigen::Index n = 0; n < decomp.dim(); ++n) {
            weights.field(std::string(to_string(ens.kind)))
                .field(static_cast<int>(n))
                .field(config.particles)
                .field(decomp.eigenvalues[n])
                .field(ens.weights[static_cast<std::size_t>(n)]);
            weights.end_row();
        }
    };
    emit_sector_weights(set.canonical_ens);
    emit_sector_weights(set.microcanonical_ens);
    emit_sector_weights(set.diagonal_ens);
    emit_sector_weights(set.single_ens);
    {
        std::size_t k = 0;
        for (int n = 0; n <= multi.n_max(); ++n) {
            const auto& sector = multi.sectors[static_cast<std::size_t>(n)];
            for (Eigen::Index i = 0; i < sector.dim(); ++i, ++k) {
                weights.field(std::string(to_string(EnsembleKind::grand_canonical)))
                    .field(static_cast<int>(k))
                    .field(n)
                    .field(sector.eigenvalues[i])
                    .field(set.gc_ens.weights[k]);
                weights.end_row();
            }
        }
    }
    return ws.finish();
}

RunResult run_observables(const RunContext& ctx) {
    Workspace ws(ctx);
    const auto& config = ws.config();
    const auto& basis = ws.basis();
    const auto& decomp = ws.decomposition();
    const auto times = config.dimensionless_times();
    const auto states = trajectory(decomp, ws.unit_filling_state(), times);

    const auto psi0 = ws.unit_filling_state();
    const double e_target = psi0.amplitudes.dot(ws.hamiltonian().matvec(psi0.amplitudes)).real();
    const auto can = canonical(decomp, match_canonical_temperature(decomp, e_target));
    const double canonical_interaction =
        interaction_energy(can, decomp, basis, config.interaction());

    std::vector<PartitionMap> site_maps;
    std::vector<BlockDensityMatrix> thermal_rdms;
    for (int s = 0; s < config.sites; ++s) {
        site_maps.emplace_back(basis, std::vector<int>{s});
        thermal_rdms.push_back(ensemble_rdm(can, decomp, site_maps.back()));
    }

    auto metrics = ws.csv("observables_metrics.csv",
                          {"time_tJ", "time_ms", "site", "trace_distance", "fidelity"});
    auto interaction = ws.csv("observables_interaction.csv",
                              {"time_tJ", "time_ms", "interaction_energy",
                               "canonical_interaction_energy"});
    auto density_csv =
        ws.csv("observables_density.csv", {"time_tJ", "time_ms", "site", "density"});

    for (std::size_t k = 0; k < states.size(); ++k) {
        const auto& psi = states[k];
        for (int s = 0; s < config.sites; ++s) {
            const auto rho = reduce(psi.amplitudes, site_maps[static_cast<std::size_t>(s)]);
            metrics.field(times[k])
                .field(ws.ms_of(times[k]))
                .field(s)
                .field(trace_distance(rho, thermal_rdms[static_cast<std::size_t>(s)]))
                .field(fidelity(rho, thermal_rdms[static_cast<std::size_t>(s)]));
            metrics.end_row();
        }
        interaction.field(times[k])
            .field(ws.ms_of(times[k]))
            .field(interaction_energy(psi, basis, config.interaction()))
            .field(canonical_interaction);
        interaction.end_row();
        const auto density = site_density(psi, basis);
        for (int s = 0; s < config.sites; ++s) {
            density_csv.field(times[k]).field(ws.ms_of(times[k])).field(s).field(density[s]);
            density_csv.end_row();
        }
    }
    return ws.finish();
}

RunResult run_interfere(const RunContext& ctx) {
    Workspace ws(ctx);
    const auto& config = ws.config();
    const auto& basis = ws.basis();
    const auto& decomp = ws.decomposition();
    const auto psi0 = ws.unit_filling_state();

    auto estimates = ws.csv(
        "interfere_estimates.csv",
        {"time_tJ", "time_ms", "subsystem", "shots", "exact_parity", "purity_estimate",
         "purity_std_error", "entropy", "entropy_lower", "entropy_upper", "upper_unbounded"});

    for (std::size_t k = 0; k < config.interference.times.size(); ++k) {
        const double t = config.interference.times[k];
        const auto psi = evolve(decomp, psi0, t);
        auto two = embed_product(psi, basis);
        apply_beamsplitter(two);

        auto shots = sample_shots(two, config.interference.shots, ws.seed_for(2 * k));
        if (config.interference.parity_flip_probability > 0.0) {
            shots = apply_parity_noise(shots, config.interference.parity_flip_probability,
                                       ws.seed_for(2 * k + 1));
        }

        // shot export: "shot_id, n_1..n_{2L}"
        std::vector<std::string> header{"shot_id"};
        for (int m = 1; m <= 2 * config.sites; ++m) header.push_back("n_" + std::to_string(m));
        char name[64];
        std::snprintf(name, sizeof(name), "shots_%03zu.csv", k);
        auto shot_csv = ws.csv(name, header);
        for (std::size_t id = 0; id < shots.size(); ++id) {
            shot_csv.field(static_cast<long long>(id));
            for (int occupation : shots[id].occupations) shot_csv.field(occupation);
            shot_csv.end_row();
        }

        for (const auto& subsystem : config.interference.subsystems) {
            const auto entropy = entropy_from_shots(
                shots, subsystem, config.sites, config.interference.bootstrap_resamples,
                ws.seed_for(1000 + k), config.interference.purity_floor);
            estimates.field(t)
                .field(ws.ms_of(t))
                .field(join_sites(subsystem))
                .field(static_cast<int>(shots.size()))
                .field(exact_parity(two, subsystem))
                .field(entropy.purity.value)
                .field(entropy.purity.std_error)
                .field(entropy.value)
                .field(entropy.lower)
                .field(entropy.upper_unbounded ? std::numeric_limits<double>::infinity()
                                               : entropy.upper)
                .field(entropy.upper_unbounded ? 1 : 0);
            estimates.end_row();
        }
    }
    return ws.finish();
}

namespace {

RunResult reproduce_fig2b(RunContext ctx) {
    ctx.config.j_over_u = 0.64;
    Workspace ws(ctx);
    const auto& config = ws.config();
    const auto& basis = ws.basis();
    const auto& decomp = ws.decomposition();
    const auto psi0 = ws.unit_filling_state();
    const auto can = canonical(decomp, match_canonical_temperature(decomp, 0.0));
    const auto window = saturated_window_times(21);
    const auto states = trajectory(decomp, psi0, window);

    auto stats = ws.csv("fig2b_number_statistics.csv", {"source", "site", "n", "probability"});
    for (int site = 0; site < config.sites; ++site) {
        const std::vector<int> subsystem{site};
        const auto initial = number_distribution(psi0, basis, subsystem);
        std::vector<double> saturated(static_cast<std::size_t>(config.particles) + 1, 0.0);
        for (const auto& psi : states) {
            const auto dist = number_distribution(psi, basis, subsystem);
            for (std::size_t n = 0; n < saturated.size(); ++n) {
                saturated[n] += dist.probabilities[n] / static_cast<double>(states.size());
            }
        }
        const auto thermal = number_distribution(can, decomp, basis, subsystem);
        for (int n = 0; n <= config.particles; ++n) {
            stats.field(std::string("initial")).field(site).field(n)
                .field(initial.probabilities[static_cast<std::size_t>(n)]);
            stats.end_row();
            stats.field(std::string("saturated")).field(site).field(n)
                .field(saturated[static_cast<std::size_t>(n)]);
            stats.end_row();
            stats.field(std::string("canonical")).field(site).field(n)
                .field(thermal.probabilities[static_cast<std::size_t>(n)]);
            stats.end_row();
        }
    }

    auto purity_csv = ws.csv("fig2b_purity.csv", {"source", "time_tJ", "global_purity"});
    PartitionMap full_map(basis, [&] {
        std::vector<int> all(static_cast<std::size_t>(config.sites));
        for (int s = 0; s < config.sites; ++s) all[static_cast<std::size_t>(s)] = s;
        return all;
    }());
    for (std::size_t k = 0; k < states.size(); ++k) {
        purity_csv.field(std::string("quench"))
            .field(window[k])
            .field(purity(reduce(states[k].amplitudes, full_map)));
        purity_csv.end_row();
    }
    purity_csv.field(std::string("canonical"))
        .field(std::numeric_limits<double>::quiet_NaN())
        .field(ensemble_global_purity(can));
    purity_csv.end_row();
    return ws.finish();
}

RunResult reproduce_fig3(RunContext ctx) {
    ctx.config.j_over_u = 0.64;
    ctx.config.volumes = {1, 2, 3, ctx.config.sites};
    ctx.command = "reproduce fig3";
    // rename outputs by running the entropy pipeline into the same workspace
    Workspace ws(ctx);
    const auto& config = ws.config();
    const auto& basis = ws.basis();
    const auto times = config.dimensionless_times();
    const auto states = trajectory(ws.decomposition(), ws.unit_filling_state(), times);

    std::vector<std::vector<PartitionStats>> table(states.size());
    parallel_for(states.size(), config.threads, [&](std::size_t k) {
        for (int volume : config.volumes) {
            table[k].push_back(partition_average(states[k].amplitudes, basis, volume,
                                                 config.partition_mode));
        }
    });

    auto csv = ws.csv("fig3_entropy.csv", {"time_tJ", "time_ms", "volume", "renyi2_mean",
                                           "renyi2_spread"});
    for (std::size_t k = 0; k < states.size(); ++k) {
        for (std::size_t v = 0; v < config.volumes.size(); ++v) {
            const double offset = config.entropy_offset_per_site * config.volumes[v];
            csv.field(times[k])
                .field(ws.ms_of(times[k]))
                .field(config.volumes[v])
                .field(table[k][v].mean - offset)
                .field(table[k][v].spread);
            csv.end_row();
        }
    }

    auto fits = ws.csv("fig3_slopes.csv", {"volume", "slope", "break_time_tJ", "plateau"});
    for (std::size_t v = 0; v < config.volumes.size(); ++v) {
        if (config.volumes[v] >= config.sites) continue;  // the flat full-system curve
        std::vector<double> series(states.size());
        for (std::size_t k = 0; k < states.size(); ++k) series[k] = table[k][v].mean;
        const auto fit = piecewise_linear_fit(times, series);
        fits.field(config.volumes[v]).field(fit.slope).field(fit.break_time).field(fit.plateau);
        fits.end_row();
    }
    return ws.finish();
}

RunResult reproduce_fig4(RunContext ctx) {
    ctx.config.j_over_u = 0.64;
    Workspace ws(ctx);
    const auto& config = ws.config();
    const auto& basis = ws.basis();
    const auto& decomp = ws.decomposition();
    const auto psi0 = ws.unit_filling_state();
    const auto window = saturated_window_times(21);
    const auto states = trajectory(decomp, psi0, window);
    const auto gs = ground_state(decomp);
    const auto can = canonical(decomp, match_canonical_temperature(decomp, 0.0));

    auto entropy_csv = ws.csv("fig4_entropy_volume.csv",
                              {"volume", "quench_mean", "quench_spread", "ground_mean",
                               "ground_spread", "thermal_mean", "thermal_spread"});
    for (int volume = 1; volume <= config.sites; ++volume) {
        double quench_mean = 0.0, quench_spread = 0.0;
        for (const auto& psi : states) {
            const auto stats =
                partition_average(psi.amplitudes, basis, volume, config.partition_mode);
            quench_mean += stats.mean / static_cast<double>(states.size());
            quench_spread += stats.spread / static_cast<double>(states.size());
        }
        const auto ground =
            partition_average(gs.state.amplitudes, basis, volume, config.partition_mode);
        const auto thermal = thermal_renyi(can, decomp, basis, volume, config.partition_mode);
        const double offset = config.entropy_offset_per_site * volume;
        entropy_csv.field(volume)
            .field(quench_mean - offset)
            .field(quench_spread)
            .field(ground.mean - offset)
            .field(ground.spread)
            .field(thermal.mean - offset)
            .field(thermal.spread);
        entropy_csv.end_row();
    }

    // mutual information of complementary halves of a contiguous window
    const auto window_mi = [&](const Eigen::VectorXcd& amplitudes, int volume_ab) {
        double acc = 0.0;
        int count = 0;
        for (int start = 0; start + volume_ab <= config.sites; ++start) {
            for (int split = 1; split < volume_ab; ++split) {
                std::vector<int> a, b;
                for (int i = 0; i < split; ++i) a.push_back(start + i);
                for (int i = split; i < volume_ab; ++i) b.push_back(start + i);
                acc += mutual_information(amplitudes, basis, a, b);
                ++count;
            }
        }
        return acc / count;
    };
    auto mi_csv = ws.csv("fig4_mutual_information.csv",
                         {"volume_ab", "quench_mean", "ground_mean"});
    for (int volume_ab = 2; volume_ab <= config.sites; ++volume_ab) {
        double quench_mi = 0.0;
        for (const auto& psi : states) {
            quench_mi += window_mi(psi.amplitudes, volume_ab) / static_cast<double>(states.size());
        }
        mi_csv.field(volume_ab).field(quench_mi).field(window_mi(gs.state.amplitudes, volume_ab));
        mi_csv.end_row();
    }
    return ws.finish();
}

RunResult reproduce_fig5(RunContext ctx) {
    Workspace ws(ctx);
    const auto& config = ws.config();
    const auto window = saturated_window_times(21);

    // density panel: J/U = 2.6
    {
        SectorBasis basis(config.sites, config.particles);
        const auto decomp = eigh(build_hamiltonian(
            {config.sites, config.particles, 1.0, 1.0 / 2.6}, basis));
        const auto psi0 = fock_state(
            basis, std::vector<int>(static_cast<std::size_t>(config.sites), 1));
        const auto states = trajectory(decomp, psi0, window);
        Eigen::VectorXd quench_density = Eigen::VectorXd::Zero(config.sites);
        for (const auto& psi : states) {
            quench_density += site_density(psi, basis) / static_cast<double>(states.size());
        }
        const auto ground_density = site_density(ground_state(decomp).state, basis);

        auto csv = ws.csv("fig5_density.csv",
                          {"j_over_u", "site", "quench_density", "ground_density"});
        for (int s = 0; s < config.sites; ++s) {
            csv.field(2.6).field(s).field(quench_density[s]).field(ground_density[s]);
            csv.end_row();
        }
    }

    // metric panel: J/U = 0.64, every site against the matched canonical RDM
    {
        SectorBasis basis(config.sites, config.particles);
        const auto decomp =
            eigh(build_hamiltonian({config.sites, config.particles, 1.0, 1.0 / 0.64}, basis));
        const auto psi0 = fock_state(
            basis, std::vector<int>(static_cast<std::size_t>(config.sites), 1));
        const auto can = canonical(decomp, match_canonical_temperature(decomp, 0.0));
        const auto times = config.dimensionless_times();
        const auto states = trajectory(decomp, psi0, times);

        auto csv = ws.csv("fig5_metrics.csv",
                          {"time_tJ", "time_ms", "site", "trace_distance", "fidelity"});
        for (int site = 0; site < config.sites; ++site) {
            PartitionMap pmap(basis, {site});
            const auto thermal = ensemble_rdm(can, decomp, pmap);
            for (std::size_t k = 0; k < states.size(); ++k) {
                const auto rho = reduce(states[k].amplitudes, pmap);
                csv.field(times[k])
                    .field(ws.ms_of(times[k]))
                    .field(site)
                    .field(trace_distance(rho, thermal))
                    .field(fidelity(rho, thermal));
                csv.end_row();
            }
        }
    }
    return ws.finish();
}

RunResult reproduce_fig6(RunContext ctx) {
    Workspace ws(ctx);
    const auto& config = ws.config();
    const auto window = saturated_window_times(21);

    auto stats_csv = ws.csv("fig6_number_statistics.csv",
                            {"j_over_u", "temperature", "volume", "n", "quench_mean",
                             "quench_std", "canonical", "microcanonical", "grand_canonical",
                             "diagonal", "single_eigenstate"});
    auto ens_csv = ws.csv("fig6_ensembles.csv",
                          {"j_over_u", "kind", "temperature", "chemical_potential",
                           "energy_window", "participation_ratio", "global_purity"});

    for (const double j_over_u : {0.64, 2.6}) {
        RunContext local = ctx;
        local.config.j_over_u = j_over_u;
        Workspace sub(local);  // reuses the same output directory
        const auto& basis = sub.basis();
        const auto& decomp = sub.decomposition();
        MultiSectorBasis multi_basis(config.sites, config.particles);
        const auto multi = diagonalize_sectors(multi_basis, 1.0, local.config.interaction());
        const auto set = build_ensembles(sub, multi);
        const auto states = trajectory(decomp, sub.unit_filling_state(), window);

        for (const auto& [kind, ens] :
             std::vector<std::pair<const char*, const EnsembleState*>>{
                 {"canonical", &set.canonical_ens},
                 {"microcanonical", &set.microcanonical_ens},
                 {"grand_canonical", &set.gc_ens},
                 {"diagonal", &set.diagonal_ens},
                 {"single_eigenstate", &set.single_ens}}) {
            ens_csv.field(j_over_u)
                .field(std::string(kind))
                .field(ens->temperature)
                .field(ens->chemical_potential)
                .field(ens->energy_window)
                .field(participation_ratio(*ens))
                .field(ensemble_global_purity(*ens));
            ens_csv.end_row();
        }

        for (const int volume : {1, 3}) {
            // quench: position-averaged P(n), temporal mean and std over the window
            std::vector<std::vector<double>> per_time;
            for (const auto& psi : states) {
                per_time.push_back(family_distribution(basis_probabilities(psi.amplitudes),
                                                       basis, volume, config.partition_mode));
            }
            const auto thermal = [&](const EnsembleState& ens) {
                return family_distribution(basis_probabilities(ens, decomp), basis, volume,
                                           config.partition_mode);
            };
            const auto canonical_dist = thermal(set.canonical_ens);
            const auto micro_dist = thermal(set.microcanonical_ens);
            const auto diagonal_dist = thermal(set.diagonal_ens);
            const auto single_dist = thermal(set.single_ens);
            const auto gc_dist = family_distribution_multi(set.gc_ens, multi, multi_basis,
                                                           volume, config.partition_mode);

            for (int n = 0; n <= config.particles; ++n) {
                double mean = 0.0, var = 0.0;
                for (const auto& dist : per_time) mean += dist[static_cast<std::size_t>(n)];
                mean /= static_cast<double>(per_time.size());
                for (const auto& dist : per_time) {
                    var += std::pow(dist[static_cast<std::size_t>(n)] - mean, 2);
                }
                var /= static_cast<double>(per_time.size());
                stats_csv.field(j_over_u)
                    .field(set.temperature)
                    .field(volume)
                    .field(n)
                    .field(mean)
                    .field(std::sqrt(var))
                    .field(canonical_dist[static_cast<std::size_t>(n)])
                    .field(micro_dist[static_cast<std::size_t>(n)])
                    .field(gc_dist[static_cast<std::size_t>(n)])
                    .field(diagonal_dist[static_cast<std::size_t>(n)])
                    .field(single_dist[static_cast<std::size_t>(n)]);
                stats_csv.end_row();
            }
        }

        if (j_over_u == 0.64) {
            const auto times = config.dimensionless_times();
            const auto trace_states = trajectory(decomp, sub.unit_filling_state(), times);
            const double prediction = interaction_energy(set.canonical_ens, decomp, basis,
                                                         local.config.interaction());
            auto interaction_csv = ws.csv("fig6_interaction.csv",
                                          {"time_tJ", "time_ms", "interaction_energy",
                                           "canonical_prediction"});
            for (std::size_t k = 0; k < trace_states.size(); ++k) {
                interaction_csv.field(times[k])
                    .field(ws.ms_of(times[k]))
                    .field(interaction_energy(trace_states[k], basis,
                                              local.config.interaction()))
                    .field(prediction);
                interaction_csv.end_row();
            }
        }
    }
    return ws.finish();
}

}  // namespace

RunResult run_reproduce(const RunContext& ctx, const std::string& figure) {
    if (figure == "fig2b") return reproduce_fig2b(ctx);
    if (figure == "fig3") return reproduce_fig3(ctx);
    if (figure == "fig4") return reproduce_fig4(ctx);
    if (figure == "fig5") return reproduce_fig5(ctx);
    if (figure == "fig6") return reproduce_fig6(ctx);
    throw ConfigError("unknown figure \"" + figure +
                      "\"; expected one of fig2b, fig3, fig4, fig5, fig6");
}

}  // namespace qlab
