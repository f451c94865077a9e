#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qlab/config.hpp"
#include "qlab/interference.hpp"
#include "qlab/observables.hpp"

namespace py = pybind11;
using namespace qlab;

namespace {

std::map<int, Eigen::MatrixXcd> block_dict(const BlockDensityMatrix& rho) { return rho.blocks; }

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Exact Bose-Hubbard quench-thermalization laboratory";
    m.attr("__version__") = kVersion;

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);
    py::register_exception<IoError>(m, "IoError", PyExc_OSError);

    // ---- fock basis ----
    m.def("dimension", &dimension, py::arg("sites"), py::arg("particles"));
    m.def("dimension_capped", &dimension_capped, py::arg("sites"), py::arg("particles"),
          py::arg("max_per_site"));

    py::class_<SectorBasis>(m, "SectorBasis")
        .def(py::init<int, int, std::optional<int>>(), py::arg("sites"), py::arg("particles"),
             py::arg("max_per_site") = std::nullopt)
        .def_property_readonly("sites", &SectorBasis::sites)
        .def_property_readonly("particles", &SectorBasis::particles)
        .def_property_readonly("dim", &SectorBasis::dim)
        .def("state", &SectorBasis::state_vector, py::arg("index"))
        .def("rank",
             static_cast<std::size_t (SectorBasis::*)(const std::vector<int>&) const>(
                 &SectorBasis::rank),
             py::arg("occupations"))
        .def("__len__", &SectorBasis::dim)
        .def("__repr__", [](const SectorBasis& b) {
            return "SectorBasis(sites=" + std::to_string(b.sites()) +
                   ", particles=" + std::to_string(b.particles()) +
                   ", dim=" + std::to_string(b.dim()) + ")";
        });

    py::class_<MultiSectorBasis>(m, "MultiSectorBasis")
        .def(py::init<int, int>(), py::arg("sites"), py::arg("n_max"))
        .def_property_readonly("sites", &MultiSectorBasis::sites)
        .def_property_readonly("n_max", &MultiSectorBasis::n_max)
        .def_property_readonly("total_dim", &MultiSectorBasis::total_dim)
        .def("sector", &MultiSectorBasis::sector, py::arg("n"),
             py::return_value_policy::reference_internal)
        .def("offset", &MultiSectorBasis::offset, py::arg("n"));

    py::class_<PartitionMap>(m, "PartitionMap")
        .def(py::init<const SectorBasis&, const std::vector<int>&>(), py::arg("basis"),
             py::arg("subsystem_sites"))
        .def_property_readonly("subsystem_sites", &PartitionMap::subsystem_sites)
        .def_property_readonly("complement_sites", &PartitionMap::complement_sites)
        .def_property_readonly("feasible_na", &PartitionMap::feasible_na);

    // ---- hamiltonian ----
    py::class_<HubbardParams>(m, "HubbardParams")
        .def(py::init([](int sites, int particles, double tunneling, double interaction) {
                 HubbardParams params{sites, particles, tunneling, interaction};
                 params.validate();
                 return params;
             }),
             py::arg("sites"), py::arg("particles"), py::arg("tunneling") = 1.0,
             py::arg("interaction") = 0.0)
        .def_readonly("sites", &HubbardParams::sites)
        .def_readonly("particles", &HubbardParams::particles)
        .def_readonly("tunneling", &HubbardParams::tunneling)
        .def_readonly("interaction", &HubbardParams::interaction);

    py::class_<SparseSymMatrix>(m, "SparseSymMatrix")
        .def_property_readonly("dim", &SparseSymMatrix::dim)
        .def("to_dense", &SparseSymMatrix::to_dense)
        .def("matvec",
             static_cast<Eigen::VectorXcd (SparseSymMatrix::*)(const Eigen::VectorXcd&) const>(
                 &SparseSymMatrix::matvec),
             py::arg("x"));

    m.def("build_hamiltonian", &build_hamiltonian, py::arg("params"), py::arg("basis"));
    m.def("build_number_operator", &build_number_operator, py::arg("basis"), py::arg("site"));
    m.def("build_interaction", &build_interaction, py::arg("basis"), py::arg("interaction"));

    // ---- spectral ----
    py::class_<SpectralDecomposition>(m, "SpectralDecomposition")
        .def_readonly("eigenvalues", &SpectralDecomposition::eigenvalues)
        .def_readonly("eigenvectors", &SpectralDecomposition::eigenvectors)
        .def_property_readonly("dim", &SpectralDecomposition::dim);

    m.def(
        "eigh",
        [](const SparseSymMatrix& h, std::size_t dense_cap) {
            EighOptions options;
            options.dense_cap = dense_cap;
            return eigh(h, options);
        },
        py::arg("h"), py::arg("dense_cap") = EighOptions{}.dense_cap);

    py::class_<QuenchState>(m, "QuenchState")
        .def(py::init([](const Eigen::VectorXcd& amplitudes) {
                 QuenchState psi;
                 psi.amplitudes = amplitudes;
                 return psi;
             }),
             py::arg("amplitudes"))
        .def_readonly("amplitudes", &QuenchState::amplitudes)
        .def_readonly("time", &QuenchState::time)
        .def_readonly("overlaps", &QuenchState::overlaps)
        .def_property_readonly("norm", &QuenchState::norm);

    py::class_<GroundStateResult>(m, "GroundStateResult")
        .def_readonly("state", &GroundStateResult::state)
        .def_readonly("energy", &GroundStateResult::energy)
        .def_readonly("gap", &GroundStateResult::gap)
        .def_readonly("degenerate", &GroundStateResult::degenerate);

    m.def("fock_state", &fock_state, py::arg("basis"), py::arg("occupations"));
    m.def("ground_state", &ground_state, py::arg("decomposition"));
    m.def("evolve", &evolve, py::arg("decomposition"), py::arg("psi0"), py::arg("t"));
    m.def(
        "trajectory",
        [](const SpectralDecomposition& decomp, const QuenchState& psi0,
           const std::vector<double>& times) { return trajectory(decomp, psi0, times); },
        py::arg("decomposition"), py::arg("psi0"), py::arg("times"));

    // ---- entanglement ----
    py::class_<BlockDensityMatrix>(m, "BlockDensityMatrix")
        .def_readonly("sites", &BlockDensityMatrix::sites)
        .def_property_readonly("blocks", &block_dict)
        .def("trace", &BlockDensityMatrix::trace)
        .def("block_weight", &BlockDensityMatrix::block_weight, py::arg("n"))
        .def("validate", &BlockDensityMatrix::validate, py::arg("tol") = 1e-12);

    m.def("reduce",
          static_cast<BlockDensityMatrix (*)(const Eigen::VectorXcd&, const PartitionMap&)>(
              &reduce),
          py::arg("amplitudes"), py::arg("partition_map"));
    m.def("purity", &purity, py::arg("rho"));
    m.def("renyi2", &renyi2, py::arg("rho"));
    m.def("von_neumann", &von_neumann, py::arg("rho"));
    m.def("mutual_information", &mutual_information, py::arg("amplitudes"), py::arg("basis"),
          py::arg("sites_a"), py::arg("sites_b"));

    py::enum_<PartitionMode>(m, "PartitionMode")
        .value("contiguous", PartitionMode::contiguous)
        .value("all_subsets", PartitionMode::all_subsets);

    py::class_<PartitionStats>(m, "PartitionStats")
        .def_readonly("mean", &PartitionStats::mean)
        .def_readonly("spread", &PartitionStats::spread)
        .def_readonly("count", &PartitionStats::count);

    m.def("partition_family", &partition_family, py::arg("sites"), py::arg("volume"),
          py::arg("mode") = PartitionMode::contiguous);
    m.def("partition_average", &partition_average, py::arg("amplitudes"), py::arg("basis"),
          py::arg("volume"), py::arg("mode") = PartitionMode::contiguous);

    py::class_<PiecewiseFit>(m, "PiecewiseFit")
        .def_readonly("slope", &PiecewiseFit::slope)
        .def_readonly("break_time", &PiecewiseFit::break_time)
        .def_readonly("plateau", &PiecewiseFit::plateau);

    m.def(
        "piecewise_linear_fit",
        [](const std::vector<double>& times, const std::vector<double>& values) {
            return piecewise_linear_fit(times, values);
        },
        py::arg("times"), py::arg("values"));

    // ---- ensembles ----
    py::enum_<EnsembleKind>(m, "EnsembleKind")
        .value("canonical", EnsembleKind::canonical)
        .value("microcanonical", EnsembleKind::microcanonical)
        .value("grand_canonical", EnsembleKind::grand_canonical)
        .value("diagonal", EnsembleKind::diagonal)
        .value("single_eigenstate", EnsembleKind::single_eigenstate);

    py::class_<EnsembleState>(m, "EnsembleState")
        .def_readonly("kind", &EnsembleState::kind)
        .def_readonly("weights", &EnsembleState::weights)
        .def_readonly("temperature", &EnsembleState::temperature)
        .def_readonly("chemical_potential", &EnsembleState::chemical_potential)
        .def_readonly("energy_window", &EnsembleState::energy_window)
        .def("validate", &EnsembleState::validate, py::arg("tol") = 1e-12);

    m.def("canonical", &canonical, py::arg("decomposition"), py::arg("temperature"));
    m.def("canonical_energy", &canonical_energy, py::arg("decomposition"),
          py::arg("temperature"));
    m.def("match_canonical_temperature", &match_canonical_temperature,
          py::arg("decomposition"), py::arg("e_target"), py::arg("rel_tol") = 1e-8);
    m.def("microcanonical", &microcanonical, py::arg("decomposition"), py::arg("e_target"),
          py::arg("window"));
    m.def("diagonal_ensemble", &diagonal_ensemble, py::arg("overlaps"));
    m.def("single_eigenstate", &single_eigenstate, py::arg("decomposition"),
          py::arg("e_target"));
    m.def("participation_ratio", &participation_ratio, py::arg("ensemble"));
    m.def("ensemble_global_purity", &ensemble_global_purity, py::arg("ensemble"));

    py::class_<MultiSectorDecomposition>(m, "MultiSectorDecomposition")
        .def_property_readonly("n_max", &MultiSectorDecomposition::n_max)
        .def_property_readonly("total_dim", &MultiSectorDecomposition::total_dim)
        .def("sector",
             [](const MultiSectorDecomposition& multi, int n) -> const SpectralDecomposition& {
                 return multi.sectors.at(static_cast<std::size_t>(n));
             },
             py::arg("n"), py::return_value_policy::reference_internal);

    m.def(
        "diagonalize_sectors",
        [](const MultiSectorBasis& basis, double tunneling, double interaction) {
            return diagonalize_sectors(basis, tunneling, interaction);
        },
        py::arg("basis"), py::arg("tunneling"), py::arg("interaction"));
    m.def("grand_canonical", &grand_canonical, py::arg("multi"), py::arg("temperature"),
          py::arg("chemical_potential"));
    m.def("grand_canonical_energy", &grand_canonical_energy, py::arg("multi"),
          py::arg("ensemble"));
    m.def("grand_canonical_number", &grand_canonical_number, py::arg("multi"),
          py::arg("ensemble"));

    py::class_<GrandCanonicalFit>(m, "GrandCanonicalFit")
        .def_readonly("temperature", &GrandCanonicalFit::temperature)
        .def_readonly("chemical_potential", &GrandCanonicalFit::chemical_potential)
        .def_readonly("energy_residual", &GrandCanonicalFit::energy_residual)
        .def_readonly("number_residual", &GrandCanonicalFit::number_residual);

    m.def("match_grand_canonical", &match_grand_canonical, py::arg("multi"),
          py::arg("e_target"), py::arg("n_target"), py::arg("rel_tol") = 1e-6);
    m.def("ensemble_rdm",
          static_cast<BlockDensityMatrix (*)(const EnsembleState&, const SpectralDecomposition&,
                                             const PartitionMap&)>(&ensemble_rdm),
          py::arg("ensemble"), py::arg("decomposition"), py::arg("partition_map"));
    m.def("thermal_renyi", &thermal_renyi, py::arg("ensemble"), py::arg("decomposition"),
          py::arg("basis"), py::arg("volume"), py::arg("mode") = PartitionMode::contiguous);

    // ---- observables ----
    m.def("saturated_window_times", &saturated_window_times, py::arg("count") = 21);
    m.def(
        "site_density",
        [](const QuenchState& psi, const SectorBasis& basis) {
            return site_density(psi, basis);
        },
        py::arg("psi"), py::arg("basis"));
    m.def(
        "ensemble_site_density",
        [](const EnsembleState& ens, const SpectralDecomposition& decomp,
           const SectorBasis& basis) { return site_density(ens, decomp, basis); },
        py::arg("ensemble"), py::arg("decomposition"), py::arg("basis"));

    py::class_<NumberDistribution>(m, "NumberDistribution")
        .def_readonly("sites", &NumberDistribution::sites)
        .def_readonly("probabilities", &NumberDistribution::probabilities);

    m.def(
        "number_distribution",
        [](const QuenchState& psi, const SectorBasis& basis, const std::vector<int>& subsystem) {
            return number_distribution(psi, basis, subsystem);
        },
        py::arg("psi"), py::arg("basis"), py::arg("subsystem"));
    m.def(
        "ensemble_number_distribution",
        [](const EnsembleState& ens, const SpectralDecomposition& decomp,
           const SectorBasis& basis, const std::vector<int>& subsystem) {
            return number_distribution(ens, decomp, basis, subsystem);
        },
        py::arg("ensemble"), py::arg("decomposition"), py::arg("basis"), py::arg("subsystem"));
    m.def(
        "interaction_energy",
        [](const QuenchState& psi, const SectorBasis& basis, double interaction) {
            return interaction_energy(psi, basis, interaction);
        },
        py::arg("psi"), py::arg("basis"), py::arg("interaction"));
    m.def(
        "ensemble_interaction_energy",
        [](const EnsembleState& ens, const SpectralDecomposition& decomp,
           const SectorBasis& basis, double interaction) {
            return interaction_energy(ens, decomp, basis, interaction);
        },
        py::arg("ensemble"), py::arg("decomposition"), py::arg("basis"), py::arg("interaction"));
    m.def("trace_distance", &trace_distance, py::arg("rho"), py::arg("sigma"));
    m.def("fidelity", &fidelity, py::arg("rho"), py::arg("sigma"));

    // ---- interference ----
    py::class_<TwoCopyState>(m, "TwoCopyState")
        .def_property_readonly("basis",
                               [](const TwoCopyState& s) -> const SectorBasis& {
                                   if (!s.basis) throw NumericalError("empty TwoCopyState");
                                   return *s.basis;
                               },
                               py::return_value_policy::reference_internal)
        .def_readonly("amplitudes", &TwoCopyState::amplitudes)
        .def_readonly("copy_sites", &TwoCopyState::copy_sites)
        .def_property_readonly("norm", &TwoCopyState::norm);

    m.def("embed_product",
          static_cast<TwoCopyState (*)(const QuenchState&, const SectorBasis&)>(&embed_product),
          py::arg("psi"), py::arg("basis"));
    m.def("bs_element", &bs_element, py::arg("n1"), py::arg("n2"), py::arg("m1"), py::arg("m2"));
    m.def("beamsplitter_block", &beamsplitter_block, py::arg("total"));
    m.def("apply_beamsplitter", &apply_beamsplitter, py::arg("state"));
    m.def("exact_parity", &exact_parity, py::arg("state"), py::arg("subsystem"));

    py::class_<ShotRecord>(m, "ShotRecord")
        .def_readonly("occupations", &ShotRecord::occupations);

    m.def("sample_shots", &sample_shots, py::arg("state"), py::arg("n_shots"), py::arg("seed"));
    m.def("shot_parity", &shot_parity, py::arg("shot"), py::arg("subsystem"),
          py::arg("copy_sites"), py::arg("copy") = 0);

    py::class_<PurityEstimate>(m, "PurityEstimate")
        .def_readonly("value", &PurityEstimate::value)
        .def_readonly("std_error", &PurityEstimate::std_error)
        .def_readonly("shots", &PurityEstimate::shots);

    m.def(
        "purity_estimator",
        [](const std::vector<ShotRecord>& shots, const std::vector<int>& subsystem,
           int copy_sites) { return purity_estimator(shots, subsystem, copy_sites); },
        py::arg("shots"), py::arg("subsystem"), py::arg("copy_sites"));

    py::class_<EntropyEstimate>(m, "EntropyEstimate")
        .def_readonly("value", &EntropyEstimate::value)
        .def_readonly("lower", &EntropyEstimate::lower)
        .def_readonly("upper", &EntropyEstimate::upper)
        .def_readonly("upper_unbounded", &EntropyEstimate::upper_unbounded)
        .def_readonly("purity", &EntropyEstimate::purity);

    m.def(
        "entropy_from_shots",
        [](const std::vector<ShotRecord>& shots, const std::vector<int>& subsystem,
           int copy_sites, int n_bootstrap, std::uint64_t seed, double purity_floor) {
            return entropy_from_shots(shots, subsystem, copy_sites, n_bootstrap, seed,
                                      purity_floor);
        },
        py::arg("shots"), py::arg("subsystem"), py::arg("copy_sites"),
        py::arg("n_bootstrap") = 1000, py::arg("seed") = 0, py::arg("purity_floor") = 1e-6);
    m.def(
        "apply_parity_noise",
        [](const std::vector<ShotRecord>& shots, double epsilon, std::uint64_t seed) {
            return apply_parity_noise(shots, epsilon, seed);
        },
        py::arg("shots"), py::arg("epsilon"), py::arg("seed"));

    // ---- runner utilities ----
    m.def("convert_time", &convert_time, py::arg("t_ms"), py::arg("j_hz"));
}
