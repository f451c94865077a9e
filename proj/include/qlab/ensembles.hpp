#pragma once

#include <limits>
#include <vector>

#include "qlab/entanglement.hpp"
#include "qlab/spectral.hpp"

namespace qlab {

enum class EnsembleKind { canonical, microcanonical, grand_canonical, diagonal, single_eigenstate };

const char* to_string(EnsembleKind kind);

/// Mixed state expressed as probability weights over energy eigenstates. For
/// the grand-canonical kind the weights run over all sectors n = 0..n_max,
/// concatenated in sector order; every other kind lives in one sector.
struct EnsembleState {
    EnsembleKind kind = EnsembleKind::canonical;
    std::vector<double> weights;
    double temperature = std::numeric_limits<double>::quiet_NaN();
    double chemical_potential = std::numeric_limits<double>::quiet_NaN();
    double energy_window = std::numeric_limits<double>::quiet_NaN();

    void validate(double tol = 1e-12) const;
};

/// Boltzmann weights w_n ~ exp(-E_n / T), max-shifted before exponentiating
/// so low temperatures cannot underflow to an all-zero distribution.
EnsembleState canonical(const SpectralDecomposition& decomp, double temperature);

/// <H>_T of the canonical ensemble.
double canonical_energy(const SpectralDecomposition& decomp, double temperature);

/// Solves <H>_T = e_target by bracketed bisection in log T. The target must
/// lie strictly between the ground energy and the infinite-T mean.
double match_canonical_temperature(const SpectralDecomposition& decomp, double e_target,
                                   double rel_tol = 1e-8);

/// Uniform mixture of the eigenstates inside [e_target - window, e_target + window].
EnsembleState microcanonical(const SpectralDecomposition& decomp, double e_target, double window);

/// w_n = |c_n|^2, the infinite-time average of the quench.
EnsembleState diagonal_ensemble(const Eigen::VectorXcd& overlaps);

/// Weight 1 on the eigenstate nearest to e_target (ties break to lower index).
EnsembleState single_eigenstate(const SpectralDecomposition& decomp, double e_target);

/// 1 / sum w^2: effective number of eigenstates populated.
double participation_ratio(const EnsembleState& ensemble);

/// One spectral decomposition per particle-number sector 0..n_max.
struct MultiSectorDecomposition {
    std::vector<SpectralDecomposition> sectors;

    int n_max() const { return static_cast<int>(sectors.size()) - 1; }
    std::size_t total_dim() const;
};

MultiSectorDecomposition diagonalize_sectors(const MultiSectorBasis& basis, double tunneling,
                                             double interaction, const EighOptions& options = {});

/// Truncated grand-canonical ensemble: w ~ exp(-(E - mu n) / T) over all sectors.
EnsembleState grand_canonical(const MultiSectorDecomposition& multi, double temperature,
                              double chemical_potential);
double grand_canonical_energy(const MultiSectorDecomposition& multi, const EnsembleState& ens);
double grand_canonical_number(const MultiSectorDecomposition& multi, const EnsembleState& ens);

struct GrandCanonicalFit {
    double temperature = 0.0;
    double chemical_potential = 0.0;
    double energy_residual = 0.0;
    double number_residual = 0.0;
};

/// Simultaneous solve of <H> = e_target and <N> = n_target by nested
/// bracketed bisection (mu inside, T outside).
GrandCanonicalFit match_grand_canonical(const MultiSectorDecomposition& multi, double e_target,
                                        double n_target, double rel_tol = 1e-6);

/// rho_A of the ensemble: sum_n w_n Tr_B |n><n|.
BlockDensityMatrix ensemble_rdm(const EnsembleState& ensemble,
                                const SpectralDecomposition& decomp, const PartitionMap& pmap);

/// Grand-canonical variant; pmaps[n] must partition sector n with the same sites.
BlockDensityMatrix ensemble_rdm(const EnsembleState& ensemble,
                                const MultiSectorDecomposition& multi,
                                const std::vector<PartitionMap>& pmaps);

/// Global purity sum w^2 of the eigenbasis-diagonal mixed state.
double ensemble_global_purity(const EnsembleState& ensemble);

/// Renyi-2 entropy of ensemble_rdm averaged over the partition family.
PartitionStats thermal_renyi(const EnsembleState& ensemble, const SpectralDecomposition& decomp,
                             const SectorBasis& basis, int volume,
                             PartitionMode mode = PartitionMode::contiguous);

}  // namespace qlab
