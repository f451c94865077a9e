#pragma once

#include <span>
#include <vector>

#include "qlab/ensembles.hpp"

namespace qlab {

/// Saturated-regime averaging convention: the experiment's 10-20 ms window at
/// J/(2pi) = 66 Hz in dimensionless time, sampled uniformly.
inline constexpr double kSaturatedWindowStart = 4.147;
inline constexpr double kSaturatedWindowEnd = 8.294;
std::vector<double> saturated_window_times(int count = 21);

/// Probability of each Fock basis state: |psi_s|^2 for a pure state, or the
/// eigenvector-weighted mixture for an ensemble.
std::vector<double> basis_probabilities(const Eigen::VectorXcd& amplitudes);
std::vector<double> basis_probabilities(const EnsembleState& ensemble,
                                        const SpectralDecomposition& decomp);
/// Grand-canonical variant: concatenated over sectors 0..n_max.
std::vector<double> basis_probabilities(const EnsembleState& ensemble,
                                        const MultiSectorDecomposition& multi);

/// <n_i> for every site.
Eigen::VectorXd site_density(std::span<const double> probabilities, const SectorBasis& basis);
Eigen::VectorXd site_density(const QuenchState& psi, const SectorBasis& basis);
Eigen::VectorXd site_density(const EnsembleState& ensemble, const SpectralDecomposition& decomp,
                             const SectorBasis& basis);
Eigen::VectorXd site_density(const EnsembleState& ensemble, const MultiSectorDecomposition& multi,
                             const MultiSectorBasis& basis);

/// Probabilities P(n) of finding n atoms inside a subsystem, n = 0..N.
struct NumberDistribution {
    std::vector<int> sites;
    std::vector<double> probabilities;

    void validate(double tol = 1e-12) const;
};

NumberDistribution number_distribution(std::span<const double> probabilities,
                                       const SectorBasis& basis,
                                       const std::vector<int>& subsystem);
NumberDistribution number_distribution(const QuenchState& psi, const SectorBasis& basis,
                                       const std::vector<int>& subsystem);
NumberDistribution number_distribution(const EnsembleState& ensemble,
                                       const SpectralDecomposition& decomp,
                                       const SectorBasis& basis,
                                       const std::vector<int>& subsystem);
NumberDistribution number_distribution(const EnsembleState& ensemble,
                                       const MultiSectorDecomposition& multi,
                                       const MultiSectorBasis& basis,
                                       const std::vector<int>& subsystem);

/// <H_int> = (U/2) sum_i <n_i (n_i - 1)>.
double interaction_energy(std::span<const double> probabilities, const SectorBasis& basis,
                          double interaction);
double interaction_energy(const QuenchState& psi, const SectorBasis& basis, double interaction);
double interaction_energy(const EnsembleState& ensemble, const SpectralDecomposition& decomp,
                          const SectorBasis& basis, double interaction);

/// (1/2) Tr |rho - sigma|, evaluated block by block.
double trace_distance(const BlockDensityMatrix& rho, const BlockDensityMatrix& sigma);

/// Uhlmann fidelity Tr sqrt(sqrt(rho) sigma sqrt(rho)), block by block; for
/// diagonal blocks this reduces to sum sqrt(p q).
double fidelity(const BlockDensityMatrix& rho, const BlockDensityMatrix& sigma);

}  // namespace qlab
