#pragma once

#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qlab/fock_basis.hpp"
#include "qlab/spectral.hpp"

namespace qlab {

/// Reduced density matrix of a spatial subsystem. Particle-number
/// superselection makes it block diagonal: one Hermitian PSD block per
/// subsystem particle number n_a, over the (|A|, n_a) sub-basis.
struct BlockDensityMatrix {
    std::vector<int> sites;
    std::map<int, Eigen::MatrixXcd> blocks;

    double trace() const;
    /// P(n_a): trace of the n_a block, zero when absent.
    double block_weight(int n_a) const;
    /// Trace 1, Hermitian blocks, eigenvalues >= -tol. Throws on violation.
    void validate(double tol = 1e-12) const;
};

/// rho_A = Tr_B |psi><psi|, assembled block by block through the partition
/// map. The full-set partition degenerates to the rank-1 |psi><psi|.
BlockDensityMatrix reduce(const Eigen::VectorXcd& amplitudes, const PartitionMap& pmap);
BlockDensityMatrix reduce(const QuenchState& psi, const PartitionMap& pmap);

/// Tr rho^2 = sum over blocks of Tr(b^2).
double purity(const BlockDensityMatrix& rho);

/// Second-order Renyi entropy S = -ln Tr rho^2 (natural log).
double renyi2(const BlockDensityMatrix& rho);

/// Von Neumann entropy -sum lambda ln lambda, a secondary diagnostic.
double von_neumann(const BlockDensityMatrix& rho);

/// I_AB = S_A + S_B - S_AB with Renyi-2 entropies; A and B must be disjoint.
double mutual_information(const Eigen::VectorXcd& amplitudes, const SectorBasis& basis,
                          const std::vector<int>& sites_a, const std::vector<int>& sites_b);

enum class PartitionMode { contiguous, all_subsets };

/// All subsystems of the given volume: contiguous windows, or every subset.
std::vector<std::vector<int>> partition_family(int sites, int volume, PartitionMode mode);

struct PartitionStats {
    double mean = 0.0;
    double spread = 0.0;  // population standard deviation (family is exhaustive)
    int count = 0;
};

/// Mean and spread of renyi2 over all subsystems of one volume.
PartitionStats partition_average(const Eigen::VectorXcd& amplitudes, const SectorBasis& basis,
                                 int volume, PartitionMode mode = PartitionMode::contiguous);

struct PiecewiseFit {
    double slope = 0.0;
    double break_time = 0.0;
    double plateau = 0.0;
};

/// Least-squares continuous hinge fit S(t) ~ S(t0) + slope * min(t - t0,
/// break) used for the early-time entropy growth rate. The first segment is
/// anchored at the first sample; the second segment is flat at the plateau.
PiecewiseFit piecewise_linear_fit(std::span<const double> times, std::span<const double> values);

}  // namespace qlab
