#pragma once

// Brute-force reference computations used only by the test suite.
// Everything here is deliberately independent of the library's own
// eigensolver / propagation / partial-trace code paths.

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "qlab/fock_basis.hpp"

namespace oracles {

/// Number of eigenvalues of `a` strictly below `shift`, by Sylvester inertia
/// of the LDL^T pivots. Returns nullopt when an unpivoted elimination hits a
/// tiny pivot (caller nudges the shift and retries).
std::optional<int> eigenvalue_count_below(const Eigen::MatrixXd& a, double shift);

/// Rayleigh-quotient ground-state energy via power iteration on (c*I - A).
double power_iteration_ground_energy(const Eigen::MatrixXd& a, int iterations = 4000);

/// w = exp(A) v by scaling-and-squaring with a truncated Taylor series.
Eigen::VectorXcd expm_multiply(const Eigen::MatrixXcd& a, Eigen::VectorXcd v);

/// Same, for a real matrix given in sparse coordinate form.
struct SparseEntry {
    Eigen::Index row;
    Eigen::Index col;
    double value;
};
Eigen::VectorXcd expm_multiply_sparse(const std::vector<SparseEntry>& entries,
                                      Eigen::Index dim, double scale, Eigen::VectorXcd v);

/// Reference 50:50 beam splitter on every column pair (x, x+L): a parity flip
/// of the second mode followed by exp(-pi/4 (a_x^dag a_y - a_y^dag a_x)),
/// built from ladder operators and the matrix exponential only.
Eigen::VectorXcd beamsplitter_reference(const qlab::SectorBasis& basis, int copy_sites,
                                        Eigen::VectorXcd amplitudes);

/// Embeds a fixed-N sector state into the full (N+1)^L occupation product
/// space (site-major, occupation of site 0 the slowest index).
Eigen::VectorXcd embed_in_product_space(const Eigen::VectorXcd& amplitudes,
                                        const qlab::SectorBasis& basis);

/// Dense partial trace over the complement of `subsystem_sites`, computed by
/// reshaping the product-space vector. Returns the reduced density matrix in
/// the subsystem's own product space (dimension (N+1)^|A|).
Eigen::MatrixXcd dense_reduced_density_matrix(const Eigen::VectorXcd& amplitudes,
                                              const qlab::SectorBasis& basis,
                                              const std::vector<int>& subsystem_sites);

}  // namespace oracles
