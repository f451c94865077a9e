#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qlab/hamiltonian.hpp"

namespace qlab {

/// Full eigensystem of a real symmetric matrix: ascending eigenvalues, and an
/// orthonormal eigenvector per column with its largest-magnitude entry made
/// positive so repeated runs produce identical dumps.
struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenvectors;

    Eigen::Index dim() const { return eigenvalues.size(); }
};

struct EighOptions {
    std::size_t dense_cap = 5000;  // refuse larger problems instead of degrading
    int max_iterations = 50;       // QL sweeps per eigenvalue
};

/// Dense full-spectrum solve: Householder tridiagonalization followed by
/// implicit-shift QL. Exact propagation and the ensemble constructions all
/// consume this decomposition.
SpectralDecomposition eigh(const SparseSymMatrix& h, const EighOptions& options = {});
SpectralDecomposition eigh_dense(Eigen::MatrixXd a, const EighOptions& options = {});

/// Pure state in the Fock basis, tagged with the dimensionless elapsed time
/// t*J and (once attached to a decomposition) its eigenbasis overlaps c_n.
struct QuenchState {
    Eigen::VectorXcd amplitudes;
    double time = 0.0;
    Eigen::VectorXcd overlaps;  // empty until evolved

    double norm() const { return amplitudes.norm(); }
};

/// Basis state |occupations> as a QuenchState (e.g. the Mott state).
QuenchState fock_state(const SectorBasis& basis, const std::vector<int>& occupations);

struct GroundStateResult {
    QuenchState state;
    double energy = 0.0;
    double gap = 0.0;        // E_1 - E_0
    bool degenerate = false; // gap below 1e-10
};

GroundStateResult ground_state(const SpectralDecomposition& decomp);

/// psi(t0 + t) = sum_n exp(-i E_n t) c_n |n>, exact at any t.
QuenchState evolve(const SpectralDecomposition& decomp, const QuenchState& psi0, double t);

/// Element-wise evolve of psi0 to each listed time (times relative to psi0).
std::vector<QuenchState> trajectory(const SpectralDecomposition& decomp, const QuenchState& psi0,
                                    std::span<const double> times);

}  // namespace qlab
