#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qlab/fock_basis.hpp"

namespace qlab {

/// One open-boundary Bose-Hubbard chain: nearest-neighbour tunneling J and
/// on-site pairwise interaction U, in units where hbar = 1 and J, U are
/// angular frequencies.
struct HubbardParams {
    int sites = 6;
    int particles = 6;
    double tunneling = 1.0;    // J
    double interaction = 0.0;  // U

    void validate() const;
};

/// Real symmetric sparse matrix in coordinate form. Only entries with
/// row <= col are stored; the lower triangle is implied.
class SparseSymMatrix {
public:
    struct Entry {
        std::uint32_t row;
        std::uint32_t col;
        double value;
    };

    explicit SparseSymMatrix(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    const std::vector<Entry>& entries() const { return entries_; }

    void add(std::size_t row, std::size_t col, double value);

    /// y = H x with the symmetric completion applied.
    void matvec(std::span<const double> x, std::span<double> y) const;
    void matvec(std::span<const std::complex<double>> x,
                std::span<std::complex<double>> y) const;
    Eigen::VectorXd matvec(const Eigen::VectorXd& x) const;
    Eigen::VectorXcd matvec(const Eigen::VectorXcd& x) const;

    Eigen::MatrixXd to_dense() const;

    /// Text triples "row col value", one per line, 17 significant digits.
    void dump(std::ostream& out) const;

private:
    std::size_t dim_;
    std::vector<Entry> entries_;
};

/// Sector Hamiltonian of the 1D open chain:
///   H = -J sum_i (a_i^dag a_{i+1} + h.c.) + (U/2) sum_i n_i (n_i - 1).
SparseSymMatrix build_hamiltonian(const HubbardParams& params, const SectorBasis& basis);

/// Diagonal of the site-i number operator in the given basis.
std::vector<double> build_number_operator(const SectorBasis& basis, int site);

/// Diagonal of (U/2) sum_i n_i (n_i - 1).
std::vector<double> build_interaction(const SectorBasis& basis, double interaction);

}  // namespace qlab
