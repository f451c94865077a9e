#include "qlab/hamiltonian.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

namespace qlab {

void HubbardParams::validate() const {
    if (sites < 1) throw NumericalError("HubbardParams: sites must be >= 1");
    if (particles < 0) throw NumericalError("HubbardParams: particles must be >= 0");
    if (tunneling < 0.0) throw NumericalError("HubbardParams: tunneling must be >= 0");
    if (!std::isfinite(tunneling) || !std::isfinite(interaction)) {
        throw NumericalError("HubbardParams: parameters must be finite");
    }
}

void SparseSymMatrix::add(std::size_t row, std::size_t col, double value) {
    if (row >= dim_ || col >= dim_) throw NumericalError("SparseSymMatrix: index out of range");
    if (row > col) std::swap(row, col);
    if (!std::isfinite(value)) throw NumericalError("SparseSymMatrix: non-finite entry");
    entries_.push_back(Entry{static_cast<std::uint32_t>(row), static_cast<std::uint32_t>(col), value});
}

namespace {

template <typename Scalar>
void matvec_impl(std::size_t dim, const std::vector<SparseSymMatrix::Entry>& entries,
                 std::span<const Scalar> x, std::span<Scalar> y) {
    if (x.size() != dim || y.size() != dim) {
        throw NumericalError("matvec: vector length does not match matrix dimension");
    }
    std::fill(y.begin(), y.end(), Scalar{});
    for (const auto& e : entries) {
        y[e.row] += e.value * x[e.col];
        if (e.row != e.col) y[e.col] += e.value * x[e.row];
    }
}

}  // namespace

void SparseSymMatrix::matvec(std::span<const double> x, std::span<double> y) const {
    matvec_impl<double>(dim_, entries_, x, y);
}

void SparseSymMatrix::matvec(std::span<const std::complex<double>> x,
                             std::span<std::complex<double>> y) const {
    matvec_impl<std::complex<double>>(dim_, entries_, x, y);
}

Eigen::VectorXd SparseSymMatrix::matvec(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y(x.size());
    matvec(std::span<const double>(x.data(), static_cast<std::size_t>(x.size())),
           std::span<double>(y.data(), static_cast<std::size_t>(y.size())));
    return y;
}

Eigen::VectorXcd SparseSymMatrix::matvec(const Eigen::VectorXcd& x) const {
    Eigen::VectorXcd y(x.size());
    matvec(std::span<const std::complex<double>>(x.data(), static_cast<std::size_t>(x.size())),
           std::span<std::complex<double>>(y.data(), static_cast<std::size_t>(y.size())));
    return y;
}

Eigen::MatrixXd SparseSymMatrix::to_dense() const {
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(dim_),
                                                  static_cast<Eigen::Index>(dim_));
    for (const auto& e : entries_) {
        dense(e.row, e.col) += e.value;
        if (e.row != e.col) dense(e.col, e.row) += e.value;
    }
    return dense;
}

void SparseSymMatrix::dump(std::ostream& out) const {
    char line[64];
    for (const auto& e : entries_) {
        std::snprintf(line, sizeof(line), "%u %u %.17g\n", e.row, e.col, e.value);
        out << line;
    }
}

SparseSymMatrix build_hamiltonian(const HubbardParams& params, const SectorBasis& basis) {
    params.validate();
    if (basis.sites() != params.sites || basis.particles() != params.particles) {
        throw NumericalError("build_hamiltonian: basis does not match parameters (L=" +
                             std::to_string(basis.sites()) + ", N=" +
                             std::to_string(basis.particles()) + ")");
    }

    SparseSymMatrix h(basis.dim());
    const int sites = basis.sites();
    const double j = params.tunneling;
    const double u = params.interaction;

    std::vector<occ_t> hopped(static_cast<std::size_t>(sites));
    for (std::size_t idx = 0; idx < basis.dim(); ++idx) {
        const auto occ = basis.state(idx);

        if (u != 0.0) {
            double diag = 0.0;
            for (int s = 0; s < sites; ++s) {
                const double n = occ[static_cast<std::size_t>(s)];
                diag += n * (n - 1.0);
            }
            if (diag != 0.0) h.add(idx, idx, 0.5 * u * diag);
        }

        if (j == 0.0) continue;
        // a_i^dag a_{i+1}: moving one atom left lands on a lexicographically
        // larger state, so the stored entry is automatically upper-triangular.
        for (int s = 0; s + 1 < sites; ++s) {
            const int n_right = occ[static_cast<std::size_t>(s + 1)];
            if (n_right == 0) continue;
            const int n_left = occ[static_cast<std::size_t>(s)];
            if (basis.max_per_site() && n_left + 1 > *basis.max_per_site()) continue;
            std::copy(occ.begin(), occ.end(), hopped.begin());
            hopped[static_cast<std::size_t>(s)] = static_cast<occ_t>(n_left + 1);
            hopped[static_cast<std::size_t>(s + 1)] = static_cast<occ_t>(n_right - 1);
            const std::size_t target = basis.rank(std::span<const occ_t>(hopped));
            h.add(target, idx, -j * std::sqrt(static_cast<double>(n_right) * (n_left + 1.0)));
        }
    }
    return h;
}

std::vector<double> build_number_operator(const SectorBasis& basis, int site) {
    if (site < 0 || site >= basis.sites()) {
        throw NumericalError("build_number_operator: site index out of range");
    }
    std::vector<double> diag(basis.dim());
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        diag[i] = basis.state(i)[static_cast<std::size_t>(site)];
    }
    return diag;
}

std::vector<double> build_interaction(const SectorBasis& basis, double interaction) {
    std::vector<double> diag(basis.dim());
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const auto occ = basis.state(i);
        double sum = 0.0;
        for (int s = 0; s < basis.sites(); ++s) {
            const double n = occ[static_cast<std::size_t>(s)];
            sum += n * (n - 1.0);
        }
        diag[i] = 0.5 * interaction * sum;
    }
    return diag;
}

}  // namespace qlab
