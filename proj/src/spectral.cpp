#include "qlab/spectral.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace qlab {

namespace {

// Householder reduction of a symmetric matrix to tridiagonal form, with the
// accumulated orthogonal transformation left in `a` (EISPACK tred2 lineage).
void householder_tridiagonalize(Eigen::MatrixXd& a, Eigen::VectorXd& diag,
                                Eigen::VectorXd& off) {
    const Eigen::Index n = a.rows();
    for (Eigen::Index i = n - 1; i >= 1; --i) {
        const Eigen::Index l = i - 1;
        double h = 0.0;
        if (l > 0) {
            double scale = 0.0;
            for (Eigen::Index k = 0; k <= l; ++k) scale += std::abs(a(i, k));
            if (scale == 0.0) {
                off[i] = a(i, l);
            } else {
                for (Eigen::Index k = 0; k <= l; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
                off[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (Eigen::Index j = 0; j <= l; ++j) {
                    a(j, i) = a(i, j) / h;
                    g = 0.0;
                    for (Eigen::Index k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (Eigen::Index k = j + 1; k <= l; ++k) g += a(k, j) * a(i, k);
                    off[j] = g / h;
                    f += off[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (Eigen::Index j = 0; j <= l; ++j) {
                    f = a(i, j);
                    g = off[j] - hh * f;
                    off[j] = g;
                    for (Eigen::Index k = 0; k <= j; ++k) {
                        a(j, k) -= f * off[k] + g * a(i, k);
                    }
                }
            }
        } else {
            off[i] = a(i, l);
        }
        diag[i] = h;
    }
    diag[0] = 0.0;
    off[0] = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const Eigen::Index l = i - 1;
        if (diag[i] != 0.0) {
            for (Eigen::Index j = 0; j <= l; ++j) {
                double g = 0.0;
                for (Eigen::Index k = 0; k <= l; ++k) g += a(i, k) * a(k, j);
                for (Eigen::Index k = 0; k <= l; ++k) a(k, j) -= g * a(k, i);
            }
        }
        diag[i] = a(i, i);
        a(i, i) = 1.0;
        for (Eigen::Index j = 0; j <= l; ++j) {
            a(j, i) = 0.0;
            a(i, j) = 0.0;
        }
    }
}

// Implicit-shift QL iteration on the tridiagonal matrix, rotating the
// eigenvector matrix along (EISPACK tql2 lineage).
void ql_implicit_shift(Eigen::VectorXd& diag, Eigen::VectorXd& off, Eigen::MatrixXd& z,
                       int max_iterations) {
    const Eigen::Index n = diag.size();
    if (n == 1) return;
    for (Eigen::Index i = 1; i < n; ++i) off[i - 1] = off[i];
    off[n - 1] = 0.0;

    for (Eigen::Index l = 0; l < n; ++l) {
        int iter = 0;
        Eigen::Index m;
        do {
            for (m = l; m < n - 1; ++m) {
                const double dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
                if (std::abs(off[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
            }
            if (m != l) {
                if (iter++ == max_iterations) {
                    throw NumericalError(
                        "eigh: QL iteration failed to converge after " +
                        std::to_string(max_iterations) + " sweeps at eigenvalue " +
                        std::to_string(l) + " (residual off-diagonal " +
                        std::to_string(std::abs(off[l])) + ")");
                }
                double g = (diag[l + 1] - diag[l]) / (2.0 * off[l]);
                double r = std::hypot(g, 1.0);
                g = diag[m] - diag[l] + off[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
                double s = 1.0;
                double c = 1.0;
                double p = 0.0;
                Eigen::Index i = m - 1;
                bool underflow = false;
                for (; i >= l; --i) {
                    double f = s * off[i];
                    const double b = c * off[i];
                    r = std::hypot(f, g);
                    off[i + 1] = r;
                    if (r == 0.0) {
                        diag[i + 1] -= p;
                        off[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = diag[i + 1] - p;
                    r = (diag[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    diag[i + 1] = g + p;
                    g = c * r - b;
                    for (Eigen::Index k = 0; k < n; ++k) {
                        f = z(k, i + 1);
                        z(k, i + 1) = s * z(k, i) + c * f;
                        z(k, i) = c * z(k, i) - s * f;
                    }
                }
                if (underflow && i >= l) continue;
                diag[l] -= p;
                off[l] = g;
                off[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace

SpectralDecomposition eigh_dense(Eigen::MatrixXd a, const EighOptions& options) {
    const Eigen::Index n = a.rows();
    if (n != a.cols()) throw NumericalError("eigh: matrix must be square");
    if (static_cast<std::size_t>(n) > options.dense_cap) {
        throw NumericalError("eigh: dimension " + std::to_string(n) +
                             " exceeds the dense cap of " + std::to_string(options.dense_cap));
    }
    if (n == 0) throw NumericalError("eigh: empty matrix");

    Eigen::VectorXd diag(n), off(n);
    householder_tridiagonalize(a, diag, off);
    ql_implicit_shift(diag, off, a, options.max_iterations);

    // sort ascending, carrying eigenvector columns
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index x, Eigen::Index y) { return diag[x] < diag[y]; });

    SpectralDecomposition result;
    result.eigenvalues.resize(n);
    result.eigenvectors.resize(n, n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index src = order[static_cast<std::size_t>(k)];
        result.eigenvalues[k] = diag[src];
        result.eigenvectors.col(k) = a.col(src);
        // reproducible sign: largest-magnitude entry positive
        Eigen::Index arg_max = 0;
        result.eigenvectors.col(k).cwiseAbs().maxCoeff(&arg_max);
        if (result.eigenvectors(arg_max, k) < 0.0) result.eigenvectors.col(k) *= -1.0;
    }
    return result;
}

SpectralDecomposition eigh(const SparseSymMatrix& h, const EighOptions& options) {
    if (h.dim() > options.dense_cap) {
        throw NumericalError("eigh: dimension " + std::to_string(h.dim()) +
                             " exceeds the dense cap of " + std::to_string(options.dense_cap));
    }
    return eigh_dense(h.to_dense(), options);
}

QuenchState fock_state(const SectorBasis& basis, const std::vector<int>& occupations) {
    QuenchState psi;
    psi.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.dim()));
    psi.amplitudes[static_cast<Eigen::Index>(basis.rank(occupations))] = 1.0;
    return psi;
}

GroundStateResult ground_state(const SpectralDecomposition& decomp) {
    if (decomp.dim() == 0) throw NumericalError("ground_state: empty decomposition");
    GroundStateResult result;
    result.energy = decomp.eigenvalues[0];
    result.gap = decomp.dim() > 1 ? decomp.eigenvalues[1] - decomp.eigenvalues[0]
                                  : std::numeric_limits<double>::infinity();
    result.degenerate = result.gap < 1e-10;
    Eigen::VectorXd column = decomp.eigenvectors.col(0);
    Eigen::Index arg_max = 0;
    column.cwiseAbs().maxCoeff(&arg_max);
    if (column[arg_max] < 0.0) column *= -1.0;
    result.state.amplitudes = column.cast<std::complex<double>>();
    result.state.time = 0.0;
    result.state.overlaps = Eigen::VectorXcd::Zero(decomp.dim());
    result.state.overlaps[0] = 1.0;
    return result;
}

QuenchState evolve(const SpectralDecomposition& decomp, const QuenchState& psi0, double t) {
    if (psi0.amplitudes.size() != decomp.dim()) {
        throw NumericalError("evolve: state dimension does not match decomposition");
    }
    const Eigen::VectorXcd overlaps = decomp.eigenvectors.transpose() * psi0.amplitudes;
    Eigen::VectorXcd phased(overlaps.size());
    for (Eigen::Index n = 0; n < overlaps.size(); ++n) {
        phased[n] = std::polar(1.0, -decomp.eigenvalues[n] * t) * overlaps[n];
    }
    QuenchState result;
    result.amplitudes = decomp.eigenvectors * phased;
    result.time = psi0.time + t;
    result.overlaps = std::move(phased);
    return result;
}

std::vector<QuenchState> trajectory(const SpectralDecomposition& decomp, const QuenchState& psi0,
                                    std::span<const double> times) {
    if (psi0.amplitudes.size() != decomp.dim()) {
        throw NumericalError("trajectory: state dimension does not match decomposition");
    }
    const Eigen::VectorXcd overlaps = decomp.eigenvectors.transpose() * psi0.amplitudes;
    std::vector<QuenchState> result;
    result.reserve(times.size());
    for (const double t : times) {
        Eigen::VectorXcd phased(overlaps.size());
        for (Eigen::Index n = 0; n < overlaps.size(); ++n) {
            phased[n] = std::polar(1.0, -decomp.eigenvalues[n] * t) * overlaps[n];
        }
        QuenchState state;
        state.amplitudes = decomp.eigenvectors * phased;
        state.time = psi0.time + t;
        state.overlaps = std::move(phased);
        result.push_back(std::move(state));
    }
    return result;
}

}  // namespace qlab
