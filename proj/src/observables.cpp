#include "qlab/observables.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qlab {

std::vector<double> saturated_window_times(int count) {
    if (count < 2) throw NumericalError("saturated_window_times: need at least 2 samples");
    std::vector<double> times(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        times[static_cast<std::size_t>(k)] =
            kSaturatedWindowStart +
            (kSaturatedWindowEnd - kSaturatedWindowStart) * k / (count - 1);
    }
    return times;
}

std::vector<double> basis_probabilities(const Eigen::VectorXcd& amplitudes) {
    std::vector<double> probabilities(static_cast<std::size_t>(amplitudes.size()));
    for (Eigen::Index i = 0; i < amplitudes.size(); ++i) {
        probabilities[static_cast<std::size_t>(i)] = std::norm(amplitudes[i]);
    }
    return probabilities;
}

std::vector<double> basis_probabilities(const EnsembleState& ensemble,
                                        const SpectralDecomposition& decomp) {
    if (ensemble.weights.size() != static_cast<std::size_t>(decomp.dim())) {
        throw NumericalError("basis_probabilities: ensemble does not match decomposition");
    }
    std::vector<double> probabilities(static_cast<std::size_t>(decomp.dim()), 0.0);
    for (Eigen::Index n = 0; n < decomp.dim(); ++n) {
        const double w = ensemble.weights[static_cast<std::size_t>(n)];
        if (w == 0.0) continue;
        for (Eigen::Index s = 0; s < decomp.dim(); ++s) {
            const double v = decomp.eigenvectors(s, n);
            probabilities[static_cast<std::size_t>(s)] += w * v * v;
        }
    }
    return probabilities;
}

std::vector<double> basis_probabilities(const EnsembleState& ensemble,
                                        const MultiSectorDecomposition& multi) {
    if (ensemble.weights.size() != multi.total_dim()) {
        throw NumericalError("basis_probabilities: ensemble does not match decomposition");
    }
    std::vector<double> probabilities(multi.total_dim(), 0.0);
    std::size_t offset = 0;
    std::size_t k = 0;
    for (const auto& sector : multi.sectors) {
        for (Eigen::Index n = 0; n < sector.dim(); ++n, ++k) {
            const double w = ensemble.weights[k];
            if (w == 0.0) continue;
            for (Eigen::Index s = 0; s < sector.dim(); ++s) {
                const double v = sector.eigenvectors(s, n);
                probabilities[offset + static_cast<std::size_t>(s)] += w * v * v;
            }
        }
        offset += static_cast<std::size_t>(sector.dim());
    }
    return probabilities;
}

Eigen::VectorXd site_density(std::span<const double> probabilities, const SectorBasis& basis) {
    if (probabilities.size() != basis.dim()) {
        throw NumericalError("site_density: probability vector does not match basis");
    }
    Eigen::VectorXd density = Eigen::VectorXd::Zero(basis.sites());
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        if (probabilities[i] == 0.0) continue;
        const auto occ = basis.state(i);
        for (int s = 0; s < basis.sites(); ++s) {
            density[s] += probabilities[i] * occ[static_cast<std::size_t>(s)];
        }
    }
    return density;
}

Eigen::VectorXd site_density(const QuenchState& psi, const SectorBasis& basis) {
    return site_density(basis_probabilities(psi.amplitudes), basis);
}

Eigen::VectorXd site_density(const EnsembleState& ensemble, const SpectralDecomposition& decomp,
                             const SectorBasis& basis) {
    return site_density(basis_probabilities(ensemble, decomp), basis);
}

Eigen::VectorXd site_density(const EnsembleState& ensemble, const MultiSectorDecomposition& multi,
                             const MultiSectorBasis& basis) {
    const auto probabilities = basis_probabilities(ensemble, multi);
    Eigen::VectorXd density = Eigen::VectorXd::Zero(basis.sites());
    for (int n = 0; n <= basis.n_max(); ++n) {
        const auto& sector = basis.sector(n);
        const std::size_t offset = basis.offset(n);
        density += site_density(
            std::span<const double>(probabilities.data() + offset, sector.dim()), sector);
    }
    return density;
}

void NumberDistribution::validate(double tol) const {
    double sum = 0.0;
    for (double p : probabilities) {
        if (p < -tol) throw NumericalError("NumberDistribution: negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > tol) {
        throw NumericalError("NumberDistribution: probabilities sum to " + std::to_string(sum));
    }
}

NumberDistribution number_distribution(std::span<const double> probabilities,
                                       const SectorBasis& basis,
                                       const std::vector<int>& subsystem) {
    if (probabilities.size() != basis.dim()) {
        throw NumericalError("number_distribution: probability vector does not match basis");
    }
    for (int s : subsystem) {
        if (s < 0 || s >= basis.sites()) {
            throw NumericalError("number_distribution: site index out of range");
        }
    }
    NumberDistribution dist;
    dist.sites = subsystem;
    dist.probabilities.assign(static_cast<std::size_t>(basis.particles()) + 1, 0.0);
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        if (probabilities[i] == 0.0) continue;
        const auto occ = basis.state(i);
        int count = 0;
        for (int s : subsystem) count += occ[static_cast<std::size_t>(s)];
        dist.probabilities[static_cast<std::size_t>(count)] += probabilities[i];
    }
    return dist;
}

NumberDistribution number_distribution(const QuenchState& psi, const SectorBasis& basis,
                                       const std::vector<int>& subsystem) {
    return number_distribution(basis_probabilities(psi.amplitudes), basis, subsystem);
}

NumberDistribution number_distribution(const EnsembleState& ensemble,
                                       const SpectralDecomposition& decomp,
                                       const SectorBasis& basis,
                                       const std::vector<int>& subsystem) {
    return number_distribution(basis_probabilities(ensemble, decomp), basis, subsystem);
}

NumberDistribution number_distribution(const EnsembleState& ensemble,
                                       const MultiSectorDecomposition& multi,
                                       const MultiSectorBasis& basis,
                                       const std::vector<int>& subsystem) {
    const auto probabilities = basis_probabilities(ensemble, multi);
    NumberDistribution dist;
    dist.sites = subsystem;
    dist.probabilities.assign(static_cast<std::size_t>(basis.n_max()) + 1, 0.0);
    for (int n = 0; n <= basis.n_max(); ++n) {
        const auto& sector = basis.sector(n);
        const std::size_t offset = basis.offset(n);
        const auto partial = number_distribution(
            std::span<const double>(probabilities.data() + offset, sector.dim()), sector,
            subsystem);
        for (std::size_t m = 0; m < partial.probabilities.size(); ++m) {
            dist.probabilities[m] += partial.probabilities[m];
        }
    }
    return dist;
}

double interaction_energy(std::span<const double> probabilities, const SectorBasis& basis,
                          double interaction) {
    const auto diag = build_interaction(basis, interaction);
    if (probabilities.size() != diag.size()) {
        throw NumericalError("interaction_energy: probability vector does not match basis");
    }
    double energy = 0.0;
    for (std::size_t i = 0; i < diag.size(); ++i) energy += probabilities[i] * diag[i];
    return energy;
}

double interaction_energy(const QuenchState& psi, const SectorBasis& basis, double interaction) {
    return interaction_energy(basis_probabilities(psi.amplitudes), basis, interaction);
}

double interaction_energy(const EnsembleState& ensemble, const SpectralDecomposition& decomp,
                          const SectorBasis& basis, double interaction) {
    return interaction_energy(basis_probabilities(ensemble, decomp), basis, interaction);
}

namespace {

void check_same_subsystem(const BlockDensityMatrix& rho, const BlockDensityMatrix& sigma) {
    if (rho.sites != sigma.sites) {
        throw NumericalError("density-matrix metric: subsystems differ");
    }
}

// Pairs of aligned blocks, inserting zero blocks where one side is absent.
std::vector<std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd>> aligned_blocks(
    const BlockDensityMatrix& rho, const BlockDensityMatrix& sigma) {
    std::vector<std::pair<Eigen::MatrixXcd, Eigen::MatrixXcd>> pairs;
    auto keys = [](const BlockDensityMatrix& m) {
        std::vector<int> k;
        for (const auto& [n, b] : m.blocks) k.push_back(n);
        return k;
    };
    std::vector<int> all = keys(rho);
    for (int n : keys(sigma)) {
        if (std::find(all.begin(), all.end(), n) == all.end()) all.push_back(n);
    }
    std::sort(all.begin(), all.end());
    for (int n : all) {
        const auto ir = rho.blocks.find(n);
        const auto is = sigma.blocks.find(n);
        const Eigen::Index dim = ir != rho.blocks.end() ? ir->second.rows() : is->second.rows();
        if (ir != rho.blocks.end() && is != sigma.blocks.end() &&
            ir->second.rows() != is->second.rows()) {
            throw NumericalError("density-matrix metric: mismatched block sizes at n=" +
                                 std::to_string(n));
        }
        pairs.emplace_back(
            ir != rho.blocks.end() ? ir->second : Eigen::MatrixXcd::Zero(dim, dim).eval(),
            is != sigma.blocks.end() ? is->second : Eigen::MatrixXcd::Zero(dim, dim).eval());
    }
    return pairs;
}

}  // namespace

double trace_distance(const BlockDensityMatrix& rho, const BlockDensityMatrix& sigma) {
    check_same_subsystem(rho, sigma);
    double sum = 0.0;
    for (const auto& [a, b] : aligned_blocks(rho, sigma)) {
        if (a.rows() == 0) continue;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(a - b, Eigen::EigenvaluesOnly);
        sum += solver.eigenvalues().cwiseAbs().sum();
    }
    return 0.5 * sum;
}

double fidelity(const BlockDensityMatrix& rho, const BlockDensityMatrix& sigma) {
    check_same_subsystem(rho, sigma);
    double sum = 0.0;
    for (const auto& [a, b] : aligned_blocks(rho, sigma)) {
        if (a.rows() == 0) continue;
        if (a.rows() == 1) {
            sum += std::sqrt(std::max(0.0, a(0, 0).real()) * std::max(0.0, b(0, 0).real()));
            continue;
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> root_solver(a);
        const Eigen::VectorXd clamped = root_solver.eigenvalues().cwiseMax(0.0);
        const Eigen::MatrixXcd sqrt_a = root_solver.eigenvectors() *
                                        clamped.cwiseSqrt().asDiagonal() *
                                        root_solver.eigenvectors().adjoint();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> inner(sqrt_a * b * sqrt_a,
                                                              Eigen::EigenvaluesOnly);
        sum += inner.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    }
    // round-off can push the overlap of near-identical states just past 1
    if (sum > 1.0 && sum < 1.0 + 1e-8) sum = 1.0;
    return sum;
}

}  // namespace qlab
