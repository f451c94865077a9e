#include "qlab/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace qlab {

const char* to_string(EnsembleKind kind) {
    switch (kind) {
        case EnsembleKind::canonical: return "canonical";
        case EnsembleKind::microcanonical: return "microcanonical";
        case EnsembleKind::grand_canonical: return "grand_canonical";
        case EnsembleKind::diagonal: return "diagonal";
        case EnsembleKind::single_eigenstate: return "single_eigenstate";
    }
    return "unknown";
}

void EnsembleState::validate(double tol) const {
    double sum = 0.0;
    for (double w : weights) {
        if (w < 0.0) throw NumericalError("EnsembleState: negative weight");
        sum += w;
    }
    if (std::abs(sum - 1.0) > tol) {
        throw NumericalError("EnsembleState: weights sum to " + std::to_string(sum));
    }
}

namespace {

std::vector<double> boltzmann_weights(const Eigen::VectorXd& energies, double temperature,
                                      double mu_times_n_shift = 0.0,
                                      const std::vector<double>* mu_n = nullptr) {
    // exponent = -(E - mu n)/T, shifted by its maximum before exponentiating
    std::vector<double> exponent(static_cast<std::size_t>(energies.size()));
    for (Eigen::Index i = 0; i < energies.size(); ++i) {
        const double lift = mu_n ? (*mu_n)[static_cast<std::size_t>(i)] : mu_times_n_shift;
        exponent[static_cast<std::size_t>(i)] = -(energies[i] - lift) / temperature;
    }
    const double shift = *std::max_element(exponent.begin(), exponent.end());
    double z = 0.0;
    std::vector<double> weights(exponent.size());
    for (std::size_t i = 0; i < exponent.size(); ++i) {
        weights[i] = std::exp(exponent[i] - shift);
        z += weights[i];
    }
    for (double& w : weights) w /= z;
    return weights;
}

}  // namespace

EnsembleState canonical(const SpectralDecomposition& decomp, double temperature) {
    if (!(temperature > 0.0)) throw NumericalError("canonical: temperature must be positive");
    EnsembleState ens;
    ens.kind = EnsembleKind::canonical;
    ens.temperature = temperature;
    ens.weights = boltzmann_weights(decomp.eigenvalues, temperature);
    return ens;
}

double canonical_energy(const SpectralDecomposition& decomp, double temperature) {
    const auto ens = canonical(decomp, temperature);
    double energy = 0.0;
    for (Eigen::Index n = 0; n < decomp.dim(); ++n) {
        energy += ens.weights[static_cast<std::size_t>(n)] * decomp.eigenvalues[n];
    }
    return energy;
}

double match_canonical_temperature(const SpectralDecomposition& decomp, double e_target,
                                   double rel_tol) {
    const double e_ground = decomp.eigenvalues[0];
    const double e_mean = decomp.eigenvalues.mean();
    if (!(e_target > e_ground) || !(e_target < e_mean)) {
        throw NumericalError(
            "match_canonical_temperature: target " + std::to_string(e_target) +
            " outside the attainable bracket (E_ground=" + std::to_string(e_ground) +
            ", infinite-T mean=" + std::to_string(e_mean) + ")");
    }
    const double scale = decomp.eigenvalues[decomp.dim() - 1] - e_ground;
    const double tol = rel_tol * scale;

    // <H>_T is monotone increasing in T, so bisect in log T.
    double log_lo = std::log(1e-9 * scale);
    double log_hi = std::log(1e9 * scale);
    for (int iter = 0; iter < 300; ++iter) {
        const double mid = 0.5 * (log_lo + log_hi);
        const double e_mid = canonical_energy(decomp, std::exp(mid));
        if (std::abs(e_mid - e_target) <= tol) return std::exp(mid);
        if (e_mid < e_target) {
            log_lo = mid;
        } else {
            log_hi = mid;
        }
    }
    throw NumericalError("match_canonical_temperature: bisection failed to reach tolerance " +
                         std::to_string(tol));
}

EnsembleState microcanonical(const SpectralDecomposition& decomp, double e_target, double window) {
    if (window < 0.0) throw NumericalError("microcanonical: window must be non-negative");
    EnsembleState ens;
    ens.kind = EnsembleKind::microcanonical;
    ens.energy_window = window;
    ens.weights.assign(static_cast<std::size_t>(decomp.dim()), 0.0);
    int members = 0;
    for (Eigen::Index n = 0; n < decomp.dim(); ++n) {
        if (std::abs(decomp.eigenvalues[n] - e_target) <= window) {
            ens.weights[static_cast<std::size_t>(n)] = 1.0;
            ++members;
        }
    }
    if (members == 0) {
        throw NumericalError("microcanonical: no eigenstates within " + std::to_string(window) +
                             " of " + std::to_string(e_target) + "; enlarge the window");
    }
    for (double& w : ens.weights) w /= members;
    return ens;
}

EnsembleState diagonal_ensemble(const Eigen::VectorXcd& overlaps) {
    const double norm = overlaps.norm();
    if (std::abs(norm - 1.0) > 1e-10) {
        throw NumericalError("diagonal_ensemble: overlaps are not normalized (|c| = " +
                             std::to_string(norm) + ")");
    }
    EnsembleState ens;
    ens.kind = EnsembleKind::diagonal;
    ens.weights.resize(static_cast<std::size_t>(overlaps.size()));
    for (Eigen::Index n = 0; n < overlaps.size(); ++n) {
        ens.weights[static_cast<std::size_t>(n)] = std::norm(overlaps[n]);
    }
    return ens;
}

EnsembleState single_eigenstate(const SpectralDecomposition& decomp, double e_target) {
    if (decomp.dim() == 0) throw NumericalError("single_eigenstate: empty spectrum");
    Eigen::Index best = 0;
    double best_distance = std::abs(decomp.eigenvalues[0] - e_target);
    for (Eigen::Index n = 1; n < decomp.dim(); ++n) {
        const double distance = std::abs(decomp.eigenvalues[n] - e_target);
        if (distance < best_distance) {  // strict: ties keep the lower index
            best_distance = distance;
            best = n;
        }
    }
    EnsembleState ens;
    ens.kind = EnsembleKind::single_eigenstate;
    ens.weights.assign(static_cast<std::size_t>(decomp.dim()), 0.0);
    ens.weights[static_cast<std::size_t>(best)] = 1.0;
    return ens;
}

double participation_ratio(const EnsembleState& ensemble) {
    double sum_sq = 0.0;
    for (double w : ensemble.weights) sum_sq += w * w;
    return 1.0 / sum_sq;
}

std::size_t MultiSectorDecomposition::total_dim() const {
    std::size_t total = 0;
    for (const auto& sector : sectors) total += static_cast<std::size_t>(sector.dim());
    return total;
}

MultiSectorDecomposition diagonalize_sectors(const MultiSectorBasis& basis, double tunneling,
                                             double interaction, const EighOptions& options) {
    MultiSectorDecomposition multi;
    multi.sectors.reserve(static_cast<std::size_t>(basis.n_max()) + 1);
    for (int n = 0; n <= basis.n_max(); ++n) {
        const HubbardParams params{basis.sites(), n, tunneling, interaction};
        multi.sectors.push_back(eigh(build_hamiltonian(params, basis.sector(n)), options));
    }
    return multi;
}

EnsembleState grand_canonical(const MultiSectorDecomposition& multi, double temperature,
                              double chemical_potential) {
    if (!(temperature > 0.0)) throw NumericalError("grand_canonical: temperature must be positive");
    Eigen::VectorXd energies(static_cast<Eigen::Index>(multi.total_dim()));
    std::vector<double> mu_n(multi.total_dim());
    Eigen::Index k = 0;
    for (int n = 0; n <= multi.n_max(); ++n) {
        const auto& sector = multi.sectors[static_cast<std::size_t>(n)];
        for (Eigen::Index i = 0; i < sector.dim(); ++i, ++k) {
            energies[k] = sector.eigenvalues[i];
            mu_n[static_cast<std::size_t>(k)] = chemical_potential * n;
        }
    }
    EnsembleState ens;
    ens.kind = EnsembleKind::grand_canonical;
    ens.temperature = temperature;
    ens.chemical_potential = chemical_potential;
    ens.weights = boltzmann_weights(energies, temperature, 0.0, &mu_n);
    return ens;
}

namespace {

template <typename PerState>
double grand_canonical_sum(const MultiSectorDecomposition& multi, const EnsembleState& ens,
                           PerState&& value) {
    if (ens.weights.size() != multi.total_dim()) {
        throw NumericalError("grand-canonical ensemble does not match the decomposition");
    }
    double sum = 0.0;
    std::size_t k = 0;
    for (int n = 0; n <= multi.n_max(); ++n) {
        const auto& sector = multi.sectors[static_cast<std::size_t>(n)];
        for (Eigen::Index i = 0; i < sector.dim(); ++i, ++k) {
            sum += ens.weights[k] * value(n, sector.eigenvalues[i]);
        }
    }
    return sum;
}

}  // namespace

double grand_canonical_energy(const MultiSectorDecomposition& multi, const EnsembleState& ens) {
    return grand_canonical_sum(multi, ens, [](int, double e) { return e; });
}

double grand_canonical_number(const MultiSectorDecomposition& multi, const EnsembleState& ens) {
    return grand_canonical_sum(multi, ens, [](int n, double) { return static_cast<double>(n); });
}

GrandCanonicalFit match_grand_canonical(const MultiSectorDecomposition& multi, double e_target,
                                        double n_target, double rel_tol) {
    if (!(n_target > 0.0) || !(n_target < multi.n_max())) {
        throw NumericalError("match_grand_canonical: <N> target must lie in (0, n_max)");
    }
    double e_min = std::numeric_limits<double>::infinity();
    double e_max = -std::numeric_limits<double>::infinity();
    for (const auto& sector : multi.sectors) {
        e_min = std::min(e_min, sector.eigenvalues.minCoeff());
        e_max = std::max(e_max, sector.eigenvalues.maxCoeff());
    }
    const double e_scale = std::max(e_max - e_min, 1e-12);
    const double n_tol = 0.01 * rel_tol * n_target;
    const double e_tol = rel_tol * e_scale;

    // <N> is monotone increasing in mu at fixed T.
    const auto mu_for_number = [&](double temperature) {
        double lo = -1.0, hi = 1.0;
        for (int grow = 0; grow < 200; ++grow) {
            if (grand_canonical_number(multi, grand_canonical(multi, temperature, lo)) < n_target)
                break;
            lo *= 2.0;
        }
        for (int grow = 0; grow < 200; ++grow) {
            if (grand_canonical_number(multi, grand_canonical(multi, temperature, hi)) > n_target)
                break;
            hi *= 2.0;
        }
        for (int iter = 0; iter < 200; ++iter) {
            const double mid = 0.5 * (lo + hi);
            const double n_mid =
                grand_canonical_number(multi, grand_canonical(multi, temperature, mid));
            if (std::abs(n_mid - n_target) <= n_tol) return mid;
            if (n_mid < n_target) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        return 0.5 * (lo + hi);
    };

    // <H> at fixed <N> grows with T (positive heat capacity).
    double log_lo = std::log(1e-6 * e_scale);
    double log_hi = std::log(1e6 * e_scale);
    const auto energy_at = [&](double log_t) {
        const double temperature = std::exp(log_t);
        const double mu = mu_for_number(temperature);
        return std::pair<double, double>(
            grand_canonical_energy(multi, grand_canonical(multi, temperature, mu)), mu);
    };
    if (energy_at(log_lo).first > e_target || energy_at(log_hi).first < e_target) {
        throw NumericalError(
            "match_grand_canonical: energy target " + std::to_string(e_target) +
            " not attainable at <N>=" + std::to_string(n_target) + " (bracket [" +
            std::to_string(energy_at(log_lo).first) + ", " +
            std::to_string(energy_at(log_hi).first) + "])");
    }
    for (int iter = 0; iter < 300; ++iter) {
        const double mid = 0.5 * (log_lo + log_hi);
        const auto [e_mid, mu_mid] = energy_at(mid);
        if (std::abs(e_mid - e_target) <= e_tol) {
            GrandCanonicalFit fit;
            fit.temperature = std::exp(mid);
            fit.chemical_potential = mu_mid;
            fit.energy_residual = e_mid - e_target;
            const auto ens = grand_canonical(multi, fit.temperature, fit.chemical_potential);
            fit.number_residual = grand_canonical_number(multi, ens) - n_target;
            return fit;
        }
        if (e_mid < e_target) {
            log_lo = mid;
        } else {
            log_hi = mid;
        }
    }
    const auto [e_final, mu_final] = energy_at(0.5 * (log_lo + log_hi));
    throw NumericalError("match_grand_canonical: no convergence after 300 iterations (residual " +
                         std::to_string(e_final - e_target) + ")");
}

namespace {

void accumulate_rdm(BlockDensityMatrix& rho, const Eigen::VectorXcd& amplitudes,
                    const PartitionMap& pmap, double weight) {
    std::map<int, Eigen::MatrixXcd> slices;
    for (int na : pmap.feasible_na()) {
        slices.emplace(na, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(pmap.dim_a(na)),
                                                  static_cast<Eigen::Index>(pmap.dim_b(na))));
    }
    for (std::size_t i = 0; i < pmap.full_dim(); ++i) {
        const auto& t = pmap.triple(i);
        slices.at(t.n_a)(t.rank_a, t.rank_b) = amplitudes[static_cast<Eigen::Index>(i)];
    }
    for (auto& [na, m] : slices) {
        auto [it, inserted] = rho.blocks.try_emplace(
            na, Eigen::MatrixXcd::Zero(m.rows(), m.rows()));
        it->second += weight * (m * m.adjoint());
    }
}

}  // namespace

BlockDensityMatrix ensemble_rdm(const EnsembleState& ensemble,
                                const SpectralDecomposition& decomp, const PartitionMap& pmap) {
    if (ensemble.kind == EnsembleKind::grand_canonical) {
        throw NumericalError("ensemble_rdm: grand-canonical needs the multi-sector overload");
    }
    if (ensemble.weights.size() != static_cast<std::size_t>(decomp.dim())) {
        throw NumericalError("ensemble_rdm: ensemble does not match the decomposition");
    }
    BlockDensityMatrix rho;
    rho.sites = pmap.subsystem_sites();
    for (Eigen::Index n = 0; n < decomp.dim(); ++n) {
        const double w = ensemble.weights[static_cast<std::size_t>(n)];
        if (w == 0.0) continue;
        accumulate_rdm(rho, decomp.eigenvectors.col(n).cast<std::complex<double>>(), pmap, w);
    }
    return rho;
}

BlockDensityMatrix ensemble_rdm(const EnsembleState& ensemble,
                                const MultiSectorDecomposition& multi,
                                const std::vector<PartitionMap>& pmaps) {
    if (ensemble.weights.size() != multi.total_dim()) {
        throw NumericalError("ensemble_rdm: ensemble does not match the multi-sector decomposition");
    }
    if (pmaps.size() != multi.sectors.size()) {
        throw NumericalError("ensemble_rdm: need one partition map per sector");
    }
    BlockDensityMatrix rho;
    rho.sites = pmaps.front().subsystem_sites();
    std::size_t k = 0;
    for (int n = 0; n <= multi.n_max(); ++n) {
        const auto& sector = multi.sectors[static_cast<std::size_t>(n)];
        const auto& pmap = pmaps[static_cast<std::size_t>(n)];
        if (pmap.subsystem_sites() != rho.sites) {
            throw NumericalError("ensemble_rdm: partition maps use inconsistent subsystems");
        }
        for (Eigen::Index i = 0; i < sector.dim(); ++i, ++k) {
            const double w = ensemble.weights[k];
            if (w == 0.0) continue;
            accumulate_rdm(rho, sector.eigenvectors.col(i).cast<std::complex<double>>(), pmap, w);
        }
    }
    return rho;
}

double ensemble_global_purity(const EnsembleState& ensemble) {
    double sum_sq = 0.0;
    for (double w : ensemble.weights) sum_sq += w * w;
    return sum_sq;
}

PartitionStats thermal_renyi(const EnsembleState& ensemble, const SpectralDecomposition& decomp,
                             const SectorBasis& basis, int volume, PartitionMode mode) {
    const auto family = partition_family(basis.sites(), volume, mode);
    std::vector<double> entropies;
    entropies.reserve(family.size());
    for (const auto& subset : family) {
        entropies.push_back(renyi2(ensemble_rdm(ensemble, decomp, PartitionMap(basis, subset))));
    }
    PartitionStats stats;
    stats.count = static_cast<int>(entropies.size());
    for (double s : entropies) stats.mean += s;
    stats.mean /= static_cast<double>(entropies.size());
    double var = 0.0;
    for (double s : entropies) var += (s - stats.mean) * (s - stats.mean);
    stats.spread = std::sqrt(var / static_cast<double>(entropies.size()));
    return stats;
}

}  // namespace qlab
