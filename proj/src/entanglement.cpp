#include "qlab/entanglement.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qlab {

double BlockDensityMatrix::trace() const {
    double sum = 0.0;
    for (const auto& [n, block] : blocks) sum += block.trace().real();
    return sum;
}

double BlockDensityMatrix::block_weight(int n_a) const {
    const auto it = blocks.find(n_a);
    return it == blocks.end() ? 0.0 : it->second.trace().real();
}

void BlockDensityMatrix::validate(double tol) const {
    if (std::abs(trace() - 1.0) > tol) {
        throw NumericalError("BlockDensityMatrix: trace deviates from 1 by " +
                             std::to_string(trace() - 1.0));
    }
    for (const auto& [n, block] : blocks) {
        if ((block - block.adjoint()).cwiseAbs().maxCoeff() > tol) {
            throw NumericalError("BlockDensityMatrix: block " + std::to_string(n) +
                                 " is not Hermitian");
        }
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(block,
                                                               Eigen::EigenvaluesOnly);
        if (solver.eigenvalues().minCoeff() < -tol) {
            throw NumericalError("BlockDensityMatrix: block " + std::to_string(n) +
                                 " has eigenvalue " +
                                 std::to_string(solver.eigenvalues().minCoeff()));
        }
    }
}

BlockDensityMatrix reduce(const Eigen::VectorXcd& amplitudes, const PartitionMap& pmap) {
    if (static_cast<std::size_t>(amplitudes.size()) != pmap.full_dim()) {
        throw NumericalError("reduce: state dimension does not match partition map");
    }
    // Gather psi into one rectangular slice per n_a, then rho_A = M M^dagger.
    std::map<int, Eigen::MatrixXcd> slices;
    for (int na : pmap.feasible_na()) {
        slices.emplace(na, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(pmap.dim_a(na)),
                                                  static_cast<Eigen::Index>(pmap.dim_b(na))));
    }
    for (std::size_t i = 0; i < pmap.full_dim(); ++i) {
        const auto& t = pmap.triple(i);
        slices.at(t.n_a)(t.rank_a, t.rank_b) = amplitudes[static_cast<Eigen::Index>(i)];
    }
    BlockDensityMatrix rho;
    rho.sites = pmap.subsystem_sites();
    for (auto& [na, m] : slices) {
        rho.blocks.emplace(na, m * m.adjoint());
    }
    return rho;
}

BlockDensityMatrix reduce(const QuenchState& psi, const PartitionMap& pmap) {
    return reduce(psi.amplitudes, pmap);
}

double purity(const BlockDensityMatrix& rho) {
    double sum = 0.0;
    for (const auto& [n, block] : rho.blocks) sum += block.squaredNorm();
    return sum;
}

double renyi2(const BlockDensityMatrix& rho) {
    const double p = purity(rho);
    if (p <= 0.0) {
        throw NumericalError("renyi2: non-positive purity " + std::to_string(p));
    }
    return -std::log(p);
}

double von_neumann(const BlockDensityMatrix& rho) {
    double entropy = 0.0;
    for (const auto& [n, block] : rho.blocks) {
        if (block.rows() == 0) continue;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(block, Eigen::EigenvaluesOnly);
        for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) {
            const double lambda = solver.eigenvalues()[k];
            if (lambda > 1e-15) entropy -= lambda * std::log(lambda);
        }
    }
    return entropy;
}

double mutual_information(const Eigen::VectorXcd& amplitudes, const SectorBasis& basis,
                          const std::vector<int>& sites_a, const std::vector<int>& sites_b) {
    for (int a : sites_a) {
        if (std::find(sites_b.begin(), sites_b.end(), a) != sites_b.end()) {
            throw NumericalError("mutual_information: subsystems overlap at site " +
                                 std::to_string(a));
        }
    }
    std::vector<int> joint = sites_a;
    joint.insert(joint.end(), sites_b.begin(), sites_b.end());
    std::sort(joint.begin(), joint.end());

    const double s_a = renyi2(reduce(amplitudes, PartitionMap(basis, sites_a)));
    const double s_b = renyi2(reduce(amplitudes, PartitionMap(basis, sites_b)));
    const double s_ab = renyi2(reduce(amplitudes, PartitionMap(basis, joint)));
    return s_a + s_b - s_ab;
}

std::vector<std::vector<int>> partition_family(int sites, int volume, PartitionMode mode) {
    if (volume < 1 || volume > sites) {
        throw NumericalError("partition_family: volume must be in 1..sites");
    }
    std::vector<std::vector<int>> family;
    if (mode == PartitionMode::contiguous) {
        for (int start = 0; start + volume <= sites; ++start) {
            std::vector<int> subset(static_cast<std::size_t>(volume));
            for (int k = 0; k < volume; ++k) subset[static_cast<std::size_t>(k)] = start + k;
            family.push_back(std::move(subset));
        }
    } else {
        std::vector<int> subset;
        auto recurse = [&](auto&& self, int next) -> void {
            if (static_cast<int>(subset.size()) == volume) {
                family.push_back(subset);
                return;
            }
            const int needed = volume - static_cast<int>(subset.size());
            for (int s = next; s <= sites - needed; ++s) {
                subset.push_back(s);
                self(self, s + 1);
                subset.pop_back();
            }
        };
        recurse(recurse, 0);
    }
    return family;
}

PartitionStats partition_average(const Eigen::VectorXcd& amplitudes, const SectorBasis& basis,
                                 int volume, PartitionMode mode) {
    const auto family = partition_family(basis.sites(), volume, mode);
    std::vector<double> entropies;
    entropies.reserve(family.size());
    for (const auto& subset : family) {
        entropies.push_back(renyi2(reduce(amplitudes, PartitionMap(basis, subset))));
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

namespace {

// Optimal slope and residual of the anchored hinge fit for a fixed break.
std::pair<double, double> hinge_fit_at(std::span<const double> times,
                                       std::span<const double> values, double break_time) {
    const double t0 = times[0];
    const double s0 = values[0];
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double w = std::min(times[i] - t0, break_time - t0);
        num += w * (values[i] - s0);
        den += w * w;
    }
    const double slope = den > 0.0 ? num / den : 0.0;
    double sse = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) {
        const double w = std::min(times[i] - t0, break_time - t0);
        const double r = values[i] - s0 - slope * w;
        sse += r * r;
    }
    return {slope, sse};
}

}  // namespace

PiecewiseFit piecewise_linear_fit(std::span<const double> times, std::span<const double> values) {
    if (times.size() < 4 || times.size() != values.size()) {
        throw NumericalError("piecewise_linear_fit: need at least 4 aligned samples");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (times[i] <= times[i - 1]) {
            throw NumericalError("piecewise_linear_fit: times must be strictly increasing");
        }
    }

    const double s0 = values[0];
    bool constant = true;
    for (double v : values) constant = constant && (v == s0);
    if (constant) {
        return PiecewiseFit{0.0, times[0], s0};
    }

    // Scan break candidates between consecutive samples, then refine the best
    // bracket by ternary search; the residual is smooth inside each bracket.
    double best_break = times[times.size() - 1];
    double best_sse = hinge_fit_at(times, values, best_break).second;
    for (std::size_t seg = 1; seg + 1 < times.size(); ++seg) {
        for (int sub = 0; sub <= 8; ++sub) {
            const double tb = times[seg] + (times[seg + 1] - times[seg]) * (sub / 8.0);
            if (tb <= times[0]) continue;
            const double sse = hinge_fit_at(times, values, tb).second;
            if (sse < best_sse) {
                best_sse = sse;
                best_break = tb;
            }
        }
    }
    double lo = std::max(times[0] + 1e-12, best_break - (times[times.size() - 1] - times[0]) / 8.0);
    double hi = std::min(times[times.size() - 1], best_break + (times[times.size() - 1] - times[0]) / 8.0);
    for (int iter = 0; iter < 200; ++iter) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (hinge_fit_at(times, values, m1).second <= hinge_fit_at(times, values, m2).second) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    const double refined = 0.5 * (lo + hi);
    if (hinge_fit_at(times, values, refined).second <= best_sse) {
        best_break = refined;
    }
    PiecewiseFit fit;
    fit.slope = hinge_fit_at(times, values, best_break).first;
    fit.break_time = best_break;
    fit.plateau = s0 + fit.slope * (best_break - times[0]);
    return fit;
}

}  // namespace qlab
