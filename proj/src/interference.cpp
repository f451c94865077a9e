#include "qlab/interference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <string>

namespace qlab {

namespace {

// exact in double up to 18!
double factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
}

double binomial_coeff(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double b = 1.0;
    for (int i = 1; i <= k; ++i) b = b * (n - k + i) / i;
    return b;
}

// portable uniform in [0, 1): 53 random mantissa bits
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

double bs_element(int n1, int n2, int m1, int m2) {
    if (n1 < 0 || n2 < 0 || m1 < 0 || m2 < 0) {
        throw NumericalError("bs_element: negative occupation");
    }
    if (n1 + n2 != m1 + m2) return 0.0;
    const int total = n1 + n2;
    double sum = 0.0;
    for (int j = std::max(0, m1 - n2); j <= std::min(n1, m1); ++j) {
        const int k = m1 - j;
        const double sign = ((n2 - k) % 2 == 0) ? 1.0 : -1.0;
        sum += sign * binomial_coeff(n1, j) * binomial_coeff(n2, k);
    }
    const double ratio = std::sqrt(factorial(m1) * factorial(m2) /
                                   (factorial(n1) * factorial(n2)));
    return sum * ratio * std::pow(0.5, 0.5 * total);
}

Eigen::MatrixXd beamsplitter_block(int total) {
    Eigen::MatrixXd block(total + 1, total + 1);
    for (int m1 = 0; m1 <= total; ++m1) {
        for (int n1 = 0; n1 <= total; ++n1) {
            block(m1, n1) = bs_element(n1, total - n1, m1, total - m1);
        }
    }
    return block;
}

TwoCopyState embed_product(const Eigen::VectorXcd& psi, const SectorBasis& single) {
    if (static_cast<std::size_t>(psi.size()) != single.dim()) {
        throw NumericalError("embed_product: state does not match the single-copy basis");
    }
    const int sites = single.sites();
    const int particles = single.particles();
    TwoCopyState two;
    two.copy_sites = sites;
    two.basis = std::make_shared<SectorBasis>(2 * sites, 2 * particles, single.max_per_site());
    two.amplitudes = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(two.basis->dim()));

    std::vector<occ_t> combined(static_cast<std::size_t>(2 * sites));
    for (std::size_t i = 0; i < single.dim(); ++i) {
        const auto occ_i = single.state(i);
        std::copy(occ_i.begin(), occ_i.end(), combined.begin());
        for (std::size_t j = 0; j < single.dim(); ++j) {
            const auto occ_j = single.state(j);
            std::copy(occ_j.begin(), occ_j.end(),
                      combined.begin() + static_cast<std::ptrdiff_t>(sites));
            const std::size_t target = two.basis->rank(std::span<const occ_t>(combined));
            two.amplitudes[static_cast<Eigen::Index>(target)] =
                psi[static_cast<Eigen::Index>(i)] * psi[static_cast<Eigen::Index>(j)];
        }
    }
    return two;
}

TwoCopyState embed_product(const QuenchState& psi, const SectorBasis& single) {
    return embed_product(psi.amplitudes, single);
}

void apply_beamsplitter(TwoCopyState& state) {
    if (!state.basis) throw NumericalError("apply_beamsplitter: empty state");
    const SectorBasis& basis = *state.basis;
    const int sites = state.copy_sites;
    const int total_particles = basis.particles();

    std::vector<Eigen::MatrixXd> blocks;
    blocks.reserve(static_cast<std::size_t>(total_particles) + 1);
    for (int total = 0; total <= total_particles; ++total) {
        blocks.push_back(beamsplitter_block(total));
    }

    std::vector<occ_t> occ(static_cast<std::size_t>(2 * sites));
    std::vector<std::size_t> member(static_cast<std::size_t>(total_particles) + 1);
    Eigen::VectorXcd gathered(total_particles + 1), mixed(total_particles + 1);

    for (int column = 0; column < sites; ++column) {
        const std::size_t left = static_cast<std::size_t>(column);
        const std::size_t right = static_cast<std::size_t>(column + sites);
        for (std::size_t i = 0; i < basis.dim(); ++i) {
            const auto view = basis.state(i);
            if (view[right] != 0) continue;  // group representative: all atoms in mode x
            const int total = view[left];
            if (total == 0) continue;  // nothing to mix
            std::copy(view.begin(), view.end(), occ.begin());
            for (int m1 = total; m1 >= 0; --m1) {
                occ[left] = static_cast<occ_t>(m1);
                occ[right] = static_cast<occ_t>(total - m1);
                member[static_cast<std::size_t>(m1)] =
                    (m1 == total) ? i : basis.rank(std::span<const occ_t>(occ));
            }
            for (int n1 = 0; n1 <= total; ++n1) {
                gathered[n1] =
                    state.amplitudes[static_cast<Eigen::Index>(member[static_cast<std::size_t>(n1)])];
            }
            mixed.head(total + 1) = blocks[static_cast<std::size_t>(total)] * gathered.head(total + 1);
            for (int m1 = 0; m1 <= total; ++m1) {
                state.amplitudes[static_cast<Eigen::Index>(member[static_cast<std::size_t>(m1)])] =
                    mixed[m1];
            }
        }
    }
}

double exact_parity(const TwoCopyState& state, const std::vector<int>& subsystem) {
    if (!state.basis) throw NumericalError("exact_parity: empty state");
    for (int s : subsystem) {
        if (s < 0 || s >= state.copy_sites) {
            throw NumericalError("exact_parity: site index outside copy 1");
        }
    }
    const SectorBasis& basis = *state.basis;
    double expectation = 0.0;
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const double p = std::norm(state.amplitudes[static_cast<Eigen::Index>(i)]);
        if (p == 0.0) continue;
        const auto occ = basis.state(i);
        int odd_sites = 0;
        for (int s : subsystem) odd_sites += occ[static_cast<std::size_t>(s)] & 1;
        expectation += (odd_sites & 1) ? -p : p;
    }
    return expectation;
}

int shot_parity(const ShotRecord& shot, const std::vector<int>& subsystem, int copy_sites,
                int copy) {
    int odd_sites = 0;
    for (int s : subsystem) {
        const std::size_t mode = static_cast<std::size_t>(s + copy * copy_sites);
        if (mode >= shot.occupations.size()) {
            throw NumericalError("shot_parity: site index out of range");
        }
        odd_sites += shot.occupations[mode] & 1;
    }
    return (odd_sites & 1) ? -1 : 1;
}

std::vector<ShotRecord> sample_shots(const TwoCopyState& state, int n_shots, std::uint64_t seed) {
    if (n_shots < 1) throw NumericalError("sample_shots: need at least one shot");
    if (!state.basis) throw NumericalError("sample_shots: empty state");
    const SectorBasis& basis = *state.basis;

    std::vector<double> cumulative(basis.dim());
    double running = 0.0;
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        running += std::norm(state.amplitudes[static_cast<Eigen::Index>(i)]);
        cumulative[i] = running;
    }
    if (std::abs(running - 1.0) > 1e-8) {
        throw NumericalError("sample_shots: state is not normalized (|psi|^2 = " +
                             std::to_string(running) + ")");
    }

    std::mt19937_64 rng(seed);
    std::vector<ShotRecord> shots;
    shots.reserve(static_cast<std::size_t>(n_shots));
    for (int k = 0; k < n_shots; ++k) {
        const double u = uniform01(rng) * running;
        const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
        const std::size_t index = std::min(
            static_cast<std::size_t>(std::distance(cumulative.begin(), it)), basis.dim() - 1);
        shots.push_back(ShotRecord{basis.state_vector(index)});
    }
    return shots;
}

PurityEstimate purity_estimator(std::span<const ShotRecord> shots,
                                const std::vector<int>& subsystem, int copy_sites) {
    if (shots.size() < 2) throw NumericalError("purity_estimator: need at least 2 shots");
    double mean = 0.0;
    for (const auto& shot : shots) mean += shot_parity(shot, subsystem, copy_sites);
    mean /= static_cast<double>(shots.size());
    double var = 0.0;
    for (const auto& shot : shots) {
        const double d = shot_parity(shot, subsystem, copy_sites) - mean;
        var += d * d;
    }
    var /= static_cast<double>(shots.size() - 1);
    PurityEstimate est;
    est.value = mean;
    est.std_error = std::sqrt(var / static_cast<double>(shots.size()));
    est.shots = static_cast<int>(shots.size());
    return est;
}

EntropyEstimate entropy_from_shots(std::span<const ShotRecord> shots,
                                   const std::vector<int>& subsystem, int copy_sites,
                                   int n_bootstrap, std::uint64_t seed, double purity_floor) {
    if (n_bootstrap < 1) throw NumericalError("entropy_from_shots: need n_bootstrap >= 1");
    EntropyEstimate est;
    est.purity = purity_estimator(shots, subsystem, copy_sites);
    est.value = -std::log(std::max(est.purity.value, purity_floor));

    std::vector<int> parities(shots.size());
    for (std::size_t i = 0; i < shots.size(); ++i) {
        parities[i] = shot_parity(shots[i], subsystem, copy_sites);
    }

    std::mt19937_64 rng(seed);
    std::vector<double> resampled(static_cast<std::size_t>(n_bootstrap));
    for (int b = 0; b < n_bootstrap; ++b) {
        long long sum = 0;
        for (std::size_t k = 0; k < parities.size(); ++k) {
            const std::size_t pick =
                static_cast<std::size_t>(uniform01(rng) * static_cast<double>(parities.size()));
            sum += parities[std::min(pick, parities.size() - 1)];
        }
        resampled[static_cast<std::size_t>(b)] = static_cast<double>(sum) /
                                                 static_cast<double>(parities.size());
    }
    std::sort(resampled.begin(), resampled.end());
    const auto percentile = [&](double q) {
        const double pos = q * static_cast<double>(resampled.size() - 1);
        const std::size_t lo = static_cast<std::size_t>(pos);
        const std::size_t hi = std::min(lo + 1, resampled.size() - 1);
        const double frac = pos - static_cast<double>(lo);
        return resampled[lo] * (1.0 - frac) + resampled[hi] * frac;
    };
    const double purity_lo = percentile(0.025);  // -> upper entropy bound
    const double purity_hi = percentile(0.975);  // -> lower entropy bound

    est.lower = -std::log(std::max(purity_hi, purity_floor));
    if (purity_lo <= 0.0) {
        est.upper_unbounded = true;
        est.upper = std::numeric_limits<double>::infinity();
    } else {
        est.upper = -std::log(std::max(purity_lo, purity_floor));
    }
    return est;
}

std::vector<ShotRecord> apply_parity_noise(std::span<const ShotRecord> shots, double epsilon,
                                           std::uint64_t seed) {
    if (epsilon < 0.0 || epsilon > 1.0) {
        throw NumericalError("apply_parity_noise: epsilon must be in [0, 1]");
    }
    std::mt19937_64 rng(seed);
    std::vector<ShotRecord> noisy(shots.begin(), shots.end());
    if (epsilon == 0.0) return noisy;
    for (auto& shot : noisy) {
        for (auto& occupation : shot.occupations) {
            if (uniform01(rng) < epsilon) occupation += 1;  // one spurious atom flips parity
        }
    }
    return noisy;
}

}  // namespace qlab
