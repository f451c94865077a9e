#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "qlab/entanglement.hpp"
#include "qlab/spectral.hpp"

namespace qlab {

/// Two identical copies of an L-site chain, interleaved as modes
/// (copy1 site 0..L-1, copy2 site 0..L-1), living in the full 2L-mode
/// total-2N sector: the beam splitter conserves only per-column totals.
struct TwoCopyState {
    std::shared_ptr<const SectorBasis> basis;  // SectorBasis(2L, 2N)
    Eigen::VectorXcd amplitudes;
    int copy_sites = 0;  // L

    double norm() const { return amplitudes.norm(); }
};

/// |psi> x |psi> embedded into the two-copy sector.
TwoCopyState embed_product(const Eigen::VectorXcd& psi, const SectorBasis& single);
TwoCopyState embed_product(const QuenchState& psi, const SectorBasis& single);

/// Fock matrix element <m1, m2| U_BS |n1, n2> of the 50:50 two-mode beam
/// splitter with the real convention b1 = (a1 + a2)/sqrt(2),
/// b2 = (a1 - a2)/sqrt(2). Zero when particle number is not conserved.
double bs_element(int n1, int n2, int m1, int m2);

/// Dense (total+1) x (total+1) block B(m1, n1) of bs_element at fixed total.
Eigen::MatrixXd beamsplitter_block(int total);

/// Applies the two-mode beam splitter to every column pair (x, x+L), in place.
void apply_beamsplitter(TwoCopyState& state);

/// <Parity(A)> = sum_s |amp_s|^2 prod_{i in A} (-1)^{n_i}; site indices are
/// copy-1 sites 0..L-1. After the beam splitter this equals Tr rho_A^2.
double exact_parity(const TwoCopyState& state, const std::vector<int>& subsystem);

/// One destructive site-resolved readout of both copies.
struct ShotRecord {
    std::vector<int> occupations;  // 2L entries
};

/// +-1 parity of the subsystem inside the chosen copy (0 or 1).
int shot_parity(const ShotRecord& shot, const std::vector<int>& subsystem, int copy_sites,
                int copy = 0);

/// i.i.d. samples from |amplitude|^2; deterministic for a fixed seed.
std::vector<ShotRecord> sample_shots(const TwoCopyState& state, int n_shots, std::uint64_t seed);

struct PurityEstimate {
    double value = 0.0;
    double std_error = 0.0;
    int shots = 0;
};

/// Sample mean of the parity on `subsystem` (copy 1) and its standard error.
PurityEstimate purity_estimator(std::span<const ShotRecord> shots,
                                const std::vector<int>& subsystem, int copy_sites);

struct EntropyEstimate {
    double value = 0.0;
    double lower = 0.0;            // 2.5% bootstrap percentile
    double upper = 0.0;            // 97.5% bootstrap percentile
    bool upper_unbounded = false;  // bootstrap purity distribution crossed <= 0
    PurityEstimate purity;
};

/// S = -ln(max(purity, floor)) with a bootstrap percentile confidence
/// interval. When resampled purities reach <= 0 the upper error is reported
/// as unbounded, reproducing the asymmetric error bars of low-purity data.
EntropyEstimate entropy_from_shots(std::span<const ShotRecord> shots,
                                   const std::vector<int>& subsystem, int copy_sites,
                                   int n_bootstrap, std::uint64_t seed,
                                   double purity_floor = 1e-6);

/// Idealized readout imperfection: each site's parity flips independently
/// with probability epsilon (an extra detected atom).
std::vector<ShotRecord> apply_parity_noise(std::span<const ShotRecord> shots, double epsilon,
                                           std::uint64_t seed);

}  // namespace qlab
