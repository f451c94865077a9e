#include "doctest.h"

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "qlab/entanglement.hpp"

using namespace qlab;

namespace {

Eigen::VectorXcd random_state(std::size_t dim, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    Eigen::VectorXcd psi(static_cast<Eigen::Index>(dim));
    for (Eigen::Index i = 0; i < psi.size(); ++i) psi[i] = {gauss(rng), gauss(rng)};
    psi.normalize();
    return psi;
}

// Embed a BlockDensityMatrix into the subsystem's occupation product space so
// it can be compared entry-by-entry against the dense kron-reshape oracle.
Eigen::MatrixXcd to_product_space(const BlockDensityMatrix& rho, int total_particles) {
    const int local_dim = total_particles + 1;
    const int la = static_cast<int>(rho.sites.size());
    std::size_t dim = 1;
    for (int k = 0; k < la; ++k) dim *= static_cast<std::size_t>(local_dim);
    Eigen::MatrixXcd dense = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                                    static_cast<Eigen::Index>(dim));
    for (const auto& [na, block] : rho.blocks) {
        if (block.rows() == 0) continue;
        SectorBasis sub(la, na);
        for (std::size_t r = 0; r < sub.dim(); ++r) {
            std::size_t row = 0;
            for (auto o : sub.state(r)) row = row * static_cast<std::size_t>(local_dim) + o;
            for (std::size_t c = 0; c < sub.dim(); ++c) {
                std::size_t col = 0;
                for (auto o : sub.state(c)) col = col * static_cast<std::size_t>(local_dim) + o;
                dense(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) =
                    block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
            }
        }
    }
    return dense;
}

}  // namespace

TEST_CASE("Bell-type state splits into two half-weight blocks") {
    SectorBasis basis(2, 2);
    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(3);
    psi[static_cast<Eigen::Index>(basis.rank(std::vector<int>{2, 0}))] = 1.0 / std::sqrt(2.0);
    psi[static_cast<Eigen::Index>(basis.rank(std::vector<int>{0, 2}))] = 1.0 / std::sqrt(2.0);

    const auto rho = reduce(psi, PartitionMap(basis, {0}));
    rho.validate();
    CHECK(rho.block_weight(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rho.block_weight(2) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rho.block_weight(1) == doctest::Approx(0.0).epsilon(1e-12));

    CHECK(purity(rho) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(renyi2(rho) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(von_neumann(rho) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("product Mott state stays pure under any cut") {
    SectorBasis basis(6, 6);
    const auto psi = fock_state(basis, {1, 1, 1, 1, 1, 1});
    for (const auto& subset : {std::vector<int>{0}, {0, 1}, {2, 4}, {0, 1, 2, 3, 4}}) {
        const auto rho = reduce(psi, PartitionMap(basis, subset));
        rho.validate();
        CHECK(purity(rho) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(renyi2(rho) == doctest::Approx(0.0).epsilon(1e-12));
    }
}

TEST_CASE("maximally mixed single site has purity 1/d") {
    // uniform superposition over (2,0),(1,1),(0,2) with random phases gives a
    // diagonal single-site RDM; engineer the exactly mixed case instead
    BlockDensityMatrix rho;
    rho.sites = {0};
    for (int n = 0; n <= 2; ++n) {
        rho.blocks.emplace(n, Eigen::MatrixXcd::Constant(1, 1, 1.0 / 3.0));
    }
    rho.validate();
    CHECK(purity(rho) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("reduce matches the dense kron-reshape oracle at L=N=4") {
    SectorBasis basis(4, 4);
    for (std::uint64_t seed : {11U, 12U}) {
        const Eigen::VectorXcd psi = random_state(basis.dim(), seed);
        for (const auto& subset : {std::vector<int>{0, 1}, {1, 3}, {0}, {0, 2, 3}}) {
            const auto rho = reduce(psi, PartitionMap(basis, subset));
            rho.validate();
            const auto dense = to_product_space(rho, basis.particles());
            const auto expected = oracles::dense_reduced_density_matrix(psi, basis, subset);
            CHECK((dense - expected).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("renyi2 cross-checked against the dense oracle at L=N=4") {
    SectorBasis basis(4, 4);
    SparseSymMatrix h = build_hamiltonian({4, 4, 1.0, 1.0 / 0.64}, basis);
    const auto decomp = eigh(h);
    const auto psi = evolve(decomp, fock_state(basis, {1, 1, 1, 1}), 5.0);

    const std::vector<int> subset{0, 1};
    const double s = renyi2(reduce(psi.amplitudes, PartitionMap(basis, subset)));
    const Eigen::MatrixXcd dense =
        oracles::dense_reduced_density_matrix(psi.amplitudes, basis, subset);
    const double oracle = -std::log((dense * dense).trace().real());
    CHECK(s == doctest::Approx(oracle).epsilon(1e-10));
    CHECK(s > 0.1);  // the quench actually entangles
}

TEST_CASE("pure-state complementarity S_A = S_B") {
    SectorBasis basis(6, 6);
    SparseSymMatrix h = build_hamiltonian({6, 6, 1.0, 1.0 / 0.64}, basis);
    const auto decomp = eigh(h);
    const auto psi = evolve(decomp, fock_state(basis, {1, 1, 1, 1, 1, 1}), 6.0);

    for (const auto& subset : {std::vector<int>{0}, {0, 1}, {0, 1, 2}, {1, 3, 5}}) {
        std::vector<int> complement;
        for (int s = 0; s < 6; ++s) {
            if (std::find(subset.begin(), subset.end(), s) == subset.end()) complement.push_back(s);
        }
        const double s_a = renyi2(reduce(psi.amplitudes, PartitionMap(basis, subset)));
        const double s_b = renyi2(reduce(psi.amplitudes, PartitionMap(basis, complement)));
        CHECK(std::abs(s_a - s_b) < 1e-10);
    }
}

TEST_CASE("full-system entropy of the evolved pure state vanishes") {
    SectorBasis basis(6, 6);
    SparseSymMatrix h = build_hamiltonian({6, 6, 1.0, 1.0 / 0.64}, basis);
    const auto decomp = eigh(h);
    const auto psi0 = fock_state(basis, {1, 1, 1, 1, 1, 1});
    std::vector<double> times;
    for (int k = 0; k <= 16; ++k) times.push_back(0.5 * k);
    PartitionMap full(basis, {0, 1, 2, 3, 4, 5});
    for (const auto& psi : trajectory(decomp, psi0, times)) {
        CHECK(renyi2(reduce(psi.amplitudes, full)) < 1e-10);
    }
}

TEST_CASE("mutual information basics") {
    SectorBasis basis(2, 2);

    // product-like: Mott state of one atom per site
    const auto mott = fock_state(basis, {1, 1});
    CHECK(std::abs(mutual_information(mott.amplitudes, basis, {0}, {1})) < 1e-12);

    // Bell-type state: I_AB = 2 ln 2 when A u B is the full pure system
    Eigen::VectorXcd bell = Eigen::VectorXcd::Zero(3);
    bell[0] = 1.0 / std::sqrt(2.0);
    bell[2] = 1.0 / std::sqrt(2.0);
    CHECK(mutual_information(bell, basis, {0}, {1}) ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));

    CHECK_THROWS_AS(mutual_information(bell, basis, {0}, {0}), NumericalError);
}

TEST_CASE("mutual information is non-negative for quenched states") {
    SectorBasis basis(4, 4);
    const auto decomp = eigh(build_hamiltonian({4, 4, 1.0, 1.0 / 0.64}, basis));
    for (double t : {1.0, 3.0, 7.5}) {
        const auto psi = evolve(decomp, fock_state(basis, {1, 1, 1, 1}), t);
        for (const auto& [a, b] : std::vector<std::pair<std::vector<int>, std::vector<int>>>{
                 {{0}, {1}}, {{0}, {3}}, {{0, 1}, {2, 3}}, {{0, 2}, {3}}}) {
            CHECK(mutual_information(psi.amplitudes, basis, a, b) > -1e-9);
        }
    }
}

TEST_CASE("partition families") {
    CHECK(partition_family(6, 2, PartitionMode::contiguous).size() == 5);
    CHECK(partition_family(6, 2, PartitionMode::all_subsets).size() == 15);
    CHECK(partition_family(6, 6, PartitionMode::contiguous).size() == 1);
    CHECK_THROWS_AS(partition_family(6, 0, PartitionMode::contiguous), NumericalError);
    CHECK_THROWS_AS(partition_family(6, 7, PartitionMode::contiguous), NumericalError);
}

TEST_CASE("partition averages: trivial limits") {
    SectorBasis basis(6, 6);

    const auto mott = fock_state(basis, {1, 1, 1, 1, 1, 1});
    const auto v1 = partition_average(mott.amplitudes, basis, 1);
    CHECK(v1.mean == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(v1.spread == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(v1.count == 6);

    SparseSymMatrix h = build_hamiltonian({6, 6, 1.0, 1.0 / 0.64}, basis);
    const auto psi = evolve(eigh(h), mott, 6.0);
    const auto full = partition_average(psi.amplitudes, basis, 6);
    CHECK(std::abs(full.mean) < 1e-10);
    CHECK(full.count == 1);
}

TEST_CASE("contiguous v=2 average equals the brute-force mean over 5 windows") {
    SectorBasis basis(6, 6);
    SparseSymMatrix h = build_hamiltonian({6, 6, 1.0, 1.0 / 0.64}, basis);
    const auto psi = evolve(eigh(h), fock_state(basis, {1, 1, 1, 1, 1, 1}), 6.0);

    double mean = 0.0;
    std::vector<double> entropies;
    for (int start = 0; start <= 4; ++start) {
        entropies.push_back(
            renyi2(reduce(psi.amplitudes, PartitionMap(basis, {start, start + 1}))));
        mean += entropies.back();
    }
    mean /= 5.0;
    const auto stats = partition_average(psi.amplitudes, basis, 2);
    CHECK(stats.mean == doctest::Approx(mean).epsilon(1e-12));
    CHECK(stats.count == 5);
    double var = 0.0;
    for (double s : entropies) var += (s - mean) * (s - mean);
    CHECK(stats.spread == doctest::Approx(std::sqrt(var / 5.0)).epsilon(1e-10));
}

TEST_CASE("entropy growth is monotone up to its first maximum") {
    SectorBasis basis(6, 6);
    SparseSymMatrix h = build_hamiltonian({6, 6, 1.0, 1.0 / 0.64}, basis);
    const auto decomp = eigh(h);
    const auto psi0 = fock_state(basis, {1, 1, 1, 1, 1, 1});
    std::vector<double> times;
    for (int k = 0; k <= 40; ++k) times.push_back(0.2 * k);
    const auto states = trajectory(decomp, psi0, times);

    for (int volume : {1, 2, 3}) {
        std::vector<double> entropy;
        for (const auto& psi : states) {
            entropy.push_back(partition_average(psi.amplitudes, basis, volume).mean);
        }
        // first maximum = first genuine downturn of the curve
        std::size_t first_peak = entropy.size() - 1;
        for (std::size_t i = 0; i + 1 < entropy.size(); ++i) {
            if (entropy[i + 1] < entropy[i] - 0.02) {
                first_peak = i;
                break;
            }
        }
        double running_max = 0.0;
        for (std::size_t i = 0; i <= first_peak; ++i) {
            CHECK(entropy[i] >= running_max - 0.05);
            running_max = std::max(running_max, entropy[i]);
        }
        CHECK(entropy.front() == doctest::Approx(0.0).epsilon(1e-12));
        // by its first peak the curve has essentially saturated
        const double global_max = *std::max_element(entropy.begin(), entropy.end());
        CHECK(entropy[first_peak] > 0.8 * global_max);
        CHECK(global_max > 0.5);
    }
}

TEST_CASE("piecewise fit recovers exact two-segment data") {
    std::vector<double> times, values;
    const double slope = 0.8, tb = 1.3, s0 = 0.05;
    for (int k = 0; k <= 30; ++k) {
        const double t = 0.1 * k;
        times.push_back(t);
        values.push_back(s0 + slope * std::min(t, tb));
    }
    const auto fit = piecewise_linear_fit(times, values);
    CHECK(fit.slope == doctest::Approx(slope).epsilon(1e-6));
    CHECK(fit.break_time == doctest::Approx(tb).epsilon(1e-4));
    CHECK(fit.plateau == doctest::Approx(s0 + slope * tb).epsilon(1e-6));
}

TEST_CASE("piecewise fit of constant data returns slope zero") {
    std::vector<double> times{0.0, 1.0, 2.0, 3.0};
    std::vector<double> values{0.7, 0.7, 0.7, 0.7};
    const auto fit = piecewise_linear_fit(times, values);
    CHECK(fit.slope == 0.0);
    CHECK(fit.break_time == 0.0);
    CHECK(fit.plateau == doctest::Approx(0.7));
}

TEST_CASE("piecewise fit input validation") {
    std::vector<double> times{0.0, 1.0, 2.0};
    std::vector<double> values{0.0, 1.0, 1.0};
    CHECK_THROWS_AS(piecewise_linear_fit(times, values), NumericalError);
    std::vector<double> bad_times{0.0, 1.0, 1.0, 2.0};
    std::vector<double> four{0.0, 1.0, 1.0, 1.0};
    CHECK_THROWS_AS(piecewise_linear_fit(bad_times, four), NumericalError);
}
