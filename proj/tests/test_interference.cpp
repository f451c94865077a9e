#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "qlab/interference.hpp"

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

}  // namespace

TEST_CASE("embedding the Mott product state") {
    SectorBasis basis(6, 6);
    const auto mott = fock_state(basis, {1, 1, 1, 1, 1, 1});
    const auto two = embed_product(mott, basis);
    CHECK(two.basis->dim() == 1352078);
    CHECK(two.norm() == doctest::Approx(1.0).epsilon(1e-12));
    const auto target = two.basis->rank(std::vector<int>(12, 1));
    CHECK(std::abs(two.amplitudes[static_cast<Eigen::Index>(target)]) ==
          doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("embedding matches the direct tensor product at L=N=2") {
    SectorBasis basis(2, 2);
    const auto psi = random_state(basis.dim(), 31);
    const auto two = embed_product(psi, basis);
    CHECK(two.norm() == doctest::Approx(1.0).epsilon(1e-12));

    for (std::size_t i = 0; i < basis.dim(); ++i) {
        for (std::size_t j = 0; j < basis.dim(); ++j) {
            std::vector<int> combined = basis.state_vector(i);
            const auto right = basis.state_vector(j);
            combined.insert(combined.end(), right.begin(), right.end());
            const auto idx = two.basis->rank(combined);
            const std::complex<double> expected =
                psi[static_cast<Eigen::Index>(i)] * psi[static_cast<Eigen::Index>(j)];
            CHECK(std::abs(two.amplitudes[static_cast<Eigen::Index>(idx)] - expected) < 1e-14);
        }
    }
}

TEST_CASE("beam-splitter matrix elements") {
    CHECK(bs_element(0, 0, 0, 0) == 1.0);
    // Hong-Ou-Mandel: two atoms never exit one per port
    CHECK(bs_element(1, 1, 1, 1) == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(bs_element(1, 1, 2, 0) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(bs_element(1, 1, 0, 2) == doctest::Approx(-1.0 / std::sqrt(2.0)).epsilon(1e-14));
    CHECK(bs_element(2, 1, 1, 0) == 0.0);  // number mismatch is zero by contract
    CHECK_THROWS_AS(bs_element(-1, 0, 0, 0), NumericalError);
}

TEST_CASE("beam-splitter blocks are orthogonal for totals up to 12") {
    for (int total = 0; total <= 12; ++total) {
        const Eigen::MatrixXd block = beamsplitter_block(total);
        const Eigen::MatrixXd gram = block * block.transpose();
        CHECK((gram - Eigen::MatrixXd::Identity(total + 1, total + 1)).cwiseAbs().maxCoeff() <
              1e-12);
    }
}

TEST_CASE("Hong-Ou-Mandel interference of a single occupied column") {
    // one atom in each copy of site 0 of a 2-site chain
    SectorBasis basis(2, 2);
    const auto psi = fock_state(basis, {1, 1});
    auto two = embed_product(psi, basis);
    apply_beamsplitter(two);
    CHECK(two.norm() == doctest::Approx(1.0).epsilon(1e-10));
    // no output configuration may hold an odd pair in any column
    for (std::size_t i = 0; i < two.basis->dim(); ++i) {
        const double p = std::norm(two.amplitudes[static_cast<Eigen::Index>(i)]);
        if (p < 1e-20) continue;
        const auto occ = two.basis->state(i);
        for (int column = 0; column < 2; ++column) {
            const int n1 = occ[static_cast<std::size_t>(column)];
            const int n2 = occ[static_cast<std::size_t>(column + 2)];
            CHECK((n1 + n2) % 2 == 0);
            CHECK(n1 % 2 == n2 % 2);
        }
    }
}

TEST_CASE("full pipeline matches the dense expm oracle at L=N=2,3,4") {
    for (int size : {2, 3, 4}) {
        SectorBasis basis(size, size);
        const auto psi = random_state(basis.dim(), 100 + static_cast<std::uint64_t>(size));
        auto two = embed_product(psi, basis);
        const Eigen::VectorXcd expected =
            oracles::beamsplitter_reference(*two.basis, size, two.amplitudes);
        apply_beamsplitter(two);
        CHECK((two.amplitudes - expected).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(two.norm() == doctest::Approx(1.0).epsilon(1e-10));
    }
}

TEST_CASE("per-column totals are conserved in expectation") {
    SectorBasis basis(3, 3);
    const auto psi = random_state(basis.dim(), 7);
    auto two = embed_product(psi, basis);

    const auto column_total = [&](const TwoCopyState& state, int column) {
        double total = 0.0;
        for (std::size_t i = 0; i < state.basis->dim(); ++i) {
            const double p = std::norm(state.amplitudes[static_cast<Eigen::Index>(i)]);
            if (p == 0.0) continue;
            const auto occ = state.basis->state(i);
            total += p * (occ[static_cast<std::size_t>(column)] +
                          occ[static_cast<std::size_t>(column + state.copy_sites)]);
        }
        return total;
    };
    std::vector<double> before;
    for (int column = 0; column < 3; ++column) before.push_back(column_total(two, column));
    apply_beamsplitter(two);
    for (int column = 0; column < 3; ++column) {
        CHECK(column_total(two, column) == doctest::Approx(before[static_cast<std::size_t>(column)])
                                               .epsilon(1e-12));
    }
}

TEST_CASE("exact parity equals subsystem purity (measurement theorem)") {
    SectorBasis basis(3, 3);
    SparseSymMatrix h = build_hamiltonian({3, 3, 1.0, 1.0 / 0.64}, basis);
    const auto decomp = eigh(h);
    const auto psi = evolve(decomp, fock_state(basis, {1, 1, 1}), 4.0);

    auto two = embed_product(psi, basis);
    apply_beamsplitter(two);

    CHECK(exact_parity(two, {}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(exact_parity(two, {0, 1, 2}) == doctest::Approx(1.0).epsilon(1e-8));

    for (const auto& subsystem : {std::vector<int>{0}, {1}, {2}, {0, 1}, {1, 2}, {0, 2}}) {
        const double target = purity(reduce(psi.amplitudes, PartitionMap(basis, subsystem)));
        CHECK(exact_parity(two, subsystem) == doctest::Approx(target).epsilon(1e-8));
    }
}

TEST_CASE("measurement theorem at the full system size") {
    SectorBasis basis(6, 6);
    SparseSymMatrix h = build_hamiltonian({6, 6, 1.0, 1.0 / 0.64}, basis);
    const auto decomp = eigh(h);
    const auto psi = evolve(decomp, fock_state(basis, {1, 1, 1, 1, 1, 1}), 6.0);

    auto two = embed_product(psi, basis);
    apply_beamsplitter(two);

    const std::vector<int> first_three{0, 1, 2};
    const double target = purity(reduce(psi.amplitudes, PartitionMap(basis, first_three)));
    CHECK(exact_parity(two, first_three) == doctest::Approx(target).epsilon(1e-8));
}

TEST_CASE("sampling a basis state is deterministic") {
    SectorBasis basis(2, 2);
    const auto psi = fock_state(basis, {2, 0});
    auto two = embed_product(psi, basis);
    const auto shots = sample_shots(two, 3, 42);
    REQUIRE(shots.size() == 3);
    for (const auto& shot : shots) {
        CHECK(shot.occupations == std::vector<int>{2, 0, 2, 0});
    }
    // same seed, same draw
    const auto again = sample_shots(two, 3, 42);
    for (std::size_t k = 0; k < shots.size(); ++k) {
        CHECK(again[k].occupations == shots[k].occupations);
    }
}

TEST_CASE("sampled frequencies follow the exact distribution") {
    SectorBasis basis(2, 2);
    SparseSymMatrix h = build_hamiltonian({2, 2, 1.0, 0.4}, basis);
    const auto psi = evolve(eigh(h), fock_state(basis, {1, 1}), 1.2);
    auto two = embed_product(psi, basis);
    apply_beamsplitter(two);

    const int n_shots = 100000;
    const auto shots = sample_shots(two, n_shots, 2024);
    std::map<std::vector<int>, int> histogram;
    for (const auto& shot : shots) histogram[shot.occupations] += 1;

    for (std::size_t i = 0; i < two.basis->dim(); ++i) {
        const double p = std::norm(two.amplitudes[static_cast<Eigen::Index>(i)]);
        const auto it = histogram.find(two.basis->state_vector(i));
        const double observed =
            it == histogram.end() ? 0.0 : static_cast<double>(it->second) / n_shots;
        const double sigma = std::sqrt(std::max(p * (1.0 - p) / n_shots, 1e-12));
        CHECK(std::abs(observed - p) < 4.0 * sigma + 1e-4);
    }
}

TEST_CASE("sampled parity converges to the exact parity") {
    SectorBasis basis(3, 3);
    SparseSymMatrix h = build_hamiltonian({3, 3, 1.0, 1.0 / 0.64}, basis);
    const auto psi = evolve(eigh(h), fock_state(basis, {1, 1, 1}), 3.0);
    auto two = embed_product(psi, basis);
    apply_beamsplitter(two);

    const auto shots = sample_shots(two, 20000, 99);
    for (const auto& subsystem : {std::vector<int>{0}, {0, 1}, {0, 1, 2}}) {
        const double exact = exact_parity(two, subsystem);
        const auto est = purity_estimator(shots, subsystem, 3);
        CHECK(std::abs(est.value - exact) < 3.0 * est.std_error + 1e-12);
    }
    // the noise-free global purity stays at 1 within statistical error
    const auto global = purity_estimator(shots, {0, 1, 2}, 3);
    CHECK(global.value + 3.0 * global.std_error >= 1.0);
}

TEST_CASE("purity estimator on constructed shot lists") {
    std::vector<ShotRecord> even(10, ShotRecord{{2, 0, 0, 2}});
    const auto all_even = purity_estimator(even, {0, 1}, 2);
    CHECK(all_even.value == 1.0);
    CHECK(all_even.std_error == 0.0);

    std::vector<ShotRecord> alternating;
    for (int k = 0; k < 10; ++k) {
        alternating.push_back(ShotRecord{{k % 2 == 0 ? 1 : 2, 0, 0, 0}});
    }
    const auto mixed = purity_estimator(alternating, {0}, 2);
    CHECK(mixed.value == doctest::Approx(0.0).epsilon(1e-15));

    CHECK_THROWS_AS(purity_estimator(std::span<const ShotRecord>(even.data(), 1), {0}, 2),
                    NumericalError);
}

TEST_CASE("entropy estimates and bootstrap intervals") {
    // all-even shots: S = 0 with a collapsed interval
    std::vector<ShotRecord> even(50, ShotRecord{{2, 0, 2, 0}});
    const auto zero = entropy_from_shots(even, {0, 1}, 2, 200, 5);
    CHECK(zero.value == 0.0);
    CHECK(zero.lower == 0.0);
    CHECK(zero.upper == 0.0);
    CHECK_FALSE(zero.upper_unbounded);

    // synthetic mean parity 1/2 -> S centered near ln 2
    std::vector<ShotRecord> mixed;
    for (int k = 0; k < 4000; ++k) {
        mixed.push_back(ShotRecord{{k % 4 == 0 ? 1 : 2, 0, 0, 0}});
    }
    const auto ln2 = entropy_from_shots(mixed, {0}, 2, 500, 6);
    CHECK(ln2.purity.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(ln2.value == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(ln2.lower < ln2.value);
    CHECK(ln2.upper > ln2.value);
    CHECK_FALSE(ln2.upper_unbounded);

    // purity indistinguishable from zero: unbounded upper error bar
    std::vector<ShotRecord> half;
    for (int k = 0; k < 40; ++k) {
        half.push_back(ShotRecord{{k % 2 == 0 ? 1 : 2, 0, 0, 0}});
    }
    const auto low = entropy_from_shots(half, {0}, 2, 400, 7);
    CHECK(low.upper_unbounded);
    CHECK(std::isinf(low.upper));
}

TEST_CASE("parity-flip noise model") {
    std::vector<ShotRecord> shots(2000, ShotRecord{{1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}});

    const auto clean = apply_parity_noise(shots, 0.0, 1);
    for (std::size_t k = 0; k < shots.size(); ++k) {
        CHECK(clean[k].occupations == shots[k].occupations);
    }

    // epsilon = 1/2 fully depolarizes the parity
    const auto scrambled = apply_parity_noise(shots, 0.5, 2);
    double mean = 0.0;
    for (const auto& shot : scrambled) mean += shot_parity(shot, {0, 1, 2, 3, 4, 5}, 6);
    mean /= static_cast<double>(scrambled.size());
    CHECK(std::abs(mean) < 4.0 / std::sqrt(static_cast<double>(scrambled.size())));

    CHECK_THROWS_AS(apply_parity_noise(shots, 1.5, 3), NumericalError);
}

TEST_CASE("small parity noise adds the analytic extensive entropy offset") {
    // pure Mott product state: true S = 0, so the measured full-system
    // entropy is entirely the noise offset -L ln(1 - 2 eps)
    SectorBasis basis(6, 6);
    const auto mott = fock_state(basis, {1, 1, 1, 1, 1, 1});
    auto two = embed_product(mott, basis);
    apply_beamsplitter(two);

    const double epsilon = 0.02;
    const auto shots = sample_shots(two, 20000, 11);
    const auto noisy = apply_parity_noise(shots, epsilon, 12);
    const std::vector<int> full{0, 1, 2, 3, 4, 5};
    const auto est = entropy_from_shots(noisy, full, 6, 300, 13);
    const double predicted = -6.0 * std::log(1.0 - 2.0 * epsilon);
    CHECK(std::abs(est.value - predicted) < 0.05);
}
