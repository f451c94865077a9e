#include "doctest.h"

#include <cstdint>
#include <map>
#include <set>
#include <unordered_map>

#include "qlab/fock_basis.hpp"

using namespace qlab;

TEST_CASE("dimension matches closed form") {
    CHECK(dimension(6, 6) == 462);  // six particles on six sites
    CHECK(dimension(2, 2) == 3);
    CHECK(dimension(1, 5) == 1);
    CHECK(dimension(4, 0) == 1);
    CHECK(dimension(12, 12) == 1352078);  // two-copy sector of the 6x6 system
}

TEST_CASE("dimension overflow is an explicit failure") {
    CHECK_THROWS_AS(binomial(10000, 5000), NumericalError);
    CHECK_THROWS_AS(dimension(1000, 1000), NumericalError);
    // near the edge but representable
    CHECK(binomial(61, 30) > 0);
}

TEST_CASE("capped dimension counts bounded compositions") {
    CHECK(dimension_capped(2, 2, 1) == 1);  // only (1,1)
    CHECK(dimension_capped(3, 2, 1) == 3);
    CHECK(dimension_capped(6, 6, 6) == 462);
    CHECK(dimension_capped(6, 6, 1) == 1);  // Mott state only
}

TEST_CASE("enumeration order is descending lexicographic") {
    SectorBasis basis(2, 2);
    REQUIRE(basis.dim() == 3);
    CHECK(basis.state_vector(0) == std::vector<int>{2, 0});
    CHECK(basis.state_vector(1) == std::vector<int>{1, 1});
    CHECK(basis.state_vector(2) == std::vector<int>{0, 2});

    SectorBasis big(6, 6);
    CHECK(big.rank(std::vector<int>{6, 0, 0, 0, 0, 0}) == 0);
    CHECK(big.rank(std::vector<int>{0, 0, 0, 0, 0, 6}) == big.dim() - 1);
}

TEST_CASE("rank round-trips exhaustively at L=N=6") {
    SectorBasis basis(6, 6);
    REQUIRE(basis.dim() == 462);
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        CHECK(basis.rank(basis.state(i)) == i);
    }
    // strictly descending order between neighbours
    for (std::size_t i = 0; i + 1 < basis.dim(); ++i) {
        const auto a = basis.state_vector(i);
        const auto b = basis.state_vector(i + 1);
        CHECK(a > b);
    }
}

TEST_CASE("combinatorial rank agrees with a hash-map inverse") {
    SectorBasis basis(5, 4);
    std::map<std::vector<int>, std::size_t> lookup;
    for (std::size_t i = 0; i < basis.dim(); ++i) lookup[basis.state_vector(i)] = i;
    for (const auto& [occ, idx] : lookup) {
        CHECK(basis.rank(occ) == idx);
    }
    CHECK(lookup.size() == basis.dim());
}

TEST_CASE("rank rejects foreign tuples") {
    SectorBasis basis(3, 3);
    CHECK_THROWS_AS(basis.rank(std::vector<int>{1, 1, 0}), NumericalError);  // wrong N
    CHECK_THROWS_AS(basis.rank(std::vector<int>{1, 1}), NumericalError);     // wrong L
    SectorBasis capped(3, 3, 1);
    CHECK(capped.dim() == 1);
    CHECK_THROWS_AS(capped.rank(std::vector<int>{3, 0, 0}), NumericalError);  // over cap
}

TEST_CASE("capped basis enumerates and ranks consistently") {
    SectorBasis basis(4, 5, 2);
    CHECK(basis.dim() == dimension_capped(4, 5, 2));
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        CHECK(basis.rank(basis.state(i)) == i);
        int max_occ = 0;
        for (int v : basis.state_vector(i)) max_occ = std::max(max_occ, v);
        CHECK(max_occ <= 2);
    }
}

TEST_CASE("multi-sector basis dimension identity") {
    MultiSectorBasis multi(6, 6);
    CHECK(multi.total_dim() == 924);  // C(12, 6)
    std::size_t running = 0;
    for (int n = 0; n <= 6; ++n) {
        CHECK(multi.offset(n) == running);
        CHECK(multi.sector(n).dim() == dimension(6, n));
        running += multi.sector(n).dim();
    }
    CHECK(running == multi.total_dim());
}

TEST_CASE("partition map on the two-site sector") {
    SectorBasis basis(2, 2);
    PartitionMap pmap(basis, {0});

    const auto t11 = pmap.triple(basis.rank(std::vector<int>{1, 1}));
    CHECK(t11.n_a == 1);
    CHECK(t11.rank_a == 0);
    CHECK(t11.rank_b == 0);

    const auto t20 = pmap.triple(basis.rank(std::vector<int>{2, 0}));
    CHECK(t20.n_a == 2);
    CHECK(t20.rank_a == 0);
    CHECK(t20.rank_b == 0);
}

TEST_CASE("partition map is injective and complete at L=N=6") {
    SectorBasis basis(6, 6);
    PartitionMap pmap(basis, {0, 1, 2});
    CHECK(pmap.full_dim() == 462);

    std::set<std::tuple<int, std::uint32_t, std::uint32_t>> seen;
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const auto t = pmap.triple(i);
        seen.insert({t.n_a, t.rank_a, t.rank_b});
    }
    CHECK(seen.size() == basis.dim());

    // sum over feasible n_a of dim_A(n_a) * dim_B(N - n_a) covers the sector
    std::size_t total = 0;
    for (int na : pmap.feasible_na()) {
        total += pmap.dim_a(na) * pmap.dim_b(na);
    }
    CHECK(total == basis.dim());
    CHECK(pmap.feasible_na() == std::vector<int>{0, 1, 2, 3, 4, 5, 6});
}

TEST_CASE("partition map rejects bad subsystems") {
    SectorBasis basis(3, 2);
    CHECK_THROWS_AS(PartitionMap(basis, {3}), NumericalError);
    CHECK_THROWS_AS(PartitionMap(basis, {-1}), NumericalError);
    CHECK_THROWS_AS(PartitionMap(basis, {0, 0}), NumericalError);
    CHECK_THROWS_AS(PartitionMap(basis, {}), NumericalError);
}

TEST_CASE("full-set partition degenerates to a pass-through") {
    SectorBasis basis(3, 2);
    PartitionMap pmap(basis, {0, 1, 2});
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const auto t = pmap.triple(i);
        CHECK(t.n_a == 2);
        CHECK(t.rank_a == i);
        CHECK(t.rank_b == 0);
    }
}
