#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qlab/errors.hpp"

namespace qlab {

/// Site occupation number. Bases above 255 atoms per site are far beyond the
/// dense diagonalization cap, so a byte is enough.
using occ_t = std::uint8_t;

/// Exact C(n, k) in 64-bit integer arithmetic. Throws NumericalError on
/// overflow instead of wrapping.
std::uint64_t binomial(std::uint64_t n, std::uint64_t k);

/// Number of Fock states of `particles` bosons on `sites` sites,
/// C(N+L-1, L-1). sites >= 1, particles >= 0; sites == 0 is allowed as the
/// degenerate empty chain (dimension 1 iff particles == 0).
std::uint64_t dimension(int sites, int particles);

/// Same, with at most `max_per_site` atoms on any site.
std::uint64_t dimension_capped(int sites, int particles, int max_per_site);

/// Ordered basis of a fixed-particle-number sector.
///
/// States are sorted by descending lexicographic occupation tuple, so
/// (N,0,...,0) has rank 0 and (0,...,0,N) has rank dim-1. The inverse map is
/// combinatorial (cumulative counts), not a hash table.
class SectorBasis {
public:
    SectorBasis(int sites, int particles, std::optional<int> max_per_site = std::nullopt);

    int sites() const { return sites_; }
    int particles() const { return particles_; }
    std::optional<int> max_per_site() const { return cap_; }
    std::size_t dim() const { return dim_; }

    /// Occupations of basis state i, a view of length sites().
    std::span<const occ_t> state(std::size_t i) const {
        return {occupations_.data() + i * static_cast<std::size_t>(sites_),
                static_cast<std::size_t>(sites_)};
    }
    std::vector<int> state_vector(std::size_t i) const;

    /// Ordinal of an occupation tuple; throws if it is not a member state.
    std::size_t rank(std::span<const occ_t> occupations) const;
    std::size_t rank(const std::vector<int>& occupations) const;

private:
    int sites_;
    int particles_;
    std::optional<int> cap_;
    std::size_t dim_ = 0;
    std::vector<occ_t> occupations_;  // dim x sites, row-major
    // counts_[s][n] = number of states of n particles on s sites (cap applied)
    std::vector<std::vector<std::uint64_t>> counts_;

    std::uint64_t count(int sites, int particles) const;
};

/// Stack of SectorBasis for every particle number 0..n_max, with cumulative
/// index offsets. Total dimension is C(n_max + L, L).
class MultiSectorBasis {
public:
    MultiSectorBasis(int sites, int n_max);

    int sites() const { return sites_; }
    int n_max() const { return n_max_; }
    std::size_t total_dim() const { return total_dim_; }
    const SectorBasis& sector(int n) const { return sectors_.at(static_cast<std::size_t>(n)); }
    std::size_t offset(int n) const { return offsets_.at(static_cast<std::size_t>(n)); }

private:
    int sites_;
    int n_max_;
    std::size_t total_dim_;
    std::vector<SectorBasis> sectors_;
    std::vector<std::size_t> offsets_;
};

struct PartitionTriple {
    int n_a;              // particles inside the subsystem
    std::uint32_t rank_a; // index in the (|A|, n_a) sub-basis
    std::uint32_t rank_b; // index in the (|B|, N-n_a) sub-basis
};

/// Splits every full-basis state across a spatial bipartition A | B.
///
/// Feeds the blockwise partial trace: fixed total particle number forbids
/// coherences between different n_a, so a reduced density matrix is block
/// diagonal with one block per feasible n_a.
class PartitionMap {
public:
    PartitionMap(const SectorBasis& basis, const std::vector<int>& subsystem_sites);

    const std::vector<int>& subsystem_sites() const { return sites_a_; }
    const std::vector<int>& complement_sites() const { return sites_b_; }
    int total_particles() const { return particles_; }

    const PartitionTriple& triple(std::size_t full_index) const { return triples_[full_index]; }
    std::size_t full_dim() const { return triples_.size(); }

    const std::vector<int>& feasible_na() const { return feasible_na_; }
    std::size_t dim_a(int n_a) const { return dims_a_[static_cast<std::size_t>(n_a)]; }
    std::size_t dim_b(int n_a) const { return dims_b_[static_cast<std::size_t>(n_a)]; }

private:
    std::vector<int> sites_a_;
    std::vector<int> sites_b_;
    int particles_;
    std::vector<PartitionTriple> triples_;
    std::vector<int> feasible_na_;
    std::vector<std::size_t> dims_a_;  // indexed by n_a
    std::vector<std::size_t> dims_b_;  // indexed by n_a (dimension of B at N - n_a)
};

}  // namespace qlab
