#include "qlab/fock_basis.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

namespace qlab {

namespace {

constexpr std::uint64_t kMaxU64 = std::numeric_limits<std::uint64_t>::max();

void check_sector_args(int sites, int particles) {
    if (sites < 0 || particles < 0) {
        throw NumericalError("sector requires sites >= 0 and particles >= 0");
    }
}

}  // namespace

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    std::uint64_t result = 1;
    for (std::uint64_t i = 1; i <= k; ++i) {
        // result * (n - k + i) / i is integral at every step
        const std::uint64_t factor = n - k + i;
        const std::uint64_t gcd_ri = std::gcd(result, i);
        const std::uint64_t r = result / gcd_ri;
        const std::uint64_t d = i / gcd_ri;
        const std::uint64_t f = factor / d;  // d divides factor after reducing by result
        if (f != 0 && r > kMaxU64 / f) {
            throw NumericalError("binomial(" + std::to_string(n) + ", " + std::to_string(k) +
                                 ") overflows 64-bit integer range");
        }
        result = r * f;
    }
    return result;
}

std::uint64_t dimension(int sites, int particles) {
    check_sector_args(sites, particles);
    if (sites == 0) return particles == 0 ? 1 : 0;
    return binomial(static_cast<std::uint64_t>(particles) + static_cast<std::uint64_t>(sites) - 1,
                    static_cast<std::uint64_t>(sites) - 1);
}

std::uint64_t dimension_capped(int sites, int particles, int max_per_site) {
    check_sector_args(sites, particles);
    if (max_per_site < 0) throw NumericalError("max_per_site must be non-negative");
    // Rolling DP over sites; counts stay below the uncapped binomial.
    std::vector<std::uint64_t> row(static_cast<std::size_t>(particles) + 1, 0);
    row[0] = 1;
    for (int s = 1; s <= sites; ++s) {
        std::vector<std::uint64_t> next(row.size(), 0);
        for (int n = 0; n <= particles; ++n) {
            std::uint64_t acc = 0;
            for (int m = 0; m <= std::min(n, max_per_site); ++m) {
                const std::uint64_t term = row[static_cast<std::size_t>(n - m)];
                if (acc > kMaxU64 - term) {
                    throw NumericalError("capped dimension overflows 64-bit integer range");
                }
                acc += term;
            }
            next[static_cast<std::size_t>(n)] = acc;
        }
        row.swap(next);
    }
    return row[static_cast<std::size_t>(particles)];
}

SectorBasis::SectorBasis(int sites, int particles, std::optional<int> max_per_site)
    : sites_(sites), particles_(particles), cap_(max_per_site) {
    check_sector_args(sites, particles);
    if (sites < 1) throw NumericalError("SectorBasis requires at least one site");
    if (particles > std::numeric_limits<occ_t>::max()) {
        throw NumericalError("SectorBasis supports at most 255 particles");
    }
    const int cap = cap_.value_or(particles);
    if (cap_ && *cap_ < 0) throw NumericalError("max_per_site must be non-negative");

    // counts_[s][n]: states of n particles on s sites, used for ranking.
    counts_.assign(static_cast<std::size_t>(sites_) + 1,
                   std::vector<std::uint64_t>(static_cast<std::size_t>(particles_) + 1, 0));
    counts_[0][0] = 1;
    for (int s = 1; s <= sites_; ++s) {
        for (int n = 0; n <= particles_; ++n) {
            std::uint64_t acc = 0;
            for (int m = 0; m <= std::min(n, cap); ++m) {
                const std::uint64_t term = counts_[static_cast<std::size_t>(s - 1)]
                                                  [static_cast<std::size_t>(n - m)];
                if (acc > kMaxU64 - term) {
                    throw NumericalError("sector dimension overflows 64-bit integer range");
                }
                acc += term;
            }
            counts_[static_cast<std::size_t>(s)][static_cast<std::size_t>(n)] = acc;
        }
    }

    const std::uint64_t dim64 = counts_[static_cast<std::size_t>(sites_)]
                                       [static_cast<std::size_t>(particles_)];
    if (dim64 > std::numeric_limits<std::size_t>::max() / static_cast<std::uint64_t>(sites_)) {
        throw NumericalError("sector basis does not fit in memory index range");
    }
    dim_ = static_cast<std::size_t>(dim64);
    occupations_.resize(dim_ * static_cast<std::size_t>(sites_));

    // Descending lexicographic enumeration: at each site place the largest
    // feasible occupation first.
    std::vector<occ_t> current(static_cast<std::size_t>(sites_), 0);
    std::size_t written = 0;
    auto emit = [&](auto&& self, int site, int remaining) -> void {
        if (site == sites_ - 1) {
            if (remaining > cap) return;
            current[static_cast<std::size_t>(site)] = static_cast<occ_t>(remaining);
            std::copy(current.begin(), current.end(),
                      occupations_.begin() + static_cast<std::ptrdiff_t>(written * current.size()));
            ++written;
            return;
        }
        for (int m = std::min(remaining, cap); m >= 0; --m) {
            current[static_cast<std::size_t>(site)] = static_cast<occ_t>(m);
            self(self, site + 1, remaining - m);
        }
    };
    if (dim_ > 0) emit(emit, 0, particles_);
    if (written != dim_) throw NumericalError("basis enumeration/count mismatch");
}

std::vector<int> SectorBasis::state_vector(std::size_t i) const {
    const auto view = state(i);
    return std::vector<int>(view.begin(), view.end());
}

std::uint64_t SectorBasis::count(int sites, int particles) const {
    if (particles < 0 || particles > particles_) return 0;
    return counts_[static_cast<std::size_t>(sites)][static_cast<std::size_t>(particles)];
}

std::size_t SectorBasis::rank(std::span<const occ_t> occupations) const {
    if (occupations.size() != static_cast<std::size_t>(sites_)) {
        throw NumericalError("rank: occupation tuple has wrong length");
    }
    const int cap = cap_.value_or(particles_);
    std::uint64_t rank = 0;
    int remaining = particles_;
    for (int site = 0; site < sites_ - 1; ++site) {
        const int n = occupations[static_cast<std::size_t>(site)];
        if (n > cap) throw NumericalError("rank: occupation exceeds per-site cap");
        // States identical so far but holding more atoms on this site come first.
        for (int m = n + 1; m <= std::min(remaining, cap); ++m) {
            rank += count(sites_ - 1 - site, remaining - m);
        }
        remaining -= n;
        if (remaining < 0) throw NumericalError("rank: occupation tuple exceeds particle number");
    }
    const int last = occupations[static_cast<std::size_t>(sites_ - 1)];
    if (last != remaining || last > cap) {
        throw NumericalError("rank: occupation tuple does not match sector particle number");
    }
    return static_cast<std::size_t>(rank);
}

std::size_t SectorBasis::rank(const std::vector<int>& occupations) const {
    std::vector<occ_t> bytes(occupations.size());
    for (std::size_t i = 0; i < occupations.size(); ++i) {
        if (occupations[i] < 0 || occupations[i] > std::numeric_limits<occ_t>::max()) {
            throw NumericalError("rank: occupation out of representable range");
        }
        bytes[i] = static_cast<occ_t>(occupations[i]);
    }
    return rank(std::span<const occ_t>(bytes));
}

MultiSectorBasis::MultiSectorBasis(int sites, int n_max) : sites_(sites), n_max_(n_max) {
    if (sites < 1 || n_max < 0) {
        throw NumericalError("MultiSectorBasis requires sites >= 1 and n_max >= 0");
    }
    sectors_.reserve(static_cast<std::size_t>(n_max) + 1);
    offsets_.reserve(static_cast<std::size_t>(n_max) + 1);
    std::size_t offset = 0;
    for (int n = 0; n <= n_max; ++n) {
        offsets_.push_back(offset);
        sectors_.emplace_back(sites, n);
        offset += sectors_.back().dim();
    }
    total_dim_ = offset;
    // identity sum_{n<=n_max} C(n+L-1, L-1) = C(n_max+L, L)
    if (total_dim_ != binomial(static_cast<std::uint64_t>(n_max_) + static_cast<std::uint64_t>(sites_),
                               static_cast<std::uint64_t>(sites_))) {
        throw NumericalError("multi-sector dimension identity violated");
    }
}

PartitionMap::PartitionMap(const SectorBasis& basis, const std::vector<int>& subsystem_sites)
    : particles_(basis.particles()) {
    const int sites = basis.sites();
    std::vector<bool> in_a(static_cast<std::size_t>(sites), false);
    for (int s : subsystem_sites) {
        if (s < 0 || s >= sites) {
            throw NumericalError("partition: site index " + std::to_string(s) +
                                 " outside 0.." + std::to_string(sites - 1));
        }
        if (in_a[static_cast<std::size_t>(s)]) {
            throw NumericalError("partition: duplicate site index");
        }
        in_a[static_cast<std::size_t>(s)] = true;
    }
    if (subsystem_sites.empty()) throw NumericalError("partition: subsystem must be non-empty");
    for (int s = 0; s < sites; ++s) {
        (in_a[static_cast<std::size_t>(s)] ? sites_a_ : sites_b_).push_back(s);
    }

    const int la = static_cast<int>(sites_a_.size());
    const int lb = static_cast<int>(sites_b_.size());
    const auto cap = basis.max_per_site();
    const int n = basis.particles();

    dims_a_.assign(static_cast<std::size_t>(n) + 1, 0);
    dims_b_.assign(static_cast<std::size_t>(n) + 1, 0);
    std::vector<std::optional<SectorBasis>> bases_a(static_cast<std::size_t>(n) + 1);
    std::vector<std::optional<SectorBasis>> bases_b(static_cast<std::size_t>(n) + 1);
    for (int na = 0; na <= n; ++na) {
        const std::uint64_t da = cap ? dimension_capped(la, na, *cap) : dimension(la, na);
        const std::uint64_t db = lb == 0 ? (na == n ? 1 : 0)
                                         : (cap ? dimension_capped(lb, n - na, *cap)
                                                : dimension(lb, n - na));
        dims_a_[static_cast<std::size_t>(na)] = static_cast<std::size_t>(da);
        dims_b_[static_cast<std::size_t>(na)] = static_cast<std::size_t>(db);
        if (da > 0 && db > 0) {
            feasible_na_.push_back(na);
            bases_a[static_cast<std::size_t>(na)].emplace(la, na, cap);
            if (lb > 0) bases_b[static_cast<std::size_t>(na)].emplace(lb, n - na, cap);
        }
    }

    triples_.resize(basis.dim());
    std::vector<occ_t> occ_a(static_cast<std::size_t>(la));
    std::vector<occ_t> occ_b(static_cast<std::size_t>(lb));
    for (std::size_t i = 0; i < basis.dim(); ++i) {
        const auto full = basis.state(i);
        int na = 0;
        for (int k = 0; k < la; ++k) {
            occ_a[static_cast<std::size_t>(k)] = full[static_cast<std::size_t>(sites_a_[static_cast<std::size_t>(k)])];
            na += occ_a[static_cast<std::size_t>(k)];
        }
        for (int k = 0; k < lb; ++k) {
            occ_b[static_cast<std::size_t>(k)] = full[static_cast<std::size_t>(sites_b_[static_cast<std::size_t>(k)])];
        }
        const auto& ba = bases_a[static_cast<std::size_t>(na)];
        const std::size_t ra = ba->rank(std::span<const occ_t>(occ_a));
        const std::size_t rb =
            lb == 0 ? 0 : bases_b[static_cast<std::size_t>(na)]->rank(std::span<const occ_t>(occ_b));
        triples_[i] = PartitionTriple{na, static_cast<std::uint32_t>(ra),
                                      static_cast<std::uint32_t>(rb)};
    }
}

}  // namespace qlab
