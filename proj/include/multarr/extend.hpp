#ifndef MULTARR_EXTEND_HPP
#define MULTARR_EXTEND_HPP

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "multarr/arrangement.hpp"
#include "multarr/classify.hpp"
#include "multarr/lattice.hpp"

namespace multarr {

/// A rank-3 extension candidate of a rank-2 base: the distinguished
/// hyperplane ker(z) plus, for every base hyperplane H and offset t in
/// offsets[H], the hyperplane ker(alpha_H - t z). Offsets within one class
/// are pairwise distinct, so the candidate is simple and its Ziegler
/// restriction to ker(z) is exactly (base, m).
struct ExtensionCandidate {
    Multiarrangement base; // dim 2, offsets indexed like base.hyperplanes()
    std::vector<std::vector<Scalar>> offsets;

    Multiarrangement materialize() const; // dim-3 simple arrangement
    std::string describe() const;
};

/// Ziegler restriction of a simple 3-arrangement to h0: traces of the other
/// hyperplanes on h0 (in 2 canonical coordinates) with multiplicity
/// |E_X| - 1.
Multiarrangement ziegler_restriction(const Multiarrangement& E, const Hyperplane& h0);

/// Integer offsets -(m-1)/2 <= k <= m/2.
std::vector<long> yoshinaga_offset_range(int m);

ExtensionCandidate yoshinaga_extension(const Multiarrangement& base);

/// Locally mixed product: sum over rank-2 flats of the product of the
/// localization's exponents. For simple arrangements this is
/// sum (|A_X| - 1).
long lmp(const Multiarrangement& A);

/// Globally mixed product of an exponent multiset: sum of pairwise products.
long gmp(std::span<const int> exponents);

/// VGMP(E, h0) = d1 + d2 + d1 d2 from the Ziegler restriction's exponents.
long vgmp(const Multiarrangement& E, const Hyperplane& h0);

struct FreenessReport {
    long b1 = 0, b2 = 0;
    long lmp = 0, vgmp = 0;
    ExponentPair restriction_exponents;
    bool free = false;
    long slack = 0; // lmp - vgmp >= 0
    std::array<int, 3> exponents{0, 0, 0}; // (1, d1, d2) when free
};

/// Rank-3 freeness via the characteristic polynomial criterion, stated as
/// LMP(E) = VGMP(E, h0).
FreenessReport yoshinaga_freeness(const Multiarrangement& E, const Hyperplane& h0);

/// Restriction-size window for a free extension of a balanced (B2, m):
/// 1 + m1 <= |E^H| <= upper, where the upper bound depends on the exponent
/// gap of m (|m| even) or of the deletion at H's class (|m| odd). Equality
/// at the upper bound holds iff the deletion E \ {H} is free.
struct RestrictionBounds {
    int lower = 0;
    int upper = 0;
    int delta_used = 0;       // the gap that selected the case
    bool delta_of_deletion = false;
    bool equality_iff_deletion_free = true;
};

/// cls indexes the B2 tuple (x, y, x-y, x+y).
RestrictionBounds restriction_bounds(std::array<int, 4> m, int cls);

// --- Free-extension search ---------------------------------------------

struct SearchDomain {
    int height = 4;           // rational offset grid: p/q with |p|,q <= height
    long limit = 0;           // stop after this many free extensions (0 = all)
    bool prune_bounds = true; // restriction-size pruning (auto-gated)
    bool prune_lmp = true;    // LMP budget pruning
    int workers = 0;          // 0 = MULTARR_WORKERS env or hardware parallelism
};

struct SearchStats {
    long long nodes = 0;         // line placements explored
    long long leaves = 0;        // complete candidates examined
    long long pruned_bounds = 0; // branches cut by restriction-size bounds
    long long pruned_lmp = 0;    // branches cut by the LMP budget
};

struct FoundExtension {
    ExtensionCandidate candidate;
    FreenessReport report;
};

struct SearchResult {
    std::vector<FoundExtension> found;
    SearchStats stats;
    ExponentPair base_exponents;
    long vgmp_target = 0;
    bool bounds_prune_active = false;
    std::string domain_note;
};

/// Depth-first search for free extensions of a rank-2 base over a finite
/// offset grid, modulo the normalization: minimum x- and y-class offsets 0,
/// second-smallest x-class offset 1. Every prune is justified either by the
/// restriction-size bounds or by monotonicity of the LMP against the VGMP
/// target. Deterministic result order.
SearchResult search_free_extensions(const Multiarrangement& base, const SearchDomain& dom);

/// The grid {p/q : |p| <= height, 1 <= q <= height}, reduced and sorted.
std::vector<Scalar> rational_height_grid(int height);

// --- Supersolvable filtration / localization obstructions ----------------

struct VertexViolation {
    int d = 0;       // filtration level
    int h_new = 0;   // H' in A_d \ A_{d-1}
    int h_old = 0;   // H'' in A_{d-1}
    long lhs = 0;    // m(H'')
    long rhs = 0;    // (sum of new multiplicities through X) - 1
};

struct VertexReport {
    bool filtration_ok = false; // ranks and supersolvability condition
    bool satisfied = false;     // the multiplicity conditions
    std::vector<VertexViolation> violations;
    std::vector<int> exponents; // sorted, when satisfied
};

/// Inductive-freeness check along a supersolvable filtration, given as
/// cumulative index sets A_1 subset ... subset A_r = A.
VertexReport free_vertex_check(const Multiarrangement& A,
                               const std::vector<std::vector<int>>& filtration);

/// The fixed filtration {x} subset {x, y, x-y, x+y} subset B3 for an
/// arrangement constructed by Multiarrangement::b3.
std::vector<std::vector<int>> b3_standard_filtration(const Multiarrangement& A);

struct LocalizationWitness {
    bool found = false;
    Flat flat;
    std::array<int, 4> tuple{0, 0, 0, 0}; // canonical (1, k, 2, k)
    int k = 0;
};

/// Scans rank-2 flats for a localization equal to (B2, (2,k,1,k)), k >= 4,
/// up to the B2 symmetry orbit; such a flat obstructs every free extension.
LocalizationWitness non_extendable_by_localization(const Multiarrangement& A);

} // namespace multarr

#endif
