#include "multarr/extend.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "multarr/derivations.hpp"

namespace multarr {

Multiarrangement ExtensionCandidate::materialize() const {
    const Field& f = base.field();
    require_input(base.dim() == 2, "extension base must live in 2 coordinates");
    require_input(static_cast<int>(offsets.size()) == base.size(),
                  "offset classes do not match the base");
    Multiarrangement E(f, 3);
    E.add(Hyperplane(f, {f.zero(), f.zero(), f.one()}), 1); // ker z
    for (int i = 0; i < base.size(); ++i) {
        require_input(static_cast<int>(offsets[i].size()) == base.multiplicity(i),
                      "offset count does not match multiplicity");
        for (size_t a = 0; a < offsets[i].size(); ++a)
            for (size_t b = a + 1; b < offsets[i].size(); ++b)
                require_input(offsets[i][a] != offsets[i][b],
                              "offsets within one class must be distinct");
        const auto& c = base.hyperplane(i).coeffs();
        for (const auto& t : offsets[i])
            E.add(Hyperplane(f, {c[0], c[1], -t}), 1);
    }
    require_internal(E.size() == base.total_multiplicity() + 1,
                     "extension lost hyperplanes (offset collision across classes?)");
    return E;
}

std::string ExtensionCandidate::describe() const {
    std::ostringstream os;
    auto names = default_varnames(2);
    for (int i = 0; i < base.size(); ++i) {
        if (i) os << "; ";
        os << base.hyperplane(i).str(names) << ": {";
        for (size_t j = 0; j < offsets[i].size(); ++j) {
            if (j) os << ", ";
            os << offsets[i][j].str();
        }
        os << "}";
    }
    return os.str();
}

Multiarrangement ziegler_restriction(const Multiarrangement& E, const Hyperplane& h0) {
    require_input(E.dim() == 3, "Ziegler restriction implemented for 3-arrangements");
    require_input(E.is_simple(), "Ziegler restriction starts from a simple arrangement");
    int pivot_idx = E.index_of(h0);
    require_input(pivot_idx >= 0, "pivot hyperplane is not in the arrangement");

    const Field& f = E.field();
    Matrix M = Matrix::from_rows(f, {h0.coeffs()});
    auto kb = M.kernel_basis(); // 2 canonical coordinate vectors on h0
    require_internal(kb.size() == 2, "hyperplane coordinate basis size");

    Multiarrangement out(f, 2);
    for (int i = 0; i < E.size(); ++i) {
        if (i == pivot_idx) continue;
        const auto& v = E.hyperplane(i).coeffs();
        std::vector<Scalar> c;
        for (const auto& b : kb) {
            Scalar s = f.zero();
            for (int j = 0; j < 3; ++j) s += v[j] * b[j];
            c.push_back(s);
        }
        out.add(Hyperplane(f, std::move(c)), 1); // m^H counts the copies
    }
    return out;
}

std::vector<long> yoshinaga_offset_range(int m) {
    std::vector<long> out;
    // integers k with -(m-1)/2 <= k <= m/2
    for (long k = -m; k <= m; ++k)
        if (2 * k >= -(m - 1) && 2 * k <= m) out.push_back(k);
    return out;
}

ExtensionCandidate yoshinaga_extension(const Multiarrangement& base) {
    require_input(base.dim() == 2, "Yoshinaga extension implemented for rank-2 bases");
    const Field& f = base.field();
    ExtensionCandidate cand{base, {}};
    for (int i = 0; i < base.size(); ++i) {
        std::vector<Scalar> offs;
        for (long k : yoshinaga_offset_range(base.multiplicity(i))) offs.push_back(f.from_int(k));
        std::sort(offs.begin(), offs.end());
        for (size_t a = 1; a < offs.size(); ++a)
            require_input(offs[a - 1] != offs[a],
                          "integer offsets collide in characteristic " +
                              std::to_string(f.characteristic()));
        cand.offsets.push_back(std::move(offs));
    }
    return cand;
}

long lmp(const Multiarrangement& A) {
    require_input(A.rank() == 3, "LMP expects a rank-3 arrangement");
    IntersectionLattice L = intersection_lattice(A);
    long sum = 0;
    if (A.is_simple()) {
        for (const auto& fl : L.flats(2)) sum += static_cast<long>(fl.members.size()) - 1;
        return sum;
    }
    for (const auto& fl : L.flats(2)) {
        ExponentPair e = rank2_multi_exponents(localization_2d(A, fl));
        sum += static_cast<long>(e.d1) * e.d2;
    }
    return sum;
}

long gmp(std::span<const int> exponents) {
    long sum = 0;
    for (size_t i = 0; i < exponents.size(); ++i)
        for (size_t j = i + 1; j < exponents.size(); ++j)
            sum += static_cast<long>(exponents[i]) * exponents[j];
    return sum;
}

long vgmp(const Multiarrangement& E, const Hyperplane& h0) {
    ExponentPair e = rank2_multi_exponents(ziegler_restriction(E, h0));
    return static_cast<long>(e.d1) + e.d2 + static_cast<long>(e.d1) * e.d2;
}

FreenessReport yoshinaga_freeness(const Multiarrangement& E, const Hyperplane& h0) {
    require_input(E.dim() == 3 && E.rank() == 3, "freeness check expects a central 3-arrangement of rank 3");
    require_input(E.is_simple(), "freeness check expects a simple arrangement");

    FreenessReport rep;
    CharPoly chi = characteristic_polynomial(E);
    rep.b1 = chi.b1();
    rep.b2 = chi.b2();
    require_internal(rep.b1 == E.size() - 1, "b1 must equal |A| - 1");

    rep.lmp = rep.b1 + rep.b2;
    require_internal(rep.lmp == lmp(E), "chi coefficient of t disagrees with LMP");

    rep.restriction_exponents = rank2_multi_exponents(ziegler_restriction(E, h0));
    int d1 = rep.restriction_exponents.d1, d2 = rep.restriction_exponents.d2;
    rep.vgmp = static_cast<long>(d1) + d2 + static_cast<long>(d1) * d2;
    rep.slack = rep.lmp - rep.vgmp;
    require_internal(rep.slack >= 0, "LMP < VGMP would contradict the freeness inequality");
    rep.free = rep.slack == 0;
    if (rep.free) rep.exponents = {1, d1, d2};
    return rep;
}

RestrictionBounds restriction_bounds(std::array<int, 4> m, int cls) {
    require_input(cls >= 0 && cls < 4, "class index out of range");
    long r = m[0] + m[1] + m[2] + m[3];
    for (int v : m) {
        require_input(v >= 1, "restriction bounds need positive multiplicities");
        require_input(2L * v < r, "restriction bounds need a balanced multiplicity");
    }

    RestrictionBounds out;
    // Lower bound: 1 + max multiplicity among the other hyperplanes of the
    // extension (another copy over the same class still counts when m >= 2).
    int m1 = 0;
    for (int j = 0; j < 4; ++j) {
        if (j != cls) m1 = std::max(m1, m[j]);
        else if (m[j] >= 2) m1 = std::max(m1, m[j]);
    }
    out.lower = 1 + m1;

    if (r % 2 == 1) {
        auto del = m;
        del[cls] -= 1;
        ExponentPair e = b2_exponents(del);
        out.delta_used = e.delta();
        out.delta_of_deletion = true;
        require_internal(out.delta_used == 0 || out.delta_used == 2,
                         "deletion exponent gap outside {0,2}");
        out.upper = out.delta_used == 2 ? static_cast<int>((r + 3) / 2)
                                        : static_cast<int>((r + 1) / 2);
    } else {
        ExponentPair e = b2_exponents(m);
        out.delta_used = e.delta();
        out.delta_of_deletion = false;
        require_internal(out.delta_used == 0 || out.delta_used == 2,
                         "balanced even exponent gap outside {0,2}");
        out.upper = out.delta_used == 2 ? static_cast<int>(r / 2)
                                        : static_cast<int>((r + 2) / 2);
    }
    return out;
}

// --- Supersolvable filtration checks ---------------------------------------

namespace {

bool span_contains(const Field& f, const std::vector<Scalar>& a, const std::vector<Scalar>& b,
                   const std::vector<Scalar>& v) {
    Matrix two = Matrix::from_rows(f, {a, b});
    return in_row_span(row_space_basis(f, {a, b}), v) && two.rank() == 2;
}

} // namespace

VertexReport free_vertex_check(const Multiarrangement& A,
                               const std::vector<std::vector<int>>& filtration) {
    VertexReport rep;
    int r = A.rank();
    require_input(r >= 2, "filtration check needs rank >= 2");
    require_input(static_cast<int>(filtration.size()) == r, "filtration must have rank(A) levels");

    const Field& f = A.field();
    // Validate the chain: increasing index sets, correct ranks, full top level.
    std::vector<std::vector<int>> levels = filtration;
    for (auto& lv : levels) {
        std::sort(lv.begin(), lv.end());
        for (int idx : lv)
            require_input(idx >= 0 && idx < A.size(), "filtration index out of range");
    }
    for (int d = 1; d < r; ++d)
        require_input(std::includes(levels[d].begin(), levels[d].end(), levels[d - 1].begin(),
                                    levels[d - 1].end()),
                      "filtration levels must be nested");
    require_input(static_cast<int>(levels[r - 1].size()) == A.size(),
                  "top filtration level must be the whole arrangement");
    for (int d = 0; d < r; ++d) {
        std::vector<std::vector<Scalar>> rows;
        for (int idx : levels[d]) rows.push_back(A.hyperplane(idx).coeffs());
        require_input(Matrix::from_rows(f, rows).rank() == d + 1,
                      "filtration level " + std::to_string(d + 1) + " does not have rank " +
                          std::to_string(d + 1));
    }
    // Supersolvability of the chain: any two hyperplanes new at level d meet
    // inside some hyperplane of level d-1.
    rep.filtration_ok = true;
    for (int d = 1; d < r && rep.filtration_ok; ++d) {
        std::vector<int> fresh;
        for (int idx : levels[d])
            if (!std::binary_search(levels[d - 1].begin(), levels[d - 1].end(), idx))
                fresh.push_back(idx);
        for (size_t a = 0; a < fresh.size() && rep.filtration_ok; ++a) {
            for (size_t b = a + 1; b < fresh.size() && rep.filtration_ok; ++b) {
                bool covered = false;
                for (int old : levels[d - 1]) {
                    if (span_contains(f, A.hyperplane(fresh[a]).coeffs(),
                                      A.hyperplane(fresh[b]).coeffs(),
                                      A.hyperplane(old).coeffs())) {
                        covered = true;
                        break;
                    }
                }
                if (!covered) rep.filtration_ok = false;
            }
        }
    }
    require_input(rep.filtration_ok, "filtration is not supersolvable");

    // Multiplicity conditions at each level d >= 3.
    rep.satisfied = true;
    for (int d = 2; d < r; ++d) {
        std::vector<int> fresh;
        for (int idx : levels[d])
            if (!std::binary_search(levels[d - 1].begin(), levels[d - 1].end(), idx))
                fresh.push_back(idx);
        for (int hn : fresh) {
            for (int ho : levels[d - 1]) {
                Matrix x_basis = row_space_basis(
                    f, {A.hyperplane(hn).coeffs(), A.hyperplane(ho).coeffs()});
                // A_X within the level-d subarrangement.
                std::vector<int> through;
                for (int idx : levels[d])
                    if (in_row_span(x_basis, A.hyperplane(idx).coeffs())) through.push_back(idx);
                if (through.size() == 2) continue; // A_X = {H', H''}
                long rhs = -1;
                for (int idx : through)
                    if (!std::binary_search(levels[d - 1].begin(), levels[d - 1].end(), idx))
                        rhs += A.multiplicity(idx);
                long lhs = A.multiplicity(ho);
                if (lhs < rhs) {
                    rep.satisfied = false;
                    rep.violations.push_back({d + 1, hn, ho, lhs, rhs});
                }
            }
        }
    }

    if (rep.satisfied) {
        // exp = (d1, d2, |m_3| - |m_2|, ..., |m_r| - |m_{r-1}|)
        Multiarrangement level2(f, A.dim());
        for (int idx : levels[1]) level2.add(A.hyperplane(idx), A.multiplicity(idx));
        ExponentPair e2 = rank2_multi_exponents(project_to_rank2_coords(level2));
        rep.exponents = {e2.d1, e2.d2};
        long prev = level2.total_multiplicity();
        for (int d = 2; d < r; ++d) {
            long cur = 0;
            for (int idx : levels[d]) cur += A.multiplicity(idx);
            rep.exponents.push_back(static_cast<int>(cur - prev));
            prev = cur;
        }
        std::sort(rep.exponents.begin(), rep.exponents.end());
    }
    return rep;
}

std::vector<std::vector<int>> b3_standard_filtration(const Multiarrangement& A) {
    require_input(A.dim() == 3, "standard B3 filtration needs a 3-arrangement");
    const Field& f = A.field();
    auto find = [&](std::vector<long> c) {
        std::vector<Scalar> v;
        for (long x : c) v.push_back(f.from_int(x));
        int idx = A.index_of(Hyperplane(f, std::move(v)));
        require_input(idx >= 0, "arrangement is not a standard B3");
        return idx;
    };
    int hx = find({1, 0, 0});
    std::vector<int> l2{hx, find({0, 1, 0}), find({1, -1, 0}), find({1, 1, 0})};
    std::vector<int> l3(A.size());
    std::iota(l3.begin(), l3.end(), 0);
    return {{hx}, l2, l3};
}

LocalizationWitness non_extendable_by_localization(const Multiarrangement& A) {
    require_input(A.rank() >= 3, "localization obstruction needs rank >= 3");
    IntersectionLattice L = intersection_lattice(A);
    for (const auto& fl : L.flats(2)) {
        if (fl.members.size() != 4) continue;
        auto tuple = recognize_b2(localization_2d(A, fl));
        if (!tuple) continue;
        auto canon = b2_canonical_permutation(*tuple);
        int k = canon[1];
        if (k >= 4 && canon == b2_canonical_permutation({2, k, 1, k})) {
            LocalizationWitness w;
            w.found = true;
            w.flat = fl;
            w.tuple = canon;
            w.k = k;
            return w;
        }
    }
    return {};
}

} // namespace multarr
