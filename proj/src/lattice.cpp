#include "multarr/lattice.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace multarr {

namespace {

struct MatrixLess {
    bool operator()(const Matrix& a, const Matrix& b) const { return Matrix::cmp(a, b) < 0; }
};

} // namespace

IntersectionLattice IntersectionLattice::build(const Multiarrangement& A) {
    const Field& f = A.field();
    int dim = A.dim();
    int n = A.size();
    int rk = A.rank();
    require_input(rk <= 3, "intersection lattices are supported up to rank 3");

    IntersectionLattice L;
    L.n_ = n;
    L.dim_ = dim;
    L.by_rank_.assign(rk + 1, {});

    Flat ambient;
    ambient.basis = Matrix(f, 0, dim);
    ambient.rank = 0;
    ambient.mobius = 1;
    L.by_rank_[0].push_back(ambient);
    if (rk == 0) return L;

    // Rank 1: the hyperplanes themselves.
    for (int i = 0; i < n; ++i) {
        Flat fl;
        fl.basis = row_space_basis(f, {A.hyperplane(i).coeffs()});
        fl.rank = 1;
        fl.members = {i};
        fl.mobius = -1;
        L.by_rank_[1].push_back(fl);
    }
    if (rk == 1) return L;

    // Rank 2: pairwise spans, deduplicated by canonical basis.
    std::map<Matrix, std::vector<int>, MatrixLess> rank2;
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            Matrix key = row_space_basis(f, {A.hyperplane(i).coeffs(), A.hyperplane(j).coeffs()});
            require_internal(key.rows() == 2, "distinct hyperplanes must span rank 2");
            rank2.try_emplace(key);
        }
    }
    for (auto& [key, members] : rank2) {
        for (int i = 0; i < n; ++i)
            if (in_row_span(key, A.hyperplane(i).coeffs())) members.push_back(i);
        Flat fl;
        fl.basis = key;
        fl.rank = 2;
        fl.members = members;
        fl.mobius = static_cast<long>(members.size()) - 1; // -(mu(V) + |A_X| * mu(H))
        L.by_rank_[2].push_back(fl);
    }
    if (rk == 2) return L;

    // Rank 3: the center.
    std::vector<std::vector<Scalar>> rows;
    for (const auto& h : A.hyperplanes()) rows.push_back(h.coeffs());
    Flat center;
    center.basis = row_space_basis(f, rows);
    require_internal(center.basis.rows() == 3, "rank-3 center expected");
    center.rank = 3;
    center.members.resize(n);
    std::iota(center.members.begin(), center.members.end(), 0);
    long sum = 1 - n; // ambient + hyperplanes
    for (const auto& fl : L.by_rank_[2]) sum += fl.mobius;
    center.mobius = -sum;
    L.by_rank_[3].push_back(center);
    return L;
}

long IntersectionLattice::mobius_sum_rank(int rank) const {
    long s = 0;
    for (const auto& fl : by_rank_.at(rank)) s += fl.mobius;
    return s;
}

IntersectionLattice intersection_lattice(const Multiarrangement& A) {
    return IntersectionLattice::build(A);
}

mpz_class CharPoly::eval(long t) const {
    mpz_class acc = 0, p = 1;
    for (const auto& c : coeffs) {
        acc += c * p;
        p *= t;
    }
    return acc;
}

long CharPoly::b1() const {
    // chi = t^(l-3) (t^3 - (b1+1) t^2 + (b1+b2) t - b2)
    int l = static_cast<int>(coeffs.size()) - 1;
    require_input(l >= 3, "b1/b2 need a rank-3 characteristic polynomial");
    mpz_class c2 = coeffs[l - 1]; // coefficient of t^(l-1), equals -(b1+1)
    mpz_class b1 = -c2 - 1;
    return static_cast<long>(b1.get_si());
}

long CharPoly::b2() const {
    int l = static_cast<int>(coeffs.size()) - 1;
    require_input(l >= 3, "b1/b2 need a rank-3 characteristic polynomial");
    mpz_class b2 = -coeffs[l - 3];
    // Consistency: coefficient of t^(l-2) must equal b1 + b2.
    require_internal(coeffs[l - 2] == b1() + b2, "chi does not factor as (t-1)(t^2-b1 t+b2)");
    return static_cast<long>(b2.get_si());
}

std::string CharPoly::str() const {
    std::ostringstream os;
    bool first = true;
    for (int k = static_cast<int>(coeffs.size()) - 1; k >= 0; --k) {
        const mpz_class& c = coeffs[k];
        if (c == 0) continue;
        mpz_class a = abs(c);
        if (first) {
            if (c < 0) os << "-";
            first = false;
        } else {
            os << (c < 0 ? " - " : " + ");
        }
        if (a != 1 || k == 0) os << a.get_str();
        if (k > 0) {
            os << "t";
            if (k > 1) os << "^" << k;
        }
    }
    if (first) os << "0";
    return os.str();
}

CharPoly characteristic_polynomial(const Multiarrangement& A) {
    IntersectionLattice L = intersection_lattice(A);
    CharPoly chi;
    chi.coeffs.assign(A.dim() + 1, 0);
    for (int r = 0; r <= L.rank(); ++r)
        for (const auto& fl : L.flats(r)) chi.coeffs[A.dim() - fl.rank] += fl.mobius;
    return chi;
}

Multiarrangement localization(const Multiarrangement& A, const Flat& X) {
    Multiarrangement out(A.field(), A.dim());
    std::vector<std::vector<Scalar>> member_forms;
    for (int i = 0; i < A.size(); ++i) {
        if (in_row_span(X.basis, A.hyperplane(i).coeffs())) {
            out.add(A.hyperplane(i), A.multiplicity(i));
            member_forms.push_back(A.hyperplane(i).coeffs());
        }
    }
    if (X.rank > 0) {
        // X must be an actual flat: the members' forms span exactly X's forms.
        require_input(!member_forms.empty() &&
                          Matrix::cmp(row_space_basis(A.field(), member_forms), X.basis) == 0,
                      "X is not a flat of the arrangement");
    }
    return out;
}

Multiarrangement localization_2d(const Multiarrangement& A, const Flat& X) {
    require_input(X.rank == 2, "localization_2d needs a rank-2 flat");
    const Field& f = A.field();
    // Express each member form in the RREF basis (w1, w2) of the span:
    // alpha = a w1 + b w2 where (a, b) are read off at the pivot columns.
    std::vector<int> pivots;
    Matrix R = X.basis.rref(&pivots);
    require_internal(pivots.size() == 2, "rank-2 flat basis must have 2 pivots");
    Multiarrangement out(f, 2);
    for (int i = 0; i < A.size(); ++i) {
        const auto& v = A.hyperplane(i).coeffs();
        if (!in_row_span(X.basis, v)) continue;
        std::vector<Scalar> c{v[pivots[0]], v[pivots[1]]};
        out.add(Hyperplane(f, std::move(c)), A.multiplicity(i));
    }
    return out;
}

Multiarrangement project_to_rank2_coords(const Multiarrangement& A) {
    const Field& f = A.field();
    std::vector<std::vector<Scalar>> rows;
    for (const auto& h : A.hyperplanes()) rows.push_back(h.coeffs());
    Matrix basis = row_space_basis(f, rows);
    require_input(basis.rows() == 2, "arrangement does not have rank 2");
    std::vector<int> pivots;
    basis.rref(&pivots);
    Multiarrangement out(f, 2);
    for (int i = 0; i < A.size(); ++i) {
        const auto& v = A.hyperplane(i).coeffs();
        std::vector<Scalar> c{v[pivots[0]], v[pivots[1]]};
        out.add(Hyperplane(f, std::move(c)), A.multiplicity(i));
    }
    return out;
}

Multiarrangement restriction(const Multiarrangement& A, const Flat& X) {
    const Field& f = A.field();
    require_input(A.is_simple(), "restriction expects a simple arrangement");
    int sub = A.dim() - X.rank;
    require_input(sub >= 1, "restriction to a point");
    // Coordinates on X: a kernel basis of the flat's defining forms.
    Matrix M(f, X.rank, A.dim());
    for (int i = 0; i < X.rank; ++i)
        for (int j = 0; j < A.dim(); ++j) M.at(i, j) = X.basis.at(i, j);
    auto kb = M.kernel_basis();
    require_internal(static_cast<int>(kb.size()) == sub, "flat coordinate basis size");

    Multiarrangement out(f, sub);
    for (int i = 0; i < A.size(); ++i) {
        const auto& v = A.hyperplane(i).coeffs();
        if (in_row_span(X.basis, v)) continue; // H in A_X
        std::vector<Scalar> c;
        c.reserve(sub);
        for (const auto& b : kb) {
            Scalar s = f.zero();
            for (int j = 0; j < A.dim(); ++j) s += v[j] * b[j];
            c.push_back(s);
        }
        bool zero = std::all_of(c.begin(), c.end(), [](const Scalar& s) { return s.is_zero(); });
        require_internal(!zero, "restricted form vanished (central arrangement expected)");
        Hyperplane h(f, std::move(c));
        if (out.index_of(h) < 0) out.add(h, 1); // deduplicate distinct traces
    }
    return out;
}

std::map<int, long> rank2_profile(const Multiarrangement& A) {
    require_input(A.is_simple(), "rank2_profile expects a simple arrangement");
    require_input(A.rank() == 3, "rank2_profile expects rank 3");
    IntersectionLattice L = intersection_lattice(A);
    std::map<int, long> profile;
    for (const auto& fl : L.flats(2)) profile[static_cast<int>(fl.members.size())]++;
    return profile;
}

namespace {

struct PairFlats {
    int n = 0;
    std::vector<std::vector<int>> flat_of_pair;   // n x n, flat id containing {i,j}
    std::vector<std::vector<int>> flat_members;   // per flat id
};

PairFlats pair_flats(const Multiarrangement& A) {
    IntersectionLattice L = intersection_lattice(A);
    PairFlats pf;
    pf.n = A.size();
    pf.flat_of_pair.assign(pf.n, std::vector<int>(pf.n, -1));
    int id = 0;
    for (const auto& fl : L.flats(2)) {
        pf.flat_members.push_back(fl.members);
        for (size_t a = 0; a < fl.members.size(); ++a)
            for (size_t b = a + 1; b < fl.members.size(); ++b) {
                pf.flat_of_pair[fl.members[a]][fl.members[b]] = id;
                pf.flat_of_pair[fl.members[b]][fl.members[a]] = id;
            }
        ++id;
    }
    return pf;
}

bool extend_bijection(const PairFlats& p1, const PairFlats& p2, std::vector<int>& sigma,
                      std::vector<bool>& used, std::vector<int>& flat_map, int next) {
    int n = p1.n;
    if (next == n) return true;
    for (int img = 0; img < n; ++img) {
        if (used[img]) continue;
        bool ok = true;
        std::vector<std::pair<int, int>> added; // flat map entries added here
        for (int prev = 0; prev < next && ok; ++prev) {
            int f1 = p1.flat_of_pair[prev][next];
            int f2 = p2.flat_of_pair[sigma[prev]][img];
            if (f1 < 0 || f2 < 0) { ok = (f1 < 0 && f2 < 0); continue; }
            if (p1.flat_members[f1].size() != p2.flat_members[f2].size()) { ok = false; break; }
            if (flat_map[f1] == -1) {
                flat_map[f1] = f2;
                added.emplace_back(f1, f2);
            } else if (flat_map[f1] != f2) {
                ok = false;
            }
        }
        if (ok) {
            sigma[next] = img;
            used[img] = true;
            if (extend_bijection(p1, p2, sigma, used, flat_map, next + 1)) return true;
            used[img] = false;
            sigma[next] = -1;
        }
        for (auto& [f1, f2] : added) flat_map[f1] = -1;
    }
    return false;
}

} // namespace

bool lattice_isomorphic(const Multiarrangement& A1, const Multiarrangement& A2) {
    require_input(A1.rank() == 3 && A2.rank() == 3, "lattice_isomorphic expects rank-3 arrangements");
    if (A1.size() != A2.size()) return false;
    PairFlats p1 = pair_flats(A1.simple());
    PairFlats p2 = pair_flats(A2.simple());
    if (p1.flat_members.size() != p2.flat_members.size()) return false;

    // Invariant screen: multiset of flat sizes, then per-hyperplane multisets.
    auto sizes = [](const PairFlats& p) {
        std::vector<size_t> s;
        for (const auto& m : p.flat_members) s.push_back(m.size());
        std::sort(s.begin(), s.end());
        return s;
    };
    if (sizes(p1) != sizes(p2)) return false;
    auto per_h = [](const PairFlats& p) {
        std::vector<std::vector<size_t>> v(p.n);
        for (const auto& m : p.flat_members)
            for (int h : m) v[h].push_back(m.size());
        for (auto& s : v) std::sort(s.begin(), s.end());
        std::sort(v.begin(), v.end());
        return v;
    };
    if (per_h(p1) != per_h(p2)) return false;

    std::vector<int> sigma(p1.n, -1);
    std::vector<bool> used(p1.n, false);
    std::vector<int> flat_map(p1.flat_members.size(), -1);
    return extend_bijection(p1, p2, sigma, used, flat_map, 0);
}

} // namespace multarr
