#include "multarr/verify.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

#include "multarr/derivations.hpp"
#include "multarr/extend.hpp"
#include "multarr/lattice.hpp"

namespace multarr {

namespace {

struct Check {
    std::ostringstream log;
    bool ok = true;
    int checks = 0;

    void expect(bool cond, const std::string& what) {
        ++checks;
        if (!cond) {
            ok = false;
            log << "FAILED: " << what << "\n";
        }
    }
};

std::string pair_str(const ExponentPair& e) {
    return "(" + std::to_string(e.d1) + "," + std::to_string(e.d2) + ")";
}

// ---- item 1: exponent table ------------------------------------------------

void item_exponent_table(Check& c) {
    auto expect_b2 = [&](std::array<int, 4> m, int d1, int d2) {
        ExponentPair e = b2_exponents(m);
        std::ostringstream what;
        what << "exp(B2,(" << m[0] << "," << m[1] << "," << m[2] << "," << m[3] << ")) = "
             << pair_str(e) << ", expected (" << d1 << "," << d2 << ")";
        c.expect(e.d1 == d1 && e.d2 == d2, what.str());
    };
    expect_b2({2, 2, 1, 3}, 3, 5);
    expect_b2({1, 3, 1, 3}, 4, 4);
    expect_b2({2, 3, 1, 2}, 4, 4);
    expect_b2({3, 5, 2, 2}, 5, 7);
    for (int k : {4, 5, 6}) expect_b2({2, k, 1, k}, k + 1, k + 2);
    for (int k = 1; k <= 5; ++k) {
        ExponentPair e = a2_exponents({2, k, k});
        c.expect(e.d1 == k + 1 && e.d2 == k + 1,
                 "exp(A2,(2," + std::to_string(k) + "," + std::to_string(k) + ")) = " + pair_str(e));
    }
    for (int k = 1; k <= 5; ++k) {
        Multiarrangement A = Multiarrangement::a2(Field::rationals(), {k, k, 2});
        Rank2Solution s = rank2_exponents_solver(A);
        c.expect(s.d1 == k + 1 && s.d2 == k + 1,
                 "solver on x^k y^k (x-y)^2, k=" + std::to_string(k) + ": (" +
                     std::to_string(s.d1) + "," + std::to_string(s.d2) + ")");
    }
}

// ---- item 2: rule/solver equivalence ----------------------------------------

void item_rule_solver(Check& c) {
    int tested = 0;
    for (int total = 1; total <= 14; ++total) {
        for (int m1 = 0; m1 <= total; ++m1)
            for (int m2 = 0; m1 + m2 <= total; ++m2)
                for (int m3 = 0; m1 + m2 + m3 <= total; ++m3) {
                    int m4 = total - m1 - m2 - m3;
                    std::array<int, 4> m{m1, m2, m3, m4};
                    bool balanced = true;
                    for (int v : m)
                        if (2 * v >= total) balanced = false;
                    if (!balanced) continue;
                    if (b2_canonical_permutation(m) != m) continue; // orbit reps only
                    ++tested;
                    ExponentPair rule = b2_exponents(m);
                    Multiarrangement A = Multiarrangement::b2(Field::rationals(), m);
                    Rank2Solution s = rank2_exponents_solver(A);
                    if (rule.d1 != s.d1 || rule.d2 != s.d2) {
                        std::ostringstream what;
                        what << "(" << m1 << "," << m2 << "," << m3 << "," << m4 << "): rule "
                             << pair_str(rule) << " [" << provenance_str(rule.prov)
                             << "] vs solver (" << s.d1 << "," << s.d2 << ")";
                        c.expect(false, what.str());
                    } else {
                        ++c.checks;
                    }
                }
    }
    c.log << "swept " << tested << " balanced canonical representatives with |m| <= 14\n";
}

// ---- item 3: Yoshinaga extension of (3,5,2,2) -------------------------------

void item_yoshinaga_3522(Check& c) {
    Multiarrangement base = Multiarrangement::b2(Field::rationals(), {3, 5, 2, 2});
    ExtensionCandidate yext = yoshinaga_extension(base);
    Multiarrangement E = yext.materialize();
    c.expect(E.size() == 13, "Yoshinaga extension has |E| = 13");
    const Field& f = Field::rationals();
    Hyperplane h0(f, {f.zero(), f.zero(), f.one()});
    c.expect(ziegler_restriction(E, h0) == base, "Ziegler restriction round-trips");
    FreenessReport rep = yoshinaga_freeness(E, h0);
    c.expect(rep.lmp == 49, "LMP = 49, got " + std::to_string(rep.lmp));
    c.expect(rep.vgmp == 47, "VGMP = 47, got " + std::to_string(rep.vgmp));
    c.expect(!rep.free && rep.slack == 2, "verdict not-free with slack 2");
}

// ---- item 4: GF(9) free extension -------------------------------------------

Multiarrangement gf9_extension() {
    const Field& K = Field::finite(3, 2); // t^2 + 1
    Multiarrangement E(K, 3);
    auto H = [&](long a, long b, long c0, long c1) {
        return Hyperplane(K, {K.from_int(a), K.from_int(b), K.element(c0, c1)});
    };
    // z (x-y)(x-y+z) x (x+z)(x+2z)(x+wz) y (y+z)(y+2z)(y+wz), w = t
    E.add(Hyperplane(K, {K.zero(), K.zero(), K.one()}), 1);
    E.add(H(1, -1, 0, 0), 1);
    E.add(H(1, -1, 1, 0), 1);
    E.add(H(1, 0, 0, 0), 1);
    E.add(H(1, 0, 1, 0), 1);
    E.add(H(1, 0, 2, 0), 1);
    E.add(H(1, 0, 0, 1), 1);
    E.add(H(0, 1, 0, 0), 1);
    E.add(H(0, 1, 1, 0), 1);
    E.add(H(0, 1, 2, 0), 1);
    E.add(H(0, 1, 0, 1), 1);
    return E;
}

void item_gf9(Check& c) {
    const Field& K = Field::finite(3, 2);
    c.expect(K.order() == 9, "GF(9) constructed");
    Scalar w = K.element(0, 1);
    c.expect(w != K.from_int(0) && w != K.from_int(1) && w != K.from_int(2),
             "w = t avoids the prime field");
    Multiarrangement E = gf9_extension();
    c.expect(E.size() == 11, "the example has 11 hyperplanes, got " + std::to_string(E.size()));

    Hyperplane h0(K, {K.zero(), K.zero(), K.one()});
    Multiarrangement ZR = ziegler_restriction(E, h0);
    Multiarrangement base = Multiarrangement::b2(K, {0, 0, 0, 0});
    // Q(A,m) = x^4 y^4 (x-y)^2 over K
    base.add(Hyperplane(K, {K.one(), K.zero()}), 4);
    base.add(Hyperplane(K, {K.zero(), K.one()}), 4);
    base.add(Hyperplane(K, {K.one(), K.from_int(-1)}), 2);
    c.expect(ZR == base, "Ziegler restriction is x^4 y^4 (x-y)^2");

    FreenessReport rep = yoshinaga_freeness(E, h0);
    c.expect(rep.b2 == 25, "b2 = 25, got " + std::to_string(rep.b2));
    c.expect(rep.restriction_exponents.d1 == 5 && rep.restriction_exponents.d2 == 5,
             "restriction exponents (5,5), got " + pair_str(rep.restriction_exponents));
    c.expect(rep.free, "reported free");
    c.expect(rep.exponents == std::array<int, 3>{1, 5, 5}, "exponents (1,5,5)");
}

// ---- item 5: peak-point criterion -------------------------------------------

void item_peak_criterion(Check& c) {
    int tested = 0;
    for (int total = 4; total <= 14; ++total) {
        for (int m1 = 1; m1 <= total; ++m1)
            for (int m2 = 1; m1 + m2 <= total; ++m2)
                for (int m3 = 1; m1 + m2 + m3 < total; ++m3) {
                    int m4 = total - m1 - m2 - m3;
                    std::array<int, 4> m{m1, m2, m3, m4};
                    if (*std::min_element(m.begin(), m.end()) != 1) continue;
                    bool balanced = true;
                    for (int v : m)
                        if (2 * v >= total) balanced = false;
                    if (!balanced) continue;
                    if (b2_canonical_permutation(m) != m) continue;
                    ++tested;
                    bool peak = peak_point_b2_min1(m);
                    Rank2Solution s =
                        rank2_exponents_solver(Multiarrangement::b2(Field::rationals(), m));
                    std::ostringstream id;
                    id << "(" << m1 << "," << m2 << "," << m3 << "," << m4 << ")";
                    c.expect(peak == (s.d2 - s.d1 == 2),
                             "peak rule vs solver gap at " + id.str());
                    if (total % 2 == 0) {
                        // Orbit image with the 1 in the last slot; parameters
                        // of the FWY generator of the A2 deletion.
                        std::array<int, 4> rep{};
                        bool have = false;
                        for (const auto& img : b2_orbit(m))
                            if (img[3] == 1 && (!have || img < rep)) {
                                rep = img;
                                have = true;
                            }
                        c.expect(have, "orbit image with m4 = 1 exists at " + id.str());
                        int a = (-rep[0] + rep[1] + rep[2] - 1) / 2;
                        int b = (rep[0] - rep[1] + rep[2] - 1) / 2;
                        int cc = (rep[0] + rep[1] - rep[2] - 1) / 2;
                        c.expect(a >= 0 && b >= 0 && cc >= 0, "FWY parameters nonnegative at " + id.str());
                        bool ivanish = integral_I(a, b, cc) == 0;
                        c.expect(peak == ivanish, "peak rule vs integral test at " + id.str());
                    }
                }
    }
    c.log << "tested " << tested << " balanced representatives with min entry 1\n";
}

// ---- item 6: appendix integral suite ----------------------------------------

void item_integral_suite(Check& c) {
    for (int a = 0; a <= 6; ++a)
        for (int b = 0; b <= 6; ++b)
            for (int cc = 0; cc <= 6; ++cc) {
                bool expect_zero = (a == b) && ((a + b + cc) % 2 == 0);
                bool zero = integral_I(a, b, cc) == 0;
                if (zero != expect_zero) {
                    std::ostringstream what;
                    what << "I(" << a << "," << b << "," << cc << ") zero-pattern";
                    c.expect(false, what.str());
                } else {
                    ++c.checks;
                }
            }
    c.expect(integral_I(1, 1, 1) == mpq_class(-1, 2), "I(1,1,1) = -1/2");

    int families = 0;
    for (int p = 1; p <= 11; ++p)
        for (int q = 1; q <= 11; ++q)
            for (int r = 1; r <= 11; ++r) {
                int total = p + q + r;
                if (total > 13) continue;
                if (2 * p >= total || 2 * q >= total || 2 * r >= total) continue;
                ++families;
                try {
                    // Membership and Saito run inside fwy_generators.
                    auto [g1, g2] = fwy_generators(p, q, r);
                    if (g1.degree() + g2.degree() != total) {
                        std::ostringstream what;
                        what << "FWY degrees at (" << p << "," << q << "," << r << ")";
                        c.expect(false, what.str());
                    } else {
                        ++c.checks;
                    }
                } catch (const std::exception& e) {
                    std::ostringstream what;
                    what << "FWY generators at (" << p << "," << q << "," << r << "): " << e.what();
                    c.expect(false, what.str());
                }
            }
    c.log << "checked " << families << " balanced FWY families with p+q+r <= 13\n";
}

// ---- items 7-9: searches -----------------------------------------------------

void item_k3_existence(Check& c) {
    Multiarrangement base = Multiarrangement::b2(Field::rationals(), {2, 3, 1, 3});
    SearchDomain dom;
    dom.height = 4;
    SearchResult res = search_free_extensions(base, dom);
    c.expect(res.vgmp_target == 29, "VGMP target 29");
    c.expect(!res.found.empty(),
             "free extension of (2,3,1,3) found on the height-4 grid (got " +
                 std::to_string(res.found.size()) + ")");
    for (const auto& fe : res.found) {
        c.expect(fe.report.free && fe.report.lmp == 29 && fe.report.vgmp == 29,
                 "found extension has LMP = VGMP = 29");
        c.expect(fe.report.exponents == std::array<int, 3>{1, 4, 5},
                 "found extension has exponents (1,4,5)");
    }
    c.log << "found " << res.found.size() << " free extensions (modulo normalization); "
          << res.stats.leaves << " leaves, " << res.stats.pruned_bounds << " bounds prunes, "
          << res.stats.pruned_lmp << " LMP prunes\n";
}

void item_k4_nonexistence(Check& c) {
    Multiarrangement base = Multiarrangement::b2(Field::rationals(), {2, 4, 1, 4});
    SearchDomain dom;
    dom.height = 4;
    SearchResult res = search_free_extensions(base, dom);
    c.expect(res.vgmp_target == 41, "VGMP target 41");
    c.expect(res.bounds_prune_active, "restriction-size bounds active");
    c.expect(res.found.empty(),
             "no free extension of (2,4,1,4) on the height-4 grid (found " +
                 std::to_string(res.found.size()) + ")");
    c.expect(res.stats.pruned_bounds + res.stats.pruned_lmp > 0, "prunes are accounted");
    c.log << "grid statement: " << res.domain_note << "\n";
    c.log << res.stats.nodes << " line placements; " << res.stats.leaves << " leaves; "
          << res.stats.pruned_bounds << " bounds prunes; " << res.stats.pruned_lmp
          << " LMP prunes\n";
}

void item_nonisomorphic_3522(Check& c) {
    Multiarrangement base = Multiarrangement::b2(Field::rationals(), {3, 5, 2, 2});
    SearchDomain dom;
    dom.height = 4;
    SearchResult res = search_free_extensions(base, dom);
    c.expect(res.found.size() >= 2, "at least two free extensions of (3,5,2,2) found (got " +
                                        std::to_string(res.found.size()) + ")");
    CharPoly expected;
    expected.coeffs = {mpz_class(-35), mpz_class(47), mpz_class(-13), mpz_class(1)};
    bool nonisomorphic_pair = false;
    std::vector<Multiarrangement> mats;
    for (const auto& fe : res.found) {
        mats.push_back(fe.candidate.materialize());
        c.expect(characteristic_polynomial(mats.back()) == expected,
                 "found extension has chi = (t-1)(t-5)(t-7)");
        // All restriction sizes are exactly 6 for this base.
        IntersectionLattice L = intersection_lattice(mats.back());
        const Field& f = Field::rationals();
        Hyperplane h0(f, {f.zero(), f.zero(), f.one()});
        int pivot = mats.back().index_of(h0);
        for (int h = 0; h < mats.back().size(); ++h) {
            if (h == pivot) continue;
            int cnt = 0;
            for (const auto& fl : L.flats(2))
                if (std::find(fl.members.begin(), fl.members.end(), h) != fl.members.end()) ++cnt;
            if (cnt != 6) c.expect(false, "restriction size 6 for every hyperplane");
        }
    }
    for (size_t i = 0; i < mats.size() && !nonisomorphic_pair; ++i)
        for (size_t j = i + 1; j < mats.size() && !nonisomorphic_pair; ++j)
            if (!lattice_isomorphic(mats[i], mats[j])) nonisomorphic_pair = true;
    c.expect(nonisomorphic_pair, "two found extensions have non-isomorphic lattices");
    c.log << "found " << res.found.size() << " free extensions (modulo normalization)\n";
}

// ---- item 10: B3 family -------------------------------------------------------

void item_b3_family(Check& c) {
    const Field& f = Field::rationals();
    for (int k : {4, 5}) {
        Multiarrangement A = Multiarrangement::b3(f, {2, k, 1, k, 1, 1, 1, 1, 1});
        VertexReport rep = free_vertex_check(A, b3_standard_filtration(A));
        c.expect(rep.filtration_ok && rep.satisfied, "B3 n_k passes for k=" + std::to_string(k));
        std::vector<int> expected{5, k + 1, k + 2};
        c.expect(rep.exponents == expected, "exponents (5,k+1,k+2) for k=" + std::to_string(k));

        LocalizationWitness w = non_extendable_by_localization(A);
        c.expect(w.found && w.k == k, "localization witness for k=" + std::to_string(k));
    }
    // e = 2 violates via the m(x) >= e+f+g-1 localization.
    {
        Multiarrangement A = Multiarrangement::b3(f, {2, 4, 1, 4, 2, 1, 1, 1, 1});
        VertexReport rep = free_vertex_check(A, b3_standard_filtration(A));
        c.expect(rep.filtration_ok && !rep.satisfied, "e=2 violates the vertex condition");
        bool seen = false;
        for (const auto& v : rep.violations)
            if (v.lhs == 2 && v.rhs == 3) seen = true;
        c.expect(seen, "e=2 violation shows 2 >= e+f+g-1 failing");
    }
    // h = 2 violates via m(x-y) >= f+h-1.
    {
        Multiarrangement A = Multiarrangement::b3(f, {2, 4, 1, 4, 1, 1, 1, 2, 1});
        VertexReport rep = free_vertex_check(A, b3_standard_filtration(A));
        c.expect(rep.filtration_ok && !rep.satisfied, "h=2 violates the vertex condition");
        bool seen = false;
        for (const auto& v : rep.violations)
            if (v.lhs == 1 && v.rhs == 2) seen = true;
        c.expect(seen, "h=2 violation shows 1 >= f+h-1 failing");
    }
    // k = 3: no localization witness.
    {
        Multiarrangement A = Multiarrangement::b3(f, {2, 3, 1, 3, 1, 1, 1, 1, 1});
        c.expect(!non_extendable_by_localization(A).found, "no witness for k=3");
        Multiarrangement simple = Multiarrangement::b3(f, {1, 1, 1, 1, 1, 1, 1, 1, 1});
        c.expect(!non_extendable_by_localization(simple).found, "no witness for simple B3");
    }
}

// ---- item 11: randomized property suites ---------------------------------------

struct Rng {
    std::mt19937 gen;
    explicit Rng(unsigned seed) : gen(seed) {}
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
};

ExtensionCandidate random_candidate(Rng& rng, const Field& f, const std::vector<Scalar>& universe) {
    std::array<int, 4> m{rng.uniform(1, 3), rng.uniform(1, 3), rng.uniform(1, 3),
                         rng.uniform(1, 3)};
    Multiarrangement base = Multiarrangement::b2(f, m);
    ExtensionCandidate cand{base, {}};
    for (int i = 0; i < base.size(); ++i) {
        std::vector<int> idx(universe.size());
        std::iota(idx.begin(), idx.end(), 0);
        std::shuffle(idx.begin(), idx.end(), rng.gen);
        std::vector<Scalar> offs;
        for (int j = 0; j < base.multiplicity(i); ++j) offs.push_back(universe[idx[j]]);
        std::sort(offs.begin(), offs.end());
        cand.offsets.push_back(std::move(offs));
    }
    return cand;
}

void item_properties(Check& c) {
    const int N = 500;

    // LMP >= VGMP on random candidates, per field.
    for (int field_case = 0; field_case < 2; ++field_case) {
        const Field& f = field_case == 0 ? Field::rationals() : Field::finite(5, 1);
        std::vector<Scalar> universe =
            f.is_rationals() ? rational_height_grid(3) : f.elements();
        Rng rng(20240901u + field_case);
        int bad = 0;
        for (int it = 0; it < N; ++it) {
            ExtensionCandidate cand = random_candidate(rng, f, universe);
            Multiarrangement E = cand.materialize();
            Hyperplane h0(f, {f.zero(), f.zero(), f.one()});
            if (lmp(E) < vgmp(E, h0)) ++bad;
        }
        c.expect(bad == 0, std::string("LMP >= VGMP over ") + f.describe() + " (" +
                               std::to_string(bad) + " violations in " + std::to_string(N) + ")");
    }

    // Deletion identity LMP(E') = LMP(E) - |E^H|, and chi(E;1) = 0.
    {
        const Field& f = Field::rationals();
        std::vector<Scalar> universe = rational_height_grid(3);
        Rng rng(7u);
        int bad_del = 0, bad_chi = 0, done = 0;
        while (done < N) {
            ExtensionCandidate cand = random_candidate(rng, f, universe);
            Multiarrangement E = cand.materialize();
            if (characteristic_polynomial(E).eval(1) != 0) ++bad_chi;
            int h = rng.uniform(0, E.size() - 1);
            Multiarrangement Ed = E.deletion(E.hyperplane(h));
            if (Ed.rank() != 3) continue;
            IntersectionLattice L = intersection_lattice(E);
            long eh = 0;
            for (const auto& fl : L.flats(2))
                if (std::find(fl.members.begin(), fl.members.end(), h) != fl.members.end()) ++eh;
            if (lmp(Ed) != lmp(E) - eh) ++bad_del;
            ++done;
        }
        c.expect(bad_del == 0, "LMP(E') = LMP(E) - |E^H| under deletion (" +
                                   std::to_string(bad_del) + " violations)");
        c.expect(bad_chi == 0, "chi(E;1) = 0 (" + std::to_string(bad_chi) + " violations)");
    }

    // P_2 identity on random simple rank-3 arrangements.
    {
        const Field& f = Field::rationals();
        std::vector<Scalar> universe = rational_height_grid(3);
        Rng rng(11u);
        int bad = 0;
        for (int it = 0; it < N; ++it) {
            ExtensionCandidate cand = random_candidate(rng, f, universe);
            Multiarrangement E = cand.materialize();
            auto profile = rank2_profile(E);
            long n = E.size();
            long rhs = n * (n - 1) / 2;
            for (const auto& [i, cnt] : profile)
                if (i > 2) rhs -= static_cast<long>(i) * (i - 1) / 2 * cnt;
            long p2 = profile.count(2) ? profile.at(2) : 0;
            if (p2 != rhs) ++bad;
        }
        c.expect(bad == 0, "P2 identity (" + std::to_string(bad) + " violations)");
    }

    // Permutation invariance of b2_exponents.
    {
        Rng rng(13u);
        int bad = 0;
        for (int it = 0; it < N; ++it) {
            std::array<int, 4> m{rng.uniform(0, 4), rng.uniform(0, 4), rng.uniform(0, 4),
                                 rng.uniform(0, 4)};
            if (m[0] + m[1] + m[2] + m[3] == 0) m[0] = 1;
            ExponentPair e0 = b2_exponents(m);
            for (const auto& img : b2_orbit(m)) {
                ExponentPair e = b2_exponents(img);
                if (!(e == e0)) ++bad;
            }
        }
        c.expect(bad == 0, "b2_exponents constant on permutation orbits (" + std::to_string(bad) +
                               " violations)");
    }
}

} // namespace

std::vector<std::string> verify_item_names() {
    return {"exponent-table",  "rule-solver",  "yoshinaga-3522", "gf9",
            "peak-criterion",  "integral-suite", "k3-existence", "k4-nonexistence",
            "non-isomorphic-3522", "b3-family", "properties"};
}

std::vector<VerifyItem> verify_paper(const std::vector<std::string>& only) {
    using ItemFn = std::function<void(Check&)>;
    std::vector<std::pair<std::string, ItemFn>> items = {
        {"exponent-table", item_exponent_table},
        {"rule-solver", item_rule_solver},
        {"yoshinaga-3522", item_yoshinaga_3522},
        {"gf9", item_gf9},
        {"peak-criterion", item_peak_criterion},
        {"integral-suite", item_integral_suite},
        {"k3-existence", item_k3_existence},
        {"k4-nonexistence", item_k4_nonexistence},
        {"non-isomorphic-3522", item_nonisomorphic_3522},
        {"b3-family", item_b3_family},
        {"properties", item_properties},
    };

    std::vector<VerifyItem> out;
    for (auto& [id, fn] : items) {
        if (!only.empty()) {
            bool match = false;
            for (const auto& o : only)
                if (id.find(o) != std::string::npos) match = true;
            if (!match) continue;
        }
        VerifyItem item;
        item.id = id;
        Check c;
        auto t0 = std::chrono::steady_clock::now();
        try {
            fn(c);
            item.pass = c.ok;
        } catch (const std::exception& e) {
            c.ok = false;
            c.log << "exception: " << e.what() << "\n";
            item.pass = false;
        }
        auto t1 = std::chrono::steady_clock::now();
        item.ms = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
        std::string log = c.log.str();
        item.detail = std::to_string(c.checks) + " checks" + (log.empty() ? "" : "; " + log);
        out.push_back(std::move(item));
    }
    return out;
}

} // namespace multarr
