#include "multarr/classify.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "multarr/derivations.hpp"

namespace multarr {

std::string provenance_str(Provenance p) {
    switch (p) {
        case Provenance::UnbalancedRule: return "unbalanced-rule";
        case Provenance::A2Rule: return "a2-rule";
        case Provenance::B2PeakRule: return "b2-peak-rule";
        case Provenance::Solver: return "solver";
    }
    return "?";
}

ExponentPair unbalanced_exponents(std::span<const int> m) {
    long total = std::accumulate(m.begin(), m.end(), 0L);
    int mx = m.empty() ? 0 : *std::max_element(m.begin(), m.end());
    require_input(2L * mx >= total, "unbalanced rule applied to a balanced multiplicity");
    return {static_cast<int>(total - mx), mx, Provenance::UnbalancedRule};
}

ExponentPair a2_exponents(std::array<int, 3> m) {
    for (int v : m) require_input(v >= 0, "negative multiplicity");
    long total = m[0] + m[1] + m[2];
    int mx = *std::max_element(m.begin(), m.end());
    if (2L * mx >= total) return unbalanced_exponents(m);
    int lo = static_cast<int>(total / 2);
    return {lo, static_cast<int>(total - lo), Provenance::A2Rule};
}

std::set<int> b2_delta_candidates(std::array<int, 4> m) {
    long total = m[0] + m[1] + m[2] + m[3];
    for (int v : m) require_input(2L * v < total, "delta candidates need a balanced multiplicity");
    return total % 2 == 1 ? std::set<int>{1} : std::set<int>{0, 2};
}

namespace {

ExponentPair solver_on_b2(std::array<int, 4> m) {
    Multiarrangement A = Multiarrangement::b2(Field::rationals(), m);
    Rank2Solution s = rank2_exponents_solver(A);
    return {s.d1, s.d2, Provenance::Solver};
}

} // namespace

ExponentPair b2_exponents(std::array<int, 4> m) {
    for (int v : m) require_input(v >= 0, "negative multiplicity");
    long total = m[0] + m[1] + m[2] + m[3];
    if (total == 0) return {0, 0, Provenance::UnbalancedRule};

    int mx = *std::max_element(m.begin(), m.end());
    if (2L * mx >= total) return unbalanced_exponents(m);

    // Balanced. A zero entry reduces to three (or fewer) concurrent lines,
    // which is an A2 up to linear isomorphism.
    int zeros = static_cast<int>(std::count(m.begin(), m.end(), 0));
    if (zeros > 0) {
        // Balanced with <= 2 support lines is impossible, so this is an A2.
        std::array<int, 3> a{};
        int k = 0;
        for (int v : m)
            if (v > 0) a[k++] = v;
        require_internal(k == 3, "balanced B2 multiplicity with support < 3");
        return a2_exponents(a);
    }

    if (total % 2 == 1) {
        // Gap is exactly 1 for balanced odd |m|.
        return {static_cast<int>((total - 1) / 2), static_cast<int>((total + 1) / 2),
                Provenance::B2PeakRule};
    }
    int mn = *std::min_element(m.begin(), m.end());
    if (mn == 1) {
        bool peak = peak_point_b2_min1(m);
        int half = static_cast<int>(total / 2);
        if (peak) return {half - 1, half + 1, Provenance::B2PeakRule};
        return {half, half, Provenance::B2PeakRule};
    }
    // Open territory: balanced, even |m|, minimum >= 2.
    return solver_on_b2(m);
}

ExponentPair rank2_multi_exponents(const Multiarrangement& A) {
    require_input(A.dim() == 2, "rank2_multi_exponents expects 2 coordinates");
    long total = A.total_multiplicity();
    if (total == 0) return {0, 0, Provenance::UnbalancedRule};

    if (A.field().is_finite()) {
        // The closed-form rules are characteristic-0 theorems.
        Rank2Solution s = rank2_exponents_solver(A);
        return {s.d1, s.d2, Provenance::Solver};
    }

    const auto& mult = A.multiplicities();
    int mx = *std::max_element(mult.begin(), mult.end());
    if (2L * mx >= total) return unbalanced_exponents(mult);

    // Balanced: by rank-2 theory the support has >= 3 lines here.
    if (A.size() == 3) {
        // Any 3 concurrent lines are linearly isomorphic to A2.
        return a2_exponents({mult[0], mult[1], mult[2]});
    }
    if (A.size() == 4) {
        if (auto tuple = recognize_b2(A)) return b2_exponents(*tuple);
    }
    Rank2Solution s = rank2_exponents_solver(A);
    return {s.d1, s.d2, Provenance::Solver};
}

ExponentPair b2_exponents_checked(std::array<int, 4> m) {
    ExponentPair rule = b2_exponents(m);
    if (rule.prov == Provenance::Solver) return rule;
    ExponentPair solver = solver_on_b2(m);
    if (!(rule == solver)) {
        std::ostringstream os;
        os << "rule/solver conflict on B2 multiplicity (" << m[0] << "," << m[1] << "," << m[2]
           << "," << m[3] << "): " << provenance_str(rule.prov) << " gives (" << rule.d1 << ","
           << rule.d2 << "), solver gives (" << solver.d1 << "," << solver.d2 << ")";
        throw internal_error(os.str());
    }
    return rule;
}

} // namespace multarr
