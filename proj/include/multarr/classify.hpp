#ifndef MULTARR_CLASSIFY_HPP
#define MULTARR_CLASSIFY_HPP

#include <array>
#include <set>
#include <span>
#include <string>

#include "multarr/arrangement.hpp"

namespace multarr {

enum class Provenance { UnbalancedRule, A2Rule, B2PeakRule, Solver };

std::string provenance_str(Provenance p);

/// Exponents (d1 <= d2) of a free rank-2 multiarrangement together with the
/// rule that produced them.
struct ExponentPair {
    int d1 = 0, d2 = 0;
    Provenance prov = Provenance::Solver;
    int delta() const { return d2 - d1; }
    bool operator==(const ExponentPair& o) const { return d1 == o.d1 && d2 == o.d2; }
};

/// Unbalanced rank-2 rule: exp = (|m| - m_max, m_max); requires
/// m_max >= |m|/2 (balanced input is an error -- the caller dispatches).
ExponentPair unbalanced_exponents(std::span<const int> m);

/// Full A2 classification: unbalanced rule, else the floor/ceil split.
ExponentPair a2_exponents(std::array<int, 3> m);

/// Possible exponent gaps for a balanced B2 multiplicity: {1} when |m| is
/// odd, {0, 2} when |m| is even.
std::set<int> b2_delta_candidates(std::array<int, 4> m);

/// Exponents of (B2, m) over Q. Dispatch: zero entries reduce to smaller
/// arrangements; unbalanced rule; balanced odd |m| closed form; balanced even
/// |m| with minimum 1 decided by the peak-point rule; everything else by the
/// exact solver.
ExponentPair b2_exponents(std::array<int, 4> m);

/// Exponents of an arbitrary rank-2 multiarrangement given in 2 coordinates.
/// Over Q this uses the closed-form rules where they apply (B2 recognized up
/// to linear isomorphism); over finite fields everything goes to the solver,
/// since the classification theorems assume characteristic 0.
ExponentPair rank2_multi_exponents(const Multiarrangement& A);

/// Runs both the rule dispatch and the solver on (B2, m) over Q and throws
/// internal_error with diagnostics if they disagree.
ExponentPair b2_exponents_checked(std::array<int, 4> m);

} // namespace multarr

#endif
