#ifndef MULTARR_LATTICE_HPP
#define MULTARR_LATTICE_HPP

#include <map>
#include <string>
#include <vector>

#include "multarr/arrangement.hpp"
#include "multarr/matrix.hpp"

namespace multarr {

/// A flat of the intersection lattice, keyed by the canonical RREF basis of
/// the span of the linear forms vanishing on it.
struct Flat {
    Matrix basis;             // rank x dim, RREF rows
    int rank = 0;             // codimension
    std::vector<int> members; // indices of hyperplanes containing the flat
    long mobius = 0;
};

/// Intersection lattice of a central arrangement of rank <= 3 (ambient
/// dimension <= 4), flats grouped by rank, ordered by reverse inclusion.
class IntersectionLattice {
  public:
    static IntersectionLattice build(const Multiarrangement& A);

    int arrangement_size() const { return n_; }
    int ambient_dim() const { return dim_; }
    int rank() const { return static_cast<int>(by_rank_.size()) - 1; }
    const std::vector<Flat>& flats(int rank) const { return by_rank_.at(rank); }
    long mobius_sum_rank(int rank) const;

  private:
    int n_ = 0, dim_ = 0;
    std::vector<std::vector<Flat>> by_rank_;
};

/// chi(A; t) with exact integer coefficients, ascending powers of t.
struct CharPoly {
    std::vector<mpz_class> coeffs;

    mpz_class eval(long t) const;
    /// For central rank-3 A: chi = t^(l-3) (t-1)(t^2 - b1 t + b2).
    long b1() const;
    long b2() const;
    std::string str() const;
    bool operator==(const CharPoly& o) const { return coeffs == o.coeffs; }
};

IntersectionLattice intersection_lattice(const Multiarrangement& A);
CharPoly characteristic_polynomial(const Multiarrangement& A);

/// Sub-multiarrangement of hyperplanes containing the flat (ambient coords).
Multiarrangement localization(const Multiarrangement& A, const Flat& X);

/// The localization written in 2 coordinates (rank-2 flats only): member
/// forms are expressed in the canonical RREF basis of their common span.
Multiarrangement localization_2d(const Multiarrangement& A, const Flat& X);

/// Rewrites a rank-2 multiarrangement (any ambient dimension) in the 2
/// canonical coordinates of the span of its forms.
Multiarrangement project_to_rank2_coords(const Multiarrangement& A);

/// Restriction A^X of a simple arrangement to the flat X, as a simple
/// arrangement in dim(A) - rank(X) coordinates on X.
Multiarrangement restriction(const Multiarrangement& A, const Flat& X);

/// P_i = #{X in L_2 : |A_X| = i} for a central rank-3 simple arrangement.
std::map<int, long> rank2_profile(const Multiarrangement& A);

/// Whether two rank-3 simple arrangements have isomorphic intersection
/// lattices: invariant screening, then backtracking over hyperplane
/// bijections that match rank-2 flats exactly.
bool lattice_isomorphic(const Multiarrangement& A1, const Multiarrangement& A2);

} // namespace multarr

#endif
