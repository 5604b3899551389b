#ifndef MULTARR_ARRANGEMENT_HPP
#define MULTARR_ARRANGEMENT_HPP

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "multarr/field.hpp"
#include "multarr/polynomial.hpp"

namespace multarr {

/// A central hyperplane, stored as its normalized defining linear form:
/// first nonzero coefficient equals 1.
class Hyperplane {
  public:
    Hyperplane(const Field& f, std::vector<Scalar> coeffs);

    const Field& field() const { return *field_; }
    const std::vector<Scalar>& coeffs() const { return coeffs_; }
    int dim() const { return static_cast<int>(coeffs_.size()); }

    Polynomial form() const { return Polynomial::linear_form(*field_, coeffs_); }

    static int cmp(const Hyperplane& a, const Hyperplane& b);
    bool operator==(const Hyperplane& o) const { return cmp(*this, o) == 0; }
    bool operator<(const Hyperplane& o) const { return cmp(*this, o) < 0; }

    std::string str(std::span<const std::string> varnames) const;

  private:
    const Field* field_;
    std::vector<Scalar> coeffs_;
};

/// Central multiarrangement: distinct normalized hyperplanes in lexicographic
/// order with positive integer multiplicities. Hyperplanes that would get
/// multiplicity 0 are simply not stored.
class Multiarrangement {
  public:
    Multiarrangement(const Field& f, int dim) : field_(&f), dim_(dim) {}

    const Field& field() const { return *field_; }
    int dim() const { return dim_; }
    int size() const { return static_cast<int>(hyperplanes_.size()); } // |A|
    long total_multiplicity() const;                                  // |m|
    bool empty() const { return hyperplanes_.empty(); }
    bool is_simple() const;

    const Hyperplane& hyperplane(int i) const { return hyperplanes_[i]; }
    int multiplicity(int i) const { return mult_[i]; }
    const std::vector<Hyperplane>& hyperplanes() const { return hyperplanes_; }
    const std::vector<int>& multiplicities() const { return mult_; }

    /// Adds m to the multiplicity of h (inserting it in order if new).
    void add(const Hyperplane& h, int m = 1);
    int index_of(const Hyperplane& h) const; // -1 if absent

    int rank() const;

    Polynomial defining_polynomial() const;
    Multiarrangement deletion(const Hyperplane& h) const; // throws if h not in A
    Multiarrangement simple() const;                      // m == 1 on the support
    bool is_balanced() const; // every m(H) < |m|/2, strictly

    bool operator==(const Multiarrangement& o) const;

    // Standard constructions. B2 multiplicities are ordered (x, y, x-y, x+y);
    // A2 multiplicities (x, y, x-y); B3 multiplicities
    // (x, y, x-y, x+y, z, x-z, x+z, y-z, y+z).
    static Multiarrangement b2(const Field& f, std::array<int, 4> m);
    static Multiarrangement a2(const Field& f, std::array<int, 3> m);
    static Multiarrangement b3(const Field& f, std::array<int, 9> m);
    static Multiarrangement boolean(const Field& f, int dim);

  private:
    const Field* field_;
    int dim_;
    std::vector<Hyperplane> hyperplanes_;
    std::vector<int> mult_;
};

// --- B2 tuple machinery ----------------------------------------------------

/// The 8-element orbit of a B2 multiplicity tuple under the permutations
/// (m1 m2), (m3 m4) and the pair swap (m1 m3)(m2 m4).
std::vector<std::array<int, 4>> b2_orbit(std::array<int, 4> m);

/// Orbit representative with m2-m1 >= m4-m3 >= 0, lexicographically smallest
/// among the qualifying images.
std::array<int, 4> b2_canonical_permutation(std::array<int, 4> m);

/// If A consists of 4 concurrent lines forming a B2 in some linear coordinate
/// system, returns the multiplicity tuple (x, y, x-y, x+y) in one valid
/// labelling (well defined up to b2_orbit). Requires rank 2, char != 2.
std::optional<std::array<int, 4>> recognize_b2(const Multiarrangement& A);

/// Multiplicity tuple of a literal standard-coordinates B2 (forms exactly
/// x, y, x-y, x+y), if A is one.
std::optional<std::array<int, 4>> b2_tuple_of(const Multiarrangement& A);

// --- File formats ----------------------------------------------------------

Multiarrangement parse_arrangement_text(const std::string& text);
Multiarrangement parse_arrangement_json(const std::string& text);
std::string arrangement_to_text(const Multiarrangement& A);
std::string arrangement_to_json(const Multiarrangement& A);
/// Reads a file; `.json` selects the JSON schema, anything else the text one.
Multiarrangement load_arrangement(const std::string& path);

/// Default variable names x, y, z, w, x5, ...
std::vector<std::string> default_varnames(int dim);

/// Parses linear forms like "z", "x-y", "2x+3y-z", or a comma/space
/// separated coefficient list like "0,0,1".
Hyperplane parse_linear_form(const Field& f, int dim, const std::string& s);

} // namespace multarr

#endif
