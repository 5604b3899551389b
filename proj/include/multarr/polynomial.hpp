#ifndef MULTARR_POLYNOMIAL_HPP
#define MULTARR_POLYNOMIAL_HPP

#include <map>
#include <span>
#include <string>
#include <vector>

#include "multarr/field.hpp"

namespace multarr {

/// Dense-exponent-vector multivariate polynomial over one field.
/// Terms map exponent vectors to nonzero coefficients; a zero polynomial
/// has no terms. Everything here has <= 4 variables and small degree, so no
/// sparsity engineering.
class Polynomial {
  public:
    using Exps = std::vector<int>;

    Polynomial(const Field& f, int nvars) : field_(&f), nvars_(nvars) {}

    static Polynomial zero(const Field& f, int nvars) { return Polynomial(f, nvars); }
    static Polynomial constant(const Field& f, int nvars, const Scalar& c);
    static Polynomial variable(const Field& f, int nvars, int idx);
    /// c_0 x_0 + ... + c_{n-1} x_{n-1}
    static Polynomial linear_form(const Field& f, std::span<const Scalar> coeffs);

    const Field& field() const { return *field_; }
    int nvars() const { return nvars_; }
    bool is_zero() const { return terms_.empty(); }
    int total_degree() const; // -1 for the zero polynomial
    bool is_homogeneous() const;

    Scalar coeff(const Exps& e) const;
    void add_term(const Exps& e, const Scalar& c);

    const std::map<Exps, Scalar>& terms() const { return terms_; }

    Polynomial operator-() const;
    friend Polynomial operator+(const Polynomial&, const Polynomial&);
    friend Polynomial operator-(const Polynomial&, const Polynomial&);
    friend Polynomial operator*(const Polynomial&, const Polynomial&);
    Polynomial operator*(const Scalar& c) const;
    Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
    Polynomial& operator-=(const Polynomial& o) { return *this = *this - o; }
    Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
    Polynomial pow(int n) const;

    bool operator==(const Polynomial& o) const;
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    /// Substitutes x_i -> repl[i]; all repl share one variable count.
    Polynomial substitute(const std::vector<Polynomial>& repl) const;

    /// Evaluates at a point.
    Scalar eval(std::span<const Scalar> point) const;

    /// Least exponent of variable `var` over all terms (0 for the zero poly).
    int min_power_of_variable(int var) const;

    /// Leading coefficient/term under the lex term order of terms().
    const Scalar& leading_coeff() const;

    std::string str(std::span<const std::string> varnames) const;

  private:
    const Field* field_;
    int nvars_;
    std::map<Exps, Scalar> terms_;
};

/// Exact determinant of a square polynomial matrix by cofactor expansion
/// (all uses here are 2x2 or 3x3).
Polynomial poly_det(const std::vector<std::vector<Polynomial>>& m);

/// True iff alpha^k divides p, where alpha is a nonzero linear form.
bool divides_power(const Polynomial& p, std::span<const Scalar> alpha, int k);

} // namespace multarr

#endif
