#ifndef MULTARR_DERIVATIONS_HPP
#define MULTARR_DERIVATIONS_HPP

#include <array>
#include <utility>
#include <vector>

#include "multarr/arrangement.hpp"
#include "multarr/polynomial.hpp"

namespace multarr {

/// A polynomial derivation theta = sum_i comps[i] d/dx_i with homogeneous
/// components of one common degree.
struct Derivation {
    std::vector<Polynomial> comps;

    int nvars() const { return static_cast<int>(comps.size()); }
    bool is_zero() const;
    int degree() const; // -1 for zero
    /// theta(alpha) for a linear form alpha given by its coefficients.
    Polynomial apply_form(std::span<const Scalar> alpha) const;
    bool operator==(const Derivation& o) const { return comps == o.comps; }

    static Derivation euler(const Field& f, int nvars);
};

/// Multiplies every component by the given variable.
Derivation mul_variable(const Derivation& th, int var);

/// theta in D(A, m): alpha_H^{m(H)} divides theta(alpha_H) for every H.
bool in_module(const Derivation& th, const Multiarrangement& A);

/// Exact dimension of the degree-d homogeneous piece of D(A, m).
int derivation_space_dim(const Multiarrangement& A, int degree);

/// Basis of that homogeneous piece (kernel vectors of the divisibility
/// condition system, in deterministic order).
std::vector<Derivation> derivation_space_basis(const Multiarrangement& A, int degree);

struct Rank2Solution {
    int d1 = 0, d2 = 0;          // d1 <= d2, d1 + d2 = |m|
    Derivation theta1, theta2;   // homogeneous basis, deg d1 and d2
    std::vector<int> dims;       // dim table for d = 0..|m|
};

/// Exponents of a rank-2 multiarrangement in 2 coordinates by degreewise
/// kernel computation; verifies the whole dimension table against the free
/// module prediction and Saito's criterion. Failures of those checks are
/// internal errors (arithmetic bugs), never mathematical outcomes.
Rank2Solution rank2_exponents_solver(const Multiarrangement& A);

/// Test hook: perturbs solver results so the classify cross-check trips.
void set_solver_sabotage(bool on);

/// Saito's criterion: det of the coefficient matrix equals c * Q(A, m) for a
/// nonzero scalar c. Derivations not in D(A, m) are rejected (input_error).
bool saito_check(const std::vector<Derivation>& thetas, const Multiarrangement& A);

/// theta_{a,b,c} = (int^x t^c (t-x)^b (t-y)^a dt) dx + (int^y ...) dy over Q,
/// components homogeneous of degree a+b+c+1. Parameters >= 0.
Derivation theta_abc(int a, int b, int c);

/// Generators of D(A2, (p,q,r)) for balanced (p,q,r): the odd-|m| pair
/// (theta_{a,b,c}, theta_{a,b,c+1}), or the even-|m| pair
/// (x theta_{a,b,c}, y theta_{a-1,b+1,c}); membership and Saito verified.
std::pair<Derivation, Derivation> fwy_generators(int p, int q, int r);

/// I(a,b,c) = int_0^1 t^c (t-1)^b (t+1)^a dt + int_0^{-1} ..., exact.
mpq_class integral_I(int a, int b, int c);

/// Peak-point test for a balanced B2 multiplicity with minimum entry 1:
/// after moving the 1 to the last slot along the B2 symmetry orbit, m is a
/// peak point iff m1 = m2, m3 odd, and |m| divisible by 4.
bool peak_point_b2_min1(std::array<int, 4> m);

} // namespace multarr

#endif
