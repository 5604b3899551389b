#ifndef MULTARR_FIELD_HPP
#define MULTARR_FIELD_HPP

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "multarr/errors.hpp"

namespace multarr {

class Field;

enum class FieldKind { Rationals, Finite };

/// Description of a coefficient field: the rationals, or GF(p^e) with e <= 2.
/// For e == 2 the modulus is t^2 + modulus[1]*t + modulus[0], monic
/// irreducible over GF(p).
struct FieldSpec {
    FieldKind kind = FieldKind::Rationals;
    long p = 0;
    int e = 1;
    std::array<long, 2> modulus{0, 0};

    static FieldSpec rationals() { return FieldSpec{}; }
    static FieldSpec finite(long p, int e);
    static FieldSpec finite(long p, int e, std::array<long, 2> modulus);

    bool operator==(const FieldSpec&) const = default;
};

/// One exact field element. Default-constructed scalars are rational zero.
/// Binary operations require both operands to live in the same field.
class Scalar {
  public:
    Scalar();
    static Scalar of_rational(mpq_class q);
    static Scalar of_finite(const Field* f, long a0, long a1);

    const Field& field() const { return *field_; }
    bool is_zero() const;
    bool is_one() const;

    Scalar operator-() const;
    Scalar inverse() const; // throws input_error on zero
    Scalar pow(long n) const;

    friend Scalar operator+(const Scalar&, const Scalar&);
    friend Scalar operator-(const Scalar&, const Scalar&);
    friend Scalar operator*(const Scalar&, const Scalar&);
    friend Scalar operator/(const Scalar&, const Scalar&);
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    bool operator==(const Scalar&) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }

    /// Total order used for canonical sorting: numeric order over Q,
    /// enumeration-index order (a0 + p*a1) over GF(p^e).
    static int cmp(const Scalar&, const Scalar&);
    bool operator<(const Scalar& o) const { return cmp(*this, o) < 0; }

    const mpq_class& rational() const; // rationals only
    std::array<long, 2> finite_value() const; // finite only

    std::string str() const;

  private:
    friend class Field;
    const Field* field_;
    mpq_class q_;
    std::array<long, 2> v_{0, 0};
};

/// Immutable field handle. Instances are interned and live for the program
/// duration, so raw pointers taken from the registry never dangle.
class Field {
  public:
    static const Field& rationals();
    static const Field& finite(long p, int e);
    static const Field& finite(long p, int e, std::array<long, 2> modulus);
    static const Field& make(const FieldSpec& spec);

    const FieldSpec& spec() const { return spec_; }
    FieldKind kind() const { return spec_.kind; }
    bool is_rationals() const { return spec_.kind == FieldKind::Rationals; }
    bool is_finite() const { return spec_.kind == FieldKind::Finite; }
    long characteristic() const { return is_finite() ? spec_.p : 0; }
    long p() const { return spec_.p; }
    int extension_degree() const { return spec_.e; }
    long order() const; // finite only: p^e
    const std::array<long, 2>& modulus() const { return spec_.modulus; }

    Scalar zero() const;
    Scalar one() const;
    Scalar from_int(long n) const;
    Scalar from_mpz(const mpz_class& n) const;
    Scalar from_mpq(const mpq_class& q) const;
    Scalar element(long a0, long a1 = 0) const; // finite
    std::vector<Scalar> elements() const;       // finite only

    /// Parses "7", "-3/4", "2t", "1+2t" (also accepts "1+2*t").
    Scalar parse(const std::string& s) const;

    std::string describe() const; // "Q" or "GF(9) = GF(3^2), t^2+1"

    bool operator==(const Field& o) const { return this == &o; }

    // Raw finite-field element arithmetic on (a0, a1) meaning a0 + a1*t.
    long reduce(long x) const; // into [0, p)
    std::array<long, 2> f_add(std::array<long, 2>, std::array<long, 2>) const;
    std::array<long, 2> f_sub(std::array<long, 2>, std::array<long, 2>) const;
    std::array<long, 2> f_mul(std::array<long, 2>, std::array<long, 2>) const;
    std::array<long, 2> f_inv(std::array<long, 2>) const;

  private:
    explicit Field(FieldSpec spec) : spec_(std::move(spec)) {}
    Field(const Field&) = delete;

    FieldSpec spec_;
};

bool is_prime(long n);
/// Lexicographically first (m1, m0) with t^2 + m1*t + m0 irreducible mod p.
std::array<long, 2> default_degree2_modulus(long p);

} // namespace multarr

#endif
