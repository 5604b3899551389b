#include "multarr/field.hpp"

#include <algorithm>
#include <memory>
#include <mutex>
#include <sstream>

namespace multarr {

bool is_prime(long n) {
    if (n < 2) return false;
    for (long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

namespace {

long mod_reduce(long x, long p) {
    long r = x % p;
    return r < 0 ? r + p : r;
}

long mod_mul(long a, long b, long p) {
    return static_cast<long>((static_cast<__int128>(a) * b) % p);
}

bool degree2_irreducible(long p, long m0, long m1) {
    // Degree 2: irreducible iff no root in GF(p).
    for (long x = 0; x < p; ++x) {
        long val = mod_reduce(mod_mul(x, x, p) + mod_mul(m1, x, p) + m0, p);
        if (val == 0) return false;
    }
    return true;
}

} // namespace

std::array<long, 2> default_degree2_modulus(long p) {
    for (long m1 = 0; m1 < p; ++m1)
        for (long m0 = 1; m0 < p; ++m0)
            if (degree2_irreducible(p, m0, m1)) return {m0, m1};
    throw internal_error("no irreducible degree-2 modulus found mod " + std::to_string(p));
}

FieldSpec FieldSpec::finite(long p, int e) {
    FieldSpec s;
    s.kind = FieldKind::Finite;
    s.p = p;
    s.e = e;
    if (e == 2) {
        require_input(is_prime(p), "finite field characteristic must be prime");
        s.modulus = default_degree2_modulus(p);
    }
    return s;
}

FieldSpec FieldSpec::finite(long p, int e, std::array<long, 2> modulus) {
    FieldSpec s;
    s.kind = FieldKind::Finite;
    s.p = p;
    s.e = e;
    s.modulus = modulus;
    return s;
}

// ---------------------------------------------------------------------------
// Field registry

const Field& Field::make(const FieldSpec& spec) {
    static std::mutex mu;
    static std::vector<std::unique_ptr<Field>> registry;

    if (spec.kind == FieldKind::Finite) {
        require_input(is_prime(spec.p), "field characteristic " + std::to_string(spec.p) + " is not prime");
        require_input(spec.e == 1 || spec.e == 2, "extension degree must be 1 or 2");
        if (spec.e == 2) {
            require_input(spec.modulus[0] >= 0 && spec.modulus[0] < spec.p &&
                              spec.modulus[1] >= 0 && spec.modulus[1] < spec.p,
                          "modulus coefficients must be reduced mod p");
            require_input(degree2_irreducible(spec.p, spec.modulus[0], spec.modulus[1]),
                          "modulus is reducible over GF(" + std::to_string(spec.p) + ")");
        }
        require_input(spec.p < (1L << 30), "field characteristic too large");
    }

    FieldSpec key = spec;
    if (key.kind == FieldKind::Rationals) {
        key.p = 0;
        key.e = 1;
        key.modulus = {0, 0};
    } else if (key.e == 1) {
        key.modulus = {0, 0};
    }

    std::lock_guard<std::mutex> lock(mu);
    for (const auto& f : registry)
        if (f->spec_ == key) return *f;
    registry.push_back(std::unique_ptr<Field>(new Field(key)));
    return *registry.back();
}

const Field& Field::rationals() {
    static const Field& f = make(FieldSpec::rationals());
    return f;
}

const Field& Field::finite(long p, int e) { return make(FieldSpec::finite(p, e)); }

const Field& Field::finite(long p, int e, std::array<long, 2> modulus) {
    return make(FieldSpec::finite(p, e, modulus));
}

long Field::order() const {
    require_input(is_finite(), "order() requires a finite field");
    return spec_.e == 2 ? spec_.p * spec_.p : spec_.p;
}

// ---------------------------------------------------------------------------
// Finite-field element arithmetic on (a0, a1) meaning a0 + a1*t

long Field::reduce(long x) const { return mod_reduce(x, spec_.p); }

std::array<long, 2> Field::f_add(std::array<long, 2> a, std::array<long, 2> b) const {
    return {reduce(a[0] + b[0]), reduce(a[1] + b[1])};
}

std::array<long, 2> Field::f_sub(std::array<long, 2> a, std::array<long, 2> b) const {
    return {reduce(a[0] - b[0]), reduce(a[1] - b[1])};
}

std::array<long, 2> Field::f_mul(std::array<long, 2> a, std::array<long, 2> b) const {
    const long p = spec_.p;
    long c0 = mod_mul(a[0], b[0], p);
    long c1 = mod_reduce(mod_mul(a[0], b[1], p) + mod_mul(a[1], b[0], p), p);
    long c2 = mod_mul(a[1], b[1], p);
    if (c2 != 0) {
        // t^2 = -(m1 t + m0)
        c0 = mod_reduce(c0 - mod_mul(c2, spec_.modulus[0], p), p);
        c1 = mod_reduce(c1 - mod_mul(c2, spec_.modulus[1], p), p);
    }
    return {c0, c1};
}

std::array<long, 2> Field::f_inv(std::array<long, 2> a) const {
    require_input(a[0] != 0 || a[1] != 0, "division by zero");
    // a^(q-2) with q = |K|; fine at these field sizes.
    long n = order() - 2;
    std::array<long, 2> result{1, 0};
    std::array<long, 2> base = a;
    while (n > 0) {
        if (n & 1) result = f_mul(result, base);
        base = f_mul(base, base);
        n >>= 1;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Scalar

Scalar::Scalar() : field_(&Field::rationals()), q_(0) {}

Scalar Scalar::of_rational(mpq_class q) {
    Scalar s;
    s.field_ = &Field::rationals();
    q.canonicalize();
    s.q_ = std::move(q);
    return s;
}

Scalar Scalar::of_finite(const Field* f, long a0, long a1) {
    Scalar s;
    s.field_ = f;
    s.v_ = {f->reduce(a0), f->extension_degree() == 2 ? f->reduce(a1) : 0};
    if (f->extension_degree() == 1 && a1 != 0)
        throw input_error("degree-1 field element with t-component");
    return s;
}

bool Scalar::is_zero() const {
    if (field_->is_rationals()) return q_ == 0;
    return v_[0] == 0 && v_[1] == 0;
}

bool Scalar::is_one() const {
    if (field_->is_rationals()) return q_ == 1;
    return v_[0] == 1 && v_[1] == 0;
}

namespace {
void check_same_field(const Scalar& a, const Scalar& b) {
    require_input(&a.field() == &b.field(), "scalar operands from different fields");
}
} // namespace

Scalar operator+(const Scalar& a, const Scalar& b) {
    check_same_field(a, b);
    if (a.field_->is_rationals()) return Scalar::of_rational(a.q_ + b.q_);
    Scalar r = a;
    r.v_ = a.field_->f_add(a.v_, b.v_);
    return r;
}

Scalar operator-(const Scalar& a, const Scalar& b) {
    check_same_field(a, b);
    if (a.field_->is_rationals()) return Scalar::of_rational(a.q_ - b.q_);
    Scalar r = a;
    r.v_ = a.field_->f_sub(a.v_, b.v_);
    return r;
}

Scalar operator*(const Scalar& a, const Scalar& b) {
    check_same_field(a, b);
    if (a.field_->is_rationals()) return Scalar::of_rational(a.q_ * b.q_);
    Scalar r = a;
    r.v_ = a.field_->f_mul(a.v_, b.v_);
    return r;
}

Scalar operator/(const Scalar& a, const Scalar& b) { return a * b.inverse(); }

Scalar Scalar::operator-() const {
    if (field_->is_rationals()) return of_rational(-q_);
    Scalar r = *this;
    r.v_ = field_->f_sub({0, 0}, v_);
    return r;
}

Scalar Scalar::inverse() const {
    if (field_->is_rationals()) {
        require_input(q_ != 0, "division by zero");
        return of_rational(1 / q_);
    }
    Scalar r = *this;
    r.v_ = field_->f_inv(v_);
    return r;
}

Scalar Scalar::pow(long n) const {
    if (n < 0) return inverse().pow(-n);
    Scalar result = field_->one();
    Scalar base = *this;
    while (n > 0) {
        if (n & 1) result *= base;
        base = base * base;
        n >>= 1;
    }
    return result;
}

bool Scalar::operator==(const Scalar& o) const {
    if (field_ != o.field_) return false;
    if (field_->is_rationals()) return q_ == o.q_;
    return v_ == o.v_;
}

int Scalar::cmp(const Scalar& a, const Scalar& b) {
    check_same_field(a, b);
    if (a.field_->is_rationals()) return ::cmp(a.q_, b.q_);
    long ia = a.v_[0] + a.field_->p() * a.v_[1];
    long ib = b.v_[0] + b.field_->p() * b.v_[1];
    return ia < ib ? -1 : (ia > ib ? 1 : 0);
}

const mpq_class& Scalar::rational() const {
    require_internal(field_->is_rationals(), "rational() on finite-field scalar");
    return q_;
}

std::array<long, 2> Scalar::finite_value() const {
    require_internal(field_->is_finite(), "finite_value() on rational scalar");
    return v_;
}

std::string Scalar::str() const {
    if (field_->is_rationals()) return q_.get_str();
    if (v_[1] == 0) return std::to_string(v_[0]);
    std::string t = v_[1] == 1 ? "t" : std::to_string(v_[1]) + "t";
    if (v_[0] == 0) return t;
    return std::to_string(v_[0]) + "+" + t;
}

// ---------------------------------------------------------------------------
// Field element constructors

Scalar Field::zero() const { return from_int(0); }
Scalar Field::one() const { return from_int(1); }

Scalar Field::from_int(long n) const {
    if (is_rationals()) return Scalar::of_rational(mpq_class(n));
    return Scalar::of_finite(this, reduce(n), 0);
}

Scalar Field::from_mpz(const mpz_class& n) const {
    if (is_rationals()) return Scalar::of_rational(mpq_class(n));
    mpz_class r = n % spec_.p;
    long v = r.get_si();
    return Scalar::of_finite(this, reduce(v), 0);
}

Scalar Field::from_mpq(const mpq_class& q) const {
    if (is_rationals()) return Scalar::of_rational(q);
    Scalar num = from_mpz(mpz_class(q.get_num()));
    Scalar den = from_mpz(mpz_class(q.get_den()));
    require_input(!den.is_zero(), "rational with denominator divisible by p in finite field");
    return num / den;
}

Scalar Field::element(long a0, long a1) const {
    require_input(is_finite(), "element() requires a finite field");
    return Scalar::of_finite(this, a0, a1);
}

std::vector<Scalar> Field::elements() const {
    require_input(is_finite(), "elements() requires a finite field");
    std::vector<Scalar> out;
    out.reserve(static_cast<size_t>(order()));
    long emax = spec_.e == 2 ? spec_.p : 1;
    for (long a1 = 0; a1 < emax; ++a1)
        for (long a0 = 0; a0 < spec_.p; ++a0) out.push_back(element(a0, a1));
    std::sort(out.begin(), out.end());
    return out;
}

Scalar Field::parse(const std::string& raw) const {
    std::string s;
    for (char c : raw)
        if (!isspace(static_cast<unsigned char>(c)) && c != '*') s += c;
    require_input(!s.empty(), "empty scalar literal");

    if (is_rationals()) {
        require_input(s.find('t') == std::string::npos, "finite-field literal in rational arrangement");
        auto slash = s.find('/');
        try {
            if (slash == std::string::npos) return Scalar::of_rational(mpq_class(mpz_class(s)));
            mpz_class num(s.substr(0, slash)), den(s.substr(slash + 1));
            require_input(den != 0, "zero denominator in '" + raw + "'");
            return Scalar::of_rational(mpq_class(num, den));
        } catch (const std::invalid_argument&) {
            throw input_error("bad rational literal '" + raw + "'");
        }
    }

    // Finite field: [a][+|-][b]t with integer a, b; also plain integers and
    // rationals p/q (mapped via inversion of q mod p).
    auto tpos = s.find('t');
    try {
        if (tpos == std::string::npos) {
            auto slash = s.find('/');
            if (slash != std::string::npos) {
                mpz_class num(s.substr(0, slash)), den(s.substr(slash + 1));
                return from_mpq(mpq_class(num, den));
            }
            return from_mpz(mpz_class(s));
        }
        require_input(spec_.e == 2, "t-literal in a prime field");
        require_input(tpos == s.size() - 1, "bad finite-field literal '" + raw + "'");
        std::string body = s.substr(0, tpos); // e.g. "1+2", "2", "", "-", "1-"
        long a = 0, b = 1;
        // Find the +/- separating constant and t-coefficient (not a leading sign).
        size_t sep = std::string::npos;
        for (size_t i = 1; i < body.size(); ++i)
            if (body[i] == '+' || body[i] == '-') sep = i;
        if (body.empty()) {
            b = 1;
        } else if (sep == std::string::npos) {
            if (body == "-") b = -1;
            else if (body == "+") b = 1;
            else b = std::stol(body);
        } else {
            a = std::stol(body.substr(0, sep));
            std::string bs = body.substr(sep);
            if (bs == "+") b = 1;
            else if (bs == "-") b = -1;
            else b = std::stol(bs);
        }
        return Scalar::of_finite(this, reduce(a), reduce(b));
    } catch (const std::invalid_argument&) {
        throw input_error("bad scalar literal '" + raw + "'");
    } catch (const std::out_of_range&) {
        throw input_error("scalar literal out of range '" + raw + "'");
    }
}

std::string Field::describe() const {
    if (is_rationals()) return "Q";
    std::ostringstream os;
    os << "GF(" << order() << ")";
    if (spec_.e == 2) {
        os << " = GF(" << spec_.p << "^2), t^2";
        if (spec_.modulus[1] != 0) os << "+" << spec_.modulus[1] << "t";
        if (spec_.modulus[0] != 0) os << "+" << spec_.modulus[0];
    }
    return os.str();
}

} // namespace multarr
