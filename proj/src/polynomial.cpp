#include "multarr/polynomial.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace multarr {

Polynomial Polynomial::constant(const Field& f, int nvars, const Scalar& c) {
    Polynomial p(f, nvars);
    p.add_term(Exps(nvars, 0), c);
    return p;
}

Polynomial Polynomial::variable(const Field& f, int nvars, int idx) {
    require_internal(idx >= 0 && idx < nvars, "variable index out of range");
    Polynomial p(f, nvars);
    Exps e(nvars, 0);
    e[idx] = 1;
    p.add_term(e, f.one());
    return p;
}

Polynomial Polynomial::linear_form(const Field& f, std::span<const Scalar> coeffs) {
    Polynomial p(f, static_cast<int>(coeffs.size()));
    for (size_t i = 0; i < coeffs.size(); ++i) {
        Exps e(coeffs.size(), 0);
        e[i] = 1;
        p.add_term(e, coeffs[i]);
    }
    return p;
}

int Polynomial::total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_)
        d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
    return d;
}

bool Polynomial::is_homogeneous() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        int t = std::accumulate(e.begin(), e.end(), 0);
        if (d == -1) d = t;
        else if (t != d) return false;
    }
    return true;
}

Scalar Polynomial::coeff(const Exps& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? field_->zero() : it->second;
}

void Polynomial::add_term(const Exps& e, const Scalar& c) {
    require_internal(static_cast<int>(e.size()) == nvars_, "exponent vector arity mismatch");
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) terms_.erase(it);
    }
}

Polynomial Polynomial::operator-() const {
    Polynomial r(*field_, nvars_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    require_internal(a.field_ == b.field_ && a.nvars_ == b.nvars_, "polynomial ring mismatch");
    Polynomial r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, c);
    return r;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    require_internal(a.field_ == b.field_ && a.nvars_ == b.nvars_, "polynomial ring mismatch");
    Polynomial r = a;
    for (const auto& [e, c] : b.terms_) r.add_term(e, -c);
    return r;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    require_internal(a.field_ == b.field_ && a.nvars_ == b.nvars_, "polynomial ring mismatch");
    Polynomial r(*a.field_, a.nvars_);
    for (const auto& [ea, ca] : a.terms_)
        for (const auto& [eb, cb] : b.terms_) {
            Polynomial::Exps e(a.nvars_);
            for (int i = 0; i < a.nvars_; ++i) e[i] = ea[i] + eb[i];
            r.add_term(e, ca * cb);
        }
    return r;
}

Polynomial Polynomial::operator*(const Scalar& c) const {
    Polynomial r(*field_, nvars_);
    if (c.is_zero()) return r;
    for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
    return r;
}

Polynomial Polynomial::pow(int n) const {
    require_internal(n >= 0, "negative polynomial power");
    Polynomial result = constant(*field_, nvars_, field_->one());
    for (int i = 0; i < n; ++i) result *= *this;
    return result;
}

bool Polynomial::operator==(const Polynomial& o) const {
    return field_ == o.field_ && nvars_ == o.nvars_ && terms_ == o.terms_;
}

Polynomial Polynomial::substitute(const std::vector<Polynomial>& repl) const {
    require_internal(static_cast<int>(repl.size()) == nvars_, "substitution arity mismatch");
    int out_vars = repl.empty() ? 0 : repl[0].nvars();
    Polynomial r(*field_, out_vars);
    // Cache powers of each replacement.
    std::vector<std::vector<Polynomial>> pw(nvars_);
    for (int i = 0; i < nvars_; ++i)
        pw[i].push_back(constant(*field_, out_vars, field_->one()));
    for (const auto& [e, c] : terms_) {
        Polynomial term = constant(*field_, out_vars, c);
        for (int i = 0; i < nvars_; ++i) {
            while (static_cast<int>(pw[i].size()) <= e[i]) pw[i].push_back(pw[i].back() * repl[i]);
            if (e[i] > 0) term *= pw[i][e[i]];
        }
        r += term;
    }
    return r;
}

Scalar Polynomial::eval(std::span<const Scalar> point) const {
    require_internal(static_cast<int>(point.size()) == nvars_, "evaluation arity mismatch");
    Scalar acc = field_->zero();
    for (const auto& [e, c] : terms_) {
        Scalar t = c;
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < e[i]; ++k) t *= point[i];
        acc += t;
    }
    return acc;
}

int Polynomial::min_power_of_variable(int var) const {
    int mn = 0;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (first || e[var] < mn) mn = e[var];
        first = false;
    }
    return first ? 0 : mn;
}

const Scalar& Polynomial::leading_coeff() const {
    require_internal(!terms_.empty(), "leading_coeff of zero polynomial");
    return terms_.rbegin()->second;
}

std::string Polynomial::str(std::span<const std::string> varnames) const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // Print highest lex term first.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [e, c] = *it;
        std::string cs = c.str();
        bool neg = !cs.empty() && cs[0] == '-';
        if (first) {
            if (neg) os << "-", cs = cs.substr(1);
        } else {
            os << (neg ? " - " : " + ");
            if (neg) cs = cs.substr(1);
        }
        first = false;
        std::string vars;
        for (int i = 0; i < nvars_; ++i) {
            if (e[i] == 0) continue;
            if (!vars.empty()) vars += "*";
            vars += varnames[i];
            if (e[i] > 1) vars += "^" + std::to_string(e[i]);
        }
        if (vars.empty()) os << cs;
        else if (cs == "1") os << vars;
        else os << cs << "*" << vars;
    }
    return os.str();
}

Polynomial poly_det(const std::vector<std::vector<Polynomial>>& m) {
    size_t n = m.size();
    require_input(n > 0, "determinant of empty matrix");
    for (const auto& row : m)
        require_input(row.size() == n, "determinant requires a square matrix");
    const Field& f = m[0][0].field();
    int nv = m[0][0].nvars();
    if (n == 1) return m[0][0];
    Polynomial det = Polynomial::zero(f, nv);
    // Laplace expansion along the first row.
    for (size_t j = 0; j < n; ++j) {
        if (m[0][j].is_zero()) continue;
        std::vector<std::vector<Polynomial>> minor;
        minor.reserve(n - 1);
        for (size_t i = 1; i < n; ++i) {
            std::vector<Polynomial> row;
            for (size_t k = 0; k < n; ++k)
                if (k != j) row.push_back(m[i][k]);
            minor.push_back(std::move(row));
        }
        Polynomial term = m[0][j] * poly_det(minor);
        det = (j % 2 == 0) ? det + term : det - term;
    }
    return det;
}

bool divides_power(const Polynomial& p, std::span<const Scalar> alpha, int k) {
    if (k <= 0 || p.is_zero()) return true;
    const Field& f = p.field();
    int n = static_cast<int>(alpha.size());
    require_internal(n == p.nvars(), "linear form arity mismatch");
    int piv = -1;
    for (int i = 0; i < n; ++i)
        if (!alpha[i].is_zero()) { piv = i; break; }
    require_input(piv >= 0, "zero linear form");

    // Adapted coordinates u_0 = alpha(x), u_r = x_{j_r} (j != piv):
    // x_piv = (u_0 - sum a_j u_r) / a_piv, x_j = u_r. In these coordinates
    // alpha^k | p iff every term has u_0-exponent >= k.
    std::vector<Polynomial> repl;
    repl.reserve(n);
    Scalar apiv_inv = alpha[piv].inverse();
    int r = 1;
    std::vector<int> slot(n, -1);
    for (int j = 0; j < n; ++j)
        if (j != piv) slot[j] = r++;
    for (int j = 0; j < n; ++j) {
        if (j != piv) {
            repl.push_back(Polynomial::variable(f, n, slot[j]));
            continue;
        }
        Polynomial xp = Polynomial::variable(f, n, 0);
        for (int l = 0; l < n; ++l)
            if (l != piv && !alpha[l].is_zero())
                xp -= Polynomial::variable(f, n, slot[l]) * alpha[l];
        repl.push_back(xp * apiv_inv);
    }
    Polynomial q = p.substitute(repl);
    return q.min_power_of_variable(0) >= k;
}

} // namespace multarr
