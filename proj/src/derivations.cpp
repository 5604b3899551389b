#include "multarr/derivations.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>

#include "multarr/matrix.hpp"

namespace multarr {

namespace {
std::atomic<bool> g_sabotage{false};
}

void set_solver_sabotage(bool on) { g_sabotage.store(on); }

bool Derivation::is_zero() const {
    return std::all_of(comps.begin(), comps.end(), [](const Polynomial& p) { return p.is_zero(); });
}

int Derivation::degree() const {
    int d = -1;
    for (const auto& p : comps)
        if (!p.is_zero()) d = std::max(d, p.total_degree());
    return d;
}

Polynomial Derivation::apply_form(std::span<const Scalar> alpha) const {
    require_internal(alpha.size() == comps.size(), "form arity mismatch");
    Polynomial out = Polynomial::zero(comps[0].field(), comps[0].nvars());
    for (size_t i = 0; i < comps.size(); ++i) out += comps[i] * alpha[i];
    return out;
}

Derivation Derivation::euler(const Field& f, int nvars) {
    Derivation th;
    for (int i = 0; i < nvars; ++i) th.comps.push_back(Polynomial::variable(f, nvars, i));
    return th;
}

Derivation mul_variable(const Derivation& th, int var) {
    Derivation out;
    const Field& f = th.comps[0].field();
    Polynomial x = Polynomial::variable(f, th.nvars(), var);
    for (const auto& c : th.comps) out.comps.push_back(c * x);
    return out;
}

bool in_module(const Derivation& th, const Multiarrangement& A) {
    require_input(th.nvars() == A.dim(), "derivation/arrangement dimension mismatch");
    for (int i = 0; i < A.size(); ++i) {
        Polynomial val = th.apply_form(A.hyperplane(i).coeffs());
        if (!divides_power(val, A.hyperplane(i).coeffs(), A.multiplicity(i))) return false;
    }
    return true;
}

namespace {

// All exponent vectors of total degree d in `nv` variables, lex ascending.
std::vector<std::vector<int>> monomials(int nv, int d) {
    std::vector<std::vector<int>> out;
    std::vector<int> cur(nv, 0);
    auto rec = [&](auto&& self, int pos, int rem) -> void {
        if (pos == nv - 1) {
            cur[pos] = rem;
            out.push_back(cur);
            return;
        }
        for (int k = 0; k <= rem; ++k) {
            cur[pos] = k;
            self(self, pos + 1, rem - k);
        }
    };
    if (nv > 0 && d >= 0) rec(rec, 0, d);
    std::sort(out.begin(), out.end());
    return out;
}

// The divisibility conditions "alpha_H^{m(H)} | theta(alpha_H)" for all H,
// as one linear system over the coefficient field. Unknown (i, e) is the
// coefficient of monomial e in component i; column index i*s + index(e).
Matrix condition_matrix(const Multiarrangement& A, int degree,
                        const std::vector<std::vector<int>>& mons) {
    const Field& f = A.field();
    int nv = A.dim();
    int s = static_cast<int>(mons.size());

    std::vector<std::vector<Scalar>> rows;
    for (int hi = 0; hi < A.size(); ++hi) {
        const auto& alpha = A.hyperplane(hi).coeffs();
        int m = A.multiplicity(hi);
        if (m <= 0) continue;

        // Adapted coordinates: u_0 = alpha(x), u_r = x_j (j != pivot).
        int piv = 0;
        while (alpha[piv].is_zero()) ++piv;
        std::vector<int> slot(nv, -1);
        int r = 1;
        for (int j = 0; j < nv; ++j)
            if (j != piv) slot[j] = r++;
        std::vector<Polynomial> repl;
        for (int j = 0; j < nv; ++j) {
            if (j != piv) {
                repl.push_back(Polynomial::variable(f, nv, slot[j]));
            } else {
                Polynomial xp = Polynomial::variable(f, nv, 0);
                for (int l = 0; l < nv; ++l)
                    if (l != piv && !alpha[l].is_zero())
                        xp -= Polynomial::variable(f, nv, slot[l]) * alpha[l];
                repl.push_back(xp * alpha[piv].inverse());
            }
        }
        // Powers of each replacement up to `degree`.
        std::vector<std::vector<Polynomial>> pw(nv);
        for (int j = 0; j < nv; ++j) {
            pw[j].push_back(Polynomial::constant(f, nv, f.one()));
            for (int k = 1; k <= degree; ++k) pw[j].push_back(pw[j].back() * repl[j]);
        }

        // Row bookkeeping: u-monomials with u_0-exponent < m.
        std::map<std::vector<int>, int> row_of;
        std::vector<std::map<int, Scalar>> entries; // row -> (col -> value)
        for (int i = 0; i < nv; ++i) {
            if (alpha[i].is_zero()) continue;
            for (int mi = 0; mi < s; ++mi) {
                Polynomial sub = pw[0][mons[mi][0]];
                for (int j = 1; j < nv; ++j) sub *= pw[j][mons[mi][j]];
                int col = i * s + mi;
                for (const auto& [e, c] : sub.terms()) {
                    if (e[0] >= m) continue;
                    auto [it, inserted] = row_of.emplace(e, static_cast<int>(entries.size()));
                    if (inserted) entries.emplace_back();
                    Scalar v = c * alpha[i];
                    auto [eit, fresh] = entries[it->second].emplace(col, v);
                    if (!fresh) eit->second += v;
                }
            }
        }
        for (const auto& rowmap : entries) {
            std::vector<Scalar> row(static_cast<size_t>(nv) * s, f.zero());
            for (const auto& [col, v] : rowmap) row[col] = v;
            rows.push_back(std::move(row));
        }
    }
    if (rows.empty()) return Matrix(f, 0, nv * s);
    return Matrix::from_rows(f, rows);
}

Derivation derivation_from_vector(const Field& f, int nv,
                                  const std::vector<std::vector<int>>& mons,
                                  const std::vector<Scalar>& v) {
    int s = static_cast<int>(mons.size());
    Derivation th;
    for (int i = 0; i < nv; ++i) {
        Polynomial p(f, nv);
        for (int mi = 0; mi < s; ++mi) p.add_term(mons[mi], v[i * s + mi]);
        th.comps.push_back(p);
    }
    return th;
}

std::vector<Scalar> vector_of_derivation(const Derivation& th,
                                         const std::vector<std::vector<int>>& mons) {
    const Field& f = th.comps[0].field();
    int s = static_cast<int>(mons.size());
    std::vector<Scalar> v(static_cast<size_t>(th.nvars()) * s, f.zero());
    for (int i = 0; i < th.nvars(); ++i)
        for (int mi = 0; mi < s; ++mi) v[i * s + mi] = th.comps[i].coeff(mons[mi]);
    return v;
}

} // namespace

int derivation_space_dim(const Multiarrangement& A, int degree) {
    require_input(degree >= 0, "negative degree");
    require_input(A.dim() >= 2 && A.dim() <= 3, "derivation spaces supported in 2 or 3 variables");
    auto mons = monomials(A.dim(), degree);
    Matrix M = condition_matrix(A, degree, mons);
    return A.dim() * static_cast<int>(mons.size()) - M.rank();
}

std::vector<Derivation> derivation_space_basis(const Multiarrangement& A, int degree) {
    require_input(degree >= 0, "negative degree");
    auto mons = monomials(A.dim(), degree);
    Matrix M = condition_matrix(A, degree, mons);
    std::vector<Derivation> out;
    if (M.rows() == 0) {
        // No conditions: all of Der_K(S)_degree.
        int cols = A.dim() * static_cast<int>(mons.size());
        for (int c = 0; c < cols; ++c) {
            std::vector<Scalar> v(cols, A.field().zero());
            v[c] = A.field().one();
            out.push_back(derivation_from_vector(A.field(), A.dim(), mons, v));
        }
        return out;
    }
    for (auto& v : M.kernel_basis())
        out.push_back(derivation_from_vector(A.field(), A.dim(), mons, v));
    return out;
}

Rank2Solution rank2_exponents_solver(const Multiarrangement& A) {
    require_input(A.dim() == 2, "rank-2 solver expects an arrangement in 2 coordinates");
    const Field& f = A.field();
    long total = A.total_multiplicity();
    Rank2Solution sol;
    sol.dims.assign(total + 1, 0);

    int d1 = -1;
    for (int d = 0; d <= total; ++d) {
        sol.dims[d] = derivation_space_dim(A, d);
        if (d1 < 0 && sol.dims[d] > 0) d1 = d;
        require_internal(d1 >= 0 || 2 * d <= total,
                         "no derivation found by degree |m|/2 (solver bug)");
    }
    require_internal(d1 >= 0, "derivation module empty up to degree |m| (solver bug)");
    int d2;
    if (sol.dims[d1] > 1) {
        require_internal(sol.dims[d1] == 2 && 2 * d1 == total,
                         "first nonzero dimension inconsistent with freeness");
        d2 = d1;
    } else {
        d2 = static_cast<int>(total) - d1;
    }
    for (int d = 0; d <= total; ++d) {
        int expected = std::max(0, d - d1 + 1) + std::max(0, d - d2 + 1);
        if (sol.dims[d] != expected) {
            std::ostringstream os;
            os << "dimension table mismatch at degree " << d << ": got " << sol.dims[d]
               << ", free module with exponents (" << d1 << "," << d2 << ") predicts "
               << expected;
            throw internal_error(os.str());
        }
    }
    sol.d1 = d1;
    sol.d2 = d2;

    // Basis extraction: theta1 spans degree d1; theta2 is any degree-d2 kernel
    // vector outside the span of the monomial multiples of theta1.
    auto basis1 = derivation_space_basis(A, d1);
    require_internal(!basis1.empty(), "empty basis at degree d1");
    sol.theta1 = basis1.front();

    auto mons2 = monomials(2, d2);
    auto basis2 = derivation_space_basis(A, d2);
    std::vector<std::vector<Scalar>> multiples;
    for (const auto& shift : monomials(2, d2 - d1)) {
        Derivation sh = sol.theta1;
        for (auto& c : sh.comps) {
            Polynomial mono(f, 2);
            mono.add_term(shift, f.one());
            c *= mono;
        }
        multiples.push_back(vector_of_derivation(sh, mons2));
    }
    Matrix base = Matrix::from_rows(f, multiples);
    int base_rank = base.rank();
    bool found = false;
    for (const auto& cand : basis2) {
        auto rows = multiples;
        rows.push_back(vector_of_derivation(cand, mons2));
        if (Matrix::from_rows(f, rows).rank() > base_rank) {
            sol.theta2 = cand;
            found = true;
            break;
        }
    }
    require_internal(found, "no independent second generator at degree d2");
    require_internal(saito_check({sol.theta1, sol.theta2}, A),
                     "extracted basis fails Saito's criterion");

    if (g_sabotage.load()) {
        // Deliberately wrong answer for fault-injection tests.
        sol.d1 = std::max(0, sol.d1 - 1);
        sol.d2 = sol.d2 + 1;
    }
    return sol;
}

bool saito_check(const std::vector<Derivation>& thetas, const Multiarrangement& A) {
    int nv = A.dim();
    require_input(static_cast<int>(thetas.size()) == nv,
                  "Saito check needs as many derivations as coordinates");
    for (const auto& th : thetas) {
        require_input(th.nvars() == nv, "derivation dimension mismatch");
        require_input(in_module(th, A), "derivation is not in D(A,m)");
    }
    std::vector<std::vector<Polynomial>> m;
    for (const auto& th : thetas) m.push_back(th.comps);
    Polynomial det = poly_det(m);
    if (det.is_zero()) return false;
    Polynomial Q = A.defining_polynomial();
    const auto& lead = Q.terms().rbegin()->first;
    Scalar c = det.coeff(lead) / Q.terms().rbegin()->second;
    if (c.is_zero()) return false;
    return det == Q * c;
}

Derivation theta_abc(int a, int b, int c) {
    require_input(a >= 0 && b >= 0 && c >= 0, "theta_abc parameters must be nonnegative");
    const Field& f = Field::rationals();
    // Variables (t, x, y).
    Polynomial t = Polynomial::variable(f, 3, 0);
    Polynomial x = Polynomial::variable(f, 3, 1);
    Polynomial y = Polynomial::variable(f, 3, 2);
    Polynomial integrand = t.pow(c) * (t - x).pow(b) * (t - y).pow(a);

    // Antiderivative in t with zero constant term.
    Polynomial anti(f, 3);
    for (const auto& [e, coeff] : integrand.terms()) {
        auto e2 = e;
        e2[0] += 1;
        anti.add_term(e2, coeff * f.from_int(e[0] + 1).inverse());
    }

    Polynomial x2 = Polynomial::variable(f, 2, 0);
    Polynomial y2 = Polynomial::variable(f, 2, 1);
    Derivation th;
    th.comps.push_back(anti.substitute({x2, x2, y2})); // t = x
    th.comps.push_back(anti.substitute({y2, x2, y2})); // t = y
    return th;
}

std::pair<Derivation, Derivation> fwy_generators(int p, int q, int r) {
    require_input(p >= 1 && q >= 1 && r >= 1, "multiplicities must be positive");
    int total = p + q + r;
    require_input(2 * p < total && 2 * q < total && 2 * r < total,
                  "fwy_generators requires a balanced multiplicity");
    Derivation g1, g2;
    if (total % 2 == 1) {
        int a = (-p + q + r - 1) / 2, b = (p - q + r - 1) / 2, cc = (p + q - r - 1) / 2;
        g1 = theta_abc(a, b, cc);
        g2 = theta_abc(a, b, cc + 1);
    } else {
        int a = (-p + q + r) / 2, b = (p - q + r - 2) / 2, cc = (p + q - r - 2) / 2;
        g1 = mul_variable(theta_abc(a, b, cc), 0);
        g2 = mul_variable(theta_abc(a - 1, b + 1, cc), 1);
    }
    Multiarrangement A2 = Multiarrangement::a2(Field::rationals(), {p, q, r});
    require_internal(in_module(g1, A2) && in_module(g2, A2),
                     "FWY generators fail D(A,m) membership");
    require_internal(saito_check({g1, g2}, A2), "FWY generators fail Saito's criterion");
    return {g1, g2};
}

mpq_class integral_I(int a, int b, int c) {
    require_input(a >= 0 && b >= 0 && c >= 0, "integral parameters must be nonnegative");
    const Field& f = Field::rationals();
    Polynomial t = Polynomial::variable(f, 1, 0);
    Polynomial one = Polynomial::constant(f, 1, f.one());
    Polynomial integrand = t.pow(c) * (t - one).pow(b) * (t + one).pow(a);
    Polynomial anti(f, 1);
    for (const auto& [e, coeff] : integrand.terms())
        anti.add_term({e[0] + 1}, coeff * f.from_int(e[0] + 1).inverse());
    Scalar plus = anti.eval(std::vector<Scalar>{f.one()});
    Scalar minus = anti.eval(std::vector<Scalar>{f.from_int(-1)});
    return (plus + minus).rational(); // F(1) - F(0) + F(-1) - F(0), F(0) = 0
}

bool peak_point_b2_min1(std::array<int, 4> m) {
    long total = m[0] + m[1] + m[2] + m[3];
    int mn = *std::min_element(m.begin(), m.end());
    require_input(mn == 1, "peak rule requires minimum multiplicity 1");
    for (int v : m) require_input(2L * v < total, "peak rule requires a balanced multiplicity");

    std::optional<std::array<int, 4>> rep;
    for (const auto& img : b2_orbit(m))
        if (img[3] == 1 && (!rep || img < *rep)) rep = img;
    require_internal(rep.has_value(), "orbit contains no image with m4 = 1");
    const auto& c = *rep;
    return c[0] == c[1] && c[2] % 2 == 1 && total % 4 == 0;
}

} // namespace multarr
