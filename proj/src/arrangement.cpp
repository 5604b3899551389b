#include "multarr/arrangement.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "multarr/matrix.hpp"

#include "json.hpp"

namespace multarr {

Hyperplane::Hyperplane(const Field& f, std::vector<Scalar> coeffs) : field_(&f) {
    int piv = -1;
    for (size_t i = 0; i < coeffs.size(); ++i)
        if (!coeffs[i].is_zero()) { piv = static_cast<int>(i); break; }
    require_input(piv >= 0, "hyperplane form must be a nonzero linear form");
    Scalar inv = coeffs[piv].inverse();
    for (auto& c : coeffs) c *= inv;
    coeffs_ = std::move(coeffs);
}

int Hyperplane::cmp(const Hyperplane& a, const Hyperplane& b) {
    require_input(a.field_ == b.field_ && a.dim() == b.dim(), "hyperplane comparison across spaces");
    for (int i = 0; i < a.dim(); ++i) {
        int c = Scalar::cmp(a.coeffs_[i], b.coeffs_[i]);
        if (c != 0) return c;
    }
    return 0;
}

std::string Hyperplane::str(std::span<const std::string> varnames) const {
    return form().str(varnames);
}

long Multiarrangement::total_multiplicity() const {
    long s = 0;
    for (int m : mult_) s += m;
    return s;
}

bool Multiarrangement::is_simple() const {
    return std::all_of(mult_.begin(), mult_.end(), [](int m) { return m == 1; });
}

void Multiarrangement::add(const Hyperplane& h, int m) {
    require_input(h.dim() == dim_ && &h.field() == field_, "hyperplane does not match arrangement space");
    require_input(m >= 0, "negative multiplicity");
    if (m == 0) return;
    auto it = std::lower_bound(hyperplanes_.begin(), hyperplanes_.end(), h);
    auto idx = it - hyperplanes_.begin();
    if (it != hyperplanes_.end() && *it == h) {
        mult_[idx] += m;
    } else {
        hyperplanes_.insert(it, h);
        mult_.insert(mult_.begin() + idx, m);
    }
}

int Multiarrangement::index_of(const Hyperplane& h) const {
    if (h.dim() != dim_ || &h.field() != field_) return -1;
    auto it = std::lower_bound(hyperplanes_.begin(), hyperplanes_.end(), h);
    if (it != hyperplanes_.end() && *it == h) return static_cast<int>(it - hyperplanes_.begin());
    return -1;
}

int Multiarrangement::rank() const {
    std::vector<std::vector<Scalar>> rows;
    for (const auto& h : hyperplanes_) rows.push_back(h.coeffs());
    if (rows.empty()) return 0;
    return Matrix::from_rows(*field_, rows).rank();
}

Polynomial Multiarrangement::defining_polynomial() const {
    Polynomial q = Polynomial::constant(*field_, dim_, field_->one());
    for (int i = 0; i < size(); ++i) q *= hyperplanes_[i].form().pow(mult_[i]);
    return q;
}

Multiarrangement Multiarrangement::deletion(const Hyperplane& h) const {
    int idx = index_of(h);
    require_input(idx >= 0, "deleted hyperplane is not in the arrangement");
    Multiarrangement out(*field_, dim_);
    for (int i = 0; i < size(); ++i) {
        int m = mult_[i] - (i == idx ? 1 : 0);
        if (m > 0) out.add(hyperplanes_[i], m);
    }
    return out;
}

Multiarrangement Multiarrangement::simple() const {
    Multiarrangement out(*field_, dim_);
    for (const auto& h : hyperplanes_) out.add(h, 1);
    return out;
}

bool Multiarrangement::is_balanced() const {
    long total = total_multiplicity();
    for (int m : mult_)
        if (2L * m >= total) return false;
    return true;
}

bool Multiarrangement::operator==(const Multiarrangement& o) const {
    return field_ == o.field_ && dim_ == o.dim_ && mult_ == o.mult_ &&
           hyperplanes_ == o.hyperplanes_;
}

namespace {
Hyperplane make_h(const Field& f, std::vector<long> c) {
    std::vector<Scalar> v;
    v.reserve(c.size());
    for (long x : c) v.push_back(f.from_int(x));
    return Hyperplane(f, std::move(v));
}
} // namespace

Multiarrangement Multiarrangement::b2(const Field& f, std::array<int, 4> m) {
    require_input(f.characteristic() != 2, "B2 is degenerate in characteristic 2");
    Multiarrangement A(f, 2);
    A.add(make_h(f, {1, 0}), m[0]);
    A.add(make_h(f, {0, 1}), m[1]);
    A.add(make_h(f, {1, -1}), m[2]);
    A.add(make_h(f, {1, 1}), m[3]);
    return A;
}

Multiarrangement Multiarrangement::a2(const Field& f, std::array<int, 3> m) {
    Multiarrangement A(f, 2);
    A.add(make_h(f, {1, 0}), m[0]);
    A.add(make_h(f, {0, 1}), m[1]);
    A.add(make_h(f, {1, -1}), m[2]);
    return A;
}

Multiarrangement Multiarrangement::b3(const Field& f, std::array<int, 9> m) {
    require_input(f.characteristic() != 2, "B3 is degenerate in characteristic 2");
    Multiarrangement A(f, 3);
    A.add(make_h(f, {1, 0, 0}), m[0]);
    A.add(make_h(f, {0, 1, 0}), m[1]);
    A.add(make_h(f, {1, -1, 0}), m[2]);
    A.add(make_h(f, {1, 1, 0}), m[3]);
    A.add(make_h(f, {0, 0, 1}), m[4]);
    A.add(make_h(f, {1, 0, -1}), m[5]);
    A.add(make_h(f, {1, 0, 1}), m[6]);
    A.add(make_h(f, {0, 1, -1}), m[7]);
    A.add(make_h(f, {0, 1, 1}), m[8]);
    return A;
}

Multiarrangement Multiarrangement::boolean(const Field& f, int dim) {
    Multiarrangement A(f, dim);
    for (int i = 0; i < dim; ++i) {
        std::vector<Scalar> c(dim, f.zero());
        c[i] = f.one();
        A.add(Hyperplane(f, std::move(c)), 1);
    }
    return A;
}

// --- B2 tuple machinery ----------------------------------------------------

std::vector<std::array<int, 4>> b2_orbit(std::array<int, 4> m) {
    std::set<std::array<int, 4>> seen;
    std::vector<std::array<int, 4>> stack{m};
    seen.insert(m);
    while (!stack.empty()) {
        auto cur = stack.back();
        stack.pop_back();
        std::array<std::array<int, 4>, 3> next = {{
            {cur[0], cur[1], cur[3], cur[2]},
            {cur[1], cur[0], cur[2], cur[3]},
            {cur[2], cur[3], cur[0], cur[1]},
        }};
        for (const auto& n : next)
            if (seen.insert(n).second) stack.push_back(n);
    }
    return {seen.begin(), seen.end()};
}

std::array<int, 4> b2_canonical_permutation(std::array<int, 4> m) {
    std::optional<std::array<int, 4>> best;
    for (const auto& c : b2_orbit(m)) {
        if (!(c[1] - c[0] >= c[3] - c[2] && c[3] - c[2] >= 0)) continue;
        if (!best || c < *best) best = c;
    }
    require_internal(best.has_value(), "B2 orbit has no canonical representative");
    return *best;
}

std::optional<std::array<int, 4>> recognize_b2(const Multiarrangement& A) {
    if (A.size() != 4 || A.dim() != 2) return std::nullopt;
    if (A.field().characteristic() == 2) return std::nullopt;
    if (A.rank() != 2) return std::nullopt;
    const Field& f = A.field();
    // Try ordered pairs (i, j) as the (x, y) axes; the remaining two forms,
    // written in that basis, must have slopes s and -s with s != 0.
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            if (j == i) continue;
            Matrix basis(f, 2, 2);
            for (int c = 0; c < 2; ++c) {
                basis.at(0, c) = A.hyperplane(i).coeffs()[c];
                basis.at(1, c) = A.hyperplane(j).coeffs()[c];
            }
            if (basis.det().is_zero()) continue;
            Matrix binv = basis.inverse();
            int k = -1, l = -1;
            for (int t = 0; t < 4; ++t)
                if (t != i && t != j) (k < 0 ? k : l) = t;
            // coords of form v in basis rows: solve [basis^T] c = v.
            auto coords = [&](int idx) {
                const auto& v = A.hyperplane(idx).coeffs();
                // c = (basis^T)^{-1} v = (binv^T) v
                std::vector<Scalar> out(2, f.zero());
                for (int r = 0; r < 2; ++r)
                    for (int c = 0; c < 2; ++c) out[r] += binv.at(r, c) * v[c];
                return out;
            };
            auto ck = coords(k);
            auto cl = coords(l);
            if (ck[0].is_zero() || ck[1].is_zero() || cl[0].is_zero() || cl[1].is_zero()) continue;
            Scalar sk = ck[1] / ck[0];
            Scalar sl = cl[1] / cl[0];
            if ((sk + sl).is_zero()) {
                return std::array<int, 4>{A.multiplicity(i), A.multiplicity(j),
                                          A.multiplicity(k), A.multiplicity(l)};
            }
        }
    }
    return std::nullopt;
}

std::optional<std::array<int, 4>> b2_tuple_of(const Multiarrangement& A) {
    if (A.size() != 4 || A.dim() != 2) return std::nullopt;
    const Field& f = A.field();
    if (f.characteristic() == 2) return std::nullopt;
    Multiarrangement probe = Multiarrangement::b2(f, {1, 1, 1, 1});
    std::array<int, 4> out{};
    std::array<std::array<long, 2>, 4> forms = {{{1, 0}, {0, 1}, {1, -1}, {1, 1}}};
    for (int c = 0; c < 4; ++c) {
        std::vector<Scalar> v{f.from_int(forms[c][0]), f.from_int(forms[c][1])};
        int idx = A.index_of(Hyperplane(f, v));
        if (idx < 0) return std::nullopt;
        out[c] = A.multiplicity(idx);
    }
    return out;
}

// --- File formats ----------------------------------------------------------

std::vector<std::string> default_varnames(int dim) {
    static const char* names[] = {"x", "y", "z", "w"};
    std::vector<std::string> out;
    for (int i = 0; i < dim; ++i)
        out.push_back(i < 4 ? names[i] : "x" + std::to_string(i + 1));
    return out;
}

namespace {

const Field& field_from_tokens(const std::vector<std::string>& tok, int lineno) {
    require_input(tok.size() >= 2, "line " + std::to_string(lineno) + ": field needs an argument");
    if (tok[1] == "Q" || tok[1] == "q") return Field::rationals();
    require_input(tok[1] == "gf" || tok[1] == "GF",
                  "line " + std::to_string(lineno) + ": unknown field '" + tok[1] + "'");
    require_input(tok.size() >= 3, "line " + std::to_string(lineno) + ": gf needs a characteristic");
    long p = std::stol(tok[2]);
    int e = tok.size() >= 4 && tok[3] != "mod" ? std::stoi(tok[3]) : 1;
    size_t modpos = 0;
    for (size_t i = 2; i < tok.size(); ++i)
        if (tok[i] == "mod") modpos = i;
    if (modpos != 0) {
        require_input(tok.size() >= modpos + 3, "line " + std::to_string(lineno) + ": mod needs m0 m1");
        std::array<long, 2> modulus{std::stol(tok[modpos + 1]), std::stol(tok[modpos + 2])};
        return Field::finite(p, e, modulus);
    }
    return e == 1 ? Field::finite(p, 1) : Field::finite(p, 2);
}

} // namespace

Multiarrangement parse_arrangement_text(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    const Field* field = nullptr;
    int dim = -1;
    std::optional<Multiarrangement> A;
    int lineno = 0;

    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        std::string t;
        while (ls >> t) tok.push_back(t);
        if (tok.empty()) continue;

        if (tok[0] == "field") {
            field = &field_from_tokens(tok, lineno);
        } else if (tok[0] == "dim") {
            require_input(tok.size() == 2, "line " + std::to_string(lineno) + ": dim needs one argument");
            dim = std::stoi(tok[1]);
            require_input(dim >= 1 && dim <= 4, "line " + std::to_string(lineno) + ": dim out of range");
        } else if (tok[0] == "H") {
            require_input(field != nullptr, "line " + std::to_string(lineno) + ": H before field");
            require_input(dim > 0, "line " + std::to_string(lineno) + ": H before dim");
            if (!A) A.emplace(*field, dim);
            require_input(static_cast<int>(tok.size()) == dim + 3 && tok[dim + 1] == "m",
                          "line " + std::to_string(lineno) + ": expected 'H c1 .. c" +
                              std::to_string(dim) + " m k'");
            std::vector<Scalar> coeffs;
            for (int i = 0; i < dim; ++i) coeffs.push_back(field->parse(tok[1 + i]));
            int m = std::stoi(tok[dim + 2]);
            require_input(m >= 0, "line " + std::to_string(lineno) + ": negative multiplicity");
            try {
                A->add(Hyperplane(*field, std::move(coeffs)), m);
            } catch (const input_error& e) {
                throw input_error("line " + std::to_string(lineno) + ": " + e.what());
            }
        } else {
            throw input_error("line " + std::to_string(lineno) + ": unknown directive '" + tok[0] + "'");
        }
    }
    require_input(field != nullptr && dim > 0, "arrangement file needs 'field' and 'dim' lines");
    if (!A) A.emplace(*field, dim);
    return *A;
}

Multiarrangement parse_arrangement_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw input_error(std::string("JSON parse error: ") + e.what());
    }
    const Field* field = nullptr;
    if (j.at("field").is_string()) {
        std::string fs = j["field"].get<std::string>();
        require_input(fs == "Q" || fs == "q", "unknown field '" + fs + "'");
        field = &Field::rationals();
    } else {
        auto& fj = j.at("field");
        long p = fj.at("p").get<long>();
        int e = fj.value("e", 1);
        if (fj.contains("modulus")) {
            auto mj = fj["modulus"];
            field = &Field::finite(p, e, {mj.at(0).get<long>(), mj.at(1).get<long>()});
        } else {
            field = &Field::finite(p, e);
        }
    }
    int dim = j.at("dim").get<int>();
    require_input(dim >= 1 && dim <= 4, "dim out of range");
    Multiarrangement A(*field, dim);
    for (const auto& hj : j.at("hyperplanes")) {
        std::vector<Scalar> coeffs;
        for (const auto& c : hj.at("coeffs"))
            coeffs.push_back(c.is_string() ? field->parse(c.get<std::string>())
                                           : field->from_int(c.get<long>()));
        require_input(static_cast<int>(coeffs.size()) == dim, "coefficient count does not match dim");
        A.add(Hyperplane(*field, std::move(coeffs)), hj.value("m", 1));
    }
    return A;
}

namespace {
std::string field_line(const Field& f) {
    if (f.is_rationals()) return "field Q";
    std::string s = "field gf " + std::to_string(f.p()) + " " + std::to_string(f.extension_degree());
    if (f.extension_degree() == 2)
        s += " mod " + std::to_string(f.modulus()[0]) + " " + std::to_string(f.modulus()[1]);
    return s;
}
} // namespace

std::string arrangement_to_text(const Multiarrangement& A) {
    std::ostringstream os;
    os << field_line(A.field()) << "\n";
    os << "dim " << A.dim() << "\n";
    auto names = default_varnames(A.dim());
    for (int i = 0; i < A.size(); ++i) {
        os << "H ";
        for (const auto& c : A.hyperplane(i).coeffs()) os << " " << c.str();
        os << "  m " << A.multiplicity(i);
        os << "   # " << A.hyperplane(i).str(names) << "\n";
    }
    return os.str();
}

std::string arrangement_to_json(const Multiarrangement& A) {
    nlohmann::json j;
    const Field& f = A.field();
    if (f.is_rationals()) {
        j["field"] = "Q";
    } else {
        j["field"] = {{"p", f.p()}, {"e", f.extension_degree()}};
        if (f.extension_degree() == 2)
            j["field"]["modulus"] = {f.modulus()[0], f.modulus()[1]};
    }
    j["dim"] = A.dim();
    j["hyperplanes"] = nlohmann::json::array();
    for (int i = 0; i < A.size(); ++i) {
        nlohmann::json hj;
        hj["coeffs"] = nlohmann::json::array();
        for (const auto& c : A.hyperplane(i).coeffs()) hj["coeffs"].push_back(c.str());
        hj["m"] = A.multiplicity(i);
        j["hyperplanes"].push_back(hj);
    }
    return j.dump(2);
}

Multiarrangement load_arrangement(const std::string& path) {
    std::ifstream in(path);
    require_input(in.good(), "cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json")
        return parse_arrangement_json(ss.str());
    return parse_arrangement_text(ss.str());
}

Hyperplane parse_linear_form(const Field& f, int dim, const std::string& s) {
    auto names = default_varnames(dim);
    // Coefficient list form: contains ',' or no letters at all.
    bool has_letter = std::any_of(s.begin(), s.end(), [](char c) { return isalpha(static_cast<unsigned char>(c)) != 0; });
    if (!has_letter || s.find(',') != std::string::npos) {
        std::string body = s;
        std::replace(body.begin(), body.end(), ',', ' ');
        std::istringstream is(body);
        std::vector<Scalar> coeffs;
        std::string tok;
        while (is >> tok) coeffs.push_back(f.parse(tok));
        require_input(static_cast<int>(coeffs.size()) == dim,
                      "expected " + std::to_string(dim) + " coefficients in '" + s + "'");
        return Hyperplane(f, std::move(coeffs));
    }
    // Symbolic form: sequence of [+|-][coeff]var terms, e.g. "2x+3y-z".
    std::vector<Scalar> coeffs(dim, f.zero());
    size_t i = 0;
    std::string compact;
    for (char c : s)
        if (!isspace(static_cast<unsigned char>(c)) && c != '*') compact += c;
    while (i < compact.size()) {
        Scalar sign = f.one();
        if (compact[i] == '+') { ++i; }
        else if (compact[i] == '-') { sign = -f.one(); ++i; }
        std::string num;
        while (i < compact.size() && (isdigit(static_cast<unsigned char>(compact[i])) || compact[i] == '/'))
            num += compact[i++];
        require_input(i < compact.size(), "dangling coefficient in '" + s + "'");
        // variable name: longest match among names
        int var = -1;
        for (int v = 0; v < dim; ++v) {
            const std::string& nm = names[v];
            if (compact.compare(i, nm.size(), nm) == 0 &&
                (var < 0 || nm.size() > names[var].size()))
                var = v;
        }
        require_input(var >= 0, "unknown variable at '" + compact.substr(i) + "' in '" + s + "'");
        i += names[var].size();
        Scalar c = num.empty() ? f.one() : f.parse(num);
        coeffs[var] += sign * c;
    }
    return Hyperplane(f, std::move(coeffs));
}

} // namespace multarr
