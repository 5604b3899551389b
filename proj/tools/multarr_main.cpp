#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "multarr/derivations.hpp"
#include "multarr/extend.hpp"
#include "multarr/lattice.hpp"
#include "multarr/svg.hpp"
#include "multarr/verify.hpp"

using namespace multarr;
using nlohmann::json;

namespace {

struct CommonInput {
    std::string path;
    std::string b2_tuple;
    std::string a2_tuple;
    std::string field_spec; // for --b2/--a2 synthesis: "Q" or "gf:p[:e]"
};

const Field& field_from_flag(const std::string& s) {
    if (s.empty() || s == "Q" || s == "q") return Field::rationals();
    if (s.rfind("gf:", 0) == 0) {
        std::string rest = s.substr(3);
        auto colon = rest.find(':');
        long p = std::stol(rest.substr(0, colon));
        int e = colon == std::string::npos ? 1 : std::stoi(rest.substr(colon + 1));
        return Field::finite(p, e);
    }
    throw input_error("unknown field spec '" + s + "' (use Q or gf:p[:e])");
}

std::vector<int> parse_int_tuple(const std::string& s, size_t n) {
    std::vector<int> out;
    std::string body = s;
    std::replace(body.begin(), body.end(), ',', ' ');
    std::istringstream is(body);
    int v;
    while (is >> v) out.push_back(v);
    require_input(out.size() == n, "expected " + std::to_string(n) + " integers in '" + s + "'");
    return out;
}

Multiarrangement resolve_input(const CommonInput& in) {
    int sources = !in.path.empty() + !in.b2_tuple.empty() + !in.a2_tuple.empty();
    require_input(sources == 1, "give exactly one of: input file, --b2, --a2");
    if (!in.path.empty()) return load_arrangement(in.path);
    const Field& f = field_from_flag(in.field_spec);
    if (!in.b2_tuple.empty()) {
        auto v = parse_int_tuple(in.b2_tuple, 4);
        return Multiarrangement::b2(f, {v[0], v[1], v[2], v[3]});
    }
    auto v = parse_int_tuple(in.a2_tuple, 3);
    return Multiarrangement::a2(f, {v[0], v[1], v[2]});
}

void add_input_flags(CLI::App* cmd, CommonInput& in) {
    cmd->add_option("file", in.path, "arrangement file (.arr text or .json)");
    cmd->add_option("--b2", in.b2_tuple, "standard B2 multiplicities m1,m2,m3,m4 (x,y,x-y,x+y)");
    cmd->add_option("--a2", in.a2_tuple, "standard A2 multiplicities p,q,r (x,y,x-y)");
    cmd->add_option("--field", in.field_spec, "field for --b2/--a2: Q (default) or gf:p[:e]");
}

void emit(bool as_json, const json& j, const std::string& text) {
    if (as_json) std::cout << j.dump(2) << "\n";
    else std::cout << text;
}

json exponents_json(const ExponentPair& e) {
    return json{{"d1", e.d1}, {"d2", e.d2}, {"provenance", provenance_str(e.prov)}};
}

int run(int argc, char** argv) {
    CLI::App app{"exact freeness computations for hyperplane multiarrangements"};
    app.require_subcommand(1);
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable output");

    CommonInput exp_in;
    bool exp_basis = false;
    auto* cmd_exp = app.add_subcommand("exponents", "exponents of a rank-2 multiarrangement");
    add_input_flags(cmd_exp, exp_in);
    cmd_exp->add_flag("--basis", exp_basis, "print a homogeneous basis of D(A,m)");

    CommonInput lat_in;
    auto* cmd_lat = app.add_subcommand("lattice", "intersection lattice with Moebius values");
    add_input_flags(cmd_lat, lat_in);

    CommonInput chi_in;
    auto* cmd_chi = app.add_subcommand("chi", "characteristic polynomial");
    add_input_flags(cmd_chi, chi_in);

    CommonInput zg_in;
    std::string zg_pivot = "z";
    auto* cmd_zg = app.add_subcommand("ziegler", "Ziegler restriction to a hyperplane");
    add_input_flags(cmd_zg, zg_in);
    cmd_zg->add_option("--pivot", zg_pivot, "pivot hyperplane (form like 'z' or coefficients)");

    CommonInput yx_in;
    std::string yx_out;
    auto* cmd_yx = app.add_subcommand("yext", "Yoshinaga extension of a rank-2 multiarrangement");
    add_input_flags(cmd_yx, yx_in);
    cmd_yx->add_option("-o,--out", yx_out, "write the extension as an arrangement file");

    CommonInput fc_in;
    std::string fc_pivot = "z";
    auto* cmd_fc = app.add_subcommand("freecheck", "rank-3 freeness via LMP = VGMP");
    add_input_flags(cmd_fc, fc_in);
    cmd_fc->add_option("--pivot", fc_pivot, "pivot hyperplane for the Ziegler restriction");

    CommonInput bd_in;
    auto* cmd_bd = app.add_subcommand("bounds", "restriction-size bounds for free B2 extensions");
    add_input_flags(cmd_bd, bd_in);

    CommonInput se_in;
    SearchDomain se_dom;
    std::string se_out_dir;
    bool se_no_bounds = false, se_no_lmp = false;
    auto* cmd_se = app.add_subcommand("search", "search for free extensions over an offset grid");
    add_input_flags(cmd_se, se_in);
    cmd_se->add_option("--height", se_dom.height, "rational grid height (|p|,q <= height)");
    cmd_se->add_option("--limit", se_dom.limit, "stop after this many free extensions");
    cmd_se->add_option("--workers", se_dom.workers,
                       "worker threads (default: MULTARR_WORKERS or hardware)");
    cmd_se->add_flag("--no-bounds-prune", se_no_bounds, "disable restriction-size pruning");
    cmd_se->add_flag("--no-lmp-prune", se_no_lmp, "disable LMP budget pruning");
    cmd_se->add_option("--out-dir", se_out_dir, "write found extensions as arrangement files");

    std::string pk_tuple;
    auto* cmd_pk = app.add_subcommand("peak", "peak-point test for balanced B2, min multiplicity 1");
    cmd_pk->add_option("--m", pk_tuple, "multiplicities m1,m2,m3,m4")->required();

    std::vector<int> fwy_pqr;
    auto* cmd_fwy = app.add_subcommand("fwy", "generators of D(A2,(p,q,r)) for balanced m");
    cmd_fwy->add_option("pqr", fwy_pqr, "p q r")->expected(3);

    CommonInput vx_in;
    std::string vx_filtration;
    auto* cmd_vx = app.add_subcommand("vertex", "inductive freeness along a supersolvable filtration");
    add_input_flags(cmd_vx, vx_in);
    cmd_vx->add_option("--filtration", vx_filtration,
                       "cumulative index groups, e.g. '0/1,2,3' (omit for standard B3)");

    CommonInput dc_in;
    std::string dc_pivot = "z", dc_out, dc_viewport;
    auto* cmd_dc = app.add_subcommand("decone-svg", "SVG picture of the deconed arrangement");
    add_input_flags(cmd_dc, dc_in);
    cmd_dc->add_option("--pivot", dc_pivot, "deconing coordinate hyperplane");
    cmd_dc->add_option("-o,--out", dc_out, "output file (default stdout)");
    cmd_dc->add_option("--viewport", dc_viewport, "xmin,ymin,xmax,ymax (rationals)");

    std::vector<std::string> vp_only;
    bool vp_sabotage = false;
    auto* cmd_vp = app.add_subcommand("verify-paper", "run the full verification suite");
    cmd_vp->add_option("--only", vp_only, "run only items whose name contains this substring");
    cmd_vp->add_flag("--sabotage-solver", vp_sabotage,
                     "fault injection: perturb the solver to exercise conflict reporting");

    CLI11_PARSE(app, argc, argv);

    auto names2 = default_varnames(2);

    if (cmd_exp->parsed()) {
        Multiarrangement A = resolve_input(exp_in);
        Multiarrangement A2 = A.dim() == 2 ? A : project_to_rank2_coords(A);
        ExponentPair e = rank2_multi_exponents(A2);
        if (e.prov != Provenance::Solver) {
            // The solver is authoritative; a conflict is a bug, not an answer.
            Rank2Solution s = rank2_exponents_solver(A2);
            if (s.d1 != e.d1 || s.d2 != e.d2)
                throw internal_error("rule/solver conflict: rule (" + std::to_string(e.d1) + "," +
                                     std::to_string(e.d2) + ") vs solver (" + std::to_string(s.d1) +
                                     "," + std::to_string(s.d2) + ")");
        }
        json j{{"exponents", exponents_json(e)}};
        std::ostringstream os;
        os << "(" << e.d1 << ", " << e.d2 << ")   [" << provenance_str(e.prov) << "]\n";
        if (exp_basis) {
            Rank2Solution s = rank2_exponents_solver(A2);
            os << "theta1 = (" << s.theta1.comps[0].str(names2) << ") dx + ("
               << s.theta1.comps[1].str(names2) << ") dy\n";
            os << "theta2 = (" << s.theta2.comps[0].str(names2) << ") dx + ("
               << s.theta2.comps[1].str(names2) << ") dy\n";
            j["basis"] = {
                {"theta1", {s.theta1.comps[0].str(names2), s.theta1.comps[1].str(names2)}},
                {"theta2", {s.theta2.comps[0].str(names2), s.theta2.comps[1].str(names2)}}};
        }
        emit(as_json, j, os.str());
        return 0;
    }

    if (cmd_lat->parsed()) {
        Multiarrangement A = resolve_input(lat_in);
        IntersectionLattice L = intersection_lattice(A);
        auto names = default_varnames(A.dim());
        json j{{"rank", L.rank()}, {"flats", json::array()}};
        std::ostringstream os;
        for (int r = 0; r <= L.rank(); ++r) {
            os << "rank " << r << " (" << L.flats(r).size() << " flats)\n";
            for (const auto& fl : L.flats(r)) {
                json fj{{"rank", r}, {"mobius", fl.mobius}, {"members", fl.members}};
                os << "  mu = " << fl.mobius << "  members = {";
                for (size_t i = 0; i < fl.members.size(); ++i) {
                    if (i) os << ", ";
                    os << A.hyperplane(fl.members[i]).str(names);
                }
                os << "}\n";
                j["flats"].push_back(fj);
            }
        }
        emit(as_json, j, os.str());
        return 0;
    }

    if (cmd_chi->parsed()) {
        Multiarrangement A = resolve_input(chi_in);
        CharPoly chi = characteristic_polynomial(A);
        json j{{"chi", chi.str()}};
        j["coefficients"] = json::array();
        for (const auto& cc : chi.coeffs) j["coefficients"].push_back(cc.get_str());
        std::ostringstream os;
        os << chi.str() << "\n";
        if (A.rank() == 3 && A.is_simple()) {
            long b1 = chi.b1(), b2 = chi.b2();
            j["b1"] = b1;
            j["b2"] = b2;
            j["lmp"] = b1 + b2;
            os << "b1 = " << b1 << ", b2 = " << b2 << ", LMP = " << b1 + b2 << "\n";
        }
        emit(as_json, j, os.str());
        return 0;
    }

    if (cmd_zg->parsed()) {
        Multiarrangement E = resolve_input(zg_in);
        Hyperplane h0 = parse_linear_form(E.field(), E.dim(), zg_pivot);
        Multiarrangement R = ziegler_restriction(E, h0);
        json j{{"restriction", json::parse(arrangement_to_json(R))}};
        emit(as_json, j, arrangement_to_text(R));
        return 0;
    }

    if (cmd_yx->parsed()) {
        Multiarrangement A = resolve_input(yx_in);
        ExtensionCandidate cand = yoshinaga_extension(A);
        Multiarrangement E = cand.materialize();
        std::string text = arrangement_to_text(E);
        if (!yx_out.empty()) {
            std::ofstream out(yx_out);
            require_input(out.good(), "cannot write '" + yx_out + "'");
            out << text;
        }
        json j{{"offsets", cand.describe()}, {"extension", json::parse(arrangement_to_json(E))}};
        emit(as_json, j, "offsets: " + cand.describe() + "\n" + text);
        return 0;
    }

    if (cmd_fc->parsed()) {
        Multiarrangement E = resolve_input(fc_in);
        Hyperplane h0 = parse_linear_form(E.field(), E.dim(), fc_pivot);
        FreenessReport rep = yoshinaga_freeness(E, h0);
        json j{{"free", rep.free},
               {"b1", rep.b1},
               {"b2", rep.b2},
               {"lmp", rep.lmp},
               {"vgmp", rep.vgmp},
               {"slack", rep.slack},
               {"restriction_exponents", exponents_json(rep.restriction_exponents)}};
        std::ostringstream os;
        if (rep.free) {
            os << "free, exp (1, " << rep.restriction_exponents.d1 << ", "
               << rep.restriction_exponents.d2 << "), b2 = " << rep.b2 << "\n";
            j["exponents"] = rep.exponents;
        } else {
            os << "not-free, slack " << rep.slack << " (LMP " << rep.lmp << ", VGMP " << rep.vgmp
               << ")\n";
        }
        emit(as_json, j, os.str());
        return 0;
    }

    if (cmd_bd->parsed()) {
        Multiarrangement A = resolve_input(bd_in);
        Multiarrangement A2 = A.dim() == 2 ? A : project_to_rank2_coords(A);
        auto tuple = b2_tuple_of(A2);
        require_input(tuple.has_value(), "bounds needs a standard-coordinates B2 arrangement");
        static const char* cls_names[4] = {"x", "y", "x-y", "x+y"};
        json j = json::array();
        std::ostringstream os;
        for (int c = 0; c < 4; ++c) {
            RestrictionBounds rb = restriction_bounds(*tuple, c);
            j.push_back({{"class", cls_names[c]},
                         {"lower", rb.lower},
                         {"upper", rb.upper},
                         {"delta_used", rb.delta_used},
                         {"delta_of_deletion", rb.delta_of_deletion},
                         {"equality_iff_deletion_free", rb.equality_iff_deletion_free}});
            os << "class " << cls_names[c] << ": " << rb.lower << " <= |E^H| <= " << rb.upper
               << "   (gap " << rb.delta_used << " of " << (rb.delta_of_deletion ? "deletion" : "m")
               << "; equality iff the deletion is free)\n";
        }
        emit(as_json, j, os.str());
        return 0;
    }

    if (cmd_se->parsed()) {
        Multiarrangement A = resolve_input(se_in);
        se_dom.prune_bounds = !se_no_bounds;
        se_dom.prune_lmp = !se_no_lmp;
        SearchResult res = search_free_extensions(A, se_dom);
        json j{{"vgmp_target", res.vgmp_target},
               {"base_exponents", exponents_json(res.base_exponents)},
               {"bounds_prune_active", res.bounds_prune_active},
               {"domain", res.domain_note},
               {"free_found", res.found.size()},
               {"stats",
                {{"nodes", res.stats.nodes},
                 {"leaves", res.stats.leaves},
                 {"pruned_bounds", res.stats.pruned_bounds},
                 {"pruned_lmp", res.stats.pruned_lmp}}},
               {"found", json::array()}};
        std::ostringstream os;
        os << "base exponents (" << res.base_exponents.d1 << ", " << res.base_exponents.d2
           << "), VGMP target " << res.vgmp_target << "\n";
        os << res.domain_note << "\n";
        os << "nodes " << res.stats.nodes << ", leaves " << res.stats.leaves << ", pruned(bounds) "
           << res.stats.pruned_bounds << ", pruned(LMP) " << res.stats.pruned_lmp
           << (res.bounds_prune_active ? "" : " [bounds prune inactive]") << "\n";
        os << "free extensions found: " << res.found.size() << "\n";
        for (size_t i = 0; i < res.found.size(); ++i) {
            const auto& fe = res.found[i];
            os << "  #" << i + 1 << ": " << fe.candidate.describe() << "  exp (1, "
               << fe.report.restriction_exponents.d1 << ", " << fe.report.restriction_exponents.d2
               << ")\n";
            json cj{{"offsets", fe.candidate.describe()},
                    {"exponents", fe.report.exponents},
                    {"lmp", fe.report.lmp}};
            if (!se_out_dir.empty()) {
                std::filesystem::create_directories(se_out_dir);
                std::string path = se_out_dir + "/extension_" + std::to_string(i + 1) + ".arr";
                std::ofstream out(path);
                require_input(out.good(), "cannot write '" + path + "'");
                out << arrangement_to_text(fe.candidate.materialize());
                cj["file"] = path;
                os << "      written to " << path << "\n";
            }
            j["found"].push_back(cj);
        }
        emit(as_json, j, os.str());
        return 0;
    }

    if (cmd_pk->parsed()) {
        auto v = parse_int_tuple(pk_tuple, 4);
        bool peak = peak_point_b2_min1({v[0], v[1], v[2], v[3]});
        emit(as_json, json{{"peak", peak}}, peak ? "peak point\n" : "not a peak point\n");
        return 0;
    }

    if (cmd_fwy->parsed()) {
        auto [g1, g2] = fwy_generators(fwy_pqr[0], fwy_pqr[1], fwy_pqr[2]);
        std::ostringstream os;
        os << "deg " << g1.degree() << ": (" << g1.comps[0].str(names2) << ") dx + ("
           << g1.comps[1].str(names2) << ") dy\n";
        os << "deg " << g2.degree() << ": (" << g2.comps[0].str(names2) << ") dx + ("
           << g2.comps[1].str(names2) << ") dy\n";
        json j{{"degrees", {g1.degree(), g2.degree()}},
               {"theta1", {g1.comps[0].str(names2), g1.comps[1].str(names2)}},
               {"theta2", {g2.comps[0].str(names2), g2.comps[1].str(names2)}}};
        emit(as_json, j, os.str());
        return 0;
    }

    if (cmd_vx->parsed()) {
        Multiarrangement A = resolve_input(vx_in);
        std::vector<std::vector<int>> filtration;
        if (vx_filtration.empty()) {
            filtration = b3_standard_filtration(A);
        } else {
            std::istringstream is(vx_filtration);
            std::string group;
            while (std::getline(is, group, '/')) {
                std::vector<int> idx;
                std::istringstream gs(group);
                std::string tok;
                while (std::getline(gs, tok, ',')) idx.push_back(std::stoi(tok));
                filtration.push_back(idx);
            }
            if (static_cast<int>(filtration.size()) == A.rank() - 1) {
                std::vector<int> all(A.size());
                std::iota(all.begin(), all.end(), 0);
                filtration.push_back(all);
            }
        }
        VertexReport rep = free_vertex_check(A, filtration);
        json j{{"filtration_ok", rep.filtration_ok},
               {"satisfied", rep.satisfied},
               {"violations", json::array()}};
        std::ostringstream os;
        auto names = default_varnames(A.dim());
        if (rep.satisfied) {
            os << "conditions satisfied; inductively free, exp (";
            for (size_t i = 0; i < rep.exponents.size(); ++i)
                os << (i ? ", " : "") << rep.exponents[i];
            os << ")\n";
            j["exponents"] = rep.exponents;
        } else {
            os << "conditions violated:\n";
            for (const auto& v : rep.violations) {
                os << "  level " << v.d << ": m(" << A.hyperplane(v.h_old).str(names)
                   << ") = " << v.lhs << " < " << v.rhs << " (through "
                   << A.hyperplane(v.h_new).str(names) << ")\n";
                j["violations"].push_back({{"level", v.d},
                                           {"h_new", v.h_new},
                                           {"h_old", v.h_old},
                                           {"lhs", v.lhs},
                                           {"rhs", v.rhs}});
            }
        }
        emit(as_json, j, os.str());
        return 0;
    }

    if (cmd_dc->parsed()) {
        Multiarrangement E = resolve_input(dc_in);
        Hyperplane h0 = parse_linear_form(E.field(), E.dim(), dc_pivot);
        std::optional<Viewport> vp;
        if (!dc_viewport.empty()) {
            std::string body = dc_viewport;
            std::replace(body.begin(), body.end(), ',', ' ');
            std::istringstream is(body);
            std::string a, b, cc, d;
            require_input(static_cast<bool>(is >> a >> b >> cc >> d), "viewport needs 4 rationals");
            vp = Viewport{mpq_class(a), mpq_class(b), mpq_class(cc), mpq_class(d)};
        }
        std::string svg = decone_svg(E, h0, vp);
        if (dc_out.empty()) {
            std::cout << svg;
        } else {
            std::ofstream out(dc_out);
            require_input(out.good(), "cannot write '" + dc_out + "'");
            out << svg;
        }
        return 0;
    }

    if (cmd_vp->parsed()) {
        if (vp_sabotage) set_solver_sabotage(true);
        auto items = verify_paper(vp_only);
        if (vp_sabotage) set_solver_sabotage(false);
        bool all = true;
        json j = json::array();
        for (const auto& item : items) {
            all = all && item.pass;
            std::cout << (item.pass ? "PASS" : "FAIL") << "  " << item.id << "  (" << item.ms
                      << " ms)";
            if (!item.pass) std::cout << "  " << item.detail;
            std::cout << "\n";
            j.push_back(
                {{"id", item.id}, {"pass", item.pass}, {"ms", item.ms}, {"detail", item.detail}});
        }
        if (as_json) std::cout << j.dump(2) << "\n";
        std::cout << (all ? "ALL PASS" : "FAILURES PRESENT") << "\n";
        return all ? 0 : 1;
    }

    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const internal_error& e) {
        std::cerr << "internal consistency failure: " << e.what() << "\n";
        return 2;
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
