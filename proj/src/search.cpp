#include <algorithm>
#include <atomic>
#include <climits>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <mutex>
#include <thread>

#include "multarr/extend.hpp"

namespace multarr {

std::vector<Scalar> rational_height_grid(int height) {
    require_input(height >= 1, "grid height must be positive");
    std::vector<Scalar> out;
    for (long q = 1; q <= height; ++q)
        for (long p = -height; p <= height; ++p)
            out.push_back(Scalar::of_rational(mpq_class(p, q)));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

namespace {

using Point = std::pair<Scalar, Scalar>;

struct PointLess {
    bool operator()(const Point& a, const Point& b) const {
        int c = Scalar::cmp(a.first, b.first);
        if (c != 0) return c < 0;
        return Scalar::cmp(a.second, b.second) < 0;
    }
};

using PointMap = std::map<Point, int, PointLess>;

struct Line {
    int cls; // base hyperplane index
    Scalar offset;
};

// One DFS stage: all offsets of one base class. The normalization pins
// `forced` (placed on stage entry); `choose` more are taken from `pool`,
// ascending.
struct Stage {
    int cls = 0;
    int choose = 0;
    std::vector<Scalar> forced;
    std::vector<Scalar> pool;
    int growth = 0; // guaranteed distinct points per line of this stage
};

struct Plan {
    const Multiarrangement* base = nullptr;
    std::vector<Stage> stages;
    std::vector<long> future_after; // min future excess from stages > i
    std::vector<int> cap_by_class;  // max affine points per line
    std::vector<int> min_by_class;  // leaf tripwire (general lower bound)
    long budget = 0;                // vgmp_target - sum m_i
    long vgmp_target = 0;
    bool prune_lmp = true;
    long limit = 0;
};

// Deconing geometry of the partial candidate. Placing a line increases
// `excess` by exactly the number of distinct affine points on it; at a leaf
// LMP = sum_i m_i + excess.
struct State {
    PointMap points;            // affine point -> lines through it
    std::vector<Line> lines;
    std::vector<int> line_pts;  // distinct affine points per line
    long excess = 0;
};

struct Undo {
    std::vector<Point> fresh;
    std::vector<Point> bumped;
    std::vector<int> owner_bumps;
    long excess_delta = 0;
};

Point intersect(const Multiarrangement& base, int ca, const Scalar& s, int cb, const Scalar& t) {
    const auto& u = base.hyperplane(ca).coeffs();
    const auto& v = base.hyperplane(cb).coeffs();
    Scalar det = u[0] * v[1] - u[1] * v[0];
    Scalar x = (s * v[1] - t * u[1]) / det;
    Scalar y = (u[0] * t - v[0] * s) / det;
    return {x, y};
}

struct Unit {
    std::vector<std::vector<Scalar>> chosen; // for stages 0 and 1
};

class Searcher {
  public:
    Searcher(const Plan& plan, std::atomic<long>* found_total, std::atomic<bool>* stop)
        : plan_(plan), found_total_(found_total), stop_(stop) {}

    SearchStats stats;
    std::vector<FoundExtension> found;
    std::vector<Unit>* unit_sink = nullptr; // set while generating units
    int unit_depth = 0;

    bool stopped() const { return stop_ && stop_->load(std::memory_order_relaxed); }

    // Places one line, recording everything needed to undo it. Returns false
    // when a restriction-size cap is exceeded (the caller still undoes).
    bool place_line(State& st, int cls, const Scalar& offset, Undo& undo, bool count = true) {
        if (count) ++stats.nodes;
        const auto& base = *plan_.base;
        std::vector<Point> pts;
        for (const auto& ln : st.lines) {
            if (ln.cls == cls) continue;
            pts.push_back(intersect(base, cls, offset, ln.cls, ln.offset));
        }
        std::sort(pts.begin(), pts.end(), PointLess{});
        pts.erase(std::unique(pts.begin(), pts.end(),
                              [](const Point& a, const Point& b) {
                                  return Scalar::cmp(a.first, b.first) == 0 &&
                                         Scalar::cmp(a.second, b.second) == 0;
                              }),
                  pts.end());

        int line_idx = static_cast<int>(st.lines.size());
        st.lines.push_back({cls, offset});
        st.line_pts.push_back(static_cast<int>(pts.size()));
        bool ok = true;
        for (const auto& p : pts) {
            auto [it, fresh] = st.points.emplace(p, 2);
            st.excess += 1;
            undo.excess_delta += 1;
            if (fresh) {
                undo.fresh.push_back(p);
                // A fresh point lies on exactly one earlier line: any two
                // earlier crossing lines already recorded their point.
                int owner = -1;
                for (int li = 0; li < line_idx && owner < 0; ++li) {
                    const auto& ln = st.lines[li];
                    if (ln.cls == cls) continue;
                    const auto& c = base.hyperplane(ln.cls).coeffs();
                    if (c[0] * p.first + c[1] * p.second == ln.offset) owner = li;
                }
                require_internal(owner >= 0, "fresh intersection point without an owner line");
                st.line_pts[owner] += 1;
                undo.owner_bumps.push_back(owner);
                if (st.line_pts[owner] > plan_.cap_by_class[st.lines[owner].cls]) ok = false;
            } else {
                it->second += 1;
                undo.bumped.push_back(p);
            }
        }
        if (st.line_pts[line_idx] > plan_.cap_by_class[cls]) ok = false;
        return ok;
    }

    void undo_line(State& st, const Undo& undo) {
        for (const auto& p : undo.fresh) st.points.erase(p);
        for (const auto& p : undo.bumped) st.points.find(p)->second -= 1;
        for (int owner : undo.owner_bumps) st.line_pts[owner] -= 1;
        st.excess -= undo.excess_delta;
        st.lines.pop_back();
        st.line_pts.pop_back();
    }

    long future_min(int si, int chosen_in_stage) const {
        return static_cast<long>(plan_.stages[si].choose - chosen_in_stage) *
                   plan_.stages[si].growth +
               plan_.future_after[si];
    }

    void enter_stage(State& st, std::vector<std::vector<Scalar>>& chosen, int si,
                     bool count = true) {
        if (stopped()) return;
        if (unit_sink && si == unit_depth) {
            Unit u;
            for (int k = 0; k < unit_depth; ++k) u.chosen.push_back(chosen[k]);
            unit_sink->push_back(std::move(u));
            return;
        }
        if (si == static_cast<int>(plan_.stages.size())) {
            leaf(st, chosen);
            return;
        }
        const Stage& s = plan_.stages[si];
        std::vector<Undo> undos;
        bool ok = true;
        for (const auto& t : s.forced) {
            undos.emplace_back();
            if (!place_line(st, s.cls, t, undos.back(), count)) {
                ++stats.pruned_bounds;
                ok = false;
                break;
            }
            if (plan_.prune_lmp && st.excess + future_min(si, 0) > plan_.budget) {
                ++stats.pruned_lmp;
                ok = false;
                break;
            }
        }
        if (ok) choose_offsets(st, chosen, si, 0);
        for (auto it = undos.rbegin(); it != undos.rend(); ++it) undo_line(st, *it);
    }

    void choose_offsets(State& st, std::vector<std::vector<Scalar>>& chosen, int si, int from) {
        if (stopped()) return;
        const Stage& s = plan_.stages[si];
        int need = s.choose - static_cast<int>(chosen[si].size());
        if (need == 0) {
            enter_stage(st, chosen, si + 1);
            return;
        }
        int pool_size = static_cast<int>(s.pool.size());
        for (int i = from; i + need <= pool_size; ++i) {
            if (stopped()) return;
            Undo undo;
            bool ok = place_line(st, s.cls, s.pool[i], undo);
            if (!ok) {
                ++stats.pruned_bounds;
            } else if (plan_.prune_lmp &&
                       st.excess + future_min(si, static_cast<int>(chosen[si].size()) + 1) >
                           plan_.budget) {
                ++stats.pruned_lmp;
                ok = false;
            }
            if (ok) {
                chosen[si].push_back(s.pool[i]);
                choose_offsets(st, chosen, si, i + 1);
                chosen[si].pop_back();
            }
            undo_line(st, undo);
        }
    }

    // Rebuilds a unit prefix (already validated during generation).
    void rebuild_prefix(State& st, std::vector<std::vector<Scalar>>& chosen, const Unit& u,
                        int depth) {
        for (int si = 0; si < depth; ++si) {
            const Stage& s = plan_.stages[si];
            for (const auto& t : s.forced) {
                Undo undo;
                require_internal(place_line(st, s.cls, t, undo, false), "unit prefix became invalid");
            }
            for (const auto& t : u.chosen[si]) {
                Undo undo;
                require_internal(place_line(st, s.cls, t, undo, false), "unit prefix became invalid");
                chosen[si].push_back(t);
            }
        }
    }

    void leaf(State& st, const std::vector<std::vector<Scalar>>& chosen) {
        ++stats.leaves;
        if (st.excess < plan_.budget) {
            std::ostringstream os;
            os << "leaf LMP below the VGMP target contradicts the freeness inequality: excess "
               << st.excess << " < budget " << plan_.budget << "; lines:";
            for (const auto& ln : st.lines)
                os << " (" << ln.cls << "," << ln.offset.str() << ")";
            throw internal_error(os.str());
        }
        for (size_t li = 0; li < st.lines.size(); ++li)
            require_internal(st.line_pts[li] >= plan_.min_by_class[st.lines[li].cls],
                             "restriction size below the general lower bound");
        if (st.excess != plan_.budget) return;

        ExtensionCandidate cand{*plan_.base, {}};
        cand.offsets.resize(plan_.base->size());
        for (size_t si = 0; si < plan_.stages.size(); ++si) {
            auto offs = plan_.stages[si].forced;
            offs.insert(offs.end(), chosen[si].begin(), chosen[si].end());
            std::sort(offs.begin(), offs.end());
            cand.offsets[plan_.stages[si].cls] = std::move(offs);
        }
        // Independent verification through the lattice route.
        const Field& f = plan_.base->field();
        Multiarrangement E = cand.materialize();
        Hyperplane h0(f, {f.zero(), f.zero(), f.one()});
        FreenessReport rep = yoshinaga_freeness(E, h0);
        require_internal(rep.free && rep.vgmp == plan_.vgmp_target,
                         "incremental LMP bookkeeping disagrees with the lattice");
        found.push_back({std::move(cand), rep});
        if (found_total_) {
            long total = found_total_->fetch_add(1) + 1;
            if (plan_.limit > 0 && total >= plan_.limit && stop_) stop_->store(true);
        }
    }

  private:
    const Plan& plan_;
    std::atomic<long>* found_total_;
    std::atomic<bool>* stop_;
};

int env_workers() {
    if (const char* e = std::getenv("MULTARR_WORKERS")) {
        int w = std::atoi(e);
        if (w >= 1) return w;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

} // namespace

SearchResult search_free_extensions(const Multiarrangement& base, const SearchDomain& dom) {
    require_input(base.dim() == 2, "search base must live in 2 coordinates");
    require_input(base.rank() == 2, "search base must have rank 2");
    const Field& f = base.field();

    SearchResult result;
    result.base_exponents = rank2_multi_exponents(base);
    const int d1 = result.base_exponents.d1, d2 = result.base_exponents.d2;
    result.vgmp_target = static_cast<long>(d1) + d2 + static_cast<long>(d1) * d2;

    std::vector<Scalar> universe =
        f.is_rationals() ? rational_height_grid(dom.height) : f.elements();

    Plan plan;
    plan.base = &base;
    plan.vgmp_target = result.vgmp_target;
    plan.budget = result.vgmp_target - base.total_multiplicity();
    plan.prune_lmp = dom.prune_lmp;
    plan.limit = dom.limit;

    // Restriction-size caps apply only where the bounding corollary does:
    // standard-coordinates B2 base, balanced multiplicity, characteristic 0.
    plan.cap_by_class.assign(base.size(), INT_MAX);
    auto tuple = b2_tuple_of(base);
    bool bounds_active = dom.prune_bounds && f.is_rationals() && tuple && base.is_balanced();
    if (bounds_active) {
        std::array<std::array<long, 2>, 4> forms = {{{1, 0}, {0, 1}, {1, -1}, {1, 1}}};
        for (int i = 0; i < base.size(); ++i) {
            for (int c = 0; c < 4; ++c) {
                Hyperplane h(f, {f.from_int(forms[c][0]), f.from_int(forms[c][1])});
                if (base.hyperplane(i) == h) {
                    // |E^H| = 1 + (affine points on the line)
                    plan.cap_by_class[i] = restriction_bounds(*tuple, c).upper - 1;
                    break;
                }
            }
        }
    }
    result.bounds_prune_active = bounds_active;

    // General restriction-size lower bound (Lemma), used as a leaf tripwire.
    plan.min_by_class.assign(base.size(), 0);
    for (int i = 0; i < base.size(); ++i) {
        int m1 = 0;
        for (int j = 0; j < base.size(); ++j) {
            if (j != i) m1 = std::max(m1, base.multiplicity(j));
            else if (base.multiplicity(j) >= 2) m1 = std::max(m1, base.multiplicity(j));
        }
        plan.min_by_class[i] = m1;
    }

    // Anchor classes: the literal x and y forms when present.
    int ax, ay;
    {
        Hyperplane hx(f, {f.one(), f.zero()});
        Hyperplane hy(f, {f.zero(), f.one()});
        ax = base.index_of(hx);
        ay = base.index_of(hy);
        if (ax < 0 || ay < 0 || ax == ay) {
            ax = 0;
            ay = 1;
        }
    }
    require_internal(base.size() >= 2, "rank-2 base has at least two classes");

    std::vector<int> order{ax, ay};
    for (int i = 0; i < base.size(); ++i)
        if (i != ax && i != ay) order.push_back(i);

    const Scalar zero = f.zero(), one = f.one();
    int max_prior = 0;
    for (size_t oi = 0; oi < order.size(); ++oi) {
        Stage s;
        s.cls = order[oi];
        int mult = base.multiplicity(s.cls);
        s.growth = max_prior;
        if (oi == 0) {
            s.forced.push_back(zero);
            if (mult >= 2) s.forced.push_back(one);
            for (const auto& u : universe) {
                if (f.is_rationals()) {
                    if (mult >= 2 ? Scalar::cmp(u, one) > 0 : Scalar::cmp(u, zero) > 0)
                        s.pool.push_back(u);
                } else {
                    if (u != zero && (mult < 2 || u != one)) s.pool.push_back(u);
                }
            }
        } else if (oi == 1) {
            s.forced.push_back(zero);
            for (const auto& u : universe) {
                if (f.is_rationals()) {
                    if (Scalar::cmp(u, zero) > 0) s.pool.push_back(u);
                } else {
                    if (u != zero) s.pool.push_back(u);
                }
            }
        } else {
            s.pool = universe;
        }
        require_input(static_cast<int>(s.forced.size()) <= mult,
                      "class multiplicity below the pinned offsets");
        s.choose = mult - static_cast<int>(s.forced.size());
        require_input(static_cast<int>(s.pool.size()) >= s.choose,
                      "offset universe too small for class multiplicity");
        plan.stages.push_back(std::move(s));
        max_prior = std::max(max_prior, mult);
    }

    plan.future_after.assign(plan.stages.size(), 0);
    for (int i = static_cast<int>(plan.stages.size()) - 2; i >= 0; --i) {
        const Stage& nxt = plan.stages[i + 1];
        plan.future_after[i] =
            plan.future_after[i + 1] +
            static_cast<long>(nxt.choose + nxt.forced.size()) * nxt.growth;
    }

    {
        std::ostringstream os;
        if (f.is_rationals()) {
            os << "offset grid: rationals p/q with |p|,q <= " << dom.height
               << " (normalized: min x/y offsets 0, second x offset 1); "
               << "non-existence results are relative to this finite grid";
        } else {
            os << "offset universe: all " << f.order() << " elements of " << f.describe();
        }
        os << "; counts are modulo the implemented normalization";
        result.domain_note = os.str();
    }

    std::atomic<long> found_total{0};
    std::atomic<bool> stop{false};

    int workers = dom.workers > 0 ? dom.workers : env_workers();
    if (dom.limit > 0) workers = 1; // exact deterministic early stop
    bool parallel = workers > 1 && plan.stages.size() > 2;

    if (!parallel) {
        Searcher w(plan, &found_total, &stop);
        State st;
        std::vector<std::vector<Scalar>> chosen(plan.stages.size());
        w.enter_stage(st, chosen, 0);
        result.found = std::move(w.found);
        result.stats = w.stats;
        return result;
    }

    // Parallel: enumerate (stage 0, stage 1) assignments as units, then let
    // workers finish each unit; results merge in unit order.
    std::vector<Unit> units;
    Searcher gen(plan, nullptr, nullptr);
    gen.unit_sink = &units;
    gen.unit_depth = 2;
    {
        State st;
        std::vector<std::vector<Scalar>> chosen(plan.stages.size());
        gen.enter_stage(st, chosen, 0);
    }
    result.stats = gen.stats;

    std::vector<std::vector<FoundExtension>> unit_found(units.size());
    std::vector<SearchStats> unit_stats(units.size());
    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mu;
    auto worker_fn = [&]() {
        try {
            for (;;) {
                size_t ui = next.fetch_add(1);
                if (ui >= units.size()) return;
                Searcher w(plan, &found_total, &stop);
                State st;
                std::vector<std::vector<Scalar>> chosen(plan.stages.size());
                w.rebuild_prefix(st, chosen, units[ui], 2);
                w.enter_stage(st, chosen, 2);
                unit_found[ui] = std::move(w.found);
                unit_stats[ui] = w.stats;
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!first_error) first_error = std::current_exception();
            stop.store(true);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < workers; ++t) pool.emplace_back(worker_fn);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);

    for (size_t ui = 0; ui < units.size(); ++ui) {
        for (auto& fe : unit_found[ui]) result.found.push_back(std::move(fe));
        result.stats.nodes += unit_stats[ui].nodes;
        result.stats.leaves += unit_stats[ui].leaves;
        result.stats.pruned_bounds += unit_stats[ui].pruned_bounds;
        result.stats.pruned_lmp += unit_stats[ui].pruned_lmp;
    }
    return result;
}

} // namespace multarr
