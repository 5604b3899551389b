#include "multarr/svg.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <vector>

namespace multarr {

namespace {

// Fixed-point decimal with 4 places, computed from the exact rational.
std::string dec(const mpq_class& v) {
    mpz_class scaled_num = v.get_num() * 10000;
    mpz_class q = scaled_num / v.get_den(); // truncation toward zero is fine: deterministic
    mpz_class ip = q / 10000, fp = abs(q % 10000);
    std::ostringstream os;
    if (q < 0 && ip == 0) os << "-";
    os << ip.get_str() << ".";
    std::string fs = fp.get_str();
    os << std::string(4 - fs.size(), '0') << fs;
    return os.str();
}

struct AffLine {
    mpq_class a, b, c; // a x + b y + c = 0 in the chart
    std::string label;
};

struct QPoint {
    mpq_class x, y;
    bool operator<(const QPoint& o) const {
        int cx = cmp(x, o.x);
        if (cx != 0) return cx < 0;
        return cmp(y, o.y) < 0;
    }
    bool operator==(const QPoint& o) const { return cmp(x, o.x) == 0 && cmp(y, o.y) == 0; }
};

} // namespace

std::string decone_svg(const Multiarrangement& E, const Hyperplane& h0,
                       std::optional<Viewport> viewport) {
    require_input(E.field().is_rationals(), "deconing pictures are drawn over Q");
    require_input(E.dim() == 3, "deconing expects a 3-arrangement");
    int pivot_idx = E.index_of(h0);
    require_input(pivot_idx >= 0, "deconing pivot is not in the arrangement");
    // The pivot must be a coordinate kernel so that the chart is one of the
    // coordinate planes.
    int coord = -1;
    for (int j = 0; j < 3; ++j) {
        if (h0.coeffs()[j].is_one()) {
            bool others_zero = true;
            for (int k = 0; k < 3; ++k)
                if (k != j && !h0.coeffs()[k].is_zero()) others_zero = false;
            if (others_zero) coord = j;
        }
    }
    require_input(coord >= 0, "deconing pivot must be a coordinate hyperplane");
    int u = coord == 0 ? 1 : 0;
    int v = coord == 2 ? 1 : 2;

    auto names = default_varnames(3);
    std::vector<AffLine> lines;
    for (int i = 0; i < E.size(); ++i) {
        if (i == pivot_idx) continue;
        const auto& cf = E.hyperplane(i).coeffs();
        AffLine l;
        l.a = cf[u].rational();
        l.b = cf[v].rational();
        l.c = cf[coord].rational();
        require_internal(l.a != 0 || l.b != 0, "line parallel to the chart");
        l.label = E.hyperplane(i).str(names);
        lines.push_back(std::move(l));
    }

    // All pairwise affine intersection points with their line counts.
    std::map<QPoint, int> pts;
    for (size_t i = 0; i < lines.size(); ++i) {
        for (size_t j = i + 1; j < lines.size(); ++j) {
            mpq_class det = lines[i].a * lines[j].b - lines[j].a * lines[i].b;
            if (det == 0) continue; // parallel in the chart
            QPoint p;
            p.x = (lines[j].c * lines[i].b - lines[i].c * lines[j].b) / det;
            p.y = (lines[i].c * lines[j].a - lines[j].c * lines[i].a) / det;
            p.x.canonicalize();
            p.y.canonicalize();
            pts[p] += 1; // counts pairs; lines through p = nu with nu(nu-1)/2 pairs
        }
    }
    // Recover nu from the pair count: nu(nu-1)/2 = k.
    std::map<QPoint, int> nu;
    for (const auto& [p, k] : pts) {
        int n = 2;
        while (n * (n - 1) / 2 < k) ++n;
        require_internal(n * (n - 1) / 2 == k, "non-simple pair count at a point");
        nu[p] = n;
    }

    Viewport vp;
    if (viewport) {
        vp = *viewport;
    } else if (!nu.empty()) {
        vp.xmin = vp.xmax = nu.begin()->first.x;
        vp.ymin = vp.ymax = nu.begin()->first.y;
        for (const auto& [p, n] : nu) {
            vp.xmin = std::min(vp.xmin, p.x);
            vp.xmax = std::max(vp.xmax, p.x);
            vp.ymin = std::min(vp.ymin, p.y);
            vp.ymax = std::max(vp.ymax, p.y);
        }
        mpq_class padx = (vp.xmax - vp.xmin) / 5, pady = (vp.ymax - vp.ymin) / 5;
        if (padx == 0) padx = 1;
        if (pady == 0) pady = 1;
        vp.xmin -= padx;
        vp.xmax += padx;
        vp.ymin -= pady;
        vp.ymax += pady;
    } else {
        vp = {mpq_class(-1), mpq_class(-1), mpq_class(1), mpq_class(1)};
    }
    require_input(vp.xmax > vp.xmin && vp.ymax > vp.ymin, "empty viewport");

    const long W = 640, H = 640;
    auto sx = [&](const mpq_class& x) { return dec((x - vp.xmin) / (vp.xmax - vp.xmin) * W); };
    auto sy = [&](const mpq_class& y) { return dec((vp.ymax - y) / (vp.ymax - vp.ymin) * H); };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
        << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    svg << "<!-- deconing at " << h0.str(names) << " = 1; " << lines.size() << " lines -->\n";
    svg << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";

    // Clip each line to the viewport rectangle.
    for (const auto& l : lines) {
        std::vector<QPoint> hits;
        auto push = [&](mpq_class x, mpq_class y) {
            if (x < vp.xmin || x > vp.xmax || y < vp.ymin || y > vp.ymax) return;
            QPoint p{std::move(x), std::move(y)};
            for (const auto& q : hits)
                if (q == p) return;
            hits.push_back(std::move(p));
        };
        if (l.b != 0) {
            push(vp.xmin, (-l.c - l.a * vp.xmin) / l.b);
            push(vp.xmax, (-l.c - l.a * vp.xmax) / l.b);
        }
        if (l.a != 0) {
            push((-l.c - l.b * vp.ymin) / l.a, vp.ymin);
            push((-l.c - l.b * vp.ymax) / l.a, vp.ymax);
        }
        if (hits.size() < 2) continue; // outside the viewport
        svg << "<line x1=\"" << sx(hits[0].x) << "\" y1=\"" << sy(hits[0].y) << "\" x2=\""
            << sx(hits[1].x) << "\" y2=\"" << sy(hits[1].y)
            << "\" stroke=\"black\" stroke-width=\"1\"><title>" << l.label << "</title></line>\n";
    }
    // Mark points on >= 3 lines.
    for (const auto& [p, n] : nu) {
        if (n < 3) continue;
        if (p.x < vp.xmin || p.x > vp.xmax || p.y < vp.ymin || p.y > vp.ymax) continue;
        svg << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y)
            << "\" r=\"4\" fill=\"#c22\"><title>" << n << " lines</title></circle>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace multarr
