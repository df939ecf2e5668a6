#include "mtx/thicken.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>
#include <map>

#include <json.hpp>

namespace mtx {

namespace {

// Square n of a grid with cell size unit*k covers [unit*(k*n), unit*(k*(n+1))] on each axis.
struct GridAxis {
    double unit;
    std::int64_t k;
    double edge(std::int64_t n) const { return unit * double(k * n); }
    std::int64_t guess(double x) const { return static_cast<std::int64_t>(std::floor(x / (unit * double(k)))); }
};

void check_finite(Point p)
{
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag()))
        fail(ErrorKind::domain, "point set is unbounded (non-finite coordinate)");
}

bool segment_meets_box(Point a, Point b, double x0, double x1, double y0, double y1)
{
    double t0 = 0, t1 = 1;
    auto clip = [&](double p, double d, double lo, double hi) {
        if (d == 0) return p >= lo && p <= hi;
        double u = (lo - p) / d, v = (hi - p) / d;
        if (u > v) std::swap(u, v);
        t0 = std::max(t0, u);
        t1 = std::min(t1, v);
        return t0 <= t1;
    };
    Point d = b - a;
    return clip(a.real(), d.real(), x0, x1) && clip(a.imag(), d.imag(), y0, y1);
}

SquareSet meeting(const PointSet& w, double unit, std::int64_t k)
{
    if (w.empty()) fail(ErrorKind::domain, "squares_meeting: empty set");
    if (!(unit > 0) || !std::isfinite(unit)) fail(ErrorKind::domain, "grid spacing must be positive");
    GridAxis ax{unit, k};
    SquareSet out(unit * double(k));
    auto range_box = [&](double x0, double x1, double y0, double y1, auto&& accept) {
        for (std::int64_t i = ax.guess(x0) - 1; i <= ax.guess(x1) + 1; ++i) {
            if (ax.edge(i + 1) < x0 || ax.edge(i) > x1) continue;
            for (std::int64_t j = ax.guess(y0) - 1; j <= ax.guess(y1) + 1; ++j) {
                if (ax.edge(j + 1) < y0 || ax.edge(j) > y1) continue;
                if (accept(i, j)) out.insert({i, j});
            }
        }
    };
    for (auto p : w.points) {
        check_finite(p);
        range_box(p.real(), p.real(), p.imag(), p.imag(), [](auto, auto) { return true; });
    }
    for (auto [a, b] : w.segments) {
        check_finite(a);
        check_finite(b);
        range_box(std::min(a.real(), b.real()), std::max(a.real(), b.real()), std::min(a.imag(), b.imag()),
                  std::max(a.imag(), b.imag()), [&](std::int64_t i, std::int64_t j) {
                      return segment_meets_box(a, b, ax.edge(i), ax.edge(i + 1), ax.edge(j), ax.edge(j + 1));
                  });
    }
    for (const auto& r : w.rects) {
        check_finite({r.xmin, r.ymin});
        check_finite({r.xmax, r.ymax});
        range_box(r.xmin, r.xmax, r.ymin, r.ymax, [](auto, auto) { return true; });
    }
    return out;
}

const Index2 kStep[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

}  // namespace

double PointSet::distance_to(Point p) const
{
    double d = std::numeric_limits<double>::infinity();
    for (auto q : points) d = std::min(d, std::abs(p - q));
    for (auto [a, b] : segments) d = std::min(d, point_segment_distance(p, a, b));
    for (const auto& r : rects) d = std::min(d, distance(r, p));
    return d;
}

Rectangle SquareSet::square(Index2 n) const
{
    return {spacing_ * double(n.i), spacing_ * double(n.i + 1), spacing_ * double(n.j), spacing_ * double(n.j + 1)};
}

bool SquareSet::subset_of(const SquareSet& o) const
{
    return std::includes(o.squares_.begin(), o.squares_.end(), squares_.begin(), squares_.end());
}

SquareSet squares_meeting(const PointSet& w, double alpha) { return meeting(w, alpha, 1); }

SquareSet thicken(const PointSet& w, double delta)
{
    // coarse squares of side 4δ share the vertex lattice of the δ-grid
    SquareSet coarse = meeting(w, delta, 4);
    SquareSet fine(delta);
    for (Index2 a : coarse.squares())
        for (std::int64_t i = 4 * a.i - 1; i <= 4 * a.i + 4; ++i)
            for (std::int64_t j = 4 * a.j - 1; j <= 4 * a.j + 4; ++j) fine.insert({i, j});
    return fine;
}

std::vector<SquareSet> components(const SquareSet& s)
{
    std::vector<SquareSet> out;
    std::set<Index2> seen;
    for (Index2 start : s.squares()) {  // ordered, so components come out sorted by minimal index
        if (seen.count(start)) continue;
        SquareSet comp(s.spacing());
        std::deque<Index2> queue{start};
        seen.insert(start);
        while (!queue.empty()) {
            Index2 n = queue.front();
            queue.pop_front();
            comp.insert(n);
            for (Index2 d : kStep) {
                Index2 m{n.i + d.i, n.j + d.j};
                if (s.contains(m) && !seen.count(m)) {
                    seen.insert(m);
                    queue.push_back(m);
                }
            }
        }
        out.push_back(std::move(comp));
    }
    return out;
}

std::vector<std::vector<Point>> GridBoundary::loops() const
{
    std::vector<std::vector<Point>> out;
    for (const auto& l : vertex_loops) {
        std::vector<Point> pts;
        for (Index2 v : l) pts.push_back({spacing * double(v.i), spacing * double(v.j)});
        out.push_back(std::move(pts));
    }
    return out;
}

std::size_t GridBoundary::edge_count() const
{
    std::size_t n = 0;
    for (const auto& l : vertex_loops) n += l.size();
    return n;
}

GridBoundary boundary_curves(const SquareSet& s)
{
    if (s.size() == 0) fail(ErrorKind::domain, "boundary_curves: empty square set");
    // directed boundary edges, interior on the left: (start vertex, direction)
    std::map<Index2, int> edges;  // bitmask of directions per start vertex
    auto add = [&](Index2 v, int dir) { edges[v] |= 1 << dir; };
    for (Index2 n : s.squares()) {
        if (!s.contains({n.i, n.j - 1})) add({n.i, n.j}, 0);
        if (!s.contains({n.i + 1, n.j})) add({n.i + 1, n.j}, 1);
        if (!s.contains({n.i, n.j + 1})) add({n.i + 1, n.j + 1}, 2);
        if (!s.contains({n.i - 1, n.j})) add({n.i, n.j + 1}, 3);
    }
    GridBoundary b;
    b.spacing = s.spacing();
    for (auto it = edges.begin(); it != edges.end(); ++it) {
        while (it->second != 0) {
            Index2 v0 = it->first;
            int d0 = 0;
            while (!(it->second & (1 << d0))) ++d0;
            it->second &= ~(1 << d0);
            std::vector<Index2> loop{v0};
            Index2 cur{v0.i + kStep[d0].i, v0.j + kStep[d0].j};
            int d = d0;
            for (;;) {
                int next = -1;
                // left turn first keeps corner-touching squares on separate loops
                for (int turn : {1, 0, 3}) {
                    int nd = (d + turn) % 4;
                    if (cur == v0 && nd == d0) {
                        next = 4;
                        break;
                    }
                    auto e = edges.find(cur);
                    if (e != edges.end() && (e->second & (1 << nd))) {
                        next = nd;
                        break;
                    }
                }
                if (next == 4) break;
                if (next < 0) fail(ErrorKind::degenerate, "boundary tracing failed");
                edges[cur] &= ~(1 << next);
                loop.push_back(cur);
                cur = {cur.i + kStep[next].i, cur.j + kStep[next].j};
                d = next;
            }
            b.vertex_loops.push_back(std::move(loop));
        }
    }
    return b;
}

std::string boundary_json(const GridBoundary& b)
{
    nlohmann::json j;
    j["spacing"] = b.spacing;
    j["loops"] = nlohmann::json::array();
    for (const auto& l : b.loops()) {
        nlohmann::json loop = nlohmann::json::array();
        for (auto p : l) loop.push_back({p.real(), p.imag()});
        j["loops"].push_back(loop);
    }
    return j.dump();
}

std::string boundary_svg(const GridBoundary& b, double margin)
{
    auto loops = b.loops();
    std::vector<Point> all;
    for (const auto& l : loops) all.insert(all.end(), l.begin(), l.end());
    Rectangle box = all.empty() ? Rectangle{0, 1, 0, 1} : Rectangle::bounding(all);
    box = box.expanded(margin * b.spacing);
    char buf[256];
    std::string out;
    std::snprintf(buf, sizeof buf,
                  "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.6f %.6f %.6f %.6f\">\n"
                  "<g transform=\"scale(1,-1)\" fill=\"none\" stroke=\"black\" stroke-width=\"%.6f\">\n",
                  box.xmin, -box.ymax, box.width(), box.height(), b.spacing / 8);
    out += buf;
    for (const auto& l : loops) {
        out += "<polygon points=\"";
        for (std::size_t i = 0; i < l.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%s%.6f,%.6f", i ? " " : "", l[i].real(), l[i].imag());
            out += buf;
        }
        out += "\"/>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
}

}  // namespace mtx
