#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>

#include "mtx/fractal.hpp"
#include "mtx/rng.hpp"
#include "mtx/thicken.hpp"

#include <json.hpp>

using namespace mtx;

namespace {

// brute force: every square in a window whose closed box contains one of the points
std::set<Index2> brute_meeting(const std::vector<Point>& pts, double a, std::int64_t lo, std::int64_t hi)
{
    std::set<Index2> out;
    for (std::int64_t i = lo; i <= hi; ++i)
        for (std::int64_t j = lo; j <= hi; ++j)
            for (auto p : pts)
                if (a * i <= p.real() && p.real() <= a * (i + 1) && a * j <= p.imag() && p.imag() <= a * (j + 1))
                    out.insert({i, j});
    return out;
}

double brute_dist(const std::vector<Point>& pts, Point x)
{
    double d = 1e300;
    for (auto p : pts) d = std::min(d, std::hypot(p.real() - x.real(), p.imag() - x.imag()));
    return d;
}

// edge multiset of the union, counted by parity
std::size_t parity_edges(const SquareSet& s)
{
    std::map<std::pair<Index2, Index2>, int> cnt;
    for (Index2 n : s.squares()) {
        Index2 c[4] = {{n.i, n.j}, {n.i + 1, n.j}, {n.i + 1, n.j + 1}, {n.i, n.j + 1}};
        for (int k = 0; k < 4; ++k) {
            auto e = std::minmax(c[k], c[(k + 1) % 4]);
            cnt[{e.first, e.second}] ^= 1;
        }
    }
    std::size_t n = 0;
    for (auto& [e, v] : cnt) n += v;
    return n;
}

}  // namespace

TEST_CASE("squares meeting a set")
{
    auto s = squares_meeting({{{0, 0}}, {}, {}}, 4);
    CHECK(s.size() == 4);
    CHECK(s.squares() == brute_meeting({{0, 0}}, 4, -3, 3));
    CHECK(s.contains({-1, -1}));
    CHECK(s.contains({0, 0}));
    CHECK(squares_meeting({{{1, 1}}, {}, {}}, 2).size() == 1);
    auto row = squares_meeting({{}, {{{0.2, 1}, {4.6, 1}}}, {}}, 2);
    CHECK(row.size() == 3);
    for (std::int64_t i = 0; i < 3; ++i) CHECK(row.contains({i, 0}));
    CHECK_THROWS_AS(squares_meeting({{{0, HUGE_VAL}}, {}, {}}, 1), Error);
    CHECK_THROWS_AS(squares_meeting({}, 1), Error);

    for (std::uint64_t k = 0; k < 50; ++k) {
        CounterRng rng(31, k);
        std::vector<Point> pts;
        for (int m = 0; m < 10; ++m) pts.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});
        pts.push_back({1.0, 2.0});  // exact lattice vertex
        double a = rng.uniform(0.3, 2);
        REQUIRE(squares_meeting({pts, {}, {}}, a).squares() == brute_meeting(pts, a, -30, 30));
    }
}

TEST_CASE("thickening of a point")
{
    auto t = thicken({{{0, 0}}, {}, {}}, 1);
    CHECK(t.size() == 100);
    for (std::int64_t i = -5; i < 5; ++i)
        for (std::int64_t j = -5; j < 5; ++j) CHECK(t.contains({i, j}));
    auto b = boundary_curves(t);
    REQUIRE(b.vertex_loops.size() == 1);
    CHECK(b.edge_count() == 40);
    auto loops = b.loops();
    for (auto x : loops[0]) {
        double d = std::abs(x);
        CHECK(d >= 5 - 1e-12);
        CHECK(d <= 5 * std::sqrt(2.0) + 1e-12);
    }
    auto two = thicken({{{0, 0}, {100, 0}}, {}, {}}, 1);
    CHECK(components(two).size() == 2);
    // scaling a lattice-aligned cloud scales the thickening
    std::vector<Point> w{{0, 0}, {3, 1}, {7, -2}};
    std::vector<Point> w2;
    for (auto p : w) w2.push_back(2.0 * p);
    CHECK(thicken({w, {}, {}}, 1).squares() == thicken({w2, {}, {}}, 2).squares());
}

TEST_CASE("boundary curves of simple shapes")
{
    SquareSet one(1);
    one.insert({0, 0});
    auto b1 = boundary_curves(one);
    CHECK(b1.vertex_loops.size() == 1);
    CHECK(b1.edge_count() == 4);

    SquareSet block(1);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) block.insert({i, j});
    auto b2 = boundary_curves(block);
    CHECK(b2.vertex_loops.size() == 1);
    CHECK(b2.edge_count() == 8);
    CHECK(parity_edges(block) == 8);

    SquareSet ring(0.5);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != 1 || j != 1) ring.insert({i, j});
    auto b3 = boundary_curves(ring);
    REQUIRE(b3.vertex_loops.size() == 2);
    std::vector<std::size_t> sizes{b3.vertex_loops[0].size(), b3.vertex_loops[1].size()};
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<std::size_t>{4, 12});
    CHECK(parity_edges(ring) == 16);
    CHECK_THROWS_AS(boundary_curves(SquareSet(1)), Error);

    auto js = nlohmann::json::parse(boundary_json(b1));
    CHECK(js["spacing"] == 1.0);
    CHECK(js["loops"].size() == 1);
    CHECK(js["loops"][0].size() == 4);
    CHECK(boundary_svg(b3).find("<polygon") != std::string::npos);
}

TEST_CASE("components")
{
    SquareSet edge(1), corner(1);
    edge.insert({0, 0});
    edge.insert({1, 0});
    corner.insert({0, 0});
    corner.insert({1, 1});
    CHECK(components(edge).size() == 1);
    auto cc = components(corner);
    REQUIRE(cc.size() == 2);
    CHECK(cc[0].contains({0, 0}));

    auto tree = build_cells(IfsSpec::standard(0.5), 3);
    std::vector<Point> leaves;
    std::vector<Rectangle> boxes;
    for (const Cell& c : tree.level(3)) {
        leaves.push_back(c.rect.center());
        boxes.push_back(c.rect);
    }
    double gap = 1e300;
    for (std::size_t i = 0; i < boxes.size(); ++i)
        for (std::size_t j = i + 1; j < boxes.size(); ++j) gap = std::min(gap, distance(boxes[i], boxes[j]));
    CHECK(components(thicken({leaves, {}, {}}, gap / 20)).size() == 8);
}

TEST_CASE("band, simplicity and disjointness on random clouds")
{
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        CounterRng rng(2024, trial);
        int n = 1 + int(rng.below(200));
        double spread = rng.uniform(1, 50);
        std::vector<Point> pts;
        for (int k = 0; k < n; ++k) pts.push_back({rng.uniform(-spread, spread), rng.uniform(-spread, spread)});
        double delta = rng.uniform(0.05, 3);
        auto t = thicken({pts, {}, {}}, delta);
        auto b = boundary_curves(t);
        REQUIRE(b.edge_count() == parity_edges(t));
        REQUIRE(b.vertex_loops.size() >= components(t).size());
        std::set<Index2> seen;
        for (const auto& loop : b.vertex_loops) {
            for (Index2 v : loop) {
                REQUIRE(seen.insert(v).second);  // simple, and no vertex shared between loops
                double d = brute_dist(pts, t.vertex(v));
                REQUIRE(d >= delta * (1 - 1e-12));
                REQUIRE(d <= 8 * delta * (1 + 1e-12));
            }
            for (std::size_t k = 0; k < loop.size(); ++k) {
                Index2 a = loop[k], c = loop[(k + 1) % loop.size()];
                REQUIRE(std::abs(a.i - c.i) + std::abs(a.j - c.j) == 1);
            }
        }
    }
}

TEST_CASE("thickening is monotone")
{
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        CounterRng rng(7, trial);
        std::vector<Point> w, w2;
        for (int k = 0; k < 20; ++k) w.push_back({rng.uniform(-10, 10), rng.uniform(-10, 10)});
        w2 = w;
        for (int k = 0; k < 10; ++k) w2.push_back({rng.uniform(-10, 10), rng.uniform(-10, 10)});
        double delta = rng.uniform(0.1, 2);
        REQUIRE(thicken({w, {}, {}}, delta).subset_of(thicken({w2, {}, {}}, delta)));
        PointSet seg{{}, {{w[0], w[1]}}, {}};
        PointSet seg2{{w[5]}, {{w[0], w[1]}}, {Rectangle::bounding({w[2], w[3]})}};
        REQUIRE(thicken(seg, delta).subset_of(thicken(seg2, delta)));
    }
}
