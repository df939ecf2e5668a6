#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "mtx/multitwist.hpp"
#include "mtx/rng.hpp"

using namespace mtx;

namespace {

const double r2 = std::sqrt(2.0);

Point half_turn(Point z, Point c) { return 2.0 * c - z; }

// brute-force placement audit: disjoint non-nested rings, children inside parent holes, attractor clear of annuli
void audit(const CellTree& deep, const RingFamily& fam)
{
    for (const auto& r : fam.rings())
        for (const auto& s : fam.rings()) {
            if (r.word >= s.word) continue;
            bool nested = s.word.compare(0, r.word.size(), r.word) == 0;
            if (nested) {
                if (s.level() == r.level() + 1) REQUIRE(std::abs(s.center - r.center) + s.r_out < r.r_in);
            } else {
                REQUIRE(std::abs(s.center - r.center) > r.r_out + s.r_out);
            }
        }
    for (const Cell& c : deep.level(deep.depth()))
        for (const auto& r : fam.rings())
            for (auto p : c.rect.corners()) {
                double d = std::abs(p - r.center);
                REQUIRE((d < r.r_in || d > r.r_out));
            }
}

RingFamily family(double alpha, int depth, double l_twist = 4, double margin = 0.25)
{
    return place_rings(build_cells(IfsSpec::standard(alpha), depth), margin, l_twist);
}

}  // namespace

TEST_CASE("ring placement")
{
    auto deep = build_cells(IfsSpec::standard(0.5), 14);
    auto f0 = family(0.5, 0, 2);
    REQUIRE(f0.size() == 1);
    CHECK(f0.root().r_in == doctest::Approx(f0.root().r_out / 2));
    audit(deep, f0);

    auto f1 = family(0.5, 1, 2);
    REQUIRE(f1.size() == 3);
    const Ring& d1 = f1.ring("1");
    CHECK(std::abs(d1.center - Point(-r2 / 2, 0)) < 1e-15);
    CHECK(std::abs(f1.ring("2").center - Point(r2 / 2, 0)) < 1e-15);
    CHECK(2 * d1.r_out < r2);
    CHECK(d1.r_in == doctest::Approx(d1.r_out / 2));
    audit(deep, f1);

    auto f3 = family(0.5, 3, 4);
    CHECK(f3.size() == 15);
    CHECK(f3.depth() == 3);
    audit(deep, f3);
    CHECK(f3.max_shrink_ratio() < 1);
    CHECK(f3.max_shrink_ratio() <= f3.shrink_bound());
    CHECK(f3.shrink_bound() == doctest::Approx(1 - 1.0 / 16));
    CHECK_NOTHROW(verify_rings(deep, f3));

    // L = 2 has no room below the first level
    try {
        family(0.5, 2, 2);
        FAIL("expected a placement error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::placement);
        CHECK(std::string(e.what()).find("'1'") != std::string::npos);
    }
    CHECK_THROWS_AS(family(0.5, 1, 1), Error);
    CHECK_THROWS_AS(family(0.5, 1, 4, 1.5), Error);

    // hand-corrupted families are caught
    auto rings = f3.rings();
    for (auto& r : rings)
        if (r.word == "12") r.r_out *= 3, r.r_in *= 3;
    try {
        verify_rings(deep, RingFamily(rings, 4, 0.25));
        FAIL("expected a placement error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::placement);
    }
    rings = f3.rings();
    for (auto& r : rings)
        if (r.word == "") r.r_in = 0.2;
    CHECK_THROWS_AS(verify_rings(deep, RingFamily(rings, 4, 0.25)), Error);
}

TEST_CASE("multitwist map")
{
    auto fam = family(0.5, 2);
    auto f = multitwist_map(fam, 2);
    const Ring& root = fam.root();
    double eta = fam.eta();
    CHECK(f({5, 5}) == Point(5, 5));
    for (int k = 0; k < 16; ++k) {
        double th = kTwoPi * k / 16;
        for (const auto& r : fam.rings()) {
            Point on = r.center + std::polar(r.r_out, th);
            CHECK(std::abs(f(on) - on) < 1e-14);
            Point mid = r.center + std::polar(r.r_out * (1 - eta / 2), th);
            CHECK(std::abs(f(mid) - half_turn(mid, r.center)) < 1e-14);
            CHECK(std::abs(f.inverse(f(mid)) - mid) < 1e-14);
            // inner circle turns a full revolution
            Point in = r.center + std::polar(r.r_in, th);
            CHECK(std::abs(f(in) - in) < 1e-13);
        }
    }
    // attractor points sit in the holes and never move
    auto deep = build_cells(IfsSpec::standard(0.5), 8);
    for (const Cell& c : deep.level(8)) REQUIRE(f(c.rect.center()) == c.rect.center());
    // truncation: deeper annuli are left alone
    auto f0 = multitwist_map(fam, 0);
    Point z = fam.ring("1").center + fam.ring("1").r_out * (1 - eta / 2);
    CHECK(f0(z) == z);
    CHECK(std::abs(f(z) - half_turn(z, fam.ring("1").center)) < 1e-14);
    for (std::uint64_t k = 0; k < 1000; ++k) {
        CounterRng rng(21, k);
        Point w = sample_in(Disk{root.center, root.r_out * 1.1}, rng);
        REQUIRE(std::abs(f.inverse(f(w)) - w) < 1e-12);
    }

    auto bad = fam.rings();
    bad[1].round = false;
    CHECK_THROWS_AS(multitwist_map(RingFamily(bad, 4, 0.25), 2), Error);
}

TEST_CASE("unwinding path")
{
    auto fam = family(0.5, 2);
    auto f = multitwist_map(fam, 2);
    auto h = unwind_path(fam, 2);
    const Ring& root = fam.root();
    double g0 = 0, g1 = 0, inv = 0;
    for (std::uint64_t k = 0; k < 10000; ++k) {
        CounterRng rng(77, k);
        Point z = sample_in(Disk{root.center, root.r_out * 1.05}, rng);
        g0 = std::max(g0, std::abs(h.forward(0, z) - f(z)));
        g1 = std::max(g1, std::abs(h.forward(1, z) - z));
        double t = rng.uniform();
        inv = std::max(inv, std::abs(h.inverse(t, h.forward(t, z)) - z));
        inv = std::max(inv, std::abs(h.forward(t, h.inverse(t, z)) - z));
    }
    CHECK(g0 <= 1e-10);
    CHECK(g1 <= 1e-10);
    CHECK(inv <= 1e-10);

    // inside the holes of '' and '1' but outside every annulus: two half turns, innermost first
    const Ring& r1 = fam.ring("1");
    Point z = r1.center + Point(0.6 * r1.r_in, 0);
    for (const auto& r : fam.rings()) REQUIRE((std::abs(z - r.center) < r.r_in || std::abs(z - r.center) > r.r_out));
    REQUIRE(std::abs(z - fam.ring("11").center) > fam.ring("11").r_out);
    REQUIRE(std::abs(z - fam.ring("12").center) > fam.ring("12").r_out);
    Point expect = half_turn(half_turn(z, r1.center), root.center);
    CHECK(std::abs(h.forward(0.5, z) - expect) < 1e-13);
    CHECK(std::abs(expect - (z + 2.0 * (root.center - r1.center))) < 1e-13);

    // a point of the attractor only ever rotates rigidly with its holes
    Point x = build_cells(IfsSpec::standard(0.5), 6).cell("121212").rect.center();
    Point y = build_cells(IfsSpec::standard(0.5), 6).cell("121221").rect.center();
    for (double t : {0.1, 0.37, 0.8}) CHECK(std::abs(h.forward(t, x) - h.forward(t, y)) == doctest::Approx(std::abs(x - y)));
}

TEST_CASE("gather schedule")
{
    auto tree = build_cells(IfsSpec::standard(0.5), 3);
    auto fam = place_rings(tree, 0.25, 4);
    const double beta = 0.05, ball = 0.6;
    auto plan = gather_plan(tree, fam, beta, 3, ball);
    CHECK(plan.moves.size() == 14);
    CHECK(plan.kappa == doctest::Approx(0.525));
    auto path = gather_unwind_path(tree, fam, beta, 3, ball);
    const Rectangle& base = tree.spec().base;
    Point c0 = base.center();

    auto f = multitwist_map(fam, 0);
    const Ring& root = fam.root();
    double e0 = 0, e1 = 0;
    for (std::uint64_t k = 0; k < 2000; ++k) {
        CounterRng rng(5, k);
        Point z = sample_in(Disk{root.center, root.r_out}, rng);
        e0 = std::max(e0, std::abs(path.forward(0, z) - f(z)));
        e1 = std::max(e1, std::abs(path.forward(1, z) - z));
        double t = rng.uniform();
        REQUIRE(std::abs(path.inverse(t, path.forward(t, z)) - z) < 1e-9);
    }
    CHECK(e0 <= 1e-10);
    CHECK(e1 <= 1e-10);

    // every leaf cell moves rigidly in every frame
    double shape = 0;
    for (int k = 0; k <= 60; ++k) {
        double t = k / 60.0;
        for (const Cell& c : tree.level(3)) {
            auto pts = c.rect.corners();
            pts.push_back(c.rect.center());
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (std::size_t j = i + 1; j < pts.size(); ++j)
                    shape = std::max(shape, std::abs(std::abs(path.forward(t, pts[i]) - path.forward(t, pts[j])) -
                                                     std::abs(pts[i] - pts[j])));
            if (t <= 1.0 / 3 || t >= 2.0 / 3) {
                Point d0 = path.forward(t, pts[0]) - pts[0];
                for (auto p : pts) shape = std::max(shape, std::abs(path.forward(t, p) - p - d0));
            }
        }
    }
    CHECK(shape <= 1e-10);

    // gathered: all leaves inside the κ^n-scaled base, hence inside the ball
    double k3 = std::pow(plan.kappa, 3);
    Rectangle target{c0.real() + k3 * (base.xmin - c0.real()), c0.real() + k3 * (base.xmax - c0.real()),
                     c0.imag() + k3 * (base.ymin - c0.imag()), c0.imag() + k3 * (base.ymax - c0.imag())};
    for (const Cell& c : tree.level(3))
        for (auto p : c.rect.corners()) {
            Point q = path.forward(1.0 / 3, p);
            CHECK(target.contains(q, 1e-12));
            CHECK(std::abs(q - c0) < ball);
        }
    CHECK_THROWS_AS(gather_plan(tree, fam, beta, 1, ball), Error);  // κ too big for one step at α = 0.5
    CHECK_THROWS_AS(gather_plan(tree, fam, 1.5, 3, ball), Error);
    CHECK_THROWS_AS(gather_plan(tree, fam, beta, 4, ball), Error);
}

TEST_CASE("single gather move")
{
    auto tree = build_cells(IfsSpec::standard(0.8), 1);
    auto fam = place_rings(tree, 0.25, 4);
    double beta = 0.1, ball = 0.95 * fam.root().r_in;
    auto plan = gather_plan(tree, fam, beta, 1, ball);
    REQUIRE(plan.moves.size() == 2);
    // target rectangle D' has sides 2√2 κ and 2 κ
    double kappa = plan.kappa;
    CHECK(kappa == doctest::Approx(0.22));
    Rectangle dp{-r2 * kappa, r2 * kappa, -kappa, kappa};
    CHECK(dp.width() == doctest::Approx(2 * r2 * (1 + beta) * 0.2));
    for (const auto& mv : plan.moves) CHECK(dp.contains(mv.body.translated(mv.shift), 1e-12));
    auto path = gather_unwind_path(tree, fam, beta, 1, ball);
    for (const Cell& c : tree.level(1))
        for (auto p : c.rect.corners()) CHECK(dp.contains(path.forward(1.0 / 3, p), 1e-12));
}

TEST_CASE("decomposition engine")
{
    SamplerConfig cfg;
    cfg.pairs = 500;
    cfg.regions = {Disk{0, 1}};
    auto rot = decompose(rotation_path(0, 3), 0.1, cfg);
    REQUIRE(rot.factors.size() == 1);
    CHECK(std::abs(rot.factors[0].distortion - 1) < 1e-9);
    auto idp = decompose(constant_path(identity_map()), 0.1, cfg);
    REQUIRE(idp.factors.size() == 1);
    CHECK(idp.factors[0].map({0.3, 0.4}) == Point(0.3, 0.4));

    auto fam = family(0.5, 0, 2);
    auto h = unwind_path(fam, 0);
    auto f = multitwist_map(fam, 0);
    SamplerConfig tc;
    tc.regions = ring_regions(fam, 0);
    auto fl = decompose(h, 0.1, tc);
    CHECK(fl.factors.size() > 1);
    CHECK(fl.factors.front().t1 == 1.0);
    CHECK(fl.factors.back().t0 == 0.0);
    for (std::size_t k = 0; k + 1 < fl.factors.size(); ++k) CHECK(fl.factors[k].t0 == fl.factors[k + 1].t1);
    const Ring& root = fam.root();
    double resid = 0, self = 0;
    for (std::uint64_t k = 0; k < 10000; ++k) {
        CounterRng rng(99, k);
        Point z = sample_in(Disk{root.center, root.r_out * 1.05}, rng);
        resid = std::max(resid, std::abs(fl.apply(z) - f(z)));
        resid = std::max(resid, std::abs(fl.apply_inverse(f(z)) - z));
        const auto& g = fl.factors[k % fl.factors.size()].map;
        self = std::max(self, std::abs(g(g.inverse(z)) - z));
    }
    CHECK(resid <= 1e-9);
    CHECK(self <= 1e-10);

    // independent check: small-scale pairs in the ring for every factor
    double worst = 1;
    for (std::size_t i = 0; i < fl.factors.size(); ++i) {
        const auto& g = fl.factors[i];
        CHECK(g.distortion <= 1.1);
        for (std::uint64_t k = 0; k < 400; ++k) {
            CounterRng rng(i, k);
            Point x = sample_in(root.annulus(), rng);
            Point y = x + std::polar(1e-4, rng.uniform(0, kTwoPi));
            double q = std::abs(g.map(x) - g.map(y)) / std::abs(x - y);
            worst = std::max({worst, q, 1 / q});
        }
    }
    CHECK(worst <= 1.1);

    auto again = decompose(h, 0.1, tc);
    REQUIRE(again.factors.size() == fl.factors.size());
    for (std::size_t k = 0; k < fl.factors.size(); ++k) CHECK(again.factors[k].distortion == fl.factors[k].distortion);

    SamplerConfig tight = tc;
    tight.budget = 4;
    try {
        decompose(h, 0.1, tight);
        FAIL("expected budget exhaustion");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::budget);
        CHECK(std::string(e.what()).find("stuck at interval") != std::string::npos);
    }
    CHECK_THROWS_AS(decompose(h, 0, tc), Error);
    SamplerConfig none;
    CHECK_THROWS_AS(decompose(rotation_path(0, 1), 0.1, none), Error);
}

TEST_CASE("budget from the environment")
{
    unsetenv("MTX_BUDGET");
    CHECK(split_budget() == 16384);
    CHECK(split_budget(7) == 7);
    setenv("MTX_BUDGET", "12", 1);
    CHECK(split_budget() == 12);
    setenv("MTX_BUDGET", "twelve", 1);
    CHECK_THROWS_AS(split_budget(), Error);
    setenv("MTX_BUDGET", "0", 1);
    CHECK_THROWS_AS(split_budget(), Error);
    unsetenv("MTX_BUDGET");
}

TEST_CASE("one-dimensional decomposition")
{
    auto one = decompose_dim1(2, 1);
    REQUIRE(one.size() == 1);
    CHECK(one[0].distortion == 2);
    auto two = decompose_dim1(2, 2);
    REQUIRE(two.size() == 2);
    for (const auto& g : two) CHECK(g.distortion == doctest::Approx(r2).epsilon(1e-15));
    // λ = log_L α for α = √2, L = 2
    CHECK(std::log(two[0].distortion) / std::log(2.0) == doctest::Approx(0.5));
    auto three = decompose_dim1(8, 3);
    for (const auto& g : three) CHECK(g.distortion == doctest::Approx(2).epsilon(1e-15));
    for (double x : {0.0, 0.1, 0.5, 1.0}) CHECK(std::abs(apply_dim1(three, x) - 8 * x) <= 1e-12);
    CHECK_THROWS_AS(decompose_dim1(1, 2), Error);
    CHECK_THROWS_AS(decompose_dim1(0.5, 2), Error);
    CHECK_THROWS_AS(decompose_dim1(2, 0), Error);
}
