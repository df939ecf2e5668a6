#include "mtx/multitwist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <memory>

namespace mtx {

namespace {

const double kSqrt2 = std::sqrt(2.0);
constexpr int kFan = 16;

struct Node {
    Ring ring;
    int child[2] = {-1, -1};
};

// rings with level <= depth_cut, arranged as a tree; node 0 is the root
std::shared_ptr<std::vector<Node>> ring_tree(const RingFamily& rings, int depth_cut)
{
    if (rings.size() == 0 || !rings.has("")) fail(ErrorKind::domain, "ring family has no root ring");
    for (const auto& r : rings.rings())
        if (!r.round) fail(ErrorKind::unsupported, "ring '" + r.word + "' is not round");
    auto nodes = std::make_shared<std::vector<Node>>();
    std::map<std::string, int> idx;
    std::vector<std::string> order{""};
    for (std::size_t q = 0; q < order.size(); ++q) {
        const std::string w = order[q];
        idx[w] = static_cast<int>(nodes->size());
        nodes->push_back({rings.ring(w), {-1, -1}});
        if (static_cast<int>(w.size()) >= depth_cut) continue;
        for (char c : {'1', '2'})
            if (rings.has(w + c)) order.push_back(w + c);
    }
    for (auto& [w, i] : idx) {
        if (w.empty()) continue;
        int parent = idx.at(w.substr(0, w.size() - 1));
        (*nodes)[static_cast<std::size_t>(parent)].child[w.back() - '1'] = i;
    }
    return nodes;
}

int child_containing(const std::vector<Node>& nodes, const Node& n, Point z)
{
    for (int c : n.child) {
        if (c < 0) continue;
        const Ring& r = nodes[static_cast<std::size_t>(c)].ring;
        if (std::abs(z - r.center) <= r.r_out) return c;
    }
    return -1;
}

Point spin(Point z, Point c, double angle) { return c + (z - c) * std::polar(1.0, angle); }

double twist_turn(double rn, double eta) { return kTwoPi * (1.0 - std::min(rn, 1.0)) / eta; }

}  // namespace

RingFamily::RingFamily(std::vector<Ring> rings, double l_twist, double margin)
    : rings_(std::move(rings)), l_twist_(l_twist), margin_(margin)
{
    if (!(l_twist_ > 1)) fail(ErrorKind::domain, "twist constant must exceed 1");
    for (std::size_t i = 0; i < rings_.size(); ++i) {
        const Ring& r = rings_[i];
        for (char ch : r.word)
            if (ch != '1' && ch != '2') fail(ErrorKind::domain, "bad ring word '" + r.word + "'");
        if (!(r.r_in > 0 && r.r_in < r.r_out)) fail(ErrorKind::domain, "ring '" + r.word + "' needs 0 < r_in < r_out");
        if (!index_.emplace(r.word, i).second) fail(ErrorKind::domain, "duplicate ring '" + r.word + "'");
        depth_ = std::max(depth_, r.level());
    }
    for (const auto& r : rings_)
        if (!r.word.empty() && !has(r.word.substr(0, r.word.size() - 1)))
            fail(ErrorKind::domain, "ring '" + r.word + "' has no parent ring");
}

const Ring& RingFamily::ring(const std::string& word) const
{
    auto it = index_.find(word);
    if (it == index_.end()) fail(ErrorKind::domain, "no ring for word '" + word + "'");
    return rings_[it->second];
}

double RingFamily::max_shrink_ratio() const
{
    double q = 0;
    for (const auto& r : rings_)
        if (!r.word.empty()) q = std::max(q, r.r_out / ring(r.word.substr(0, r.word.size() - 1)).r_out);
    return q;
}

RingFamily place_rings(const CellTree& tree, double margin, double l_twist)
{
    if (!(margin > 0 && margin < 1)) fail(ErrorKind::domain, "margin must lie in (0,1)");
    if (!(l_twist > 1)) fail(ErrorKind::domain, "l_twist must exceed 1");
    const IfsSpec& spec = tree.spec();
    const double lam = spec.ratio();
    const double eta = 1.0 / l_twist;
    const double h = spec.base.height() / 2;
    const double d = kSqrt2 / 2 * h;                       // child center offset
    const double m = cantor_extent_bound(spec, kCertDepth);  // sup |x - c| over the attractor
    const int depth = tree.depth();

    // outer radii in units of the cell scale, from the leaves up
    std::vector<double> sigma(static_cast<std::size_t>(depth) + 1);
    for (int k = depth; k >= 0; --k) {
        double lo = k == depth ? m / (1 - eta) : (d + lam * sigma[static_cast<std::size_t>(k) + 1]) / (1 - eta);
        double hi = k >= 1 ? d / lam : lo / (1 - eta);
        sigma[static_cast<std::size_t>(k)] = lo < hi ? lo + margin * (hi - lo) : lo;
    }
    std::vector<Ring> rings;
    for (int k = 0; k <= depth; ++k)
        for (const Cell& c : tree.level(k)) {
            double r_out = c.map.scale() * sigma[static_cast<std::size_t>(k)];
            rings.push_back({c.word, c.map(spec.base.center()), r_out * (1 - eta), r_out, true});
        }
    RingFamily fam(std::move(rings), l_twist, margin);
    verify_rings(tree, fam);
    return fam;
}

void verify_rings(const CellTree& tree, const RingFamily& fam)
{
    for (const auto& r : fam.rings()) {
        if (!r.word.empty() && r.word.back() == '1' && fam.has(r.word.substr(0, r.word.size() - 1) + "2")) {
            const Ring& s = fam.ring(r.word.substr(0, r.word.size() - 1) + "2");
            if (!(std::abs(r.center - s.center) > r.r_out + s.r_out))
                fail(ErrorKind::placement, "rings '" + r.word + "' and '" + s.word + "' overlap");
        }
        if (!r.word.empty()) {
            const Ring& p = fam.ring(r.word.substr(0, r.word.size() - 1));
            if (!(std::abs(r.center - p.center) + r.r_out < p.r_in))
                fail(ErrorKind::placement, "ring '" + r.word + "' is not inside the hole of ring '" + p.word + "'");
        }
    }
    int k = std::max(kCertDepth, tree.depth());
    CellTree fine = k == tree.depth() ? tree : build_cells(tree.spec(), k);
    for (const Cell& c : fine.level(k)) {
        for (const auto& r : fam.rings()) {
            bool ancestor = c.word.compare(0, r.word.size(), r.word) == 0;
            if (ancestor ? !(c.rect.max_distance_from(r.center) < r.r_in) : !(distance(c.rect, r.center) > r.r_out))
                fail(ErrorKind::placement, "ring '" + r.word + "' meets cell '" + c.word + "'");
        }
    }
}

Map2 multitwist_map(const RingFamily& rings, int depth_cut)
{
    auto nodes = ring_tree(rings, depth_cut);
    double eta = rings.eta();
    auto eval = [nodes, eta](Point z, double sign) {
        const Node* n = &(*nodes)[0];
        if (std::abs(z - n->ring.center) > n->ring.r_out) return z;
        for (;;) {
            const Ring& r = n->ring;
            double rn = std::abs(z - r.center) / r.r_out;
            if (rn >= 1 - eta) return spin(z, r.center, sign * twist_turn(rn, eta));
            int c = child_containing(*nodes, *n, z);
            if (c < 0) return z;
            n = &(*nodes)[static_cast<std::size_t>(c)];
        }
    };
    Region sup;
    for (const auto& n : *nodes) sup.add(n.ring.annulus());
    return {[eval](Point z) { return eval(z, 1); }, [eval](Point w) { return eval(w, -1); }, sup, "multitwist"};
}

Path unwind_path(const RingFamily& rings, int depth_cut)
{
    auto nodes = ring_tree(rings, depth_cut);
    double eta = rings.eta();
    auto fwd = [nodes, eta](double t, Point z) {
        const Node* n = &(*nodes)[0];
        if (std::abs(z - n->ring.center) > n->ring.r_out) return z;
        double turn = kTwoPi * (1 - t);
        std::vector<Point> centers;
        for (;;) {
            const Ring& r = n->ring;
            double rn = std::abs(z - r.center) / r.r_out;
            if (rn >= 1 - eta) {
                z = spin(z, r.center, (1 - t) * twist_turn(rn, eta));
                break;
            }
            centers.push_back(r.center);
            int c = child_containing(*nodes, *n, z);
            if (c < 0) break;
            n = &(*nodes)[static_cast<std::size_t>(c)];
        }
        for (auto it = centers.rbegin(); it != centers.rend(); ++it) z = spin(z, *it, turn);
        return z;
    };
    auto inv = [nodes, eta](double t, Point w) {
        const Node* n = &(*nodes)[0];
        if (std::abs(w - n->ring.center) > n->ring.r_out) return w;
        double turn = kTwoPi * (1 - t);
        for (;;) {
            const Ring& r = n->ring;
            double rn = std::abs(w - r.center) / r.r_out;
            if (rn >= 1 - eta) return spin(w, r.center, -(1 - t) * twist_turn(rn, eta));
            w = spin(w, r.center, -turn);
            int c = child_containing(*nodes, *n, w);
            if (c < 0) return w;
            n = &(*nodes)[static_cast<std::size_t>(c)];
        }
    };
    const Ring& root = (*nodes)[0].ring;
    Region sup = Region::of(Disk{root.center, root.r_out});
    Map2 f = multitwist_map(rings, depth_cut);
    f.support = sup;
    Map2 id{[](Point z) { return z; }, [](Point z) { return z; }, sup, "id"};
    return Path(fwd, inv, sup, f, id, "unwind");
}

// ---- gather, rotate, ungather

GatherPlan gather_plan(const CellTree& tree, const RingFamily& rings, double beta, int n, double eps_ball)
{
    const IfsSpec& spec = tree.spec();
    const double alpha = spec.alpha;
    if (!(beta > 0)) fail(ErrorKind::domain, "beta must be positive");
    if (n < 1) fail(ErrorKind::domain, "gather needs n >= 1");
    if (n > tree.depth()) fail(ErrorKind::domain, "gather depth exceeds the cell tree depth");
    const double kappa = (1 - alpha) * (1 + beta);
    if (!(kappa < 1)) fail(ErrorKind::domain, "need (1-alpha)(1+beta) < 1");
    if (!(std::pow(kappa, n) < eps_ball / 4)) fail(ErrorKind::domain, "need ((1-alpha)(1+beta))^n < eps_ball/4");
    const Ring& root = rings.root();
    if (std::abs(root.center - spec.base.center()) > 1e-12)
        fail(ErrorKind::unsupported, "root ring must be centered at the base rectangle");
    if (!(eps_ball < root.r_in)) fail(ErrorKind::domain, "the gather ball must lie inside the root hole");

    GatherPlan plan;
    plan.n = n;
    plan.kappa = kappa;
    plan.ball = eps_ball;
    const Rectangle& base = spec.base;
    const Point c0 = base.center();
    const double h = base.height() / 2;
    auto image = [](const Similarity& s, const Rectangle& r) {
        std::vector<Point> pts;
        for (auto p : r.corners()) pts.push_back(s(p));
        return Rectangle::bounding(pts);
    };
    auto scaled = [&](double k) {
        Similarity s(k, 0, c0 - k * c0);
        return image(s, base);
    };
    for (int m = 1; m <= n; ++m) {
        double km1 = std::pow(kappa, m - 1), km = std::pow(kappa, m);
        double a = kSqrt2 * (1 - alpha) * km1 * h;  // width of a gathered child block
        for (const Cell& cell : tree.level(n - m)) {
            for (int i = 1; i <= 2; ++i) {
                Rectangle block = image(tree.spec().phi(i), scaled(km1));
                double tx = i == 1 ? c0.real() - kSqrt2 * km * h + a / 2 : c0.real() + kSqrt2 * km * h - a / 2;
                Point target(tx, c0.imag());
                Rectangle half = i == 1 ? Rectangle{base.xmin, c0.real(), base.ymin, base.ymax}
                                        : Rectangle{c0.real(), base.xmax, base.ymin, base.ymax};
                GatherMove mv;
                mv.step = m;
                mv.word = cell.word + char('0' + i);
                mv.body = image(cell.map, block);
                mv.shift = cell.map(target) - cell.map(block.center());
                Rectangle arena = image(cell.map, half);
                Rectangle moved = mv.body.translated(mv.shift);
                Rectangle swept{std::min(mv.body.xmin, moved.xmin), std::max(mv.body.xmax, moved.xmax),
                                std::min(mv.body.ymin, moved.ymin), std::max(mv.body.ymax, moved.ymax)};
                double gap = std::min({swept.xmin - arena.xmin, arena.xmax - swept.xmax, swept.ymin - arena.ymin,
                                       arena.ymax - swept.ymax});
                std::string name = "gather move " + std::to_string(m) + " of block '" + mv.word + "'";
                if (!(gap > 0)) fail(ErrorKind::placement, name + ": no room inside its arena");
                mv.collar = Collar::make(mv.body, mv.shift, arena, gap / 2).outer;
                if (!(mv.collar.max_distance_from(root.center) < root.r_in))
                    fail(ErrorKind::placement, name + ": collar leaves the root hole");
                plan.moves.push_back(mv);
            }
        }
    }
    return plan;
}

Path gather_unwind_path(const CellTree& tree, const RingFamily& rings, double beta, int n, double eps_ball)
{
    GatherPlan plan = gather_plan(tree, rings, beta, n, eps_ball);
    struct Steps {
        std::vector<std::vector<Collar>> by_step;
        Point step(int k, double tau, Point z) const
        {
            for (const auto& c : by_step[static_cast<std::size_t>(k)])
                if (c.covers(z)) return c.forward(tau, z);
            return z;
        }
        Point step_inv(int k, double tau, Point w) const
        {
            for (const auto& c : by_step[static_cast<std::size_t>(k)])
                if (c.covers(w)) return c.inverse(tau, w);
            return w;
        }
        // s in [0,1] spread evenly over the steps
        Point gather(double s, Point z) const
        {
            int n = static_cast<int>(by_step.size());
            double x = std::clamp(s, 0.0, 1.0) * n;
            int k = std::min(static_cast<int>(x), n - 1);
            for (int j = 0; j < k; ++j) z = step(j, 1, z);
            return step(k, x - k, z);
        }
        Point gather_inv(double s, Point w) const
        {
            int n = static_cast<int>(by_step.size());
            double x = std::clamp(s, 0.0, 1.0) * n;
            int k = std::min(static_cast<int>(x), n - 1);
            w = step_inv(k, x - k, w);
            for (int j = k; j-- > 0;) w = step_inv(j, 1, w);
            return w;
        }
    };
    auto steps = std::make_shared<Steps>();
    steps->by_step.resize(static_cast<std::size_t>(plan.n));
    for (const auto& mv : plan.moves) {
        Collar c{mv.body, mv.collar, mv.shift};
        steps->by_step[static_cast<std::size_t>(mv.step - 1)].push_back(c);
    }

    const Ring root = rings.root();
    const double eta = rings.eta();
    // rotate phase: ring twist, rotation interpolation between ball and hole, rigid ball
    Similarity ring_scale(root.r_out, 0, root.center);
    Path twist = conjugate(ring_scale, reverse(dehn_twist_path(eta)));
    CirclePath lift{[](double tau, double th) { return th + kTwoPi * (1 - tau); }};
    Similarity ball_scale(plan.ball, 0, root.center);
    Path middle = conjugate(ball_scale, annulus_rotation_path(lift, lift, root.r_in / plan.ball));
    Path ball = reverse(rotation_path(root.center, kTwoPi, Region::of(Disk{root.center, plan.ball})));
    Path rotate = glue({{Region::of(root.annulus()), twist},
                        {Region::of(Annulus{root.center, plan.ball, root.r_in}), middle},
                        {Region::of(Disk{root.center, plan.ball}), ball}});

    auto in_ring = [root](Point z) {
        double r = std::abs(z - root.center);
        return r >= root.r_in && r <= root.r_out;
    };
    auto full_twist = [root, eta](Point z, double sign) {
        double rn = std::abs(z - root.center) / root.r_out;
        return spin(z, root.center, sign * twist_turn(rn, eta));
    };
    auto fwd = [=](double t, Point z) {
        if (t <= 1.0 / 3) return in_ring(z) ? full_twist(z, 1) : steps->gather(3 * t, z);
        if (t < 2.0 / 3) return rotate.forward(3 * t - 1, steps->gather(1, z));
        return steps->gather(3 * (1 - t), z);
    };
    auto inv = [=](double t, Point w) {
        if (t <= 1.0 / 3) return in_ring(w) ? full_twist(w, -1) : steps->gather_inv(3 * t, w);
        if (t < 2.0 / 3) return steps->gather_inv(1, rotate.inverse(3 * t - 1, w));
        return steps->gather_inv(3 * (1 - t), w);
    };
    Region sup = Region::of(Disk{root.center, root.r_out});
    Map2 f = multitwist_map(rings, 0);
    f.support = sup;
    Map2 id{[](Point z) { return z; }, [](Point z) { return z; }, sup, "id"};
    return Path(fwd, inv, sup, f, id, "gather-unwind");
}

// ---- decomposition

Point FactorList::apply(Point z) const
{
    for (const auto& f : factors) z = f.map(z);
    return z;
}

Point FactorList::apply_inverse(Point w) const
{
    for (auto it = factors.rbegin(); it != factors.rend(); ++it) w = it->map.inverse(w);
    return w;
}

std::size_t split_budget(std::size_t fallback)
{
    const char* env = std::getenv("MTX_BUDGET");
    if (!env || !*env) return fallback;
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0' || v == 0) fail(ErrorKind::domain, std::string("MTX_BUDGET is not a positive integer: ") + env);
    return static_cast<std::size_t>(v);
}

std::vector<Shape> ring_regions(const RingFamily& rings, int depth_cut)
{
    std::vector<Shape> out;
    const Ring& root = rings.root();
    out.push_back(Disk{root.center, root.r_out});
    for (const auto& r : rings.rings())
        if (r.level() <= depth_cut) out.push_back(r.annulus());
    return out;
}

double slice_distortion(const Path& path, double a, double b, const std::vector<Shape>& regions, std::size_t pairs,
                        std::uint64_t seed)
{
    if (regions.empty()) fail(ErrorKind::domain, "no sampling regions");
    double hi = 1, lo = 1;
    auto ratio = [&](Point u, Point v) {
        try {
            double num = std::abs(path.forward(a, u) - path.forward(a, v));
            double den = std::abs(path.forward(b, u) - path.forward(b, v));
            if (!(den > 0) || !(num > 0)) return;
            hi = std::max(hi, num / den);
            lo = std::min(lo, num / den);
        } catch (const Error&) {
        }
    };
    for (std::size_t k = 0; k < pairs; ++k) {
        const Shape& part = regions[k % regions.size()];
        CounterRng rng(seed, k);
        Point u = sample_in(part, rng);
        if (k % 2 == 0) {
            ratio(u, sample_in(part, rng));
            continue;
        }
        // near-diagonal: a fan of directions around x = H_b(u), laid out where the factor acts
        double scale = shape_size(part) * std::pow(10.0, -1.0 - double((k / 2) % 6));
        double th = kPi * rng.uniform();
        try {
            Point x = path.forward(b, u), gx = path.forward(a, u);
            for (int j = 0; j < kFan; ++j) {
                Point y = x + std::polar(scale, th + kPi * j / kFan);
                double q = std::abs(path.forward(a, path.inverse(b, y)) - gx) / scale;
                if (!(q > 0)) continue;
                hi = std::max(hi, q);
                lo = std::min(lo, q);
            }
        } catch (const Error&) {
        }
    }
    return std::max(hi, 1 / lo);
}

Factor make_factor(const Path& path, double a, double b)
{
    Factor f;
    f.t0 = a;
    f.t1 = b;
    auto pf = path.forward_fn(), pi = path.inverse_fn();
    f.map.forward = [pf, pi, a, b](Point z) { return pf(a, pi(b, z)); };
    f.map.inverse = [pf, pi, a, b](Point w) { return pf(b, pi(a, w)); };
    f.map.support = path.support();
    char buf[64];
    std::snprintf(buf, sizeof buf, "slice[%.9g,%.9g]", a, b);
    f.map.id = buf;
    return f;
}

Region factor_region(const RingFamily& rings, const Path& path, double b, int depth_cut)
{
    const Ring& root = rings.root();
    Region r = Region::of(Disk{root.center, root.r_out});
    for (const auto& ring : rings.rings())
        if (ring.level() <= depth_cut) r.add(Annulus{path.forward(b, ring.center), ring.r_in, ring.r_out});
    return r;
}

FactorList decompose(const Path& path, double eps, const SamplerConfig& cfg)
{
    if (!(eps > 0)) fail(ErrorKind::domain, "epsilon must be positive");
    if (cfg.pairs < 2) fail(ErrorKind::domain, "need at least two sample pairs");
    std::vector<Shape> regions = cfg.regions;
    if (regions.empty()) {
        if (path.support().is_whole() || path.support().empty())
            fail(ErrorKind::domain, "decompose needs bounded sampling regions");
        regions = path.support().parts();
    }
    const double threshold = (1 + eps) / (1 + cfg.slack * eps);
    std::vector<std::pair<double, double>> todo{{0.0, 1.0}};
    std::vector<Factor> accepted;
    std::size_t intervals = 1;
    while (!todo.empty()) {
        auto [a, b] = todo.back();
        todo.pop_back();
        double d = slice_distortion(path, a, b, regions, cfg.pairs, cfg.seed);
        if (d <= threshold) {
            Factor f = make_factor(path, a, b);
            f.distortion = d;
            accepted.push_back(std::move(f));
            continue;
        }
        if (++intervals > cfg.budget) {
            char buf[160];
            std::snprintf(buf, sizeof buf, "split budget %zu exhausted; stuck at interval [%.9g, %.9g] (distortion %.6g)",
                          cfg.budget, a, b, d);
            fail(ErrorKind::budget, buf);
        }
        double mid = 0.5 * (a + b);
        todo.push_back({mid, b});
        todo.push_back({a, mid});
    }
    FactorList out;
    out.factors.assign(std::make_move_iterator(accepted.rbegin()), std::make_move_iterator(accepted.rend()));
    return out;
}

std::vector<Dim1Factor> decompose_dim1(double l_const, int m)
{
    if (!(l_const > 1)) fail(ErrorKind::domain, "decompose_dim1 needs L > 1 (invert the map for L < 1)");
    if (m < 1) fail(ErrorKind::domain, "decompose_dim1 needs m >= 1");
    double slope = std::pow(l_const, 1.0 / m);
    return std::vector<Dim1Factor>(static_cast<std::size_t>(m), Dim1Factor{slope, slope});
}

double apply_dim1(const std::vector<Dim1Factor>& f, double x)
{
    for (const auto& g : f) x *= g.slope;
    return x;
}

}  // namespace mtx
