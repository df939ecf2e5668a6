#include "mtx/fractal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace mtx {

namespace {
const double kSqrt2 = std::sqrt(2.0);
}

IfsSpec IfsSpec::standard(double alpha)
{
    IfsSpec s;
    s.alpha = alpha;
    s.validate();
    return s;
}

void IfsSpec::validate() const
{
    if (!(alpha > 0 && alpha < 1)) fail(ErrorKind::domain, "alpha must lie in (0,1)");
    if (!(base.width() > 0 && base.height() > 0)) fail(ErrorKind::domain, "degenerate base rectangle");
    if (std::abs(base.width() / base.height() - kSqrt2) > 1e-12)
        fail(ErrorKind::domain, "base rectangle must have aspect ratio sqrt2 : 1");
}

double IfsSpec::ratio() const { return (1 - alpha) / kSqrt2; }

Similarity IfsSpec::phi(int i) const
{
    if (i != 1 && i != 2) fail(ErrorKind::domain, "IFS map index must be 1 or 2");
    Point c0 = base.center();
    double h = base.height() / 2;
    Point ci = c0 + Point(i == 1 ? -kSqrt2 / 2 * h : kSqrt2 / 2 * h, 0);
    Point m(0, ratio());
    return Similarity::from_multiplier(m, ci - m * c0);
}

Rectangle IfsSpec::child(int i) const
{
    std::vector<Point> c;
    Similarity s = phi(i);
    for (auto p : base.corners()) c.push_back(s(p));
    return Rectangle::bounding(c);
}

std::size_t word_index(const std::string& word)
{
    std::size_t idx = 0;
    for (char ch : word) {
        if (ch != '1' && ch != '2') fail(ErrorKind::domain, "word letters must be 1 or 2: '" + word + "'");
        idx = 2 * idx + static_cast<std::size_t>(ch - '1');
    }
    return idx;
}

std::string word_at(int length, std::size_t index)
{
    std::string w(static_cast<std::size_t>(length), '1');
    for (int k = length - 1; k >= 0; --k) {
        w[static_cast<std::size_t>(k)] = static_cast<char>('1' + (index & 1));
        index >>= 1;
    }
    return w;
}

const Cell& CellTree::cell(const std::string& word) const
{
    if (!has(word)) fail(ErrorKind::domain, "no cell for word '" + word + "'");
    return levels_[word.size()][word_index(word)];
}

bool CellTree::has(const std::string& word) const
{
    if (word.size() >= levels_.size()) return false;
    for (char ch : word)
        if (ch != '1' && ch != '2') return false;
    return true;
}

std::size_t CellTree::size() const
{
    std::size_t n = 0;
    for (const auto& l : levels_) n += l.size();
    return n;
}

CellTree build_cells(const IfsSpec& spec, int depth, std::size_t budget)
{
    spec.validate();
    if (depth < 0) fail(ErrorKind::domain, "depth must be >= 0");
    if (depth >= 62 || ((std::size_t(2) << depth) - 1) > budget)
        fail(ErrorKind::capacity, "cell budget exceeded at depth " + std::to_string(depth));
    std::vector<std::vector<Cell>> levels(static_cast<std::size_t>(depth) + 1);
    levels[0].push_back({"", spec.base, Similarity::identity()});
    Similarity phi[2] = {spec.phi(1), spec.phi(2)};
    for (int k = 0; k < depth; ++k) {
        auto& next = levels[static_cast<std::size_t>(k) + 1];
        next.reserve(levels[static_cast<std::size_t>(k)].size() * 2);
        for (const Cell& c : levels[static_cast<std::size_t>(k)]) {
            for (int i = 0; i < 2; ++i) {
                Similarity m = compose(c.map, phi[i]);
                std::vector<Point> pts;
                for (auto p : spec.base.corners()) pts.push_back(m(p));
                next.push_back({c.word + char('1' + i), Rectangle::bounding(pts), m});
            }
        }
    }
    return CellTree(spec, depth, std::move(levels));
}

double assouad_dim_formula(double alpha)
{
    if (!(alpha > 0 && alpha < 1)) fail(ErrorKind::domain, "alpha must lie in (0,1)");
    // log 2 / (log sqrt2 - log(1-alpha)) in base 2, exact at alpha = 1/2
    return 1.0 / (0.5 - std::log2(1 - alpha));
}

CantorApprox cantor_approx(const CellTree& tree)
{
    CantorApprox a;
    a.depth = tree.depth();
    for (const Cell& c : tree.level(tree.depth())) a.points.push_back(c.rect.center());
    a.leaf_diameter = tree.level(tree.depth()).front().rect.diameter();
    return a;
}

CantorApprox point_cloud(std::vector<Point> pts)
{
    CantorApprox a;
    a.points = std::move(pts);
    return a;
}

std::size_t greedy_net_count(const std::vector<Point>& pts, double eps)
{
    std::vector<Point> net;
    for (auto p : pts) {
        bool far = true;
        for (auto q : net)
            if (std::abs(p - q) < eps) {
                far = false;
                break;
            }
        if (far) net.push_back(p);
    }
    return net.size();
}

std::vector<double> geometric_scales(double hi, double lo, int n)
{
    std::vector<double> s;
    for (int k = 0; k < n; ++k) s.push_back(hi * std::pow(lo / hi, n == 1 ? 0.0 : double(k) / (n - 1)));
    return s;
}

HomogeneityFit homogeneity_fit(const CantorApprox& approx, const std::vector<double>& scales)
{
    if (approx.points.empty()) fail(ErrorKind::estimation, "empty point set");
    if (scales.size() < 2) fail(ErrorKind::estimation, "need at least two scales");
    auto [lo, hi] = std::minmax_element(scales.begin(), scales.end());
    if (!(*lo > 0) || *hi / *lo < 100) fail(ErrorKind::estimation, "scales must span two orders of magnitude");
    if (*lo <= approx.leaf_diameter) fail(ErrorKind::estimation, "smallest scale is below the leaf-cell diameter");

    HomogeneityFit fit;
    fit.scales = scales;
    double diam = set_diameter(approx.points);
    if (diam == 0) {
        fit.counts.assign(scales.size(), 1);
        fit.C = 1;
        return fit;
    }
    std::vector<double> xs, ys;
    for (double e : scales) {
        std::size_t n = greedy_net_count(approx.points, e);
        fit.counts.push_back(n);
        xs.push_back(std::log(diam / e));
        ys.push_back(std::log(double(n)));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= double(xs.size());
    my /= double(ys.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    fit.s = sxx > 0 ? sxy / sxx : 0;
    for (std::size_t i = 0; i < xs.size(); ++i)
        fit.C = std::max(fit.C, double(fit.counts[i]) / std::exp(fit.s * xs[i]));
    return fit;
}

double homogeneity_estimate(const CantorApprox& approx, const std::vector<double>& scales)
{
    return homogeneity_fit(approx, scales).s;
}

UdCertificate ud_certificate_level(const CellTree& tree, int k)
{
    if (k < 0 || k >= tree.depth()) fail(ErrorKind::domain, "no split below level " + std::to_string(k));
    UdCertificate best;
    best.delta = std::numeric_limits<double>::infinity();
    best.unbounded = true;
    for (const Cell& c : tree.level(k)) {
        const Rectangle& a = tree.cell(c.word + "1").rect;
        const Rectangle& b = tree.cell(c.word + "2").rect;
        double md = std::max(a.diameter(), b.diameter());
        if (md == 0) continue;
        double r = distance(a, b) / md;
        if (r < best.delta) {
            best.delta = r;
            best.unbounded = false;
            best.word = c.word;
        }
    }
    return best;
}

UdCertificate ud_tree_certificate(const CellTree& tree)
{
    if (tree.depth() < 1) fail(ErrorKind::domain, "ud_tree_certificate needs depth >= 1");
    UdCertificate best;
    best.delta = std::numeric_limits<double>::infinity();
    best.unbounded = true;
    for (int k = 0; k < tree.depth(); ++k) {
        UdCertificate c = ud_certificate_level(tree, k);
        if (!c.unbounded && c.delta < best.delta) best = c;
    }
    return best;
}

double cantor_extent_bound(const IfsSpec& spec, int k)
{
    spec.validate();
    Point c0 = spec.base.center();
    Similarity phi[2] = {spec.phi(1), spec.phi(2)};
    auto corners = spec.base.corners();
    double best = 0;
    std::function<void(const Similarity&, int)> walk = [&](const Similarity& m, int level) {
        if (level == k) {
            for (auto p : corners) best = std::max(best, std::abs(m(p) - c0));
            return;
        }
        walk(compose(m, phi[0]), level + 1);
        walk(compose(m, phi[1]), level + 1);
    };
    walk(Similarity::identity(), 0);
    return best;
}

}  // namespace mtx
