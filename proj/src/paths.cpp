#include "mtx/paths.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>

namespace mtx {

namespace {

constexpr double kDomainTol = 1e-12;
constexpr double kJunctionTol = 1e-10;

std::string fmt_point(Point z)
{
    char buf[96];
    std::snprintf(buf, sizeof buf, "(%.12g, %.12g)", z.real(), z.imag());
    return buf;
}

// sample points of a region: boundary plus interior; a box stands in for the whole plane
std::vector<Point> probe_points(const Region& r, int n, std::uint64_t seed = 7)
{
    std::vector<Point> pts;
    if (r.is_whole() || r.empty()) {
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                pts.push_back({-2.0 + 4.0 * (i + 0.5) / n, -2.0 + 4.0 * (j + 0.5) / n});
        return pts;
    }
    std::uint64_t k = 0;
    for (const auto& s : r.parts()) {
        auto b = boundary_samples(s, n);
        pts.insert(pts.end(), b.begin(), b.end());
        for (int i = 0; i < n; ++i) {
            CounterRng rng(seed, k++);
            pts.push_back(sample_in(s, rng));
        }
    }
    return pts;
}

Map2 timed_map(const TimedFn& f, const TimedFn& g, double t, Region support, std::string id)
{
    return {[f, t](Point z) { return f(t, z); }, [g, t](Point w) { return g(t, w); }, std::move(support), std::move(id)};
}

double twist_angle(double r, double eta) { return kTwoPi * (1.0 - r) / eta; }

void check_eta(double eta)
{
    if (!(eta > 0 && eta < 1)) fail(ErrorKind::domain, "twist width eta must lie in (0,1)");
}

void check_annulus(Point z, double eta)
{
    double r = std::abs(z);
    if (r < 1 - eta - kDomainTol || r > 1 + kDomainTol)
        fail(ErrorKind::domain, "point " + fmt_point(z) + " outside the twist annulus");
}

}  // namespace

Path::Path(TimedFn fwd, TimedFn inv, Region support, Map2 start, Map2 end, std::string id)
    : fwd_(std::move(fwd)), inv_(std::move(inv)), support_(std::move(support)), start_(std::move(start)),
      end_(std::move(end)), id_(std::move(id))
{
}

Map2 Path::at(double t) const
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "@%.6f", t);
    return timed_map(fwd_, inv_, t, support_, id_ + buf);
}

Map2 identity_map() { return {[](Point z) { return z; }, [](Point z) { return z; }, Region(), "id"}; }

Map2 similarity_map(const Similarity& s)
{
    Similarity inv = s.inverse();
    return {[s](Point z) { return s(z); }, [inv](Point z) { return inv(z); }, Region::whole(), "similarity"};
}

Map2 linear_map(const RealLinearMap& m)
{
    if (!m.invertible()) fail(ErrorKind::degenerate, "real-linear map is not orientation preserving");
    RealLinearMap inv = m.inverse();
    return {[m](Point z) { return m(z); }, [inv](Point z) { return inv(z); }, Region::whole(), "linear"};
}

Map2 compose(const Map2& a, const Map2& b)
{
    Region s = a.support;
    s.add(b.support);
    auto af = a.forward, bf = b.forward, ai = a.inverse, bi = b.inverse;
    return {[af, bf](Point z) { return af(bf(z)); }, [ai, bi](Point w) { return bi(ai(w)); }, s,
            a.id + "*" + b.id};
}

double map_gap(const Map2& a, const Map2& b, const std::vector<Point>& pts)
{
    double g = 0;
    for (auto z : pts) g = std::max(g, std::abs(a(z) - b(z)));
    return g;
}

// ---- Dehn twist

Map2 dehn_twist(double eta)
{
    check_eta(eta);
    auto f = [eta](Point z) {
        check_annulus(z, eta);
        return z * std::polar(1.0, twist_angle(std::abs(z), eta));
    };
    auto g = [eta](Point w) {
        check_annulus(w, eta);
        return w * std::polar(1.0, -twist_angle(std::abs(w), eta));
    };
    return {f, g, Region::of(Annulus{0, 1 - eta, 1}), "dehn-twist"};
}

Path dehn_twist_path(double eta)
{
    check_eta(eta);
    auto f = [eta](double t, Point z) {
        check_annulus(z, eta);
        return z * std::polar(1.0, t * twist_angle(std::abs(z), eta));
    };
    auto g = [eta](double t, Point w) {
        check_annulus(w, eta);
        return w * std::polar(1.0, -t * twist_angle(std::abs(w), eta));
    };
    Region sup = Region::of(Annulus{0, 1 - eta, 1});
    Map2 start{[](Point z) { return z; }, [](Point z) { return z; }, sup, "id"};
    return Path(f, g, sup, start, dehn_twist(eta), "dehn-path");
}

Path rotation_path(Point center, double total_angle, Region support)
{
    auto f = [center, total_angle](double t, Point z) { return center + (z - center) * std::polar(1.0, t * total_angle); };
    auto g = [center, total_angle](double t, Point w) {
        return center + (w - center) * std::polar(1.0, -t * total_angle);
    };
    return Path(f, g, support, timed_map(f, g, 0, support, "rot@0"), timed_map(f, g, 1, support, "rot@1"), "rotation");
}

Path constant_path(const Map2& m)
{
    auto mf = m.forward, mi = m.inverse;
    return Path([mf](double, Point z) { return mf(z); }, [mi](double, Point w) { return mi(w); }, m.support, m, m,
                "const(" + m.id + ")");
}

// ---- triangle path

Path triangle_path(Point a, Point c, Point b)
{
    if (!(a.imag() > 0)) fail(ErrorKind::domain, "triangle path: need 0 < arg a < pi");
    if (c == Point(0) || b == Point(0)) fail(ErrorKind::domain, "triangle path: zero vertex target");
    double ac = std::arg(c), ab = std::arg(b);
    if (ac < 0) ac += kTwoPi;  // keep arg in [0, 2pi)
    if (ab < 0) ab += kTwoPi;
    if (!(ac < ab && ab <= kPi && ab - ac < kPi))
        fail(ErrorKind::domain, "triangle path: need 0 <= arg c < arg b <= pi with arg b - arg c < pi");
    // cross(γ1, γ2) is quadratic in t; the interpolated triangles must stay positively oriented
    auto q = [&](double t) { return cross(c * t + (1 - t), b * t + (1 - t) * a); };
    double q0 = q(0), q1 = q(1), qh = q(0.5);
    double qa = 2 * (q0 + q1 - 2 * qh), qb = q1 - q0 - qa;
    double qmin = std::min(q0, q1), tv = -qb / (2 * qa);
    if (qa > 0 && tv > 0 && tv < 1) qmin = std::min(qmin, q(tv));
    if (!(qmin > 0)) fail(ErrorKind::degenerate, "triangle path: interpolated triangle degenerates");
    Point den = a - std::conj(a);
    auto coeffs = [=](double t) {
        Point g1 = c * t + (1 - t);
        Point g2 = b * t + (1 - t) * a;
        RealLinearMap m{(g2 - std::conj(a) * g1) / den, (a * g1 - g2) / den};
        if (!m.invertible()) fail(ErrorKind::degenerate, "triangle path degenerates at t=" + std::to_string(t));
        return m;
    };
    auto f = [coeffs](double t, Point z) { return coeffs(t)(z); };
    auto g = [coeffs](double t, Point w) { return coeffs(t).inverse()(w); };
    Region sup = Region::of(ConvexPolygon{{0, 1, a}, HullKind::polygon});
    return Path(f, g, sup, linear_map(coeffs(0)), linear_map(coeffs(1)), "triangle");
}

RealLinearMap triangle_linear_part(const Triangle& src, const Triangle& dst)
{
    if (!(src.orientation() > 0) || !(dst.orientation() > 0))
        fail(ErrorKind::degenerate, "triangle map needs positively oriented triangles");
    return linear_from_pairs(src.p1 - src.p0, dst.p1 - dst.p0, src.p2 - src.p0, dst.p2 - dst.p0);
}

Point affine_apply(const Triangle& src, const Triangle& dst, Point z)
{
    return dst.p0 + triangle_linear_part(src, dst)(z - src.p0);
}

// ---- strip and annulus

namespace {

struct StripData {
    LinePath f, g;
    double m;
    double phi(double t, double x, double y) const
    {
        double s = x / m;
        return s * g.map(t, y) + (1 - s) * f.map(t, y);
    }
};

long shift_index(const LinePath& p, double t, const char* name)
{
    double k = (p.map(t, 0.0) - 0.0) / kTwoPi;
    long n = std::lround(k);
    for (int j = 0; j < 64; ++j) {
        double y = -kPi + kTwoPi * j / 64.0;
        if (std::abs(p.map(t, y) - y - kTwoPi * double(n)) > 1e-9)
            fail(ErrorKind::domain, std::string("lift branch mismatch: ") + name + " at t=" + std::to_string(t) +
                                        " is not a 2pi shift");
    }
    return n;
}

void validate_line(const LinePath& p, const char* name)
{
    for (int i = 0; i <= 16; ++i) {
        double t = i / 16.0;
        double prev = -std::numeric_limits<double>::infinity();
        for (int j = 0; j <= 128; ++j) {
            double y = -kPi + kTwoPi * j / 128.0;
            double v = p.map(t, y);
            if (!std::isfinite(v)) fail(ErrorKind::domain, std::string("non-finite boundary data in ") + name);
            if (!(v > prev)) fail(ErrorKind::domain, std::string("non-monotone boundary data in ") + name);
            prev = v;
            if (std::abs(p.map(t, y + kTwoPi) - v - kTwoPi) > 1e-9)
                fail(ErrorKind::domain, std::string("boundary data not 2pi-periodic in ") + name);
        }
    }
}

}  // namespace

Path strip_path(const LinePath& f, const LinePath& g, double m)
{
    if (!(m > 0) || !std::isfinite(m)) fail(ErrorKind::domain, "strip width must be positive");
    validate_line(f, "F");
    validate_line(g, "G");
    long f0 = shift_index(f, 0, "F"), f1 = shift_index(f, 1, "F");
    long g0 = shift_index(g, 0, "G"), g1 = shift_index(g, 1, "G");
    if (f0 != g0 || f1 != g1) fail(ErrorKind::domain, "lift branch mismatch: boundary endpoints differ");
    auto d = std::make_shared<StripData>(StripData{f, g, m});
    auto fwd = [d](double t, Point z) {
        double x = z.real();
        if (x < -kDomainTol * d->m || x > d->m * (1 + kDomainTol))
            fail(ErrorKind::domain, "point " + fmt_point(z) + " outside the strip");
        x = std::clamp(x, 0.0, d->m);
        return Point(x, d->phi(t, x, z.imag()));
    };
    auto inv = [d](double t, Point w) {
        double x = w.real();
        if (x < -kDomainTol * d->m || x > d->m * (1 + kDomainTol))
            fail(ErrorKind::domain, "point " + fmt_point(w) + " outside the strip");
        x = std::clamp(x, 0.0, d->m);
        double v = w.imag();
        auto phi = [&](double y) { return d->phi(t, x, y); };
        double y0 = v - (phi(v) - v);
        double step = 1.0;
        double lo = y0, hi = y0;
        while (phi(lo) > v) lo -= (step *= 2);
        step = 1.0;
        while (phi(hi) < v) hi += (step *= 2);
        for (int it = 0; it < 60 && hi - lo > 1e-14 * (1 + std::abs(lo)); ++it) {
            double mid = 0.5 * (lo + hi);
            (phi(mid) < v ? lo : hi) = mid;
        }
        double pl = phi(lo), ph = phi(hi);
        double y = ph > pl ? lo + (v - pl) * (hi - lo) / (ph - pl) : 0.5 * (lo + hi);
        return Point(x, y);
    };
    auto shift = [](long k) {
        Point s(0, kTwoPi * double(k));
        return Map2{[s](Point z) { return z + s; }, [s](Point z) { return z - s; }, Region::whole(), "shift"};
    };
    Region sup = Region::of(Rectangle{0, m, -1e300, 1e300});
    return Path(fwd, inv, sup, shift(f0), shift(f1), "strip");
}

Path annulus_rotation_path(const CirclePath& p, const CirclePath& q, double t_ratio)
{
    if (!(t_ratio > 1) || !std::isfinite(t_ratio)) fail(ErrorKind::domain, "annulus ratio must exceed 1");
    double m = std::log(t_ratio);
    Path strip = strip_path(LinePath{p.lift}, LinePath{q.lift}, m);
    auto check = [t_ratio](Point z) {
        double r = std::abs(z);
        if (r < 1 - kDomainTol || r > t_ratio * (1 + kDomainTol))
            fail(ErrorKind::domain, "point " + fmt_point(z) + " outside the annulus");
    };
    auto fwd = [strip, check](double t, Point z) {
        check(z);
        return std::exp(strip.forward(t, std::log(z)));
    };
    auto inv = [strip, check](double t, Point w) {
        check(w);
        return std::exp(strip.inverse(t, std::log(w)));
    };
    Region sup = Region::of(Annulus{0, 1, t_ratio});
    Map2 id{[](Point z) { return z; }, [](Point z) { return z; }, sup, "id"};
    return Path(fwd, inv, sup, id, id, "annulus-rotation");
}

// ---- translation along a curve

double PLCurve::length() const
{
    double s = 0;
    for (std::size_t i = 1; i < vertices.size(); ++i) s += std::abs(vertices[i] - vertices[i - 1]);
    return s;
}

Collar Collar::make(const Rectangle& inner, Point v, const Rectangle& arena, double clearance)
{
    if (!(clearance > 0)) fail(ErrorKind::domain, "collar clearance must be positive");
    Rectangle moved = inner.translated(v);
    Rectangle swept{std::min(inner.xmin, moved.xmin), std::max(inner.xmax, moved.xmax),
                    std::min(inner.ymin, moved.ymin), std::max(inner.ymax, moved.ymax)};
    if (!arena.contains(swept.expanded(clearance)))
        fail(ErrorKind::domain, "clearance violation: swept box does not keep distance " + std::to_string(clearance) +
                                    " from the arena boundary");
    return {inner, swept.expanded(clearance / 2), v};
}

std::vector<Triangle> Collar::triangles(double t) const
{
    auto o = outer.corners();
    auto in = inner.translated(t * v).corners();
    std::vector<Triangle> out;
    for (int k = 0; k < 4; ++k) {
        int k1 = (k + 1) % 4;
        out.push_back({o[k], o[k1], in[k1]});
        out.push_back({o[k], in[k1], in[k]});
    }
    return out;
}

namespace {

double min_barycentric(const Triangle& tr, Point z)
{
    double area = tr.orientation();
    double l0 = cross(tr.p1 - z, tr.p2 - z) / area;
    double l1 = cross(tr.p2 - z, tr.p0 - z) / area;
    double l2 = cross(tr.p0 - z, tr.p1 - z) / area;
    return std::min({l0, l1, l2});
}

Point collar_map(const std::vector<Triangle>& from, const std::vector<Triangle>& to, Point z)
{
    std::size_t best = 0;
    double score = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < from.size(); ++k) {
        double s = min_barycentric(from[k], z);
        if (s > score) {
            score = s;
            best = k;
        }
        if (s >= 0) break;
    }
    return affine_apply(from[best], to[best], z);
}

}  // namespace

Point Collar::forward(double t, Point z) const
{
    if (!outer.contains(z)) return z;
    if (inner.contains(z)) return z + t * v;
    return collar_map(triangles(0), triangles(t), z);
}

Point Collar::inverse(double t, Point w) const
{
    if (!outer.contains(w)) return w;
    if (inner.translated(t * v).contains(w)) return w - t * v;
    return collar_map(triangles(t), triangles(0), w);
}

Path translate_path(const ConvexPolygon& body, const PLCurve& curve, const Rectangle& arena, double clearance)
{
    if (curve.vertices.empty()) fail(ErrorKind::domain, "translate_path: empty curve");
    for (auto p : body.vertices)
        if (!arena.contains(p)) fail(ErrorKind::domain, "translate_path: body leaves the arena");
    Rectangle box = body.bbox();
    std::vector<Collar> collars;
    std::vector<double> cuts{0};
    double total = curve.length();
    double run = 0;
    for (std::size_t i = 1; i < curve.vertices.size(); ++i) {
        Point v = curve.vertices[i] - curve.vertices[i - 1];
        if (std::abs(v) == 0) continue;
        collars.push_back(Collar::make(box.translated(curve.vertices[i - 1] - curve.vertices[0]), v, arena, clearance));
        run += std::abs(v);
        cuts.push_back(run / total);
    }
    Region sup = Region::of(arena);
    if (collars.empty()) {
        Map2 id{[](Point z) { return z; }, [](Point z) { return z; }, sup, "id"};
        return constant_path(id);
    }
    cuts.back() = 1.0;
    auto cs = std::make_shared<std::vector<Collar>>(std::move(collars));
    auto locate = [cuts](double t, double& tau) {
        std::size_t k = 0;
        while (k + 1 < cuts.size() - 1 && t > cuts[k + 1]) ++k;
        tau = std::clamp((t - cuts[k]) / (cuts[k + 1] - cuts[k]), 0.0, 1.0);
        return k;
    };
    auto fwd = [cs, locate](double t, Point z) {
        double tau;
        std::size_t k = locate(t, tau);
        for (std::size_t j = 0; j < k; ++j) z = (*cs)[j].forward(1, z);
        return (*cs)[k].forward(tau, z);
    };
    auto inv = [cs, locate](double t, Point w) {
        double tau;
        std::size_t k = locate(t, tau);
        w = (*cs)[k].inverse(tau, w);
        for (std::size_t j = k; j-- > 0;) w = (*cs)[j].inverse(1, w);
        return w;
    };
    return Path(fwd, inv, sup, timed_map(fwd, inv, 0, sup, "translate@0"), timed_map(fwd, inv, 1, sup, "translate@1"),
                "translate");
}

// ---- combinators

Path reverse(const Path& p)
{
    auto f = p.forward_fn(), g = p.inverse_fn();
    return Path([f](double t, Point z) { return f(1 - t, z); }, [g](double t, Point w) { return g(1 - t, w); },
                p.support(), p.end(), p.start(), "reverse(" + p.id() + ")");
}

Path concat(const std::vector<Path>& paths)
{
    return concat_weighted(paths, std::vector<double>(paths.size(), 1.0));
}

Path concat_weighted(const std::vector<Path>& paths, const std::vector<double>& weights)
{
    if (paths.empty()) fail(ErrorKind::domain, "concat of no paths");
    if (weights.size() != paths.size()) fail(ErrorKind::domain, "concat: one weight per path");
    double total = 0;
    for (double w : weights) {
        if (!(w > 0)) fail(ErrorKind::domain, "concat weights must be positive");
        total += w;
    }
    Region sup = paths[0].support();
    for (std::size_t k = 0; k + 1 < paths.size(); ++k) {
        Region both = paths[k].support();
        both.add(paths[k + 1].support());
        sup.add(paths[k + 1].support());
        for (auto z : probe_points(both, 24)) {
            Point a, b;
            try {
                a = paths[k].forward(1, z);
                b = paths[k + 1].forward(0, z);
            } catch (const Error&) {
                continue;  // outside one of the domains
            }
            if (std::abs(a - b) > kJunctionTol)
                fail(ErrorKind::domain, "concat: endpoint mismatch at junction " + std::to_string(k) + ", witness " +
                                            fmt_point(z));
        }
    }
    std::vector<double> cuts{0};
    double run = 0;
    for (double w : weights) cuts.push_back((run += w) / total);
    cuts.back() = 1;
    auto ps = std::make_shared<std::vector<Path>>(paths);
    auto locate = [cuts](double t, double& tau) {
        std::size_t k = 0;
        while (k + 1 < cuts.size() - 1 && t > cuts[k + 1]) ++k;
        tau = std::clamp((t - cuts[k]) / (cuts[k + 1] - cuts[k]), 0.0, 1.0);
        return k;
    };
    auto f = [ps, locate](double t, Point z) {
        double tau;
        std::size_t k = locate(t, tau);
        return (*ps)[k].forward(tau, z);
    };
    auto g = [ps, locate](double t, Point w) {
        double tau;
        std::size_t k = locate(t, tau);
        return (*ps)[k].inverse(tau, w);
    };
    std::string id = "concat(";
    for (const auto& p : paths) id += p.id() + (&p == &paths.back() ? ")" : ",");
    return Path(f, g, sup, paths.front().start(), paths.back().end(), id);
}

Path restrict(const Path& p, const Region& region)
{
    auto f = p.forward_fn(), g = p.inverse_fn();
    auto fwd = [f, region](double t, Point z) {
        if (!region.contains(z, kDomainTol)) fail(ErrorKind::domain, "point " + fmt_point(z) + " outside restriction");
        return f(t, z);
    };
    return Path(fwd, g, region, p.start(), p.end(), "restrict(" + p.id() + ")");
}

Path glue(const std::vector<GluePiece>& pieces)
{
    if (pieces.empty()) fail(ErrorKind::domain, "glue of no pieces");
    for (const auto& pc : pieces)
        if (pc.region.is_whole() || pc.region.empty()) fail(ErrorKind::domain, "glue pieces need bounded regions");
    const double times[] = {0, 0.25, 0.5, 0.75, 1};
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        for (const auto& part : pieces[i].region.parts()) {
            for (auto z : boundary_samples(part, 64)) {
                bool shared = false;
                for (std::size_t j = 0; j < pieces.size(); ++j) {
                    if (j == i || !pieces[j].region.contains(z, 1e-9)) continue;
                    shared = true;
                    for (double t : times) {
                        Point a = pieces[i].path.forward(t, z), b = pieces[j].path.forward(t, z);
                        if (std::abs(a - b) > kJunctionTol)
                            fail(ErrorKind::domain, "glue: pieces disagree at witness " + fmt_point(z) +
                                                        " t=" + std::to_string(t));
                    }
                }
                if (shared) continue;
                for (double t : times)
                    if (std::abs(pieces[i].path.forward(t, z) - z) > kJunctionTol)
                        fail(ErrorKind::domain, "glue: piece moves its outer boundary at witness " + fmt_point(z) +
                                                    " t=" + std::to_string(t));
            }
        }
    }
    auto ps = std::make_shared<std::vector<GluePiece>>(pieces);
    auto f = [ps](double t, Point z) {
        for (const auto& pc : *ps)
            if (pc.region.contains(z, kDomainTol)) return pc.path.forward(t, z);
        return z;
    };
    auto g = [ps](double t, Point w) {
        for (const auto& pc : *ps)
            if (pc.region.contains(w, kDomainTol)) return pc.path.inverse(t, w);
        return w;
    };
    Region sup;
    for (const auto& pc : pieces) sup.add(pc.region);
    return Path(f, g, sup, timed_map(f, g, 0, sup, "glue@0"), timed_map(f, g, 1, sup, "glue@1"), "glue");
}

Path compose_isometric(const Path& outer, const Path& inner)
{
    auto pts = probe_points(inner.support(), 12);
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        for (std::size_t k = 0; k + 1 < pts.size(); k += 2) {
            Point x = inner.forward(t, pts[k]), y = inner.forward(t, pts[k + 1]);
            double d0 = std::abs(x - y);
            double d1 = std::abs(outer.forward(t, x) - outer.forward(t, y));
            if (std::abs(d1 - d0) > 1e-9 * std::max(1.0, d0))
                fail(ErrorKind::domain, "compose_isometric: outer path is not an isometry near " + fmt_point(x));
        }
    }
    auto of = outer.forward_fn(), og = outer.inverse_fn(), inf = inner.forward_fn(), ing = inner.inverse_fn();
    auto f = [of, inf](double t, Point z) { return of(t, inf(t, z)); };
    auto g = [og, ing](double t, Point w) { return ing(t, og(t, w)); };
    Region sup = outer.support();
    sup.add(inner.support());
    return Path(f, g, sup, compose(outer.start(), inner.start()), compose(outer.end(), inner.end()),
                outer.id() + "o" + inner.id());
}

Path conjugate(const Similarity& s, const Path& p)
{
    Similarity si = s.inverse();
    auto f = p.forward_fn(), g = p.inverse_fn();
    auto fwd = [s, si, f](double t, Point z) { return s(f(t, si(z))); };
    auto inv = [s, si, g](double t, Point w) { return s(g(t, si(w))); };
    Region sup = p.support().is_whole() ? Region::whole() : p.support().transformed(s);
    Map2 sm = similarity_map(s), smi = similarity_map(si);
    return Path(fwd, inv, sup, compose(sm, compose(p.start(), smi)), compose(sm, compose(p.end(), smi)),
                "conj(" + p.id() + ")");
}

// ---- translated-bump fixture

namespace {

struct Bump {
    int copies;
    double eta;
    // twist on 1/3 (1-eta) <= |z-n| <= 1/3, inner disk turns a full circle
    Point apply(Point z, double sign) const
    {
        double n = std::round(z.real());
        if (n < 0 || n >= copies) return z;
        Point u = (z - n) * 3.0;
        double r = std::abs(u);
        if (r > 1 || r < 1 - eta) return z;
        return n + u * std::polar(1.0, sign * twist_angle(r, eta)) / 3.0;
    }
};

}  // namespace

Map2 translated_bump_map(int copies, double bump_eta)
{
    if (copies < 1) fail(ErrorKind::domain, "bump fixture needs at least one copy");
    check_eta(bump_eta);
    Bump b{copies, bump_eta};
    Region sup;
    for (int n = 0; n < copies; ++n) sup.add(Disk{Point(n, 0), 1.0 / 3});
    return {[b](Point z) { return b.apply(z, 1); }, [b](Point w) { return b.apply(w, -1); }, sup, "bump"};
}

Path translated_bump_path(int copies, double bump_eta)
{
    Map2 fb = translated_bump_map(copies, bump_eta);
    auto ff = fb.forward, fi = fb.inverse;
    auto f = [ff](double t, Point z) { return ff(z * std::polar(1.0, kPi * t)); };
    auto g = [fi](double t, Point w) { return fi(w) * std::polar(1.0, -kPi * t); };
    return Path(f, g, Region::whole(), timed_map(f, g, 0, Region::whole(), "bump@0"),
                timed_map(f, g, 1, Region::whole(), "bump@1"), "rotated-bump");
}

std::pair<double, double> strip_estimate_sides(double a, double c1, double c2, double c3, double d1, double d2,
                                               double d3, double eps)
{
    Point base(a, c1 + c2 + c3 * a);
    Point pert(0, d1 * c1 + d2 * c2 + d3 * a);
    return {std::abs(base + pert), (1 + 8 * eps) * std::abs(base)};
}

}  // namespace mtx
