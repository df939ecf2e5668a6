#include "mtx/geom.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace mtx {

Similarity::Similarity(double scale, double rotation, Point translation)
{
    if (!(scale > 0) || !std::isfinite(scale))
        fail(ErrorKind::domain, "similarity scale must be positive");
    mult_ = std::polar(scale, rotation);
    b_ = translation;
}

Similarity Similarity::from_multiplier(Point mult, Point translation)
{
    if (!(std::abs(mult) > 0))
        fail(ErrorKind::domain, "similarity multiplier must be nonzero");
    Similarity s;
    s.mult_ = mult;
    s.b_ = translation;
    return s;
}

Similarity Similarity::inverse() const
{
    Point inv = 1.0 / mult_;
    return from_multiplier(inv, -inv * b_);
}

Similarity compose(const Similarity& a, const Similarity& b)
{
    return Similarity::from_multiplier(a.multiplier() * b.multiplier(),
                                       a.multiplier() * b.translation() + a.translation());
}

RealLinearMap RealLinearMap::inverse() const
{
    double det = std::norm(A) - std::norm(B);
    if (!(det > 0)) fail(ErrorKind::degenerate, "real-linear map is not orientation preserving");
    return {std::conj(A) / det, -B / det};
}

RealLinearMap compose(const RealLinearMap& a, const RealLinearMap& b)
{
    // a(b(z)) = aA(bA z + bB z̄) + aB conj(bA z + bB z̄)
    return {a.A * b.A + a.B * std::conj(b.B), a.A * b.B + a.B * std::conj(b.A)};
}

RealLinearMap linear_from_pairs(Point u, Point u2, Point v, Point v2)
{
    Point det = u * std::conj(v) - v * std::conj(u);
    if (std::abs(det) == 0) fail(ErrorKind::degenerate, "linear_from_pairs: dependent vectors");
    return {(u2 * std::conj(v) - v2 * std::conj(u)) / det, (u * v2 - v * u2) / det};
}

double affine_distortion(const RealLinearMap& m)
{
    double a = std::abs(m.A), b = std::abs(m.B);
    if (!(a > b)) fail(ErrorKind::degenerate, "affine_distortion: |A| <= |B|");
    return std::max(a + b, 1.0 / (a - b));
}

// ---- rectangles, disks, annuli

Rectangle Rectangle::make(double xmin, double xmax, double ymin, double ymax)
{
    if (!(xmin < xmax) || !(ymin < ymax))
        fail(ErrorKind::domain, "rectangle needs xmin < xmax and ymin < ymax");
    return {xmin, xmax, ymin, ymax};
}

Rectangle Rectangle::bounding(const std::vector<Point>& pts)
{
    if (pts.empty()) fail(ErrorKind::domain, "bounding box of empty set");
    Rectangle r{pts[0].real(), pts[0].real(), pts[0].imag(), pts[0].imag()};
    for (auto p : pts) {
        r.xmin = std::min(r.xmin, p.real());
        r.xmax = std::max(r.xmax, p.real());
        r.ymin = std::min(r.ymin, p.imag());
        r.ymax = std::max(r.ymax, p.imag());
    }
    return r;
}

double Rectangle::diameter() const { return std::hypot(width(), height()); }

bool Rectangle::contains(Point p, double tol) const
{
    return p.real() >= xmin - tol && p.real() <= xmax + tol && p.imag() >= ymin - tol &&
           p.imag() <= ymax + tol;
}

bool Rectangle::contains(const Rectangle& r, double tol) const
{
    return r.xmin >= xmin - tol && r.xmax <= xmax + tol && r.ymin >= ymin - tol && r.ymax <= ymax + tol;
}

Rectangle Rectangle::translated(Point v) const
{
    return {xmin + v.real(), xmax + v.real(), ymin + v.imag(), ymax + v.imag()};
}

std::vector<Point> Rectangle::corners() const
{
    return {{xmin, ymin}, {xmax, ymin}, {xmax, ymax}, {xmin, ymax}};
}

double Rectangle::max_distance_from(Point p) const
{
    double dx = std::max(std::abs(p.real() - xmin), std::abs(p.real() - xmax));
    double dy = std::max(std::abs(p.imag() - ymin), std::abs(p.imag() - ymax));
    return std::hypot(dx, dy);
}

bool Annulus::contains(Point p, double tol) const
{
    double r = std::abs(p - center);
    return r >= r_in - tol && r <= r_out + tol;
}

// ---- convex polygons

double ConvexPolygon::diameter() const
{
    double d = 0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        for (std::size_t j = i + 1; j < vertices.size(); ++j)
            d = std::max(d, std::abs(vertices[i] - vertices[j]));
    return d;
}

double ConvexPolygon::area() const
{
    if (kind != HullKind::polygon) return 0;
    double a = 0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
        a += cross(vertices[i], vertices[(i + 1) % vertices.size()]);
    return a / 2;
}

bool ConvexPolygon::contains(Point p, double tol) const
{
    switch (kind) {
    case HullKind::point: return std::abs(p - vertices[0]) <= tol;
    case HullKind::segment: return point_segment_distance(p, vertices[0], vertices[1]) <= tol;
    case HullKind::polygon: break;
    }
    std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        Point a = vertices[i], b = vertices[(i + 1) % n];
        double len = std::abs(b - a);
        if (cross(b - a, p - a) < -tol * len) return false;
    }
    return true;
}

ConvexPolygon convex_hull(const std::vector<Point>& input)
{
    if (input.empty()) fail(ErrorKind::domain, "convex_hull of empty set");
    std::vector<Point> pts = input;
    std::sort(pts.begin(), pts.end(), [](Point a, Point b) {
        return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    ConvexPolygon h;
    if (pts.size() == 1) {
        h.vertices = pts;
        h.kind = HullKind::point;
        return h;
    }
    // Andrew's monotone chain, collinear points dropped
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    if (hull.size() <= 2) {
        h.vertices = {pts.front(), pts.back()};
        h.kind = HullKind::segment;
        return h;
    }
    h.vertices = std::move(hull);
    h.kind = HullKind::polygon;
    return h;
}

ConvexPolygon polygon_from_rectangle(const Rectangle& r)
{
    ConvexPolygon p;
    p.vertices = r.corners();
    p.kind = HullKind::polygon;
    return p;
}

namespace {

int orient(Point a, Point b, Point c, double tol)
{
    double v = cross(b - a, c - a);
    double scale = std::max({std::abs(b - a), std::abs(c - a), 1.0});
    if (v > tol * scale) return 1;
    if (v < -tol * scale) return -1;
    return 0;
}

bool on_segment(Point p, Point a, Point b, double tol) { return point_segment_distance(p, a, b) <= tol; }

std::vector<std::pair<Point, Point>> edges_of(const ConvexPolygon& p)
{
    std::vector<std::pair<Point, Point>> e;
    std::size_t n = p.vertices.size();
    if (n == 1) return {{p.vertices[0], p.vertices[0]}};
    if (n == 2) return {{p.vertices[0], p.vertices[1]}};
    for (std::size_t i = 0; i < n; ++i) e.push_back({p.vertices[i], p.vertices[(i + 1) % n]});
    return e;
}

}  // namespace

double point_segment_distance(Point p, Point a, Point b)
{
    Point d = b - a;
    double l2 = std::norm(d);
    if (l2 == 0) return std::abs(p - a);
    double t = std::clamp(dot(p - a, d) / l2, 0.0, 1.0);
    return std::abs(p - (a + t * d));
}

bool segments_intersect(Point a, Point b, Point c, Point d, double tol)
{
    int o1 = orient(a, b, c, tol), o2 = orient(a, b, d, tol);
    int o3 = orient(c, d, a, tol), o4 = orient(c, d, b, tol);
    if (o1 * o2 < 0 && o3 * o4 < 0) return true;
    return on_segment(c, a, b, tol) || on_segment(d, a, b, tol) || on_segment(a, c, d, tol) ||
           on_segment(b, c, d, tol);
}

double segment_distance(Point a, Point b, Point c, Point d)
{
    if (segments_intersect(a, b, c, d, 0.0)) return 0.0;
    return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                     point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

bool intersects(const ConvexPolygon& a, const ConvexPolygon& b, double tol)
{
    for (auto p : a.vertices)
        if (b.contains(p, tol)) return true;
    for (auto p : b.vertices)
        if (a.contains(p, tol)) return true;
    for (auto [p, q] : edges_of(a))
        for (auto [r, s] : edges_of(b))
            if (segments_intersect(p, q, r, s, tol)) return true;
    return false;
}

double distance(const ConvexPolygon& a, const ConvexPolygon& b)
{
    if (intersects(a, b, 0.0)) return 0.0;
    double d = std::numeric_limits<double>::infinity();
    for (auto [p, q] : edges_of(a))
        for (auto [r, s] : edges_of(b)) d = std::min(d, segment_distance(p, q, r, s));
    return d;
}

std::vector<ConvexPolygon> gather_convex(const std::vector<ConvexPolygon>& sets)
{
    std::vector<ConvexPolygon> cur;
    cur.reserve(sets.size());
    for (const auto& s : sets) cur.push_back(convex_hull(s.vertices));
    for (;;) {
        bool merged = false;
        for (std::size_t i = 0; i < cur.size() && !merged; ++i) {
            for (std::size_t j = i + 1; j < cur.size(); ++j) {
                if (!intersects(cur[i], cur[j])) continue;
                std::vector<Point> u = cur[i].vertices;
                u.insert(u.end(), cur[j].vertices.begin(), cur[j].vertices.end());
                cur[i] = convex_hull(u);
                cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(j));
                merged = true;
                break;
            }
        }
        if (!merged) break;
    }
    return cur;
}

// ---- distances

double set_distance(const std::vector<Point>& a, const std::vector<Point>& b)
{
    if (a.empty() || b.empty()) fail(ErrorKind::domain, "set_distance of empty set");
    double d = std::numeric_limits<double>::infinity();
    for (auto p : a)
        for (auto q : b) d = std::min(d, std::abs(p - q));
    return d;
}

double set_diameter(const std::vector<Point>& a)
{
    if (a.empty()) fail(ErrorKind::domain, "set_diameter of empty set");
    double d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) d = std::max(d, std::abs(a[i] - a[j]));
    return d;
}

double distance(const Rectangle& a, const Rectangle& b)
{
    double dx = std::max({0.0, a.xmin - b.xmax, b.xmin - a.xmax});
    double dy = std::max({0.0, a.ymin - b.ymax, b.ymin - a.ymax});
    return std::hypot(dx, dy);
}

double distance(const Rectangle& a, Point p)
{
    double dx = std::max({0.0, a.xmin - p.real(), p.real() - a.xmax});
    double dy = std::max({0.0, a.ymin - p.imag(), p.imag() - a.ymax});
    return std::hypot(dx, dy);
}

double distance(const Annulus& a, Point p)
{
    double r = std::abs(p - a.center);
    if (r < a.r_in) return a.r_in - r;
    if (r > a.r_out) return r - a.r_out;
    return 0.0;
}

double distance(const Annulus& a, const Rectangle& r)
{
    double near = distance(r, a.center);
    double far = r.max_distance_from(a.center);
    if (far < a.r_in) return a.r_in - far;
    if (near > a.r_out) return near - a.r_out;
    return 0.0;
}

double distance(const Annulus& a, const Annulus& b)
{
    double d = std::abs(a.center - b.center);
    double apart = d - a.r_out - b.r_out;
    double a_in_b = b.r_in - d - a.r_out;
    double b_in_a = a.r_in - d - b.r_out;
    return std::max({0.0, apart, a_in_b, b_in_a});
}

// ---- regions

Region Region::whole()
{
    Region r;
    r.whole_ = true;
    return r;
}

Region Region::of(Shape s)
{
    Region r;
    r.parts_.push_back(std::move(s));
    return r;
}

Region& Region::add(Shape s)
{
    parts_.push_back(std::move(s));
    return *this;
}

Region& Region::add(const Region& r)
{
    whole_ = whole_ || r.whole_;
    parts_.insert(parts_.end(), r.parts_.begin(), r.parts_.end());
    return *this;
}

bool Region::contains(Point p, double tol) const
{
    if (whole_) return true;
    for (const auto& s : parts_)
        if (shape_contains(s, p, tol)) return true;
    return false;
}

Rectangle Region::bbox() const
{
    if (whole_ || parts_.empty()) fail(ErrorKind::domain, "bounding box of unbounded or empty region");
    Rectangle b = shape_bbox(parts_[0]);
    for (const auto& s : parts_) {
        Rectangle c = shape_bbox(s);
        b = {std::min(b.xmin, c.xmin), std::max(b.xmax, c.xmax), std::min(b.ymin, c.ymin),
             std::max(b.ymax, c.ymax)};
    }
    return b;
}

Region Region::transformed(const Similarity& s) const
{
    Region r;
    r.whole_ = whole_;
    for (const auto& p : parts_) r.parts_.push_back(transform_shape(p, s));
    return r;
}

Rectangle shape_bbox(const Shape& s)
{
    return std::visit(
        [](const auto& v) -> Rectangle {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Disk>)
                return {v.center.real() - v.radius, v.center.real() + v.radius, v.center.imag() - v.radius,
                        v.center.imag() + v.radius};
            else if constexpr (std::is_same_v<T, Annulus>)
                return {v.center.real() - v.r_out, v.center.real() + v.r_out, v.center.imag() - v.r_out,
                        v.center.imag() + v.r_out};
            else if constexpr (std::is_same_v<T, Rectangle>)
                return v;
            else
                return v.bbox();
        },
        s);
}

bool shape_contains(const Shape& s, Point p, double tol)
{
    return std::visit([&](const auto& v) { return v.contains(p, tol); }, s);
}

double shape_area(const Shape& s)
{
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Disk>)
                return kPi * v.radius * v.radius;
            else if constexpr (std::is_same_v<T, Annulus>)
                return kPi * (v.r_out * v.r_out - v.r_in * v.r_in);
            else
                return v.area();
        },
        s);
}

double shape_size(const Shape& s) { return shape_bbox(s).diameter(); }

Point sample_in(const Shape& s, CounterRng& rng)
{
    return std::visit(
        [&](const auto& v) -> Point {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Disk>) {
                double r = v.radius * std::sqrt(rng.uniform());
                return v.center + std::polar(r, kTwoPi * rng.uniform());
            } else if constexpr (std::is_same_v<T, Annulus>) {
                double a = v.r_in * v.r_in, b = v.r_out * v.r_out;
                double r = std::sqrt(a + (b - a) * rng.uniform());
                return v.center + std::polar(r, kTwoPi * rng.uniform());
            } else if constexpr (std::is_same_v<T, Rectangle>) {
                return {rng.uniform(v.xmin, v.xmax), rng.uniform(v.ymin, v.ymax)};
            } else {
                if (v.kind != HullKind::polygon) {
                    Point a = v.vertices.front(), b = v.vertices.back();
                    return a + rng.uniform() * (b - a);
                }
                // fan triangulation, triangle chosen by area
                double total = v.area(), pick = rng.uniform() * total, acc = 0;
                std::size_t n = v.vertices.size(), k = 1;
                for (; k + 1 < n; ++k) {
                    acc += cross(v.vertices[k] - v.vertices[0], v.vertices[k + 1] - v.vertices[0]) / 2;
                    if (acc >= pick) break;
                }
                if (k + 1 >= n) k = n - 2;
                double u = rng.uniform(), w = rng.uniform();
                if (u + w > 1) {
                    u = 1 - u;
                    w = 1 - w;
                }
                return v.vertices[0] + u * (v.vertices[k] - v.vertices[0]) + w * (v.vertices[k + 1] - v.vertices[0]);
            }
        },
        s);
}

std::vector<Point> boundary_samples(const Shape& s, int n)
{
    std::vector<Point> out;
    auto circle = [&](Point c, double r, int m) {
        for (int k = 0; k < m; ++k) out.push_back(c + std::polar(r, kTwoPi * (k + 0.5) / m));
    };
    auto loop = [&](const std::vector<Point>& poly) {
        std::size_t m = poly.size();
        int per = std::max(1, n / static_cast<int>(m));
        for (std::size_t i = 0; i < m; ++i)
            for (int k = 0; k < per; ++k)
                out.push_back(poly[i] + (poly[(i + 1) % m] - poly[i]) * ((k + 0.5) / per));
    };
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Disk>)
                circle(v.center, v.radius, n);
            else if constexpr (std::is_same_v<T, Annulus>) {
                circle(v.center, v.r_in, n / 2);
                circle(v.center, v.r_out, n - n / 2);
            } else if constexpr (std::is_same_v<T, Rectangle>)
                loop(v.corners());
            else
                loop(v.vertices);
        },
        s);
    return out;
}

Shape transform_shape(const Shape& s, const Similarity& sim)
{
    return std::visit(
        [&](const auto& v) -> Shape {
            using T = std::decay_t<decltype(v)>;
            double k = sim.scale();
            if constexpr (std::is_same_v<T, Disk>)
                return Disk{sim(v.center), v.radius * k};
            else if constexpr (std::is_same_v<T, Annulus>)
                return Annulus{sim(v.center), v.r_in * k, v.r_out * k};
            else if constexpr (std::is_same_v<T, Rectangle>) {
                std::vector<Point> c;
                for (auto p : v.corners()) c.push_back(sim(p));
                Point m = sim.multiplier();
                bool axis = std::abs(m.real()) < 1e-15 * k || std::abs(m.imag()) < 1e-15 * k;
                if (axis) return Rectangle::bounding(c);
                return convex_hull(c);
            } else {
                std::vector<Point> c;
                for (auto p : v.vertices) c.push_back(sim(p));
                return convex_hull(c);
            }
        },
        s);
}

}  // namespace mtx
