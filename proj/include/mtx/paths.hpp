#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mtx/geom.hpp"

namespace mtx {

using PointFn = std::function<Point(Point)>;
using TimedFn = std::function<Point(double, Point)>;

struct Map2 {
    PointFn forward;
    PointFn inverse;
    Region support = Region::whole();
    std::string id;

    Point operator()(Point z) const { return forward(z); }
};

Map2 identity_map();
Map2 similarity_map(const Similarity& s);
Map2 linear_map(const RealLinearMap& m);
Map2 compose(const Map2& a, const Map2& b);  // a∘b

class Path {
public:
    Path() = default;
    Path(TimedFn fwd, TimedFn inv, Region support, Map2 start, Map2 end, std::string id);

    Point forward(double t, Point z) const { return fwd_(t, z); }
    Point inverse(double t, Point w) const { return inv_(t, w); }
    Map2 at(double t) const;
    const Map2& start() const { return start_; }
    const Map2& end() const { return end_; }
    const Region& support() const { return support_; }
    const std::string& id() const { return id_; }
    const TimedFn& forward_fn() const { return fwd_; }
    const TimedFn& inverse_fn() const { return inv_; }

private:
    TimedFn fwd_, inv_;
    Region support_ = Region::whole();
    Map2 start_, end_;
    std::string id_;
};

// ---- concrete maps and paths

Map2 dehn_twist(double eta);
Path dehn_twist_path(double eta);
Path rotation_path(Point center, double total_angle, Region support = Region::whole());
Path constant_path(const Map2& m);

struct Triangle {
    Point p0, p1, p2;
    double orientation() const { return cross(p1 - p0, p2 - p0); }
};

Path triangle_path(Point a, Point c, Point b);
// affine map sending triangle src to dst (nondegenerate, positively oriented)
RealLinearMap triangle_linear_part(const Triangle& src, const Triangle& dst);
Point affine_apply(const Triangle& src, const Triangle& dst, Point z);

// y -> F_t(y) on the real line; F_t(y + 2π) = F_t(y) + 2π
struct LinePath {
    std::function<double(double, double)> map;
};

// lifted boundary path on a circle: θ -> Θ_t(θ), Θ_t(θ + 2π) = Θ_t(θ) + 2π
struct CirclePath {
    std::function<double(double, double)> lift;
};

Path strip_path(const LinePath& f, const LinePath& g, double m);
Path annulus_rotation_path(const CirclePath& p, const CirclePath& q, double t_ratio);

struct PLCurve {
    std::vector<Point> vertices;
    double length() const;
};

// body translated along curve inside arena; identity outside a rectangular 8-triangle collar
Path translate_path(const ConvexPolygon& body, const PLCurve& curve, const Rectangle& arena, double clearance);

// One straight move: inner box moves by t*v inside a fixed outer box.
struct Collar {
    Rectangle inner;
    Rectangle outer;
    Point v;

    static Collar make(const Rectangle& inner, Point v, const Rectangle& arena, double clearance);
    bool covers(Point z) const { return outer.contains(z); }
    Point forward(double t, Point z) const;
    Point inverse(double t, Point w) const;
    std::vector<Triangle> triangles(double t) const;
};

// ---- combinators

Path reverse(const Path& p);
Path concat(const std::vector<Path>& paths);
Path concat_weighted(const std::vector<Path>& paths, const std::vector<double>& weights);
Path restrict(const Path& p, const Region& region);

struct GluePiece {
    Region region;
    Path path;
};
// pieces map their own region onto itself; uncovered points are fixed
Path glue(const std::vector<GluePiece>& pieces);
Path compose_isometric(const Path& outer, const Path& inner);
Path conjugate(const Similarity& s, const Path& p);

// maximal pointwise gap between two maps on the given points
double map_gap(const Map2& a, const Map2& b, const std::vector<Point>& pts);

// Regression fixture: H_t = f̃ ∘ R_t with R_t rotation by πt and f̃ a twist bump on B(n, 1/3), n < copies.
Path translated_bump_path(int copies, double bump_eta = 0.5);
Map2 translated_bump_map(int copies, double bump_eta = 0.5);

// Strip estimate lemma check: returns lhs/rhs of |a+i(c1+c2+c3 a)+i(δ1c1+δ2c2+δ3a)| <= (1+8ε)|a+i(c1+c2+c3 a)|
std::pair<double, double> strip_estimate_sides(double a, double c1, double c2, double c3, double d1, double d2,
                                               double d3, double eps);

}  // namespace mtx
