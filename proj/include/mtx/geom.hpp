#pragma once

#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "mtx/errors.hpp"
#include "mtx/rng.hpp"

namespace mtx {

using Point = std::complex<double>;

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

inline double cross(Point a, Point b) { return a.real() * b.imag() - a.imag() * b.real(); }
inline double dot(Point a, Point b) { return a.real() * b.real() + a.imag() * b.imag(); }

// z -> mult*z + translation, mult = scale*e^{i rotation}
class Similarity {
public:
    Similarity() = default;
    Similarity(double scale, double rotation, Point translation);
    static Similarity from_multiplier(Point mult, Point translation);
    static Similarity identity() { return {}; }

    Point operator()(Point z) const { return mult_ * z + b_; }
    Similarity inverse() const;
    double scale() const { return std::abs(mult_); }
    double rotation() const { return std::arg(mult_); }
    Point multiplier() const { return mult_; }
    Point translation() const { return b_; }

private:
    Point mult_{1.0, 0.0};
    Point b_{0.0, 0.0};
};

// a∘b
Similarity compose(const Similarity& a, const Similarity& b);

// z -> A z + B conj(z)
struct RealLinearMap {
    Point A{1.0, 0.0};
    Point B{0.0, 0.0};

    Point operator()(Point z) const { return A * z + B * std::conj(z); }
    bool invertible() const { return std::abs(A) > std::abs(B); }
    RealLinearMap inverse() const;
};

RealLinearMap compose(const RealLinearMap& a, const RealLinearMap& b);

// The real-linear map sending u -> u2 and v -> v2 (u, v independent over R).
RealLinearMap linear_from_pairs(Point u, Point u2, Point v, Point v2);

double affine_distortion(const RealLinearMap& m);

struct Rectangle {
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;

    static Rectangle make(double xmin, double xmax, double ymin, double ymax);
    static Rectangle bounding(const std::vector<Point>& pts);

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    Point center() const { return {(xmin + xmax) / 2, (ymin + ymax) / 2}; }
    double diameter() const;
    double circumradius() const { return diameter() / 2; }
    double area() const { return width() * height(); }
    bool contains(Point p, double tol = 0) const;
    bool contains(const Rectangle& r, double tol = 0) const;
    Rectangle expanded(double d) const { return {xmin - d, xmax + d, ymin - d, ymax + d}; }
    Rectangle translated(Point v) const;
    std::vector<Point> corners() const;  // counterclockwise from (xmin,ymin)
    double max_distance_from(Point p) const;
};

struct Disk {
    Point center;
    double radius = 0;
    bool contains(Point p, double tol = 0) const { return std::abs(p - center) <= radius + tol; }
};

struct Annulus {
    Point center;
    double r_in = 0;
    double r_out = 0;
    bool contains(Point p, double tol = 0) const;
};

enum class HullKind { point, segment, polygon };

struct ConvexPolygon {
    std::vector<Point> vertices;  // counterclockwise, no collinear triples
    HullKind kind = HullKind::polygon;

    double diameter() const;
    double area() const;
    bool contains(Point p, double tol = 1e-12) const;
    Rectangle bbox() const { return Rectangle::bounding(vertices); }
};

ConvexPolygon convex_hull(const std::vector<Point>& pts);
ConvexPolygon polygon_from_rectangle(const Rectangle& r);

// closed sets; tangency counts
bool intersects(const ConvexPolygon& a, const ConvexPolygon& b, double tol = 1e-12);
bool segments_intersect(Point a, Point b, Point c, Point d, double tol = 1e-12);
double segment_distance(Point a, Point b, Point c, Point d);
double point_segment_distance(Point p, Point a, Point b);

// Merge loop: while two hulls meet, replace the lowest-index pair by the hull of the union.
std::vector<ConvexPolygon> gather_convex(const std::vector<ConvexPolygon>& sets);

double set_distance(const std::vector<Point>& a, const std::vector<Point>& b);
double set_diameter(const std::vector<Point>& a);
double distance(const Rectangle& a, const Rectangle& b);
double distance(const Rectangle& a, Point p);
double distance(const Annulus& a, Point p);
double distance(const Annulus& a, const Rectangle& r);
double distance(const Annulus& a, const Annulus& b);
double distance(const ConvexPolygon& a, const ConvexPolygon& b);
inline double diameter(const Rectangle& r) { return r.diameter(); }
inline double diameter(const Annulus& a) { return 2 * a.r_out; }

using Shape = std::variant<Disk, Annulus, Rectangle, ConvexPolygon>;

// Closed region given as a finite union of shapes, or the whole plane.
class Region {
public:
    Region() = default;
    static Region whole();
    static Region of(Shape s);
    Region& add(Shape s);
    Region& add(const Region& r);

    bool is_whole() const { return whole_; }
    bool empty() const { return !whole_ && parts_.empty(); }
    const std::vector<Shape>& parts() const { return parts_; }
    bool contains(Point p, double tol = 0) const;
    Rectangle bbox() const;
    Region transformed(const Similarity& s) const;

private:
    bool whole_ = false;
    std::vector<Shape> parts_;
};

Rectangle shape_bbox(const Shape& s);
bool shape_contains(const Shape& s, Point p, double tol = 0);
double shape_area(const Shape& s);
double shape_size(const Shape& s);  // diameter of the bounding box
Point sample_in(const Shape& s, CounterRng& rng);
std::vector<Point> boundary_samples(const Shape& s, int n);
Shape transform_shape(const Shape& s, const Similarity& sim);

}  // namespace mtx
