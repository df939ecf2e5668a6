#pragma once

#include <compare>
#include <cstdint>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mtx/geom.hpp"

namespace mtx {

struct Index2 {
    std::int64_t i = 0, j = 0;
    auto operator<=>(const Index2&) const = default;
};

// Bounded planar set made of points, segments and closed rectangles.
struct PointSet {
    std::vector<Point> points;
    std::vector<std::pair<Point, Point>> segments;
    std::vector<Rectangle> rects;

    bool empty() const { return points.empty() && segments.empty() && rects.empty(); }
    double distance_to(Point p) const;
};

class SquareSet {
public:
    SquareSet() = default;
    explicit SquareSet(double spacing) : spacing_(spacing) {}

    double spacing() const { return spacing_; }
    const std::set<Index2>& squares() const { return squares_; }
    std::size_t size() const { return squares_.size(); }
    bool contains(Index2 n) const { return squares_.count(n) != 0; }
    void insert(Index2 n) { squares_.insert(n); }
    Rectangle square(Index2 n) const;
    // grid vertex (i,j) in the plane
    Point vertex(Index2 v) const { return {spacing_ * double(v.i), spacing_ * double(v.j)}; }
    bool subset_of(const SquareSet& o) const;

private:
    double spacing_ = 1.0;
    std::set<Index2> squares_;
};

SquareSet squares_meeting(const PointSet& w, double alpha);
SquareSet thicken(const PointSet& w, double delta);
std::vector<SquareSet> components(const SquareSet& s);

struct GridBoundary {
    double spacing = 1.0;
    std::vector<std::vector<Index2>> vertex_loops;  // lattice vertices, loop not repeated at the end
    std::vector<std::vector<Point>> loops() const;
    std::size_t edge_count() const;
};

GridBoundary boundary_curves(const SquareSet& s);

std::string boundary_json(const GridBoundary& b);
std::string boundary_svg(const GridBoundary& b, double margin = 1.0);

}  // namespace mtx
