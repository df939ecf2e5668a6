#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "mtx/geom.hpp"

namespace mtx {

// Two-map IFS on D = [-sqrt2, sqrt2] x [-1, 1]; each map is a quarter turn scaled by (1-alpha)/sqrt2.
struct IfsSpec {
    double alpha = 0.5;
    Rectangle base{-1.4142135623730951, 1.4142135623730951, -1.0, 1.0};

    static IfsSpec standard(double alpha);
    void validate() const;
    double ratio() const;           // (1-alpha)/sqrt2
    Similarity phi(int i) const;    // i in {1,2}
    Rectangle child(int i) const;   // phi_i(base)
};

struct Cell {
    std::string word;
    Rectangle rect;
    Similarity map;  // phi_w, maps base onto rect
};

class CellTree {
public:
    CellTree() = default;
    CellTree(IfsSpec spec, int depth, std::vector<std::vector<Cell>> levels)
        : spec_(spec), depth_(depth), levels_(std::move(levels)) {}

    const IfsSpec& spec() const { return spec_; }
    int depth() const { return depth_; }
    const std::vector<Cell>& level(int k) const { return levels_.at(static_cast<std::size_t>(k)); }
    const Cell& cell(const std::string& word) const;
    bool has(const std::string& word) const;
    std::size_t size() const;

private:
    IfsSpec spec_;
    int depth_ = 0;
    std::vector<std::vector<Cell>> levels_;
};

constexpr std::size_t kDefaultCellBudget = std::size_t(1) << 20;

CellTree build_cells(const IfsSpec& spec, int depth, std::size_t budget = kDefaultCellBudget);

// index of a word inside its level (1 -> bit 0, 2 -> bit 1, most significant first)
std::size_t word_index(const std::string& word);
std::string word_at(int length, std::size_t index);

double assouad_dim_formula(double alpha);

struct CantorApprox {
    int depth = 0;
    std::vector<Point> points;
    double leaf_diameter = 0;
};

CantorApprox cantor_approx(const CellTree& tree);
CantorApprox point_cloud(std::vector<Point> pts);

struct HomogeneityFit {
    double s = 0;       // regression slope
    double C = 0;       // max observed count / (diam/eps)^s
    std::vector<double> scales;
    std::vector<std::size_t> counts;
};

// greedy maximal eps-separated subset size
std::size_t greedy_net_count(const std::vector<Point>& pts, double eps);

HomogeneityFit homogeneity_fit(const CantorApprox& approx, const std::vector<double>& scales);
double homogeneity_estimate(const CantorApprox& approx, const std::vector<double>& scales);

// geometric ladder of n scales from hi down to lo
std::vector<double> geometric_scales(double hi, double lo, int n);

struct UdCertificate {
    double delta = 0;
    bool unbounded = false;
    std::string word;  // internal word attaining the minimum
};

UdCertificate ud_tree_certificate(const CellTree& tree);
UdCertificate ud_certificate_level(const CellTree& tree, int k);

// max distance from the base center to the depth-k cells: an upper bound for sup |x - c| over X
double cantor_extent_bound(const IfsSpec& spec, int k);

}  // namespace mtx
