#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mtx/fractal.hpp"
#include "mtx/paths.hpp"

namespace mtx {

struct Ring {
    std::string word;
    Point center;
    double r_in = 0;
    double r_out = 0;
    bool round = true;

    int level() const { return static_cast<int>(word.size()); }
    Annulus annulus() const { return {center, r_in, r_out}; }
};

class RingFamily {
public:
    RingFamily() = default;
    RingFamily(std::vector<Ring> rings, double l_twist, double margin);

    double l_twist() const { return l_twist_; }
    double eta() const { return 1.0 / l_twist_; }
    double margin() const { return margin_; }
    int depth() const { return depth_; }
    const std::vector<Ring>& rings() const { return rings_; }
    bool has(const std::string& word) const { return index_.count(word) != 0; }
    const Ring& ring(const std::string& word) const;
    const Ring& root() const { return ring(""); }
    std::size_t size() const { return rings_.size(); }

    // max over tree edges of diam R_wi / diam R_w
    double max_shrink_ratio() const;
    // 1 - 1/L^2 for the reported L (the twist constant)
    double shrink_bound() const { return 1.0 - 1.0 / (l_twist_ * l_twist_); }

private:
    std::vector<Ring> rings_;
    std::map<std::string, std::size_t> index_;
    double l_twist_ = 2;
    double margin_ = 0;
    int depth_ = 0;
};

// Depth of the cell tree used to certify that no ring meets the Cantor set.
constexpr int kCertDepth = 14;

RingFamily place_rings(const CellTree& tree, double margin, double l_twist);
// throws a placement error naming the offending words
void verify_rings(const CellTree& tree, const RingFamily& rings);

Map2 multitwist_map(const RingFamily& rings, int depth_cut);
Path unwind_path(const RingFamily& rings, int depth_cut);

struct GatherMove {
    int step = 0;          // 1..n
    std::string word;      // moved block D'_word
    Rectangle body;        // world box at the start of the move
    Point shift;
    Rectangle collar;      // outer collar box
};

struct GatherPlan {
    int n = 0;
    double kappa = 0;
    double ball = 0;
    std::vector<GatherMove> moves;
};

GatherPlan gather_plan(const CellTree& tree, const RingFamily& rings, double beta, int n, double eps_ball);
// gather, rotate inside the ball, ungather; at(0) is the root twist and at(1) the identity
Path gather_unwind_path(const CellTree& tree, const RingFamily& rings, double beta, int n, double eps_ball);

struct SamplerConfig {
    std::size_t pairs = 2000;
    std::uint64_t seed = 42;
    double slack = 0.01;      // accept at (1+eps)/(1+slack*eps)
    std::size_t budget = std::size_t(1) << 14;
    std::vector<Shape> regions;  // source-space sampling regions; empty means whole support of the path
};

struct Factor {
    double t0 = 0, t1 = 1;
    double distortion = 1;  // sampled during decomposition
    std::string kind = "path-slice";
    Map2 map;
};

// factors in application order: factors[0] is applied first
struct FactorList {
    std::vector<Factor> factors;
    Point apply(Point z) const;
    Point apply_inverse(Point w) const;
};

// budget from MTX_BUDGET if set, else the fallback
std::size_t split_budget(std::size_t fallback = std::size_t(1) << 14);

FactorList decompose(const Path& path, double eps, const SamplerConfig& cfg);
// sampling regions for a ring family: annuli plus the root disk
std::vector<Shape> ring_regions(const RingFamily& rings, int depth_cut);
// sampled distortion of at(a) ∘ at(b)^{-1} using pulled-back pairs
double slice_distortion(const Path& path, double a, double b, const std::vector<Shape>& regions, std::size_t pairs,
                        std::uint64_t seed);
Factor make_factor(const Path& path, double a, double b);
// factor support at time b for a ring-family path
Region factor_region(const RingFamily& rings, const Path& path, double b, int depth_cut);

struct Dim1Factor {
    double slope = 1;       // x -> slope * x
    double distortion = 1;
};

std::vector<Dim1Factor> decompose_dim1(double l_const, int m);
double apply_dim1(const std::vector<Dim1Factor>& f, double x);

}  // namespace mtx
