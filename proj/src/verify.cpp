#include "mtx/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace mtx {

namespace {

std::vector<Shape> parts_of(const Region& region)
{
    if (region.is_whole() || region.empty()) fail(ErrorKind::domain, "sampling region must be bounded and nonempty");
    std::vector<Shape> parts;
    for (const auto& s : region.parts())
        if (shape_size(s) > 0 && std::isfinite(shape_size(s))) parts.push_back(s);
    if (parts.empty()) fail(ErrorKind::domain, "sampling region is degenerate");
    return parts;
}

std::pair<Point, Point> sample_pair(const std::vector<Shape>& parts, std::uint64_t seed, std::size_t k)
{
    const Shape& part = parts[k % parts.size()];
    CounterRng rng(seed, k);
    Point u = sample_in(part, rng);
    if (k % 2 == 0) return {u, sample_in(part, rng)};
    double scale = shape_size(part) * std::pow(10.0, -1.0 - double((k / 2) % 6));
    return {u, u + std::polar(scale, kTwoPi * rng.uniform())};
}

std::string num(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace

DistortionReport distortion_estimate(const Map2& m, const Region& region, std::size_t pairs, std::uint64_t seed)
{
    if (pairs < 2) fail(ErrorKind::domain, "need at least two pairs");
    auto parts = parts_of(region);
    DistortionReport rep;
    rep.map_id = m.id;
    rep.seed = seed;
    double hi = 0, lo = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < pairs; ++k) {
        auto [u, v] = sample_pair(parts, seed, k);
        double d0 = std::abs(u - v);
        if (!(d0 > 0)) continue;
        double d1;
        try {
            d1 = std::abs(m(u) - m(v));
        } catch (const Error&) {
            continue;  // pair left the map's domain
        }
        double q = d1 / d0;
        hi = std::max(hi, q);
        lo = std::min(lo, q);
        ++rep.pairs;
    }
    if (rep.pairs == 0) fail(ErrorKind::estimation, "no usable sample pairs");
    rep.max_stretch = hi;
    rep.min_stretch = lo;
    rep.distortion = std::max({hi, 1 / lo, 1.0});
    return rep;
}

double ProbeTable::max_displacement(double delta) const
{
    double m = 0;
    for (const auto& r : rows)
        if (std::abs(r.s - r.t) <= delta) m = std::max(m, r.displacement);
    return m;
}

double ProbeTable::max_distortion(double delta) const
{
    double m = 1;
    for (const auto& r : rows)
        if (std::abs(r.s - r.t) <= delta) m = std::max(m, r.distortion);
    return m;
}

ProbeTable path_probe(const Path& p, const ProbeGrid& grid, const Region& region, std::uint64_t seed)
{
    auto parts = parts_of(region);
    std::vector<std::pair<double, double>> st;
    for (int i = 0; i < grid.n; ++i)
        for (int j = 0; j < grid.n; ++j)
            st.push_back({grid.n == 1 ? 0.0 : double(i) / (grid.n - 1), grid.n == 1 ? 0.0 : double(j) / (grid.n - 1)});
    st.insert(st.end(), grid.extra.begin(), grid.extra.end());
    for (int k = 0; k < grid.random_pairs; ++k) {
        CounterRng rng(seed ^ 0x5eedULL, std::uint64_t(k));
        double s = rng.uniform();
        st.push_back({s, rng.uniform()});
    }
    // samples live in source coordinates: x = H_t(u), H_s∘H_t^{-1}(x) = H_s(u)
    std::vector<Point> pts;
    for (int k = 0; k < grid.points; ++k) {
        CounterRng rng(seed, 1000000 + std::uint64_t(k));
        pts.push_back(sample_in(parts[std::size_t(k) % parts.size()], rng));
    }
    std::vector<std::pair<Point, Point>> prs;
    for (int k = 0; k < grid.pairs; ++k) prs.push_back(sample_pair(parts, seed, std::size_t(k)));

    ProbeTable table;
    table.seed = seed;
    for (auto [s, t] : st) {
        ProbeRow row{s, t, 0, 1};
        for (auto u : pts) row.displacement = std::max(row.displacement, std::abs(p.forward(s, u) - p.forward(t, u)));
        double hi = 1, lo = 1;
        for (auto [u, v] : prs) {
            double den, nu;
            try {
                den = std::abs(p.forward(t, u) - p.forward(t, v));
                nu = std::abs(p.forward(s, u) - p.forward(s, v));
            } catch (const Error&) {
                continue;  // partner fell outside the path's domain
            }
            if (!(den > 0) || !(nu > 0)) continue;
            hi = std::max(hi, nu / den);
            lo = std::min(lo, nu / den);
        }
        row.distortion = std::max(hi, 1 / lo);
        table.rows.push_back(row);
    }
    return table;
}

double composition_residual(const FactorList& factors, const Map2& f, const Region& region, std::size_t samples,
                            std::uint64_t seed)
{
    auto parts = parts_of(region);
    double r = 0;
    for (std::size_t k = 0; k < samples; ++k) {
        CounterRng rng(seed, k);
        Point z = sample_in(parts[k % parts.size()], rng);
        r = std::max(r, std::abs(factors.apply(z) - f(z)));
    }
    return r;
}

double shear_distortion(double k)
{
    k = std::abs(k);
    return (k + std::sqrt(k * k + 4)) / 2;
}

double collar_modulus(double l)
{
    if (!(l > 0) || !std::isfinite(l)) fail(ErrorKind::domain, "collar length must be positive");
    return l / (2 * std::asin(std::exp(-l)));
}

double round_ring_modulus(double r_in, double r_out)
{
    if (!(r_in > 0 && r_in < r_out) || !std::isfinite(r_out)) fail(ErrorKind::domain, "need 0 < r_in < r_out");
    return kTwoPi / std::log(r_out / r_in);
}

double collapse_delta(double c_hom, double s, double c_cigar, double eta, double eps)
{
    if (!(s >= 0)) fail(ErrorKind::domain, "homogeneity exponent must be >= 0");
    if (!(s < 1)) fail(ErrorKind::domain, "homogeneity exponent must be < 1");
    if (!(c_hom > 0 && c_cigar >= 1 && eta > 0 && eps > 0)) fail(ErrorKind::domain, "collapse parameters out of range");
    return std::pow(std::min(eta, eps) / (216 * c_cigar * c_hom), 1 / (1 - s));
}

std::string distortion_csv(const std::vector<DistortionReport>& reports)
{
    std::string out = "map_id,pairs,max_stretch,min_stretch,distortion,seed\n";
    for (const auto& r : reports)
        out += r.map_id + "," + std::to_string(r.pairs) + "," + num(r.max_stretch) + "," + num(r.min_stretch) + "," +
               num(r.distortion) + "," + std::to_string(r.seed) + "\n";
    return out;
}

std::string probe_csv(const ProbeTable& table)
{
    std::string out = "s,t,displacement,distortion\n";
    for (const auto& r : table.rows)
        out += num(r.s) + "," + num(r.t) + "," + num(r.displacement) + "," + num(r.distortion) + "\n";
    return out;
}

}  // namespace mtx
