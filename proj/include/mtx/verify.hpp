#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mtx/multitwist.hpp"
#include "mtx/paths.hpp"

namespace mtx {

struct DistortionReport {
    std::string map_id;
    std::size_t pairs = 0;   // pairs actually evaluated
    double max_stretch = 1;
    double min_stretch = 1;
    double distortion = 1;   // max(max_stretch, 1/min_stretch)
    std::uint64_t seed = 0;
};

// Pair k lives in part k mod #parts; even k are uniform pairs, odd k sit at distance
// size * 10^-(1 + (k/2) mod 6) from each other. Pair k depends only on (seed, k).
DistortionReport distortion_estimate(const Map2& m, const Region& region, std::size_t pairs, std::uint64_t seed);

struct ProbeRow {
    double s = 0, t = 0;
    double displacement = 0;  // sup |H_s∘H_t^{-1}(x) - x|
    double distortion = 1;    // sampled distortion of H_s∘H_t^{-1}
};

struct ProbeGrid {
    int n = 33;                                     // n x n grid on [0,1]^2, 0 disables
    std::vector<std::pair<double, double>> extra;   // explicit (s,t) pairs
    int random_pairs = 0;
    int points = 128;                               // displacement samples per row
    int pairs = 256;                                // distortion pairs per row
};

struct ProbeTable {
    std::vector<ProbeRow> rows;
    std::uint64_t seed = 0;
    // max over rows with |s - t| <= delta
    double max_displacement(double delta) const;
    double max_distortion(double delta) const;
};

ProbeTable path_probe(const Path& p, const ProbeGrid& grid, const Region& region, std::uint64_t seed);

double composition_residual(const FactorList& factors, const Map2& f, const Region& region, std::size_t samples,
                            std::uint64_t seed);

// distortion of the shear (x,y) -> (x, y + k x)
double shear_distortion(double k);

double collar_modulus(double l);
double round_ring_modulus(double r_in, double r_out);
double collapse_delta(double c_hom, double s, double c_cigar, double eta, double eps);

std::string distortion_csv(const std::vector<DistortionReport>& reports);
std::string probe_csv(const ProbeTable& table);

}  // namespace mtx
