#pragma once

#include <cmath>
#include <cstdint>

namespace mtx {

inline std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Counter-based stream: draw j of stream (seed, index) depends only on (seed, index, j),
// so prefixes of a sample sequence never change when the sample count grows.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t index)
        : key_(splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL))) {}

    std::uint64_t next() { return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * (++ctr_)); }

    // uniform in [0,1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t below(std::uint64_t n) { return n == 0 ? 0 : next() % n; }

private:
    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
};

}  // namespace mtx
