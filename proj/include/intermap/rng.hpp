#pragma once

#include <cstdint>
#include <random>

namespace intermap {

// splitmix64, used to decorrelate per-task seeds
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Independent RNG stream for task `task_id` of a run seeded with `seed`.
/// Streams depend only on (seed, task_id), never on the worker that runs
/// the task, so results are reproducible for any worker count.
inline std::mt19937_64 task_rng(std::uint64_t seed, std::uint64_t task_id) {
    std::uint64_t s = splitmix64(seed ^ splitmix64(task_id + 0x51ed2700d1ce4e5bULL));
    return std::mt19937_64(s);
}

inline double uniform_open(std::mt19937_64& rng, double lo, double hi) {
    std::uniform_real_distribution<double> d(lo, hi);
    double x = d(rng);
    while (x == lo || x == hi) x = d(rng);
    return x;
}

} // namespace intermap
