#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <thread>
#include <vector>

namespace cwtori {

//! Row-major periodic grid over the fundamental domain: index (i1, i2) with
//! i1 in [0, n1) along tau1 and i2 in [0, n2) along tau2.
template <typename T>
struct Grid {
    int n1 = 0, n2 = 0;
    std::vector<T> v;

    Grid() = default;
    Grid(int n1_, int n2_) : n1(n1_), n2(n2_), v(static_cast<size_t>(n1_) * n2_) {}
    Grid(int n1_, int n2_, const T& init) : n1(n1_), n2(n2_), v(static_cast<size_t>(n1_) * n2_, init) {}

    size_t size() const { return v.size(); }
    size_t idx(int i1, int i2) const { return static_cast<size_t>(i1) * n2 + i2; }
    T& at(int i1, int i2) { return v[idx(i1, i2)]; }
    const T& at(int i1, int i2) const { return v[idx(i1, i2)]; }

    static int wrap(int i, int n) {
        i %= n;
        return i < 0 ? i + n : i;
    }
    T& atp(int i1, int i2) { return v[idx(wrap(i1, n1), wrap(i2, n2))]; }
    const T& atp(int i1, int i2) const { return v[idx(wrap(i1, n1), wrap(i2, n2))]; }
};

//! Deterministic parallel map: chunks [0, n) over `workers` threads. Results
//! must be written to per-index slots so output is independent of scheduling.
inline void parallel_for(int n, int workers, const std::function<void(int)>& fn) {
    if (workers <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    int nw = std::min(workers, n);
    std::vector<std::thread> pool;
    pool.reserve(nw);
    for (int t = 0; t < nw; ++t) {
        pool.emplace_back([&, t] {
            for (int i = t; i < n; i += nw) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

inline int default_workers() {
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

}  // namespace cwtori
