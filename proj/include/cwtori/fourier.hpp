#pragma once

#include <complex>
#include <vector>

#include "cwtori/grid.hpp"
#include "cwtori/quaternion.hpp"

namespace cwtori {
namespace fourier {

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

//! In-place radix-2 FFT; sign = -1 forward, +1 inverse (unnormalized).
inline void fft_pow2(std::vector<cd>& a, int sign) {
    const int n = static_cast<int>(a.size());
    for (int i = 1, j = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (int len = 2; len <= n; len <<= 1) {
        double ang = sign * 2.0 * M_PI / len;
        cd wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
            cd w(1.0);
            for (int k = 0; k < len / 2; ++k) {
                cd u = a[i + k], t = a[i + k + len / 2] * w;
                a[i + k] = u + t;
                a[i + k + len / 2] = u - t;
                w *= wl;
            }
        }
    }
}

//! Unnormalized DFT with given sign; naive fallback for non power-of-two sizes.
inline std::vector<cd> dft(const std::vector<cd>& in, int sign) {
    const int n = static_cast<int>(in.size());
    if (is_pow2(n)) {
        std::vector<cd> a = in;
        fft_pow2(a, sign);
        return a;
    }
    std::vector<cd> out(n);
    for (int k = 0; k < n; ++k) {
        cd acc = 0;
        for (int j = 0; j < n; ++j) {
            double ang = sign * 2.0 * M_PI * k * j / n;
            acc += in[j] * cd(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

//! Normalized Fourier coefficients c_k = (1/n) sum s_j e^{-2 pi i jk/n}.
inline std::vector<cd> coeffs(const std::vector<cd>& samples) {
    auto c = dft(samples, -1);
    const double inv = 1.0 / static_cast<double>(samples.size());
    for (auto& x : c) x *= inv;
    return c;
}

inline std::vector<cd> from_coeffs(const std::vector<cd>& c) { return dft(c, +1); }

//! d/dt of the trigonometric interpolant of samples on [0, period); the
//! Nyquist mode is dropped as usual for odd derivatives.
inline std::vector<cd> derivative(const std::vector<cd>& samples, double period) {
    const int n = static_cast<int>(samples.size());
    auto c = coeffs(samples);
    for (int k = 0; k < n; ++k) {
        int ks = (k <= n / 2) ? k : k - n;
        if (2 * k == n) ks = 0;  // Nyquist
        c[k] *= cd(0.0, 2.0 * M_PI * ks / period);
    }
    return from_coeffs(c);
}

//! Resample to m points of the same interpolant: zero-pad on refinement,
//! truncate high modes on coarsening (Nyquist split evenly either way).
inline std::vector<cd> upsample(const std::vector<cd>& samples, int m) {
    const int n = static_cast<int>(samples.size());
    if (m == n) return samples;
    auto c = coeffs(samples);
    std::vector<cd> cm(m, cd(0));
    auto deposit = [&](int ks, cd val) {
        if (2 * std::abs(ks) > m) return;                 // beyond target band
        if (2 * std::abs(ks) == m) {                      // lands on target Nyquist
            cm[Grid<cd>::wrap(m / 2, m)] += val;
            return;
        }
        cm[Grid<cd>::wrap(ks, m)] += val;
    };
    for (int k = 0; k < n; ++k) {
        int ks = (k <= n / 2) ? k : k - n;
        if (2 * k == n) {  // split the source Nyquist coefficient
            deposit(n / 2, 0.5 * c[k]);
            deposit(-n / 2, 0.5 * c[k]);
        } else {
            deposit(ks, c[k]);
        }
    }
    return from_coeffs(cm);
}

//! Evaluate the interpolant at one point t in [0,1) (unit period).
inline cd evaluate(const std::vector<cd>& coeff, double t) {
    const int n = static_cast<int>(coeff.size());
    cd acc = 0;
    for (int k = 0; k < n; ++k) {
        int ks = (k <= n / 2) ? k : k - n;
        if (2 * k == n) {
            acc += coeff[k] * std::cos(2.0 * M_PI * (n / 2) * t);
        } else {
            double ang = 2.0 * M_PI * ks * t;
            acc += coeff[k] * cd(std::cos(ang), std::sin(ang));
        }
    }
    return acc;
}

// --- grid helpers (unit periods along both axes) ---

//! Partial derivative d/ds along the given axis (0: i1/tau1, 1: i2/tau2),
//! where s is the unit-square coordinate of that axis.
inline Grid<cd> grid_derivative(const Grid<cd>& g, int axis) {
    Grid<cd> out(g.n1, g.n2);
    if (axis == 0) {
        std::vector<cd> col(g.n1);
        for (int i2 = 0; i2 < g.n2; ++i2) {
            for (int i1 = 0; i1 < g.n1; ++i1) col[i1] = g.at(i1, i2);
            auto d = derivative(col, 1.0);
            for (int i1 = 0; i1 < g.n1; ++i1) out.at(i1, i2) = d[i1];
        }
    } else {
        std::vector<cd> row(g.n2);
        for (int i1 = 0; i1 < g.n1; ++i1) {
            for (int i2 = 0; i2 < g.n2; ++i2) row[i2] = g.at(i1, i2);
            auto d = derivative(row, 1.0);
            for (int i2 = 0; i2 < g.n2; ++i2) out.at(i1, i2) = d[i2];
        }
    }
    return out;
}

inline Grid<cd> grid_upsample(const Grid<cd>& g, int m1, int m2) {
    Grid<cd> tmp(m1, g.n2);
    std::vector<cd> col(g.n1);
    for (int i2 = 0; i2 < g.n2; ++i2) {
        for (int i1 = 0; i1 < g.n1; ++i1) col[i1] = g.at(i1, i2);
        auto u = upsample(col, m1);
        for (int i1 = 0; i1 < m1; ++i1) tmp.at(i1, i2) = u[i1];
    }
    Grid<cd> out(m1, m2);
    std::vector<cd> row(g.n2);
    for (int i1 = 0; i1 < m1; ++i1) {
        for (int i2 = 0; i2 < g.n2; ++i2) row[i2] = tmp.at(i1, i2);
        auto u = upsample(row, m2);
        for (int i2 = 0; i2 < m2; ++i2) out.at(i1, i2) = u[i2];
    }
    return out;
}

//! Quaternion grids differentiate channelwise through the (alpha, beta) split.
inline std::pair<Grid<cd>, Grid<cd>> split_channels(const Grid<Quaternion>& g) {
    Grid<cd> a(g.n1, g.n2), b(g.n1, g.n2);
    for (size_t i = 0; i < g.size(); ++i) {
        a.v[i] = g.v[i].alpha();
        b.v[i] = g.v[i].beta();
    }
    return {a, b};
}

inline Grid<Quaternion> merge_channels(const Grid<cd>& a, const Grid<cd>& b) {
    Grid<Quaternion> g(a.n1, a.n2);
    for (size_t i = 0; i < g.size(); ++i) g.v[i] = Quaternion::from_complex_pair(a.v[i], b.v[i]);
    return g;
}

inline Grid<Quaternion> grid_derivative(const Grid<Quaternion>& g, int axis) {
    auto [a, b] = split_channels(g);
    return merge_channels(grid_derivative(a, axis), grid_derivative(b, axis));
}

inline Grid<Quaternion> grid_upsample(const Grid<Quaternion>& g, int m1, int m2) {
    auto [a, b] = split_channels(g);
    return merge_channels(grid_upsample(a, m1, m2), grid_upsample(b, m1, m2));
}

//! Resample a periodic row of 4x4 matrices entrywise.
inline std::vector<CMat4> upsample_mat_row(const std::vector<CMat4>& row, int m) {
    const int n = static_cast<int>(row.size());
    std::vector<CMat4> out(m, CMat4::Zero());
    std::vector<cd> chan(n);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            for (int j = 0; j < n; ++j) chan[j] = row[j](r, c);
            auto u = upsample(chan, m);
            for (int j = 0; j < m; ++j) out[j](r, c) = u[j];
        }
    return out;
}

}  // namespace fourier
}  // namespace cwtori
