#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cwtori/fourier.hpp"

using namespace cwtori;

namespace {

std::vector<cd> sample_fn(int n, const std::function<cd(double)>& f) {
    std::vector<cd> s(n);
    for (int j = 0; j < n; ++j) s[j] = f(static_cast<double>(j) / n);
    return s;
}

}  // namespace

TEST_CASE("spectral derivative is exact for band-limited data") {
    auto f = [](double t) { return cd(std::sin(2 * M_PI * t) + 0.5 * std::cos(6 * M_PI * t), std::cos(2 * M_PI * t)); };
    auto df = [](double t) {
        return cd(2 * M_PI * std::cos(2 * M_PI * t) - 3 * M_PI * std::sin(6 * M_PI * t), -2 * M_PI * std::sin(2 * M_PI * t));
    };
    for (int n : {16, 24, 64}) {  // pow2 and non-pow2 paths
        auto d = fourier::derivative(sample_fn(n, f), 1.0);
        for (int j = 0; j < n; ++j) CHECK(std::abs(d[j] - df(static_cast<double>(j) / n)) < 1e-10);
    }
}

TEST_CASE("upsample reproduces the interpolant and downsample truncates") {
    auto f = [](double t) { return cd(std::cos(4 * M_PI * t), std::sin(2 * M_PI * t)); };
    auto s = sample_fn(32, f);
    auto up = fourier::upsample(s, 96);
    for (int j = 0; j < 96; ++j) CHECK(std::abs(up[j] - f(static_cast<double>(j) / 96)) < 1e-12);
    auto down = fourier::upsample(up, 32);
    for (int j = 0; j < 32; ++j) CHECK(std::abs(down[j] - s[j]) < 1e-12);
}

TEST_CASE("evaluate agrees with upsample") {
    auto f = [](double t) { return cd(std::cos(2 * M_PI * t) + 2.0, -std::sin(4 * M_PI * t)); };
    auto s = sample_fn(16, f);
    auto c = fourier::coeffs(s);
    for (double t : {0.03, 0.37, 0.91}) CHECK(std::abs(fourier::evaluate(c, t) - f(t)) < 1e-12);
}

TEST_CASE("grid derivative along both axes") {
    int n1 = 16, n2 = 32;
    Grid<cd> g(n1, n2);
    for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2) {
            double u = static_cast<double>(i1) / n1, v = static_cast<double>(i2) / n2;
            g.at(i1, i2) = std::cos(2 * M_PI * u) * std::sin(2 * M_PI * v);
        }
    auto du = fourier::grid_derivative(g, 0);
    auto dv = fourier::grid_derivative(g, 1);
    for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2) {
            double u = static_cast<double>(i1) / n1, v = static_cast<double>(i2) / n2;
            CHECK(std::abs(du.at(i1, i2) - cd(-2 * M_PI * std::sin(2 * M_PI * u) * std::sin(2 * M_PI * v))) < 1e-10);
            CHECK(std::abs(dv.at(i1, i2) - cd(2 * M_PI * std::cos(2 * M_PI * u) * std::cos(2 * M_PI * v))) < 1e-10);
        }
}

TEST_CASE("quaternion grid round-trips through channels") {
    Grid<Quaternion> g(8, 8);
    for (size_t i = 0; i < g.size(); ++i) g.v[i] = Quaternion(0.1 * i, -0.2, 0.3, 0.4 * i);
    auto [a, b] = fourier::split_channels(g);
    auto back = fourier::merge_channels(a, b);
    for (size_t i = 0; i < g.size(); ++i) CHECK((back.v[i] - g.v[i]).norm() < 1e-15);
}
