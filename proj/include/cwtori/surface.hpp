#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "cwtori/errors.hpp"
#include "cwtori/fourier.hpp"
#include "cwtori/grid.hpp"
#include "cwtori/quaternion.hpp"

namespace cwtori {

//! Lattice Gamma = Z tau1 + Z tau2 with T^2 = C/Gamma. Grid coordinates
//! (s1, s2) in [0,1)^2 map to z = s1 tau1 + s2 tau2.
struct TorusLattice {
    cd tau1{2.0 * M_PI, 0.0};
    cd tau2{0.0, 2.0 * M_PI};

    //! Signed area of the fundamental domain, Im(conj(tau1) tau2).
    double det() const { return std::imag(std::conj(tau1) * tau2); }
    double area() const { return std::abs(det()); }

    bool valid() const { return std::abs(det()) > 1e-12 * std::abs(tau1) * std::abs(tau2); }

    //! Convert unit-square partials (d/ds1, d/ds2) to physical (d/dx, d/dy).
    template <typename T>
    void to_physical(const T& fu, const T& fv, T& fx, T& fy) const {
        const double t1x = tau1.real(), t1y = tau1.imag();
        const double t2x = tau2.real(), t2y = tau2.imag();
        const double d = det();
        fx = (fu * t2y - fv * t1y) * (1.0 / d);
        fy = (fv * t1x - fu * t2x) * (1.0 / d);
    }
};

enum class SurfaceKind { clifford, homogeneous, hopf, hsl, sampled };

//! Torus immersion model: analytic kinds carry exact derivative closures,
//! sampled kinds carry a value grid resampled spectrally.
struct SurfaceSpec {
    SurfaceKind kind = SurfaceKind::clifford;
    TorusLattice lattice;
    //! f and physical partials fx, fy at grid coordinates (s1, s2).
    std::function<void(double, double, Quaternion&, Quaternion&, Quaternion&)> eval;
    Grid<Quaternion> samples;      // sampled kind only
    double generator_residual = 0; // hopf: lift closure + arclength defect
};

//! Sampled torus with frames: derivatives, normals, mean curvature datum
//! H (with calligraphic-H = conj(H) N), conformality residual, mask.
struct FrameGrid {
    int n1 = 0, n2 = 0;
    TorusLattice lattice;
    Grid<Quaternion> f, fx, fy, N, R, H;
    Grid<double> conf_res;
    Grid<uint8_t> mask;  // 1 = non-immersed, excluded from diagnostics
    int masked_count = 0;
    double max_conf_res = 0;
    double max_unit_dev = 0;  // worst |1 - |fy * fx^-1|| before normalization

    bool unmasked(int i1, int i2) const { return mask.at(i1, i2) == 0; }
};

namespace detail {

inline Quaternion product_torus_f(double a, double b, double scale, double p, double q) {
    // a e^{ip} + j b e^{iq}, scaled
    Quaternion f = Quaternion::from_complex(cd(a * std::cos(p), a * std::sin(p)));
    Quaternion jpart = Quaternion::j() * Quaternion::from_complex(cd(b * std::cos(q), b * std::sin(q)));
    return (f + jpart) * scale;
}

}  // namespace detail

//! Analytic generators. Params by kind:
//!   clifford                 — none
//!   homogeneous              — r in (0,1); f = r e^{ix/r} + j s e^{iy/s}, s = sqrt(1-r^2)
//!   hsl                      — b1, b2 > 0 (Lagrangian angle covector beta = b1 x + b2 y)
//!   hopf                     — z0, amp, mode: curve on S^2 with height z0 + amp cos(mode t)
inline SurfaceSpec builtin_surface(SurfaceKind kind, const std::map<std::string, double>& params = {}) {
    auto get = [&](const std::string& k, double dflt) {
        auto it = params.find(k);
        return it == params.end() ? dflt : it->second;
    };
    SurfaceSpec spec;
    spec.kind = kind;

    if (kind == SurfaceKind::clifford || kind == SurfaceKind::homogeneous) {
        double r = (kind == SurfaceKind::clifford) ? 1.0 / std::sqrt(2.0) : get("r", 0.6);
        if (!(r > 0.0 && r < 1.0)) throw validation_error("homogeneous: r must lie in (0,1)");
        double s = std::sqrt(1.0 - r * r);
        spec.lattice.tau1 = cd(2.0 * M_PI * r, 0.0);
        spec.lattice.tau2 = cd(0.0, 2.0 * M_PI * s);
        TorusLattice lat = spec.lattice;
        spec.eval = [r, s, lat](double s1, double s2, Quaternion& f, Quaternion& fx, Quaternion& fy) {
            cd z = s1 * lat.tau1 + s2 * lat.tau2;
            double x = z.real(), y = z.imag();
            f = detail::product_torus_f(r, s, 1.0, x / r, y / s);
            fx = Quaternion::i() * exp_i(x / r);
            fy = Quaternion::j() * (Quaternion::i() * exp_i(y / s));
        };
        return spec;
    }

    if (kind == SurfaceKind::hsl) {
        double b1 = get("b1", 1.0), b2 = get("b2", 1.0);
        if (!(b1 > 0.0 && b2 > 0.0)) throw validation_error("hsl: covector components must be positive");
        double a = 1.0 / b1, b = 1.0 / b2;
        double scale = 1.0 / std::sqrt(a * a + b * b);  // land on the unit 3-sphere
        spec.lattice.tau1 = cd(2.0 * M_PI * a, 0.0);
        spec.lattice.tau2 = cd(0.0, 2.0 * M_PI * b);
        TorusLattice lat = spec.lattice;
        spec.eval = [a, b, scale, b1, b2, lat](double s1, double s2, Quaternion& f, Quaternion& fx, Quaternion& fy) {
            cd z = s1 * lat.tau1 + s2 * lat.tau2;
            double x = z.real(), y = z.imag();
            f = detail::product_torus_f(a, b, scale, b1 * x, b2 * y);
            fx = Quaternion::i() * exp_i(b1 * x) * scale;
            fy = Quaternion::j() * (Quaternion::i() * exp_i(b2 * y)) * scale;
        };
        return spec;
    }

    if (kind == SurfaceKind::hopf) {
        double z0 = get("z0", 0.0), amp = get("amp", 0.25);
        int mode = static_cast<int>(get("mode", 2));
        if (std::abs(z0) + std::abs(amp) >= 0.999) throw validation_error("hopf: curve leaves S^2 (|z0|+|amp| >= 1)");
        if (mode < 1) throw validation_error("hopf: mode must be >= 1");

        auto height = [=](double phi) { return z0 + amp * std::cos(mode * phi); };
        auto dheight = [=](double phi) { return -amp * mode * std::sin(mode * phi); };
        auto gamma = [=](double phi) {
            double h = height(phi), rr = std::sqrt(1.0 - h * h);
            return Quaternion(0, rr * std::cos(phi), rr * std::sin(phi), h);
        };
        auto dgamma = [=](double phi) {  // d/dphi, closed form
            double h = height(phi), dh = dheight(phi);
            double rr = std::sqrt(1.0 - h * h), drr = -h * dh / rr;
            return Quaternion(0, drr * std::cos(phi) - rr * std::sin(phi),
                              drr * std::sin(phi) + rr * std::cos(phi), dh);
        };

        const int M = 32768;  // dense arc-length table
        std::vector<double> cum(M + 1, 0.0);
        double dt = 2.0 * M_PI / M;
        for (int k = 0; k < M; ++k) {
            double sa = dgamma(k * dt).norm(), sb = dgamma((k + 0.5) * dt).norm(), sc = dgamma((k + 1) * dt).norm();
            cum[k + 1] = cum[k] + dt * (sa + 4 * sb + sc) / 6.0;  // Simpson
        }
        double L = cum[M];
        auto phi_at_arc = [&](double s_arc) {
            s_arc = std::fmod(s_arc, L);
            if (s_arc < 0) s_arc += L;
            auto it = std::upper_bound(cum.begin(), cum.end(), s_arc);
            int k = std::clamp(static_cast<int>(it - cum.begin()) - 1, 0, M - 1);
            double seg = cum[k + 1] - cum[k];
            double x = seg > 0 ? (s_arc - cum[k]) / seg : 0.0;
            // cubic Hermite inversion, slopes dphi/ds = 1/|gamma'(phi)|
            double p0 = k * dt, p1 = (k + 1) * dt;
            double m0 = seg / dgamma(p0).norm(), m1 = seg / dgamma(p1).norm();
            double h00 = (1 + 2 * x) * (1 - x) * (1 - x), h10 = x * (1 - x) * (1 - x);
            double h01 = x * x * (3 - 2 * x), h11 = x * x * (x - 1);
            return h00 * p0 + h10 * m0 + h01 * p1 + h11 * m1;
        };

        // horizontal lift c' = eta c, with pi(c) = conj(c) i c and left fibers.
        const int NL = 4096;
        double hstep = L / NL;
        Quaternion u0 = gamma(0.0);
        Quaternion q0 = Quaternion(-1, 0, 0, 0) + Quaternion::i() * u0;
        if (q0.norm() < 0.3) {  // u0 near -i: lift through the rotated chart
            Quaternion p = Quaternion(-1, 0, 0, 0) - Quaternion::i() * u0;
            q0 = Quaternion::j() * (p * (1.0 / p.norm()));
        }
        Quaternion c = q0 * (1.0 / q0.norm());
        auto eta_at = [&](double t_arc, const Quaternion& cq) {
            double phi = phi_at_arc(t_arc);
            Quaternion gp = dgamma(phi) * (1.0 / dgamma(phi).norm());  // unit tangent
            Quaternion w = cq * gp * cq.conj();  // = [i, eta]
            return Quaternion(0, 0, w.z * 0.5, -w.y * 0.5);
        };
        std::vector<Quaternion> cs(NL + 1);
        cs[0] = c;
        for (int k = 0; k < NL; ++k) {
            double t = k * hstep;
            auto rhs = [&](double tt, const Quaternion& cq) { return eta_at(tt, cq) * cq; };
            Quaternion k1 = rhs(t, c);
            Quaternion k2 = rhs(t + hstep / 2, c + k1 * (hstep / 2));
            Quaternion k3 = rhs(t + hstep / 2, c + k2 * (hstep / 2));
            Quaternion k4 = rhs(t + hstep, c + k3 * hstep);
            c = c + (k1 + 2 * k2 + 2 * k3 + k4) * (hstep / 6.0);
            c = c * (1.0 / c.norm());
            cs[k + 1] = c;
        }
        // monodromy: c(L) = exp(d) c(0) with d = i A + (lift defect)
        Quaternion mono = cs[NL] * cs[0].inverse();
        Quaternion d = qlog(mono);
        double A = d.x;
        double lift_defect = std::hypot(mono.y, mono.z);

        // exactly periodic part p(t) = exp(-d t/L) c(t), stored as Fourier coeffs
        Grid<Quaternion> pgrid(NL, 1);
        for (int k = 0; k < NL; ++k) pgrid.at(k, 0) = qexp(d * (-(k * hstep) / L)) * cs[k];
        auto [pa, pb] = fourier::split_channels(pgrid);
        std::vector<cd> ca(NL), cbv(NL);
        for (int k = 0; k < NL; ++k) { ca[k] = pa.at(k, 0); cbv[k] = pb.at(k, 0); }
        auto coefa = fourier::coeffs(ca);
        auto coefb = fourier::coeffs(cbv);
        // spectral derivative coefficients (unit period in t/L)
        auto dcoef = [&](std::vector<cd> cc) {
            int n = static_cast<int>(cc.size());
            for (int k = 0; k < n; ++k) {
                int ks = (k <= n / 2) ? k : k - n;
                if (2 * k == n) ks = 0;
                cc[k] *= cd(0.0, 2.0 * M_PI * ks / L);
            }
            return cc;
        };
        auto dcoefa = dcoef(coefa), dcoefb = dcoef(coefb);

        spec.lattice.tau1 = cd(L / 2.0, -A);
        spec.lattice.tau2 = cd(0.0, 2.0 * M_PI);
        spec.generator_residual = lift_defect;
        spec.eval = [=](double s1, double s2, Quaternion& f, Quaternion& fx, Quaternion& fy) {
            double t = s1 * L;                       // curve parameter
            double phi = -s1 * A + 2.0 * M_PI * s2;  // fiber angle
            double tt = t / L;
            Quaternion p = Quaternion::from_complex_pair(fourier::evaluate(coefa, tt), fourier::evaluate(coefb, tt));
            Quaternion dp = Quaternion::from_complex_pair(fourier::evaluate(dcoefa, tt), fourier::evaluate(dcoefb, tt));
            Quaternion tw = qexp(d * (t / L));
            Quaternion cq = tw * p;
            Quaternion dc = tw * (d * (1.0 / L) * p + dp);
            f = exp_i(phi) * cq;
            // z = u + i phi with u = s1 L/2: d/du = 2 d/dt at fixed phi
            fx = exp_i(phi) * (dc * 2.0);
            fy = Quaternion::i() * f;
        };
        return spec;
    }

    throw validation_error("builtin_surface: sampled kind requires explicit samples");
}

inline SurfaceSpec sampled_surface(Grid<Quaternion> samples, const TorusLattice& lat) {
    if (!lat.valid()) throw validation_error("sampled surface: degenerate lattice");
    SurfaceSpec spec;
    spec.kind = SurfaceKind::sampled;
    spec.lattice = lat;
    spec.samples = std::move(samples);
    return spec;
}

//! Build the frame grid: derivatives, normals N = fy fx^{-1}, R = -fx^{-1} fy,
//! mean curvature H from dN' = -df H, conformality residual, mask.
inline FrameGrid sample_frames(const SurfaceSpec& spec, int n1, int n2, double conf_tol = 1e-6,
                               int workers = 1) {
    if (n1 < 8 || n2 < 8) throw validation_error("sample_frames: need n1, n2 >= 8");
    FrameGrid fg;
    fg.n1 = n1;
    fg.n2 = n2;
    fg.lattice = spec.lattice;
    fg.f = Grid<Quaternion>(n1, n2);
    fg.fx = Grid<Quaternion>(n1, n2);
    fg.fy = Grid<Quaternion>(n1, n2);
    fg.N = Grid<Quaternion>(n1, n2);
    fg.R = Grid<Quaternion>(n1, n2);
    fg.H = Grid<Quaternion>(n1, n2);
    fg.conf_res = Grid<double>(n1, n2, 0.0);
    fg.mask = Grid<uint8_t>(n1, n2, 0);

    if (spec.kind == SurfaceKind::sampled) {
        Grid<Quaternion> fvals = spec.samples;
        if (fvals.n1 != n1 || fvals.n2 != n2) fvals = fourier::grid_upsample(fvals, n1, n2);
        fg.f = fvals;
        Grid<Quaternion> fu = fourier::grid_derivative(fvals, 0);
        Grid<Quaternion> fv = fourier::grid_derivative(fvals, 1);
        for (size_t i = 0; i < fg.f.size(); ++i)
            spec.lattice.to_physical(fu.v[i], fv.v[i], fg.fx.v[i], fg.fy.v[i]);
    } else {
        parallel_for(n1, workers, [&](int i1) {
            for (int i2 = 0; i2 < n2; ++i2) {
                spec.eval(static_cast<double>(i1) / n1, static_cast<double>(i2) / n2,
                          fg.f.at(i1, i2), fg.fx.at(i1, i2), fg.fy.at(i1, i2));
            }
        });
    }

    // immersion scale for the degeneracy threshold
    std::vector<double> mags(fg.f.size());
    for (size_t i = 0; i < mags.size(); ++i) mags[i] = fg.fx.v[i].norm();
    std::vector<double> sorted = mags;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    double scale = sorted[sorted.size() / 2];
    if (scale < 1e-14) throw validation_error("sample_frames: non-immersed everywhere (constant map?)");
    double thr = 1e-8 * scale;

    double max_dev = 0;
    for (size_t i = 0; i < fg.f.size(); ++i) {
        const Quaternion& fx = fg.fx.v[i];
        const Quaternion& fy = fg.fy.v[i];
        if (fx.norm() < thr || fy.norm() < thr) {
            fg.mask.v[i] = 1;
            ++fg.masked_count;
            continue;
        }
        Quaternion n = fy * fx.inverse();
        Quaternion r = -(fx.inverse() * fy);
        max_dev = std::max({max_dev, std::abs(n.norm() - 1.0), std::abs(n.w)});
        Quaternion ni = imag_part(n);
        Quaternion ri = imag_part(r);
        fg.N.v[i] = ni * (1.0 / ni.norm());
        fg.R.v[i] = ri * (1.0 / ri.norm());
        double a2 = fx.norm2(), b2 = fy.norm2(), ab = dot(fx, fy);
        double defect = std::sqrt((a2 - b2) * (a2 - b2) + 4.0 * ab * ab) / (a2 + b2);
        fg.conf_res.v[i] = defect;
        fg.max_conf_res = std::max(fg.max_conf_res, defect);
    }
    fg.max_unit_dev = max_dev;

    if (fg.masked_count > 0 && fg.masked_count * 100 > static_cast<int>(fg.f.size()))
        throw validation_error("sample_frames: " + std::to_string(fg.masked_count) +
                               " non-immersed points exceed 1% of grid");
    if (fg.max_conf_res > conf_tol)
        throw validation_error("sample_frames: conformality residual " + std::to_string(fg.max_conf_res) +
                               " exceeds tolerance " + std::to_string(conf_tol));

    // H from dN' = -df H: H = -fx^{-1} (Nx - N Ny)/2
    Grid<Quaternion> Nu = fourier::grid_derivative(fg.N, 0);
    Grid<Quaternion> Nv = fourier::grid_derivative(fg.N, 1);
    for (size_t i = 0; i < fg.f.size(); ++i) {
        if (fg.mask.v[i]) continue;
        Quaternion Nx, Ny;
        spec.lattice.to_physical(Nu.v[i], Nv.v[i], Nx, Ny);
        fg.H.v[i] = -(fg.fx.v[i].inverse() * ((Nx - fg.N.v[i] * Ny) * 0.5));
    }
    return fg;
}

//! Mapping degree of an S^2-valued grid: (1/4pi) integral of the pulled-back
//! area form. Returns the rounded integer; `drift` receives the pre-rounding
//! distance from it.
inline int degree(const Grid<Quaternion>& n, const TorusLattice& lat, double* drift = nullptr) {
    for (size_t i = 0; i < n.size(); ++i) {
        const Quaternion& a = n.v[i];
        if (std::abs(a.norm() - 1.0) > 1e-6 || std::abs(a.w) > 1e-6)
            throw validation_error("degree: input is not a unit imaginary field");
    }
    // smoothness: neighbor angular steps below pi/2
    for (int i1 = 0; i1 < n.n1; ++i1)
        for (int i2 = 0; i2 < n.n2; ++i2) {
            const Quaternion& a = n.at(i1, i2);
            for (auto [d1, d2] : {std::pair{1, 0}, std::pair{0, 1}}) {
                const Quaternion& b = n.atp(i1 + d1, i2 + d2);
                if (dot(a, b) < std::cos(M_PI / 2.0 - 1e-9))
                    throw validation_error("degree: field too rough (neighbor step >= pi/2)");
            }
        }
    Grid<Quaternion> nu = fourier::grid_derivative(n, 0);
    Grid<Quaternion> nv = fourier::grid_derivative(n, 1);
    double acc = 0;
    for (size_t i = 0; i < n.size(); ++i) {
        Quaternion nx, ny;
        lat.to_physical(nu.v[i], nv.v[i], nx, ny);
        // scalar triple product <n, nx x ny> on Im H
        const Quaternion &a = n.v[i], &b = nx, &c = ny;
        acc += a.x * (b.y * c.z - b.z * c.y) + a.y * (b.z * c.x - b.x * c.z) + a.z * (b.x * c.y - b.y * c.x);
    }
    double deg = acc / n.size() * lat.det() / (4.0 * M_PI);
    double rounded = std::round(deg);
    double dr = std::abs(deg - rounded);
    if (drift) *drift = dr;
    if (dr > 0.1) throw validation_error("degree: drift " + std::to_string(dr) +
                                         " from nearest integer; insufficient resolution");
    return static_cast<int>(rounded);
}

}  // namespace cwtori
