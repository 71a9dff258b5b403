#pragma once

#include <cmath>
#include <optional>
#include <string>

#include "cwtori/errors.hpp"
#include "cwtori/fourier.hpp"
#include "cwtori/surface.hpp"

namespace cwtori {

//! Ad of the chart frame G = [[1, f], [0, 1]]: G M G^{-1}.
inline QMat2 ad_chart(const Quaternion& f, const QMat2& m) {
    Quaternion a = m.a + f * m.c;
    Quaternion b = m.b + f * m.d;
    return {a, b - a * f, m.c, m.d - m.c * f};
}

//! Mean curvature sphere congruence S with S^2 = -Id and S L = L.
struct SphereCongruenceGrid {
    Grid<QMat2> S;
};

//! Hopf fields of S as 1-forms (per-direction values), the auxiliary chart
//! differentials they were assembled from, and the w form.
struct HopfGrid {
    Grid<QMat2> A_x, A_y, Q_x, Q_y;
    Grid<Quaternion> w_x, w_y;
    Grid<Quaternion> dNpp_x, dNpp_y;  // dN'' components
    Grid<Quaternion> dRpp_x, dRpp_y;  // dR'' components
    Grid<Quaternion> dH_x, dH_y;
};

//! Lagrange multiplier policy. `HarmonicInfinity` picks eta_hat = -w - dH,
//! the multiplier with im(Q_circ) = infinity (left normal harmonic).
struct EtaPolicy {
    enum class Kind { Zero, CmcRho, Custom, HarmonicInfinity } kind = Kind::Zero;
    enum class Ambient { R3, S3 } ambient = Ambient::S3;
    double rho = 0.0;
    std::optional<Grid<Quaternion>> eta_x, eta_y;  // Custom: eta_hat components

    static EtaPolicy zero() { return {}; }
    static EtaPolicy cmc(double rho, Ambient amb = Ambient::S3) {
        EtaPolicy p;
        p.kind = Kind::CmcRho;
        p.rho = rho;
        p.ambient = amb;
        return p;
    }
    static EtaPolicy harmonic_infinity() {
        EtaPolicy p;
        p.kind = Kind::HarmonicInfinity;
        return p;
    }
    static EtaPolicy custom(Grid<Quaternion> ex, Grid<Quaternion> ey) {
        EtaPolicy p;
        p.kind = Kind::Custom;
        p.eta_x = std::move(ex);
        p.eta_y = std::move(ey);
        return p;
    }
};

//! Modified Hopf fields A_circ, Q_circ with 2*A_circ = 2*A + eta, plus the
//! starred closed forms themselves (the objects d-nabla annihilates).
struct CircleGrid {
    Grid<QMat2> A_x, A_y, Q_x, Q_y;   // A_circ, Q_circ per direction
    Grid<QMat2> sA_x, sA_y;           // *A_circ
    Grid<QMat2> sQ_x, sQ_y;           // *Q_circ
};

inline SphereCongruenceGrid mean_curvature_sphere(const FrameGrid& fg) {
    SphereCongruenceGrid sg;
    sg.S = Grid<QMat2>(fg.n1, fg.n2);
    for (size_t i = 0; i < fg.f.size(); ++i) {
        if (fg.mask.v[i]) continue;
        sg.S.v[i] = ad_chart(fg.f.v[i], {fg.N.v[i], {}, fg.H.v[i], -fg.R.v[i]});
    }
    return sg;
}

inline HopfGrid hopf_fields(const FrameGrid& fg, const SphereCongruenceGrid&) {
    const int n1 = fg.n1, n2 = fg.n2;
    HopfGrid hg;
    for (auto* g : {&hg.A_x, &hg.A_y, &hg.Q_x, &hg.Q_y}) *g = Grid<QMat2>(n1, n2);
    for (auto* g : {&hg.w_x, &hg.w_y, &hg.dNpp_x, &hg.dNpp_y, &hg.dRpp_x, &hg.dRpp_y, &hg.dH_x, &hg.dH_y})
        *g = Grid<Quaternion>(n1, n2);

    Grid<Quaternion> Nu = fourier::grid_derivative(fg.N, 0), Nv = fourier::grid_derivative(fg.N, 1);
    Grid<Quaternion> Ru = fourier::grid_derivative(fg.R, 0), Rv = fourier::grid_derivative(fg.R, 1);
    Grid<Quaternion> Hu = fourier::grid_derivative(fg.H, 0), Hv = fourier::grid_derivative(fg.H, 1);

    for (size_t i = 0; i < fg.f.size(); ++i) {
        if (fg.mask.v[i]) continue;
        Quaternion Nx, Ny, Rx, Ry, Hx, Hy;
        fg.lattice.to_physical(Nu.v[i], Nv.v[i], Nx, Ny);
        fg.lattice.to_physical(Ru.v[i], Rv.v[i], Rx, Ry);
        fg.lattice.to_physical(Hu.v[i], Hv.v[i], Hx, Hy);
        const Quaternion &N = fg.N.v[i], &R = fg.R.v[i], &H = fg.H.v[i], &f = fg.f.v[i];

        Quaternion dNpp_x = (Nx + N * Ny) * 0.5, dNpp_y = (Ny - N * Nx) * 0.5;
        Quaternion dRpp_x = (Rx + R * Ry) * 0.5, dRpp_y = (Ry - R * Rx) * 0.5;
        Quaternion w_x = (-Hx - R * Hy + H * dNpp_y) * 0.5;
        Quaternion w_y = (-Hy + R * Hx - H * dNpp_x) * 0.5;

        hg.dNpp_x.v[i] = dNpp_x; hg.dNpp_y.v[i] = dNpp_y;
        hg.dRpp_x.v[i] = dRpp_x; hg.dRpp_y.v[i] = dRpp_y;
        hg.dH_x.v[i] = Hx; hg.dH_y.v[i] = Hy;
        hg.w_x.v[i] = w_x; hg.w_y.v[i] = w_y;

        // 2*A = Ad G [[0,0],[w, dR'']], 2*Q = Ad G [[dN'',0],[w+dH,0]]
        QMat2 sA_x = ad_chart(f, {{}, {}, w_x, dRpp_x}) * 0.5;
        QMat2 sA_y = ad_chart(f, {{}, {}, w_y, dRpp_y}) * 0.5;
        QMat2 sQ_x = ad_chart(f, {dNpp_x, {}, w_x + Hx, {}}) * 0.5;
        QMat2 sQ_y = ad_chart(f, {dNpp_y, {}, w_y + Hy, {}}) * 0.5;
        // A = -*(*A): A_x = -(*A)_y, A_y = (*A)_x
        hg.A_x.v[i] = -sA_y; hg.A_y.v[i] = sA_x;
        hg.Q_x.v[i] = -sQ_y; hg.Q_y.v[i] = sQ_x;
    }
    return hg;
}

namespace detail {

//! Mean curvature of an S^3 surface: H = (Hs3 - R) f^{-1}. Returns the max
//! deviation of H f + R from a real constant.
inline double cmc_s3_drift(const FrameGrid& fg, double* hs3_out) {
    double sum = 0;
    int cnt = 0;
    for (size_t i = 0; i < fg.f.size(); ++i) {
        if (fg.mask.v[i]) continue;
        sum += (fg.H.v[i] * fg.f.v[i] + fg.R.v[i]).w;
        ++cnt;
    }
    double hs3 = sum / cnt;
    if (hs3_out) *hs3_out = hs3;
    double drift = 0;
    for (size_t i = 0; i < fg.f.size(); ++i) {
        if (fg.mask.v[i]) continue;
        drift = std::max(drift, std::abs(fg.f.v[i].norm() - 1.0));
        Quaternion dev = fg.H.v[i] * fg.f.v[i] + fg.R.v[i] - Quaternion(hs3, 0, 0, 0);
        drift = std::max(drift, dev.norm());
    }
    return drift;
}

inline double cmc_r3_drift(const FrameGrid& fg, double* h_out) {
    double sum = 0;
    int cnt = 0;
    for (size_t i = 0; i < fg.f.size(); ++i) {
        if (fg.mask.v[i]) continue;
        sum += fg.H.v[i].w;
        ++cnt;
    }
    double h = sum / cnt;
    if (h_out) *h_out = h;
    double re0 = fg.f.v[0].w;
    double drift = 0;
    for (size_t i = 0; i < fg.f.size(); ++i) {
        if (fg.mask.v[i]) continue;
        drift = std::max(drift, std::abs(fg.f.v[i].w - re0));              // flat 3-space
        drift = std::max(drift, (fg.N.v[i] - fg.R.v[i]).norm());           // N = R
        drift = std::max(drift, (fg.H.v[i] - Quaternion(h, 0, 0, 0)).norm());
    }
    return drift;
}

}  // namespace detail

//! Build A_circ, Q_circ for the chosen multiplier policy. The starred forms
//! come from the chart (closed forms for CmcRho); A_circ = -S (*A_circ) via
//! *A_circ = S A_circ, and Q_circ = -(*Q_circ) S via *Q_circ = Q_circ S.
inline CircleGrid apply_eta(const HopfGrid& hg, const EtaPolicy& policy, const FrameGrid& fg,
                            const SphereCongruenceGrid& sg, double cmc_tol = 1e-6) {
    const int n1 = fg.n1, n2 = fg.n2;
    CircleGrid cg;
    for (auto* g : {&cg.A_x, &cg.A_y, &cg.Q_x, &cg.Q_y, &cg.sA_x, &cg.sA_y, &cg.sQ_x, &cg.sQ_y})
        *g = Grid<QMat2>(n1, n2);

    if (policy.kind == EtaPolicy::Kind::CmcRho) {
        double drift = (policy.ambient == EtaPolicy::Ambient::S3) ? detail::cmc_s3_drift(fg, nullptr)
                                                                  : detail::cmc_r3_drift(fg, nullptr);
        if (drift > cmc_tol)
            throw validation_error("apply_eta: CMC validation failed, drift " + std::to_string(drift));
    }
    if (policy.kind == EtaPolicy::Kind::Custom) {
        if (!policy.eta_x || !policy.eta_y) throw validation_error("apply_eta: Custom policy without eta grids");
        double worst = 0;
        for (size_t i = 0; i < fg.f.size(); ++i) {
            if (fg.mask.v[i]) continue;
            const Quaternion &ex = policy.eta_x->v[i], &ey = policy.eta_y->v[i];
            // *eta_hat = -R eta_hat = eta_hat N
            worst = std::max(worst, (ey + fg.R.v[i] * ex).norm());
            worst = std::max(worst, (ey - ex * fg.N.v[i]).norm());
            worst = std::max(worst, (-ex + fg.R.v[i] * ey).norm());
        }
        double scale = 1e-12;
        for (size_t i = 0; i < fg.f.size(); ++i) scale = std::max(scale, policy.eta_x->v[i].norm());
        if (worst > 1e-6 * std::max(1.0, scale))
            throw validation_error("apply_eta: custom eta violates *eta = S eta = eta S, residual " +
                                   std::to_string(worst));
    }

    for (size_t i = 0; i < fg.f.size(); ++i) {
        if (fg.mask.v[i]) continue;
        const Quaternion& f = fg.f.v[i];
        Quaternion a_ll_x, a_ll_y;  // lower-left entry of the 2*A_circ chart matrix
        Quaternion q_ll_x, q_ll_y;  // lower-left entry of the 2*Q_circ chart matrix
        switch (policy.kind) {
            case EtaPolicy::Kind::Zero:
                a_ll_x = hg.w_x.v[i]; a_ll_y = hg.w_y.v[i];
                q_ll_x = hg.w_x.v[i] + hg.dH_x.v[i]; q_ll_y = hg.w_y.v[i] + hg.dH_y.v[i];
                break;
            case EtaPolicy::Kind::CmcRho:
                if (policy.ambient == EtaPolicy::Ambient::S3) {
                    a_ll_x = (policy.rho - 0.5) * hg.dH_x.v[i]; a_ll_y = (policy.rho - 0.5) * hg.dH_y.v[i];
                    q_ll_x = (policy.rho + 0.5) * hg.dH_x.v[i]; q_ll_y = (policy.rho + 0.5) * hg.dH_y.v[i];
                } else {  // R3: 2*A^rho = [[0,0],[rho dN'', dN'']], 2*Q^rho = [[dN'',0],[rho dN'',0]]
                    a_ll_x = policy.rho * hg.dNpp_x.v[i]; a_ll_y = policy.rho * hg.dNpp_y.v[i];
                    q_ll_x = a_ll_x; q_ll_y = a_ll_y;
                }
                break;
            case EtaPolicy::Kind::Custom:
                a_ll_x = hg.w_x.v[i] + policy.eta_x->v[i]; a_ll_y = hg.w_y.v[i] + policy.eta_y->v[i];
                q_ll_x = a_ll_x + hg.dH_x.v[i]; q_ll_y = a_ll_y + hg.dH_y.v[i];
                break;
            case EtaPolicy::Kind::HarmonicInfinity:
                a_ll_x = -hg.dH_x.v[i]; a_ll_y = -hg.dH_y.v[i];
                q_ll_x = {}; q_ll_y = {};
                break;
        }
        Quaternion dRpp_x = hg.dRpp_x.v[i], dRpp_y = hg.dRpp_y.v[i];
        Quaternion dNpp_x = hg.dNpp_x.v[i], dNpp_y = hg.dNpp_y.v[i];
        if (policy.kind == EtaPolicy::Kind::CmcRho && policy.ambient == EtaPolicy::Ambient::R3) {
            dRpp_x = dNpp_x; dRpp_y = dNpp_y;  // N = R in Im H
        }
        cg.sA_x.v[i] = ad_chart(f, {{}, {}, a_ll_x, dRpp_x}) * 0.5;
        cg.sA_y.v[i] = ad_chart(f, {{}, {}, a_ll_y, dRpp_y}) * 0.5;
        cg.sQ_x.v[i] = ad_chart(f, {dNpp_x, {}, q_ll_x, {}}) * 0.5;
        cg.sQ_y.v[i] = ad_chart(f, {dNpp_y, {}, q_ll_y, {}}) * 0.5;
        const QMat2& S = sg.S.v[i];
        cg.A_x.v[i] = -(S * cg.sA_x.v[i]);
        cg.A_y.v[i] = -(S * cg.sA_y.v[i]);
        cg.Q_x.v[i] = -(cg.sQ_x.v[i] * S);
        cg.Q_y.v[i] = -(cg.sQ_y.v[i] * S);
    }
    return cg;
}

struct WillmoreEnergy {
    double value = 0;       // A-side value (the reported energy)
    double a_side = 0, q_side = 0;
    int deg_perp = 0;
};

//! Willmore energy, normalized so that W equals the integral of the squared
//! Frobenius norm of the trace-free second fundamental form (clifford: 4 pi^2):
//! W = 4 int <A ^ *A> - 4 pi deg_perp = 4 int <Q ^ *Q> + 4 pi deg_perp.
inline WillmoreEnergy willmore_energy(const HopfGrid& hg, const FrameGrid& fg, int deg_perp) {
    double accA = 0, accQ = 0;
    int cnt = 0;
    for (size_t i = 0; i < hg.A_x.size(); ++i) {
        if (fg.mask.v[i]) continue;
        const QMat2 &Ax = hg.A_x.v[i], &Ay = hg.A_y.v[i];
        const QMat2 &Qx = hg.Q_x.v[i], &Qy = hg.Q_y.v[i];
        accA += -quarter_real_trace(Ax * Ax + Ay * Ay);
        accQ += -quarter_real_trace(Qx * Qx + Qy * Qy);
        ++cnt;
    }
    double det = fg.lattice.det();
    WillmoreEnergy we;
    we.deg_perp = deg_perp;
    we.a_side = 4.0 * accA / cnt * det - 4.0 * M_PI * deg_perp;
    we.q_side = 4.0 * accQ / cnt * det + 4.0 * M_PI * deg_perp;
    we.value = we.a_side;
    return we;
}

inline int normal_degree(const FrameGrid& fg) {
    return degree(fg.N, fg.lattice) - degree(fg.R, fg.lattice);
}

//! Max plaquette norm of the discrete exterior derivative of 2*A_circ,
//! normalized by cell area. Decays O(h^2) for genuine constrained Willmore data.
inline double el_residual(const CircleGrid& cg, const FrameGrid& fg) {
    const int n1 = fg.n1, n2 = fg.n2;
    const cd t1 = fg.lattice.tau1 / static_cast<double>(n1);
    const cd t2 = fg.lattice.tau2 / static_cast<double>(n2);
    const double cell_area = fg.lattice.area() / (n1 * n2);
    auto omega = [&](int i1, int i2, cd dir) -> QMat2 {
        size_t i = cg.sA_x.idx(Grid<QMat2>::wrap(i1, n1), Grid<QMat2>::wrap(i2, n2));
        return (cg.sA_x.v[i] * (2.0 * dir.real()) + cg.sA_y.v[i] * (2.0 * dir.imag()));
    };
    double worst = 0;
    for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2) {
            bool ok = fg.unmasked(i1, i2) && fg.mask.atp(i1 + 1, i2) == 0 &&
                      fg.mask.atp(i1, i2 + 1) == 0 && fg.mask.atp(i1 + 1, i2 + 1) == 0;
            if (!ok) continue;
            QMat2 circ = (omega(i1, i2, t1) + omega(i1 + 1, i2, t1)) * 0.5
                       + (omega(i1 + 1, i2, t2) + omega(i1 + 1, i2 + 1, t2)) * 0.5
                       - (omega(i1, i2 + 1, t1) + omega(i1 + 1, i2 + 1, t1)) * 0.5
                       - (omega(i1, i2, t2) + omega(i1, i2 + 1, t2)) * 0.5;
            worst = std::max(worst, circ.norm() / cell_area);
        }
    return worst;
}

}  // namespace cwtori
