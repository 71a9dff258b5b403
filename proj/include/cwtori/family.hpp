#pragma once

#include <cmath>

#include "cwtori/moebius.hpp"

namespace cwtori {

//! The mu-dependent connection 1-form Omega(mu) = (mu-1) P + (mu^{-1}-1) M per
//! direction, with P/M the (1,0)/(0,1) projections of the complexified A_circ
//! (or Q_circ for the dual family). Evaluation at any mu is O(1) per point.
struct MuForm {
    int n1 = 0, n2 = 0;
    TorusLattice lattice;
    Grid<CMat4> P_x, P_y, M_x, M_y;
    Grid<uint8_t> mask;

    CMat4 omega_x(size_t i, cd mu) const { return (mu - 1.0) * P_x.v[i] + (1.0 / mu - 1.0) * M_x.v[i]; }
    CMat4 omega_y(size_t i, cd mu) const { return (mu - 1.0) * P_y.v[i] + (1.0 / mu - 1.0) * M_y.v[i]; }
    //! Contraction with a physical direction vector.
    CMat4 omega_dir(size_t i, cd dir, cd mu) const {
        return dir.real() * omega_x(i, mu) + dir.imag() * omega_y(i, mu);
    }
};

//! Primal family: nabla + (mu-1) A^(1,0) + (mu^{-1}-1) A^(0,1) with the
//! left projectors (1 -+ i S)/2.
inline MuForm connection_form(const CircleGrid& cg, const SphereCongruenceGrid& sg, const FrameGrid& fg) {
    MuForm mf;
    mf.n1 = fg.n1;
    mf.n2 = fg.n2;
    mf.lattice = fg.lattice;
    mf.mask = fg.mask;
    for (auto* g : {&mf.P_x, &mf.P_y, &mf.M_x, &mf.M_y}) *g = Grid<CMat4>(fg.n1, fg.n2, CMat4::Zero());
    for (size_t i = 0; i < sg.S.size(); ++i) {
        if (fg.mask.v[i]) continue;
        CMat4 S = embed_qmat(sg.S.v[i]);
        CMat4 pl = 0.5 * (CMat4::Identity() - cd(0, 1) * S);
        CMat4 mn = 0.5 * (CMat4::Identity() + cd(0, 1) * S);
        CMat4 Ax = embed_qmat(cg.A_x.v[i]), Ay = embed_qmat(cg.A_y.v[i]);
        mf.P_x.v[i] = pl * Ax;
        mf.P_y.v[i] = pl * Ay;
        mf.M_x.v[i] = mn * Ax;
        mf.M_y.v[i] = mn * Ay;
    }
    return mf;
}

//! Dual family built from Q_circ with right projectors Q (1 -+ i S)/2.
inline MuForm dual_family(const CircleGrid& cg, const SphereCongruenceGrid& sg, const FrameGrid& fg) {
    MuForm mf;
    mf.n1 = fg.n1;
    mf.n2 = fg.n2;
    mf.lattice = fg.lattice;
    mf.mask = fg.mask;
    for (auto* g : {&mf.P_x, &mf.P_y, &mf.M_x, &mf.M_y}) *g = Grid<CMat4>(fg.n1, fg.n2, CMat4::Zero());
    for (size_t i = 0; i < sg.S.size(); ++i) {
        if (fg.mask.v[i]) continue;
        CMat4 S = embed_qmat(sg.S.v[i]);
        CMat4 pl = 0.5 * (CMat4::Identity() - cd(0, 1) * S);
        CMat4 mn = 0.5 * (CMat4::Identity() + cd(0, 1) * S);
        CMat4 Qx = embed_qmat(cg.Q_x.v[i]), Qy = embed_qmat(cg.Q_y.v[i]);
        mf.P_x.v[i] = Qx * pl;
        mf.P_y.v[i] = Qy * pl;
        mf.M_x.v[i] = Qx * mn;
        mf.M_y.v[i] = Qy * mn;
    }
    return mf;
}

//! Gauge between the primal and dual families: G(mu) = (mu+1) - i(mu-1) S.
//! Never singular on C_*; the condition number is still reported via *cond.
inline CMat4 gauge_matrix(const SphereCongruenceGrid& sg, cd mu, int i1, int i2, double* cond = nullptr) {
    CMat4 S = embed_qmat(sg.S.at(i1, i2));
    CMat4 G = (mu + 1.0) * CMat4::Identity() - cd(0, 1) * (mu - 1.0) * S;
    Eigen::JacobiSVD<CMat4> svd(G);
    double c = svd.singularValues()(0) / std::max(1e-300, svd.singularValues()(3));
    if (cond) *cond = c;
    if (c > 1e12) throw validation_error("gauge_matrix: singular gauge, condition " + std::to_string(c));
    return G;
}

namespace detail {

inline Grid<CMat4> upsample_mat_grid(const Grid<CMat4>& g, int m1, int m2) {
    Grid<CMat4> out(m1, m2, CMat4::Zero());
    Grid<cd> chan(g.n1, g.n2);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            for (size_t i = 0; i < g.size(); ++i) chan.v[i] = g.v[i](r, c);
            Grid<cd> up = fourier::grid_upsample(chan, m1, m2);
            for (size_t i = 0; i < up.size(); ++i) out.v[i](r, c) = up.v[i];
        }
    return out;
}

//! One RK4 step of T' = -C(t) T over a unit parameter interval, from
//! coefficient samples at the start, midpoint and end of the edge.
inline CMat4 rk4_edge(const CMat4& C0, const CMat4& Cm, const CMat4& C1) {
    CMat4 I = CMat4::Identity();
    CMat4 k1 = -C0;
    CMat4 k2 = -Cm * (I + 0.5 * k1);
    CMat4 k3 = -Cm * (I + 0.5 * k2);
    CMat4 k4 = -C1 * (I + k3);
    return I + (k1 + 2.0 * k2 + 2.0 * k3 + k4) / 6.0;
}

}  // namespace detail

//! Max over grid cells of ||RK4 holonomy around the cell - Id|| / cell area.
inline double flatness_residual(const MuForm& mf, cd mu) {
    const int n1 = mf.n1, n2 = mf.n2;
    const cd t1 = mf.lattice.tau1 / static_cast<double>(n1);
    const cd t2 = mf.lattice.tau2 / static_cast<double>(n2);
    const double cell_area = mf.lattice.area() / (n1 * n2);

    Grid<CMat4> Px = detail::upsample_mat_grid(mf.P_x, 2 * n1, 2 * n2);
    Grid<CMat4> Py = detail::upsample_mat_grid(mf.P_y, 2 * n1, 2 * n2);
    Grid<CMat4> Mx = detail::upsample_mat_grid(mf.M_x, 2 * n1, 2 * n2);
    Grid<CMat4> My = detail::upsample_mat_grid(mf.M_y, 2 * n1, 2 * n2);
    auto C = [&](int r1, int r2, cd dir) {  // refined-grid indices
        size_t i = Px.idx(Grid<CMat4>::wrap(r1, 2 * n1), Grid<CMat4>::wrap(r2, 2 * n2));
        CMat4 ox = (mu - 1.0) * Px.v[i] + (1.0 / mu - 1.0) * Mx.v[i];
        CMat4 oy = (mu - 1.0) * Py.v[i] + (1.0 / mu - 1.0) * My.v[i];
        return CMat4(dir.real() * ox + dir.imag() * oy);
    };
    double worst = 0;
    for (int i1 = 0; i1 < n1; ++i1)
        for (int i2 = 0; i2 < n2; ++i2) {
            bool ok = mf.mask.at(i1, i2) == 0 && mf.mask.atp(i1 + 1, i2) == 0 &&
                      mf.mask.atp(i1, i2 + 1) == 0 && mf.mask.atp(i1 + 1, i2 + 1) == 0;
            if (!ok) continue;
            int r1 = 2 * i1, r2 = 2 * i2;
            CMat4 e1 = detail::rk4_edge(C(r1, r2, t1), C(r1 + 1, r2, t1), C(r1 + 2, r2, t1));
            CMat4 e2 = detail::rk4_edge(C(r1 + 2, r2, t2), C(r1 + 2, r2 + 1, t2), C(r1 + 2, r2 + 2, t2));
            CMat4 e3 = detail::rk4_edge(C(r1 + 2, r2 + 2, -t1), C(r1 + 1, r2 + 2, -t1), C(r1, r2 + 2, -t1));
            CMat4 e4 = detail::rk4_edge(C(r1, r2 + 2, -t2), C(r1, r2 + 1, -t2), C(r1, r2, -t2));
            CMat4 loop = e4 * e3 * e2 * e1;
            worst = std::max(worst, (loop - CMat4::Identity()).norm() / cell_area);
        }
    return worst;
}

//! Max pointwise norm of Omega(1/conj(mu)) - j^{-1} Omega(mu) j; zero by
//! construction of the projectors, kept as a regression guard.
inline double symmetry_residual(const MuForm& mf, cd mu) {
    cd mu_sym = 1.0 / std::conj(mu);
    double worst = 0;
    for (size_t i = 0; i < mf.P_x.size(); ++i) {
        if (mf.mask.v[i]) continue;
        worst = std::max(worst, (mf.omega_x(i, mu_sym) - j_conjugate(mf.omega_x(i, mu))).norm());
        worst = std::max(worst, (mf.omega_y(i, mu_sym) - j_conjugate(mf.omega_y(i, mu))).norm());
    }
    return worst;
}

}  // namespace cwtori
