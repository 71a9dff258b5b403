#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cwtori/quaternion.hpp"

using namespace cwtori;

namespace {

std::mt19937 rng(12345);

Quaternion random_quat(double scale = 1.0) {
    std::uniform_real_distribution<double> d(-scale, scale);
    return {d(rng), d(rng), d(rng), d(rng)};
}

QMat2 random_qmat() { return {random_quat(), random_quat(), random_quat(), random_quat()}; }

QVec2 random_qvec() { return {random_quat(), random_quat()}; }

}  // namespace

TEST_CASE("Hamilton product basics") {
    CHECK((Quaternion::i() * Quaternion::j() - Quaternion::k()).norm() == 0.0);
    CHECK((Quaternion::j() * Quaternion::i() + Quaternion::k()).norm() == 0.0);

    Quaternion q{1, 2, -1, 0};
    CHECK((q * q.inverse() - Quaternion::one()).norm() < 1e-14);

    for (int t = 0; t < 50; ++t) {
        Quaternion q2 = random_quat(3.0);
        if (q2.norm() < 1e-8) continue;
        CHECK(std::abs(q2.norm() * q2.inverse().norm() - 1.0) < 1e-12);
    }
}

TEST_CASE("multiplication associativity on random triples") {
    for (int t = 0; t < 100; ++t) {
        Quaternion a = random_quat(), b = random_quat(), c = random_quat();
        CHECK(((a * b) * c - a * (b * c)).norm() < 1e-13);
    }
}

TEST_CASE("QVec2 right module and QMat2 left action") {
    for (int t = 0; t < 50; ++t) {
        QVec2 v = random_qvec();
        Quaternion p = random_quat(), q = random_quat();
        QVec2 lhs = (v * p) * q;
        QVec2 rhs = v * (p * q);
        CHECK((lhs - rhs).norm() < 1e-12);

        QMat2 M = random_qmat(), N = random_qmat();
        QVec2 a = (M * N) * v;
        QVec2 b = M * (N * v);
        CHECK((a - b).norm() < 1e-11);
    }
}

TEST_CASE("complexify splitting convention") {
    CVec4 u = complexify({Quaternion{1, 0, 2, 0}, Quaternion::i()});
    CHECK(std::abs(u(0) - cd(1, 0)) < 1e-15);
    CHECK(std::abs(u(1) - cd(2, 0)) < 1e-15);
    CHECK(std::abs(u(2) - cd(0, 1)) < 1e-15);
    CHECK(std::abs(u(3) - cd(0, 0)) < 1e-15);

    CVec4 w = complexify({Quaternion::j(), Quaternion::zero()});
    CHECK((w - CVec4(0, 1, 0, 0)).norm() < 1e-15);
}

TEST_CASE("complexify is C-linear for the right i action and bijective") {
    for (int t = 0; t < 50; ++t) {
        QVec2 v = random_qvec();
        CVec4 a = complexify(v * Quaternion::i());
        CVec4 b = cd(0, 1) * complexify(v);
        CHECK((a - b).norm() < 1e-14);

        QVec2 back = decomplexify(complexify(v));
        CHECK((back - v).norm() < 1e-15);
    }
}

TEST_CASE("embed_qmat is an algebra homomorphism") {
    CHECK((embed_qmat(QMat2::identity()) - CMat4::Identity()).norm() < 1e-15);

    QMat2 jj{Quaternion::j(), {}, {}, Quaternion::j()};
    CMat4 e = embed_qmat(jj);
    CMat2 blk;
    blk << 0, -1, 1, 0;
    CHECK((e.block<2, 2>(0, 0) - blk).norm() < 1e-15);
    CHECK((e.block<2, 2>(2, 2) - blk).norm() < 1e-15);
    CHECK(e.block<2, 2>(0, 2).norm() < 1e-15);

    for (int t = 0; t < 50; ++t) {
        QMat2 M = random_qmat(), N = random_qmat();
        CMat4 lhs = embed_qmat(M) * embed_qmat(N);
        CMat4 rhs = embed_qmat(M * N);
        CHECK((lhs - rhs).norm() < 1e-12);
        QVec2 v = random_qvec();
        CHECK((embed_qmat(M) * complexify(v) - complexify(M * v)).norm() < 1e-12);
    }
}

TEST_CASE("embed of unit-norm diagonal matrices is unitary") {
    for (int t = 0; t < 25; ++t) {
        Quaternion p = random_quat(), q = random_quat();
        p = p * (1.0 / p.norm());
        q = q * (1.0 / q.norm());
        CMat4 e = embed_qmat({p, {}, {}, q});
        CHECK((e * e.adjoint() - CMat4::Identity()).norm() < 1e-10);
        CHECK(std::abs(std::abs(e.determinant()) - 1.0) < 1e-10);
    }
}

TEST_CASE("apply_j realizes right multiplication by j") {
    CHECK((apply_j(CVec4(1, 0, 0, 0)) - CVec4(0, 1, 0, 0)).norm() < 1e-15);

    for (int t = 0; t < 50; ++t) {
        QVec2 v = random_qvec();
        CVec4 c = complexify(v);
        CHECK((apply_j(c) - complexify(v * Quaternion::j())).norm() < 1e-14);
        CHECK((apply_j(apply_j(c)) + c).norm() < 1e-14);

        QMat2 M = random_qmat();
        CVec4 a = apply_j(embed_qmat(M) * c);
        CVec4 b = embed_qmat(M) * apply_j(c);
        CHECK((a - b).norm() < 1e-12);
    }
}

TEST_CASE("j_conjugate matches the antilinear sandwich") {
    for (int t = 0; t < 25; ++t) {
        QMat2 M = random_qmat();
        CMat4 e = embed_qmat(M);
        // quaternionic matrices commute with the j-structure
        CHECK((j_conjugate(e) - e).norm() < 1e-12);
    }
}
