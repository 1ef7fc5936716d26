#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "pearls/twistor.hpp"

using namespace pearls;

namespace {

SpunNecklace toy_ring_necklace() {
    std::vector<Ball> ring;
    for (int i = 0; i < 6; ++i) {
        auto [c, s] = hex_cos_sin(i);
        Ball b;
        b.center = {c, s, dd(0.0), dd(0.0)};
        b.radius = dd(1.0) / sqrt(dd(2.0));
        ring.push_back(b);
    }
    SpunNecklace sn = ring_necklace("toy", ring);
    validate_spun(sn);
    return sn;
}

Quaternion random_quaternion(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    return {u(rng), u(rng), u(rng), u(rng)};
}

double qdist(const Quaternion& a, const Quaternion& b) {
    Quaternion d = qadd(a, {-b.x1, -b.x2, -b.x3, -b.x4});
    return std::sqrt(to_double(qnorm2(d)));
}

} // namespace

TEST_CASE("quaternion algebra is norm-multiplicative and inverts") {
    std::mt19937_64 rng(11);
    Quaternion i{0, 1, 0, 0}, j{0, 0, 1, 0}, k{0, 0, 0, 1};
    CHECK(qdist(qmul(i, j), k) < 1e-15);
    CHECK(qdist(qmul(j, i), {0, 0, 0, -1}) < 1e-15);
    for (int t = 0; t < 50; ++t) {
        Quaternion p = random_quaternion(rng), q = random_quaternion(rng);
        double lhs = std::sqrt(to_double(qnorm2(qmul(p, q))));
        double rhs = std::sqrt(to_double(qnorm2(p))) * std::sqrt(to_double(qnorm2(q)));
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
        CHECK(qdist(qmul(p, qinv(p)), {1, 0, 0, 0}) < 1e-13);
    }
}

TEST_CASE("unit-sphere inversion as a quaternionic anti-Moebius map") {
    QMoebius m = inversion_as_qmoebius(sphere_from_center_radius({0, 0, 0, 0}, 1.0));
    CHECK(m.conjugating);
    CHECK(to_double(m.a.x1) == 0.0);
    CHECK(to_double(m.b.x1) == 1.0);
    CHECK(to_double(m.c.x1) == 1.0);
    CHECK(to_double(m.d.x1) == 0.0);
    Point4 img = apply_qmoebius(m, Point4(2, 0, 0, 0));
    CHECK(img.x[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(apply_qmoebius(m, Point4(0, 0, 0, 0)).infinite);

    // points of the sphere are fixed
    Point4 fixed = apply_qmoebius(m, Point4(0.6, 0.8, 0, 0));
    CHECK(fixed.x[0] == doctest::Approx(0.6).epsilon(1e-10));
    CHECK(fixed.x[1] == doctest::Approx(0.8).epsilon(1e-10));

    InversiveSphere h;
    h.v[0] = dd(1.0); // hyperplane x1 = 0
    CHECK_THROWS_AS(inversion_as_qmoebius(h), Error);
}

TEST_CASE("quaternionic and Lorentz inversions agree pointwise") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    InversiveSphere s = sphere_from_center_radius({0.5, -1.0, 2.0, 0.25}, 1.5);
    QMoebius qm = inversion_as_qmoebius(s);
    MoebiusMap lm = inversion_in(s);
    for (int t = 0; t < 100; ++t) {
        Point4 p(u(rng), u(rng), u(rng), u(rng));
        Point4 a = apply_qmoebius(qm, p);
        Point4 b = apply(lm, p);
        REQUIRE(a.infinite == b.infinite);
        if (a.infinite) continue;
        for (int k = 0; k < 4; ++k) CHECK(a.x[k] == doctest::Approx(b.x[k]).epsilon(1e-9));
    }
}

TEST_CASE("even words compose with the expected flag bookkeeping") {
    SpunNecklace sn = toy_ring_necklace();
    GeneratorSet gens = generators_from_necklace(sn);

    CHECK_THROWS_AS(even_word_to_qmoebius({0, 1, 2}, gens), Error);

    QMoebius id = even_word_to_qmoebius({}, gens);
    CHECK_FALSE(id.conjugating);
    CHECK(to_double(id.a.x1) == 1.0);
    CHECK(to_double(id.b.x1) == 0.0);

    // I_j I_j = identity up to scale: check pointwise
    QMoebius jj = even_word_to_qmoebius({2, 2}, gens);
    CHECK_FALSE(jj.conjugating);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 20; ++t) {
        Point4 p(u(rng), u(rng), u(rng), u(rng));
        Point4 q = apply_qmoebius(jj, p);
        for (int k = 0; k < 4; ++k) CHECK(q.x[k] == doctest::Approx(p.x[k]).epsilon(1e-10));
    }

    // flag parity equals word-length parity
    QMoebius one = inversion_as_qmoebius(gens.raw_balls[0]);
    QMoebius two = qcompose(one, inversion_as_qmoebius(gens.raw_balls[2]));
    CHECK(one.conjugating);
    CHECK_FALSE(two.conjugating);
    CHECK(qcompose(two, one).conjugating);

    // random even word agrees pointwise with the Lorentz path
    Word w = {0, 2, 4, 1, 3, 5};
    QMoebius qw = even_word_to_qmoebius(w, gens);
    for (int t = 0; t < 50; ++t) {
        Point4 p(u(rng), u(rng), u(rng), u(rng));
        Point4 a = apply_qmoebius(qw, p);
        Point4 b = apply_word_pointwise(w, gens, p);
        REQUIRE(a.infinite == b.infinite);
        if (a.infinite) continue;
        CHECK(chordal_distance(a, b) < 1e-8);
    }
}

TEST_CASE("complex embedding is multiplicative and rejects anti-maps") {
    QMoebius m;
    m.a = {0, 0, 1, 0}; // j
    m.d = {1, 0, 0, 0};
    Matrix4c e = qmoebius_to_complex4(m);
    CHECK(e[0][0] == std::complex<double>(0, 0));
    CHECK(e[0][1] == std::complex<double>(1, 0));
    CHECK(e[1][0] == std::complex<double>(-1, 0));
    CHECK(e[1][1] == std::complex<double>(0, 0));
    CHECK(e[2][2] == std::complex<double>(1, 0));
    CHECK(e[3][3] == std::complex<double>(1, 0));

    std::mt19937_64 rng(14);
    for (int t = 0; t < 100; ++t) {
        QMoebius p, q;
        p.a = random_quaternion(rng); p.b = random_quaternion(rng);
        p.c = random_quaternion(rng); p.d = random_quaternion(rng);
        q.a = random_quaternion(rng); q.b = random_quaternion(rng);
        q.c = random_quaternion(rng); q.d = random_quaternion(rng);
        Matrix4c lhs = qmoebius_to_complex4(qcompose(p, q));
        Matrix4c ep = qmoebius_to_complex4(p), eq = qmoebius_to_complex4(q);
        for (int r = 0; r < 4; ++r)
            for (int c = 0; c < 4; ++c) {
                std::complex<double> acc = 0.0;
                for (int k = 0; k < 4; ++k) acc += ep[r][k] * eq[k][c];
                CHECK(std::abs(acc - lhs[r][c]) < 1e-9);
            }
    }

    QMoebius anti;
    anti.conjugating = true;
    CHECK_THROWS_AS(qmoebius_to_complex4(anti), Error);
}

TEST_CASE("twistor projection charts and fibers") {
    ProjectivePoint p;
    p.z = {std::complex<double>(1, 0), {0, 0}, {0, 0}, {0, 0}};
    CHECK(twistor_project(p).infinite);
    ProjectivePoint q;
    q.z = {std::complex<double>(0, 0), {0, 0}, {1, 0}, {0, 0}};
    Point4 zero = twistor_project(q);
    for (int k = 0; k < 4; ++k) CHECK(zero.x[k] == doctest::Approx(0.0));

    // all complex combinations of p and p*j project to the same base point
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 50; ++t) {
        ProjectivePoint v;
        for (int k = 0; k < 4; ++k) v.z[k] = {u(rng), u(rng)};
        v.normalize();
        Point4 base = twistor_project(v);
        ProjectivePoint vj = right_multiply_j(v);
        for (int s = 0; s < 3; ++s) {
            std::complex<double> alpha(u(rng), u(rng)), beta(u(rng), u(rng));
            ProjectivePoint mix;
            for (int k = 0; k < 4; ++k) mix.z[k] = alpha * v.z[k] + beta * vj.z[k];
            mix.normalize();
            CHECK(chordal_distance(twistor_project(mix), base) < 1e-10);
        }
    }
}

TEST_CASE("projective normalization fixes scale and phase") {
    ProjectivePoint p;
    p.z = {std::complex<double>(0, 0), {0, 3}, {1, -2}, {0.5, 0}};
    p.normalize();
    double n = 0.0;
    for (auto& c : p.z) n += std::norm(c);
    CHECK(n == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(p.z[1].imag() == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(p.z[1].real() > 0.0);
}

TEST_CASE("equivariance on the toy ring") {
    SpunNecklace sn = toy_ring_necklace();
    GeneratorSet gens = generators_from_necklace(sn);
    CHECK(equivariance_check({}, gens, 10) == 0.0);
    // orthogonal neighbours
    CHECK(equivariance_check({0, 1}, gens, 100) <= 1e-8);
    // a longer mixed word
    CHECK(equivariance_check({0, 2, 4, 1}, gens, 100) <= 1e-8);
}

TEST_CASE("lifted maps preserve fibers and the right-j intertwiner") {
    SpunNecklace sn = toy_ring_necklace();
    GeneratorSet gens = generators_from_necklace(sn);
    Word w = {0, 2};
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        ProjectivePoint v;
        for (int k = 0; k < 4; ++k) v.z[k] = {u(rng), u(rng)};
        v.normalize();
        Point4 base_img = apply_word_pointwise(w, gens, twistor_project(v));

        // 3 points on the fiber through v all map into the fiber over w.x
        ProjectivePoint vj = right_multiply_j(v);
        for (int s = 0; s < 3; ++s) {
            std::complex<double> alpha(u(rng), u(rng)), beta(u(rng), u(rng));
            ProjectivePoint mix;
            for (int k = 0; k < 4; ++k) mix.z[k] = alpha * v.z[k] + beta * vj.z[k];
            mix.normalize();
            Point4 lifted = apply_lift(w, gens, mix);
            CHECK(chordal_distance(lifted, base_img) < 1e-9);
        }

        // M(v j) and (M v) j span the same projective point
        ProjectivePoint img, img_j;
        apply_lift(w, gens, v, &img);
        apply_lift(w, gens, vj, &img_j);
        CHECK(fubini_study_distance(img_j, right_multiply_j(img)) < 1e-9);
    }
}
