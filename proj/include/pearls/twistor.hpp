#pragma once

// Quaternionic Moebius maps on H u {oo} = S^4 and the lift of the even-word
// subgroup to holomorphic automorphisms of P^3_C.
//
// Conventions (fixed once, all operations share them):
//   * H = C + Cj with q = z + w j and j z = conj(z) j.
//   * The complex embedding of left quaternion multiplication is
//     B(z + w j) = [[z, w], [-conj(w), conj(z)]], which is multiplicative.
//   * A C^4 point (z1, z2, z3, z4) corresponds to the quaternion pair
//     q_m = z_{2m-1} - conj(z_{2m}) j; with that, B acts on coordinate pairs
//     exactly as left multiplication acts on quaternions, fibers of the
//     projection are complex lines, and the equivariance identity
//     pi(lift(w) p) = w . pi(p) is algebraically exact.
//
// Components are stored in double-double: the trefoil necklace's quaternionic
// entries reach ~1e7 and composed words square that repeatedly, which plain
// doubles cannot carry to the 1e-7 equivariance tolerance.

#include <complex>
#include <cstdint>

#include "pearls/orbit.hpp"

namespace pearls {

struct Quaternion {
    // q = x1 + x2 i + x3 j + x4 k
    dd x1{0.0}, x2{0.0}, x3{0.0}, x4{0.0};

    Quaternion() = default;
    Quaternion(double a, double b, double c, double d) : x1(a), x2(b), x3(c), x4(d) {}
    Quaternion(dd a, dd b, dd c, dd d) : x1(a), x2(b), x3(c), x4(d) {}
};

Quaternion qmul(const Quaternion& p, const Quaternion& q);
Quaternion qconj(const Quaternion& q);
Quaternion qadd(const Quaternion& p, const Quaternion& q);
Quaternion qinv(const Quaternion& q);
dd qnorm2(const Quaternion& q);
Quaternion quaternion_of(const Point4& p); // finite points only
Point4 point_of(const Quaternion& q);

struct QMoebius {
    Quaternion a, b, c, d;
    bool conjugating = false; // true: acts on conj(q) (anti-Moebius, single reflection)
};

// I(q) = c + r^2 (conj(q) - conj(c))^-1: matrix (c, r^2-|c|^2; 1, -conj(c)),
// conjugating flag set.  NotABall for hyperplanes.
QMoebius inversion_as_qmoebius(const InversiveSphere& s);
QMoebius inversion_as_qmoebius(const Ball& b);

QMoebius qcompose(const QMoebius& f, const QMoebius& g); // f after g
Point4 apply_qmoebius(const QMoebius& m, const Point4& p);

// Composition of the generator anti-maps along an even word; OddWord otherwise.
// Words act like the Lorentz path: w = [w1..w2m] means I_{w1} after ... after I_{w2m}.
QMoebius even_word_to_qmoebius(const Word& w, const GeneratorSet& gens);

using Complex4 = std::array<std::complex<double>, 4>;
using Matrix4c = std::array<Complex4, 4>;

Matrix4c qmoebius_to_complex4(const QMoebius& m); // NotLiftable if conjugating

struct ProjectivePoint {
    Complex4 z{};
    void normalize(); // unit vector, first coordinate of modulus > 1e-8 made real positive
};

Point4 twistor_project(const ProjectivePoint& p);

// Right multiplication by j on C^4 = H^2: (v1,v2,v3,v4) -> (conj(v2), -conj(v1), conj(v4), -conj(v3)).
// Real-linear; commutes with every lifted map.  The fiber through p is the
// complex projective line spanned by p and right_multiply_j(p).
ProjectivePoint right_multiply_j(const ProjectivePoint& p);

double fubini_study_distance(const ProjectivePoint& p, const ProjectivePoint& q);
double chordal_distance(const Point4& x, const Point4& y); // round metric on S^4, via stereographic chart

// Applies the lift of even word w to p (pair by pair, numerically stable) and
// compares the projection with the pointwise sphere action on pi(p).
Point4 apply_lift(const Word& w, const GeneratorSet& gens, const ProjectivePoint& p,
                  ProjectivePoint* image = nullptr);
Point4 apply_word_pointwise(const Word& w, const GeneratorSet& gens, const Point4& x);

// Max over `samples` random projective points of the chordal deviation
// between pi(lift(w) p) and w . pi(p).  Deterministic in `seed`.
double equivariance_check(const Word& w, const GeneratorSet& gens, int samples,
                          std::uint64_t seed = 0x5eed);

} // namespace pearls
