#pragma once

// Conformal geometry of S^4 = R^4 u {oo} in inversive coordinates: a round
// 3-sphere with center c and radius r is the unit-Minkowski-norm vector
//
//     s = ( c/r,  (|c|^2 - r^2 - 1) / 2r,  (|c|^2 - r^2 + 1) / 2r )
//
// in R^{5,1} with signature (+,+,+,+,+,-).  A point x maps to the light
// vector p(x) = (x, (|x|^2-1)/2, (|x|^2+1)/2), with oo = (0,0,0,0,1,1).
// Moebius transformations are Lorentz matrices acting linearly; inversion in
// s is the Lorentz reflection v -> v - 2<v,s>s.
//
// Sign convention: sphere vectors are canonicalized so that s[5]-s[4] = 1/r
// is positive ("interior-positive" orientation).  With that, the inversive
// product reported by pair_inner is (d^2 - r1^2 - r2^2)/(2 r1 r2), i.e. 0 for
// orthogonal, +1 for externally tangent and > 1 for disjoint pairs.

#include <array>
#include <optional>

#include "pearls/dd.hpp"
#include "pearls/error.hpp"

namespace pearls {

struct Point4 {
    std::array<double, 4> x{0.0, 0.0, 0.0, 0.0};
    bool infinite = false;

    Point4() = default;
    Point4(double a, double b, double c, double d) : x{a, b, c, d} {}
    static Point4 infinity() {
        Point4 p;
        p.infinite = true;
        return p;
    }
};

double distance(const Point4& a, const Point4& b); // Euclidean; oo handled as +inf

using Vec4dd = std::array<dd, 4>;
using Vec6dd = std::array<dd, 6>;

// Full-precision center/radius carrier used throughout construction code.
struct Ball {
    Vec4dd center{};
    dd radius{0.0};
};

Vec4dd vec4_of(const Point4& p);
Point4 point_of(const Vec4dd& v);

struct LightVector {
    Vec6dd v{};
};

struct InversiveSphere {
    Vec6dd v{};
};

struct MoebiusMap {
    std::array<Vec6dd, 6> m{}; // rows
    int parity = 1;            // +1 even, -1 odd (single reflection)
};

enum class PairClass { Orthogonal, Tangent, Disjoint, Overlapping, Equal };
const char* pair_class_name(PairClass c);

// <a,b> with signature (+,+,+,+,+,-), evaluated in dd
dd minkowski(const Vec6dd& a, const Vec6dd& b);

LightVector light_of(const Point4& p);
Point4 point_of(const LightVector& lv); // documented threshold 1e-14 for the oo chart

InversiveSphere sphere_from_center_radius(const Point4& c, double r);
InversiveSphere sphere_from_ball(const Ball& b);
std::pair<Point4, double> center_radius_of(const InversiveSphere& s); // NotABall for hyperplanes
Ball ball_of(const InversiveSphere& s);                               // dd-precision variant
bool is_hyperplane(const InversiveSphere& s);

// (d^2 - r1^2 - r2^2) / (2 r1 r2) for ball pairs; -<s1,s2> in general
double pair_inner(const InversiveSphere& a, const InversiveSphere& b);
dd pair_inner_dd(const InversiveSphere& a, const InversiveSphere& b);
dd pair_inner_dd(const Ball& a, const Ball& b);

PairClass classify_pair(const InversiveSphere& a, const InversiveSphere& b, double tau = 1e-6);
PairClass classify_pair(const Ball& a, const Ball& b, double tau = 1e-6);

MoebiusMap identity_map();
MoebiusMap inversion_in(const InversiveSphere& s);
MoebiusMap compose(const MoebiusMap& a, const MoebiusMap& b);

Point4 apply(const MoebiusMap& m, const Point4& p);
InversiveSphere map_sphere(const MoebiusMap& m, const InversiveSphere& s);
Ball map_ball(const MoebiusMap& m, const Ball& b);

// max |a_ij - b_ij|
double matrix_distance(const MoebiusMap& a, const MoebiusMap& b);
// max_ij |(L^T J L - J)_ij|, the Lorentz-condition residual
double lorentz_residual(const MoebiusMap& m);

// R_theta(x) = (x1, x2, x3 cos(theta), x3 sin(theta)); requires x3 >= 0
Point4 spin_point(const Point4& x, double theta);
InversiveSphere spin_sphere(const InversiveSphere& s, double theta); // center must have x4 = 0

// exact dd cosine/sine of 2*pi*i/6 (i mod 6)
std::pair<dd, dd> hex_cos_sin(int i);
Ball spin_ball(const Ball& b, dd cos_theta, dd sin_theta);

} // namespace pearls
