#include "pearls/inversive.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace pearls {

const char* error_code_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidRadius: return "InvalidRadius";
        case ErrorCode::NotABall: return "NotABall";
        case ErrorCode::NotInPage: return "NotInPage";
        case ErrorCode::InvalidHalfSpace: return "InvalidHalfSpace";
        case ErrorCode::EmptyNecklace: return "EmptyNecklace";
        case ErrorCode::ConstructionInfeasible: return "ConstructionInfeasible";
        case ErrorCode::OverlapViolation: return "OverlapViolation";
        case ErrorCode::ValidationRequired: return "ValidationRequired";
        case ErrorCode::InsufficientDepth: return "InsufficientDepth";
        case ErrorCode::InvalidEpsilon: return "InvalidEpsilon";
        case ErrorCode::OddWord: return "OddWord";
        case ErrorCode::NotLiftable: return "NotLiftable";
        case ErrorCode::BudgetExceeded: return "BudgetExceeded";
        case ErrorCode::IOError: return "IOError";
        case ErrorCode::ParseError: return "ParseError";
    }
    return "UnknownError";
}

const char* pair_class_name(PairClass c) {
    switch (c) {
        case PairClass::Orthogonal: return "Orthogonal";
        case PairClass::Tangent: return "Tangent";
        case PairClass::Disjoint: return "Disjoint";
        case PairClass::Overlapping: return "Overlapping";
        case PairClass::Equal: return "Equal";
    }
    return "?";
}

double distance(const Point4& a, const Point4& b) {
    if (a.infinite || b.infinite)
        return (a.infinite && b.infinite) ? 0.0 : std::numeric_limits<double>::infinity();
    double s = 0.0;
    for (int i = 0; i < 4; ++i) {
        double d = a.x[i] - b.x[i];
        s += d * d;
    }
    return std::sqrt(s);
}

Vec4dd vec4_of(const Point4& p) {
    return {dd(p.x[0]), dd(p.x[1]), dd(p.x[2]), dd(p.x[3])};
}

Point4 point_of(const Vec4dd& v) {
    return Point4(to_double(v[0]), to_double(v[1]), to_double(v[2]), to_double(v[3]));
}

dd minkowski(const Vec6dd& a, const Vec6dd& b) {
    dd s(0.0);
    for (int i = 0; i < 5; ++i) s += a[i] * b[i];
    return s - a[5] * b[5];
}

LightVector light_of(const Point4& p) {
    LightVector lv;
    if (p.infinite) {
        lv.v = {dd(0.0), dd(0.0), dd(0.0), dd(0.0), dd(1.0), dd(1.0)};
        return lv;
    }
    dd n2(0.0);
    for (int i = 0; i < 4; ++i) {
        lv.v[i] = dd(p.x[i]);
        n2 += sqr(lv.v[i]);
    }
    lv.v[4] = (n2 - dd(1.0)) * dd(0.5);
    lv.v[5] = (n2 + dd(1.0)) * dd(0.5);
    return lv;
}

Point4 point_of(const LightVector& lv) {
    dd denom = lv.v[5] - lv.v[4];
    dd scale(0.0);
    for (int i = 0; i < 6; ++i)
        if (abs(lv.v[i]) > scale) scale = abs(lv.v[i]);
    if (abs(denom) <= scale * dd(1e-14)) return Point4::infinity();
    Point4 p;
    for (int i = 0; i < 4; ++i) p.x[i] = to_double(lv.v[i] / denom);
    return p;
}

static InversiveSphere canonicalize(InversiveSphere s) {
    dd inv_r = s.v[5] - s.v[4];
    if (inv_r.hi < 0.0) {
        for (auto& c : s.v) c = -c;
    } else if (inv_r.hi == 0.0 && inv_r.lo == 0.0) {
        // hyperplane: make the largest-magnitude component positive
        int k = 0;
        for (int i = 1; i < 6; ++i)
            if (abs(s.v[i]) > abs(s.v[k])) k = i;
        if (s.v[k].hi < 0.0)
            for (auto& c : s.v) c = -c;
    }
    return s;
}

InversiveSphere sphere_from_ball(const Ball& b) {
    if (!(b.radius.hi > 0.0)) throw Error(ErrorCode::InvalidRadius, "radius must be positive");
    InversiveSphere s;
    dd B(0.0);
    for (int i = 0; i < 4; ++i) B += sqr(b.center[i]);
    B -= sqr(b.radius);
    dd inv_r = dd(1.0) / b.radius;
    for (int i = 0; i < 4; ++i) s.v[i] = b.center[i] * inv_r;
    s.v[4] = (B - dd(1.0)) * inv_r * dd(0.5);
    s.v[5] = (B + dd(1.0)) * inv_r * dd(0.5);
    return s;
}

InversiveSphere sphere_from_center_radius(const Point4& c, double r) {
    if (c.infinite) throw Error(ErrorCode::InvalidRadius, "center must be finite");
    if (!(r > 0.0)) throw Error(ErrorCode::InvalidRadius, "radius must be positive");
    Ball b;
    b.center = vec4_of(c);
    b.radius = dd(r);
    return sphere_from_ball(b);
}

bool is_hyperplane(const InversiveSphere& s) {
    dd inv_r = s.v[5] - s.v[4];
    dd scale(1.0);
    for (int i = 0; i < 6; ++i)
        if (abs(s.v[i]) > scale) scale = abs(s.v[i]);
    return abs(inv_r) <= scale * dd(1e-13);
}

Ball ball_of(const InversiveSphere& s) {
    if (is_hyperplane(s)) throw Error(ErrorCode::NotABall, "hyperplane has no finite center");
    dd inv_r = s.v[5] - s.v[4];
    Ball b;
    b.radius = dd(1.0) / inv_r;
    if (b.radius.hi < 0.0) { // non-canonical sign
        b.radius = -b.radius;
        for (int i = 0; i < 4; ++i) b.center[i] = -s.v[i] * b.radius;
    } else {
        for (int i = 0; i < 4; ++i) b.center[i] = s.v[i] * b.radius;
    }
    return b;
}

std::pair<Point4, double> center_radius_of(const InversiveSphere& s) {
    Ball b = ball_of(s);
    return {point_of(b.center), to_double(b.radius)};
}

dd pair_inner_dd(const Ball& a, const Ball& b) {
    dd d2(0.0);
    for (int i = 0; i < 4; ++i) d2 += sqr(a.center[i] - b.center[i]);
    return (d2 - sqr(a.radius) - sqr(b.radius)) / (dd(2.0) * a.radius * b.radius);
}

dd pair_inner_dd(const InversiveSphere& a, const InversiveSphere& b) {
    if (!is_hyperplane(a) && !is_hyperplane(b)) return pair_inner_dd(ball_of(a), ball_of(b));
    return -minkowski(a.v, b.v);
}

double pair_inner(const InversiveSphere& a, const InversiveSphere& b) {
    return to_double(pair_inner_dd(a, b));
}

static PairClass classify_value(dd v, double tau, bool equal_hint) {
    if (equal_hint) return PairClass::Equal;
    double x = to_double(v);
    if (std::abs(x) <= tau) return PairClass::Orthogonal;
    if (std::abs(std::abs(x) - 1.0) <= tau) return PairClass::Tangent;
    if (x > 1.0) return PairClass::Disjoint;
    return PairClass::Overlapping; // intersecting at a non-right angle, or nested
}

PairClass classify_pair(const InversiveSphere& a, const InversiveSphere& b, double tau) {
    dd scale(1.0);
    for (int i = 0; i < 6; ++i) {
        if (abs(a.v[i]) > scale) scale = abs(a.v[i]);
        if (abs(b.v[i]) > scale) scale = abs(b.v[i]);
    }
    bool equal = true;
    for (int i = 0; i < 6 && equal; ++i)
        if (to_double(abs(a.v[i] - b.v[i])) > tau * to_double(scale)) equal = false;
    return classify_value(pair_inner_dd(a, b), tau, equal);
}

PairClass classify_pair(const Ball& a, const Ball& b, double tau) {
    double scale = std::max(1.0, std::max(std::abs(to_double(a.radius)), std::abs(to_double(b.radius))));
    bool equal = std::abs(to_double(a.radius - b.radius)) <= tau * scale;
    for (int i = 0; i < 4 && equal; ++i)
        if (std::abs(to_double(a.center[i] - b.center[i])) > tau * scale) equal = false;
    return classify_value(pair_inner_dd(a, b), tau, equal);
}

MoebiusMap identity_map() {
    MoebiusMap m;
    for (int i = 0; i < 6; ++i) m.m[i][i] = dd(1.0);
    m.parity = 1;
    return m;
}

MoebiusMap inversion_in(const InversiveSphere& s) {
    // v -> v - 2<v,s>s  ==  (I - 2 s (Js)^T) v
    MoebiusMap L = identity_map();
    Vec6dd q = s.v;
    q[5] = -q[5]; // J s
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) L.m[i][j] -= dd(2.0) * s.v[i] * q[j];
    L.parity = -1;
    return L;
}

MoebiusMap compose(const MoebiusMap& a, const MoebiusMap& b) {
    MoebiusMap c;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            dd s(0.0);
            for (int k = 0; k < 6; ++k) s += a.m[i][k] * b.m[k][j];
            c.m[i][j] = s;
        }
    c.parity = a.parity * b.parity;
    return c;
}

static Vec6dd matvec(const MoebiusMap& m, const Vec6dd& v) {
    Vec6dd out{};
    for (int i = 0; i < 6; ++i) {
        dd s(0.0);
        for (int k = 0; k < 6; ++k) s += m.m[i][k] * v[k];
        out[i] = s;
    }
    return out;
}

Point4 apply(const MoebiusMap& m, const Point4& p) {
    LightVector lv = light_of(p);
    LightVector out;
    out.v = matvec(m, lv.v);
    return point_of(out);
}

InversiveSphere map_sphere(const MoebiusMap& m, const InversiveSphere& s) {
    InversiveSphere out;
    out.v = matvec(m, s.v);
    return canonicalize(out);
}

Ball map_ball(const MoebiusMap& m, const Ball& b) {
    return ball_of(map_sphere(m, sphere_from_ball(b)));
}

double matrix_distance(const MoebiusMap& a, const MoebiusMap& b) {
    double worst = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j)
            worst = std::max(worst, std::abs(to_double(a.m[i][j] - b.m[i][j])));
    return worst;
}

double lorentz_residual(const MoebiusMap& m) {
    double worst = 0.0;
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
            dd s(0.0);
            for (int k = 0; k < 5; ++k) s += m.m[k][i] * m.m[k][j];
            s -= m.m[5][i] * m.m[5][j]; // (L^T J L)_ij
            dd target((i == j) ? (i == 5 ? -1.0 : 1.0) : 0.0);
            worst = std::max(worst, std::abs(to_double(s - target)));
        }
    return worst;
}

Point4 spin_point(const Point4& x, double theta) {
    if (x.infinite) return x;
    if (x.x[2] < 0.0) throw Error(ErrorCode::InvalidHalfSpace, "x3 must be >= 0");
    return Point4(x.x[0], x.x[1], x.x[2] * std::cos(theta), x.x[2] * std::sin(theta));
}

std::pair<dd, dd> hex_cos_sin(int i) {
    static const dd half_sqrt3 = sqrt(dd(3.0)) * dd(0.5);
    int k = ((i % 6) + 6) % 6;
    switch (k) {
        case 0: return {dd(1.0), dd(0.0)};
        case 1: return {dd(0.5), half_sqrt3};
        case 2: return {dd(-0.5), half_sqrt3};
        case 3: return {dd(-1.0), dd(0.0)};
        case 4: return {dd(-0.5), -half_sqrt3};
        default: return {dd(0.5), -half_sqrt3};
    }
}

Ball spin_ball(const Ball& b, dd cos_theta, dd sin_theta) {
    Ball out = b;
    out.center[2] = b.center[2] * cos_theta;
    out.center[3] = b.center[2] * sin_theta;
    return out;
}

InversiveSphere spin_sphere(const InversiveSphere& s, double theta) {
    Ball b = ball_of(s);
    double scale = std::max({1.0, std::abs(to_double(b.center[0])), std::abs(to_double(b.center[1])),
                             std::abs(to_double(b.center[2]))});
    if (std::abs(to_double(b.center[3])) > 1e-12 * scale)
        throw Error(ErrorCode::NotInPage, "sphere center must lie in the x4 = 0 page");
    return sphere_from_ball(spin_ball(b, dd(std::cos(theta)), dd(std::sin(theta))));
}

} // namespace pearls
