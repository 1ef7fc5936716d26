#include "pearls/twistor.hpp"

#include <cmath>
#include <random>

namespace pearls {

Quaternion qadd(const Quaternion& p, const Quaternion& q) {
    return {p.x1 + q.x1, p.x2 + q.x2, p.x3 + q.x3, p.x4 + q.x4};
}

Quaternion qmul(const Quaternion& p, const Quaternion& q) {
    return {p.x1 * q.x1 - p.x2 * q.x2 - p.x3 * q.x3 - p.x4 * q.x4,
            p.x1 * q.x2 + p.x2 * q.x1 + p.x3 * q.x4 - p.x4 * q.x3,
            p.x1 * q.x3 - p.x2 * q.x4 + p.x3 * q.x1 + p.x4 * q.x2,
            p.x1 * q.x4 + p.x2 * q.x3 - p.x3 * q.x2 + p.x4 * q.x1};
}

Quaternion qconj(const Quaternion& q) { return {q.x1, -q.x2, -q.x3, -q.x4}; }

dd qnorm2(const Quaternion& q) {
    return sqr(q.x1) + sqr(q.x2) + sqr(q.x3) + sqr(q.x4);
}

Quaternion qinv(const Quaternion& q) {
    dd n2 = qnorm2(q);
    return {q.x1 / n2, -q.x2 / n2, -q.x3 / n2, -q.x4 / n2};
}

Quaternion quaternion_of(const Point4& p) {
    return {p.x[0], p.x[1], p.x[2], p.x[3]};
}

Point4 point_of(const Quaternion& q) {
    return {to_double(q.x1), to_double(q.x2), to_double(q.x3), to_double(q.x4)};
}

static Quaternion qscale(const Quaternion& q, dd s) {
    return {q.x1 * s, q.x2 * s, q.x3 * s, q.x4 * s};
}

QMoebius inversion_as_qmoebius(const Ball& b) {
    Quaternion c{b.center[0], b.center[1], b.center[2], b.center[3]};
    QMoebius m;
    m.a = c;
    m.b = Quaternion{sqr(b.radius) - qnorm2(c), dd{0.0}, dd{0.0}, dd{0.0}};
    m.c = Quaternion{dd{1.0}, dd{0.0}, dd{0.0}, dd{0.0}};
    m.d = qscale(qconj(c), dd{-1.0});
    m.conjugating = true;
    return m;
}

QMoebius inversion_as_qmoebius(const InversiveSphere& s) {
    return inversion_as_qmoebius(ball_of(s)); // ball_of throws NotABall for hyperplanes
}

QMoebius qcompose(const QMoebius& f, const QMoebius& g) {
    // f(g(q)): when f conjugates, g's matrix passes through entrywise conjugated.
    Quaternion ga = g.a, gb = g.b, gc = g.c, gd = g.d;
    if (f.conjugating) {
        ga = qconj(ga);
        gb = qconj(gb);
        gc = qconj(gc);
        gd = qconj(gd);
    }
    QMoebius h;
    h.a = qadd(qmul(f.a, ga), qmul(f.b, gc));
    h.b = qadd(qmul(f.a, gb), qmul(f.b, gd));
    h.c = qadd(qmul(f.c, ga), qmul(f.d, gc));
    h.d = qadd(qmul(f.c, gb), qmul(f.d, gd));
    h.conjugating = f.conjugating != g.conjugating;
    return h;
}

Point4 apply_qmoebius(const QMoebius& m, const Point4& p) {
    if (p.infinite) {
        // f(oo) = a c^-1 (oo if c = 0)
        if (to_double(qnorm2(m.c)) == 0.0) return Point4::infinity();
        return point_of(qmul(m.a, qinv(m.c)));
    }
    Quaternion q = quaternion_of(p);
    if (m.conjugating) q = qconj(q);
    Quaternion num = qadd(qmul(m.a, q), m.b);
    Quaternion den = qadd(qmul(m.c, q), m.d);
    dd dn = qnorm2(den);
    if (to_double(dn) <= 1e-28 * (to_double(qnorm2(num)) + to_double(dn)))
        return Point4::infinity();
    return point_of(qmul(num, qinv(den)));
}

QMoebius even_word_to_qmoebius(const Word& w, const GeneratorSet& gens) {
    if (w.size() % 2 != 0)
        throw Error(ErrorCode::OddWord, "word of odd length " + std::to_string(w.size()) +
                                            " reverses orientation and has no holomorphic lift");
    QMoebius m;
    m.a = Quaternion{1.0, 0.0, 0.0, 0.0};
    m.d = Quaternion{1.0, 0.0, 0.0, 0.0};
    bool first = true;
    for (int j : w) {
        QMoebius gj = inversion_as_qmoebius(gens.raw_balls[static_cast<size_t>(j)]);
        m = first ? gj : qcompose(m, gj);
        first = false;
    }
    return m;
}

// --- complex form ----------------------------------------------------------

// dd complex scalars, used so composed lifts keep enough digits at trefoil scale
struct cdd {
    dd re{0.0}, im{0.0};
};
static cdd cadd(const cdd& a, const cdd& b) { return {a.re + b.re, a.im + b.im}; }
static cdd cmul(const cdd& a, const cdd& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
static cdd cconj(const cdd& a) { return {a.re, -a.im}; }
static cdd cneg(const cdd& a) { return {-a.re, -a.im}; }
static dd cnorm2(const cdd& a) { return sqr(a.re) + sqr(a.im); }

using Vec4cdd = std::array<cdd, 4>;
using Mat4cdd = std::array<Vec4cdd, 4>;

// B(q) = [[z, w], [-conj(w), conj(z)]] with q = z + w j
static void put_block(Mat4cdd& m, int br, int bc, const Quaternion& q) {
    cdd z{q.x1, q.x2}, w{q.x3, q.x4};
    m[2 * br + 0][2 * bc + 0] = z;
    m[2 * br + 0][2 * bc + 1] = w;
    m[2 * br + 1][2 * bc + 0] = cneg(cconj(w));
    m[2 * br + 1][2 * bc + 1] = cconj(z);
}

static Mat4cdd complex4_dd(const QMoebius& m) {
    if (m.conjugating)
        throw Error(ErrorCode::NotLiftable,
                    "orientation-reversing map has no complex-linear lift");
    Mat4cdd out{};
    put_block(out, 0, 0, m.a);
    put_block(out, 0, 1, m.b);
    put_block(out, 1, 0, m.c);
    put_block(out, 1, 1, m.d);
    return out;
}

Matrix4c qmoebius_to_complex4(const QMoebius& m) {
    Mat4cdd w = complex4_dd(m);
    Matrix4c out{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            out[i][j] = {to_double(w[i][j].re), to_double(w[i][j].im)};
    return out;
}

void ProjectivePoint::normalize() {
    double n = 0.0;
    for (const auto& c : z) n += std::norm(c);
    n = std::sqrt(n);
    if (n == 0.0) return;
    for (auto& c : z) c /= n;
    for (const auto& c : z)
        if (std::abs(c) > 1e-8) {
            std::complex<double> phase = std::conj(c) / std::abs(c);
            for (auto& d : z) d *= phase;
            break;
        }
}

// coordinate pair (z1, z2) <-> quaternion z1 - conj(z2) j
static Quaternion pair_quaternion(const cdd& z1, const cdd& z2) {
    return {z1.re, z1.im, -z2.re, z2.im};
}

static Point4 project_dd(const Vec4cdd& v) {
    Quaternion q1 = pair_quaternion(v[0], v[1]);
    Quaternion q2 = pair_quaternion(v[2], v[3]);
    dd n1 = qnorm2(q1), n2 = qnorm2(q2);
    if (to_double(n2) <= 1e-28 * (to_double(n1) + to_double(n2)))
        return Point4::infinity();
    return point_of(qmul(q1, qinv(q2)));
}

static Vec4cdd vec_of(const ProjectivePoint& p) {
    Vec4cdd v;
    for (int i = 0; i < 4; ++i) v[i] = {dd{p.z[i].real()}, dd{p.z[i].imag()}};
    return v;
}

Point4 twistor_project(const ProjectivePoint& p) { return project_dd(vec_of(p)); }

ProjectivePoint right_multiply_j(const ProjectivePoint& p) {
    ProjectivePoint q;
    q.z[0] = std::conj(p.z[1]);
    q.z[1] = -std::conj(p.z[0]);
    q.z[2] = std::conj(p.z[3]);
    q.z[3] = -std::conj(p.z[2]);
    return q;
}

double fubini_study_distance(const ProjectivePoint& p, const ProjectivePoint& q) {
    std::complex<double> inner = 0.0;
    double np = 0.0, nq = 0.0;
    for (int i = 0; i < 4; ++i) {
        inner += std::conj(p.z[i]) * q.z[i];
        np += std::norm(p.z[i]);
        nq += std::norm(q.z[i]);
    }
    np = std::sqrt(np);
    nq = std::sqrt(nq);
    std::complex<double> c = inner / (np * nq);
    // sine of the angle from the residual of q against the line through p --
    // acos of the overlap loses half the digits near zero distance
    double s2 = 0.0;
    for (int i = 0; i < 4; ++i) s2 += std::norm(q.z[i] / nq - c * (p.z[i] / np));
    return std::atan2(std::sqrt(s2), std::abs(c));
}

double chordal_distance(const Point4& x, const Point4& y) {
    auto lift_scale = [](const Point4& p) {
        double n2 = 0.0;
        for (double c : p.x) n2 += c * c;
        return std::sqrt(1.0 + n2);
    };
    if (x.infinite && y.infinite) return 0.0;
    if (x.infinite) return 2.0 / lift_scale(y);
    if (y.infinite) return 2.0 / lift_scale(x);
    double d2 = 0.0;
    for (int i = 0; i < 4; ++i) d2 += (x.x[i] - y.x[i]) * (x.x[i] - y.x[i]);
    return 2.0 * std::sqrt(d2) / (lift_scale(x) * lift_scale(y));
}

Point4 apply_lift(const Word& w, const GeneratorSet& gens, const ProjectivePoint& p,
                  ProjectivePoint* image) {
    if (w.size() % 2 != 0)
        throw Error(ErrorCode::OddWord, "word of odd length " + std::to_string(w.size()) +
                                            " reverses orientation and has no holomorphic lift");
    Vec4cdd v = vec_of(p);
    // apply the innermost (rightmost) generator pair first; rescale between
    // pairs so dd magnitudes stay bounded across long words
    for (size_t t = w.size(); t >= 2; t -= 2) {
        QMoebius pair = qcompose(
            inversion_as_qmoebius(gens.raw_balls[static_cast<size_t>(w[t - 2])]),
            inversion_as_qmoebius(gens.raw_balls[static_cast<size_t>(w[t - 1])]));
        Mat4cdd m = complex4_dd(pair);
        Vec4cdd nv{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) nv[i] = cadd(nv[i], cmul(m[i][j], v[j]));
        dd big{0.0};
        for (const auto& c : nv) {
            dd n = cnorm2(c);
            if (to_double(n) > to_double(big)) big = n;
        }
        if (to_double(big) > 0.0) {
            dd s = dd{1.0} / sqrt(big);
            for (auto& c : nv) c = {c.re * s, c.im * s};
        }
        v = nv;
    }
    if (image) {
        for (int i = 0; i < 4; ++i) image->z[i] = {to_double(v[i].re), to_double(v[i].im)};
        image->normalize();
    }
    return project_dd(v);
}

Point4 apply_word_pointwise(const Word& w, const GeneratorSet& gens, const Point4& x) {
    bool infinite = x.infinite;
    Vec4dd v{};
    if (!infinite)
        for (int i = 0; i < 4; ++i) v[i] = dd{x.x[i]};
    for (size_t t = w.size(); t >= 1; --t) {
        const Ball& b = gens.raw_balls[static_cast<size_t>(w[t - 1])];
        if (infinite) {
            v = b.center;
            infinite = false;
            continue;
        }
        Vec4dd d;
        dd n2{0.0};
        for (int i = 0; i < 4; ++i) {
            d[i] = v[i] - b.center[i];
            n2 = n2 + sqr(d[i]);
        }
        if (to_double(n2) <= 1e-28 * to_double(sqr(b.radius))) {
            infinite = true;
            continue;
        }
        dd s = sqr(b.radius) / n2;
        for (int i = 0; i < 4; ++i) v[i] = b.center[i] + d[i] * s;
    }
    if (infinite) return Point4::infinity();
    return {to_double(v[0]), to_double(v[1]), to_double(v[2]), to_double(v[3])};
}

double equivariance_check(const Word& w, const GeneratorSet& gens, int samples,
                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int s = 0; s < samples; ++s) {
        ProjectivePoint p;
        for (int i = 0; i < 4; ++i) p.z[i] = {u(rng), u(rng)};
        p.normalize();
        Point4 lifted = apply_lift(w, gens, p);
        Point4 base = apply_word_pointwise(w, gens, twistor_project(p));
        worst = std::max(worst, chordal_distance(lifted, base));
    }
    return worst;
}

} // namespace pearls
