#pragma once

// Double-double ("dd") arithmetic: an unevaluated sum of two doubles giving
// roughly 32 significant decimal digits.  The necklace coordinates span seven
// orders of magnitude between pearl radii and center offsets, so inversive
// 6-vectors carry components up to ~1e7 and Lorentz matrix products cancel
// terms of size ~1e16 down to O(1).  Plain doubles lose ~1e-2 absolute
// accuracy there; dd keeps the error near 1e-15, which is what the group-axiom
// and tangency tolerances need.
//
// Algorithms are the classical error-free transformations (Dekker two-sum,
// fma-based two-prod) as used in the QD library of Hida, Li and Bailey.

#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>

namespace pearls {

struct dd {
    double hi = 0.0;
    double lo = 0.0;

    constexpr dd() = default;
    constexpr dd(double x) : hi(x), lo(0.0) {}
    constexpr dd(double h, double l) : hi(h), lo(l) {}

    explicit operator double() const { return hi; }
};

namespace detail {

inline dd two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    double err = (a - (s - bb)) + (b - bb);
    return {s, err};
}

// requires |a| >= |b| (or a == 0)
inline dd quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline dd two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

} // namespace detail

inline dd operator+(dd a, dd b) {
    dd s = detail::two_sum(a.hi, b.hi);
    dd t = detail::two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = detail::quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return detail::quick_two_sum(s.hi, s.lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
    dd p = detail::two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline dd operator/(dd a, dd b) {
    double q1 = a.hi / b.hi;
    dd r = a - b * dd(q1);
    double q2 = r.hi / b.hi;
    r = r - b * dd(q2);
    double q3 = r.hi / b.hi;
    dd q = detail::quick_two_sum(q1, q2);
    return q + dd(q3);
}

inline dd& operator+=(dd& a, dd b) { a = a + b; return a; }
inline dd& operator-=(dd& a, dd b) { a = a - b; return a; }
inline dd& operator*=(dd& a, dd b) { a = a * b; return a; }
inline dd& operator/=(dd& a, dd b) { a = a / b; return a; }

inline bool operator==(dd a, dd b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(dd a, dd b) { return !(a == b); }
inline bool operator<(dd a, dd b) { return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo); }
inline bool operator>(dd a, dd b) { return b < a; }
inline bool operator<=(dd a, dd b) { return !(b < a); }
inline bool operator>=(dd a, dd b) { return !(a < b); }

inline double to_double(dd a) { return a.hi + a.lo; }

inline dd abs(dd a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

inline dd sqr(dd a) {
    dd p = detail::two_prod(a.hi, a.hi);
    p.lo += 2.0 * a.hi * a.lo;
    return detail::quick_two_sum(p.hi, p.lo);
}

inline dd sqrt(dd a) {
    if (a.hi == 0.0 && a.lo == 0.0) return dd(0.0);
    // one Newton step on top of the double estimate doubles the digit count
    double x = 1.0 / std::sqrt(a.hi);
    double ax = a.hi * x;
    dd err = a - sqr(dd(ax));
    return dd(ax) + dd(err.hi * (x * 0.5));
}

inline std::ostream& operator<<(std::ostream& os, dd a) { return os << to_double(a); }

} // namespace pearls
