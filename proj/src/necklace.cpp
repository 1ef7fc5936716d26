#include "pearls/necklace.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sha256.hpp"

#ifndef PEARLS_DATA_DIR
#define PEARLS_DATA_DIR "data"
#endif

namespace pearls {

namespace {

const char* kTrefoilFile = "trefoil85.json";
const char* kTrefoilSha256 = "726197b63727e3d49a4c03bed0073e843f4cb5d1ac8b96d28303e7620acdc093";

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IOError, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string find_data_file(const std::string& name) {
    std::vector<std::string> candidates;
    if (const char* env = std::getenv("PEARLS_DATA_DIR")) candidates.push_back(std::string(env) + "/" + name);
    candidates.push_back("data/" + name);
    candidates.push_back(std::string(PEARLS_DATA_DIR) + "/" + name);
    for (const auto& c : candidates)
        if (std::filesystem::exists(c)) return c;
    throw Error(ErrorCode::IOError, name + " not found (set PEARLS_DATA_DIR)");
}

dd dist2(const Vec4dd& a, const Vec4dd& b) {
    dd s(0.0);
    for (int i = 0; i < 4; ++i) s += sqr(a[i] - b[i]);
    return s;
}

dd dist(const Vec4dd& a, const Vec4dd& b) { return sqrt(dist2(a, b)); }

const dd kInvSqrt2 = dd(1.0) / sqrt(dd(2.0));

} // namespace

int SpunNecklace::find(PearlKind kind, int level, int meridian) const {
    for (size_t i = 0; i < ids.size(); ++i)
        if (ids[i].kind == kind && ids[i].level == level && ids[i].meridian == meridian)
            return static_cast<int>(i);
    return -1;
}

SemiNecklace load_trefoil_table() {
    std::string path = find_data_file(kTrefoilFile);
    std::string text = read_file(path);
    std::string digest = detail::sha256_hex(text);
    if (digest != kTrefoilSha256)
        throw Error(ErrorCode::IOError, "trefoil table checksum mismatch: " + digest);
    nlohmann::json doc = nlohmann::json::parse(text);
    SemiNecklace n;
    n.name = doc.at("name").get<std::string>();
    for (const auto& row : doc.at("pearls")) {
        Ball b;
        auto c = row.at("center");
        for (size_t i = 0; i < c.size() && i < 4; ++i) b.center[i] = dd(c[i].get<double>());
        b.radius = dd(row.at("radius").get<double>());
        n.pearls.push_back(b);
    }
    return n;
}

NecklaceReport validate_semi(const SemiNecklace& n, double tau_table) {
    if (n.pearls.empty()) throw Error(ErrorCode::EmptyNecklace, "necklace has no pearls");
    NecklaceReport rep;
    rep.min_disjoint_margin = std::numeric_limits<double>::infinity();
    const size_t m = n.pearls.size();

    for (size_t k = 0; k + 1 < m; ++k) {
        dd d2 = dist2(n.pearls[k].center, n.pearls[k + 1].center);
        dd s2 = sqr(n.pearls[k].radius) + sqr(n.pearls[k + 1].radius);
        double res = std::abs(to_double((d2 - s2) / s2));
        rep.worst_consecutive = std::max(rep.worst_consecutive, res);
        if (res > tau_table) {
            rep.pass = false;
            rep.failures.push_back({static_cast<int>(k), static_cast<int>(k + 1), PairClass::Orthogonal,
                                    PairClass::Overlapping, res});
        }
    }
    for (size_t k = 0; k < m; ++k) {
        dd want = n.pearls[k].center[2] * kInvSqrt2;
        double res = std::abs(to_double((n.pearls[k].radius - want) / n.pearls[k].radius));
        rep.worst_hexagon = std::max(rep.worst_hexagon, res);
        if (res > tau_table) {
            rep.pass = false;
            rep.notes.push_back("pearl " + std::to_string(k) + " breaks the hexagon law r = z/sqrt(2)");
        }
        if (n.pearls[k].center[2].hi < 0.0) {
            rep.pass = false;
            rep.notes.push_back("pearl " + std::to_string(k) + " leaves the upper half-space");
        }
    }
    for (size_t a = 0; a < m; ++a)
        for (size_t b = a + 2; b < m; ++b) {
            double margin = to_double(dist(n.pearls[a].center, n.pearls[b].center) -
                                      (n.pearls[a].radius + n.pearls[b].radius));
            rep.min_disjoint_margin = std::min(rep.min_disjoint_margin, margin);
            if (margin <= 0.0) {
                rep.pass = false;
                rep.failures.push_back({static_cast<int>(a), static_cast<int>(b), PairClass::Disjoint,
                                        PairClass::Overlapping, margin});
            }
        }
    return rep;
}

SemiNecklace repair_semi(const SemiNecklace& n) {
    SemiNecklace out = n;
    const int m = static_cast<int>(n.pearls.size());
    if (m < 2) {
        for (auto& p : out.pearls) p.radius = p.center[2] * kInvSqrt2;
        return out;
    }
    const int nc = m - 1;  // one orthogonality constraint per consecutive pair
    const int nv = 3 * m;  // (x, y, z) per pearl; radii are derived as z/sqrt(2)

    std::vector<Vec4dd> c(m);
    for (int i = 0; i < m; ++i) c[i] = n.pearls[i].center;

    // g_k = d^2(C_k, C_{k+1}) - (z_k^2 + z_{k+1}^2)/2; the underdetermined
    // Newton step dx = J^T (J J^T)^{-1} g converges to the dd roundoff floor
    // because g is evaluated in dd even though the solve is in double.
    for (int iter = 0; iter < 16; ++iter) {
        std::vector<dd> g(nc);
        double worst = 0.0;
        for (int k = 0; k < nc; ++k) {
            dd d2 = dist2(c[k], c[k + 1]);
            g[k] = d2 - (sqr(c[k][2]) + sqr(c[k + 1][2])) * dd(0.5);
            worst = std::max(worst, std::abs(to_double(g[k] / d2)));
        }
        if (worst < 1e-28) break;
        Eigen::MatrixXd J = Eigen::MatrixXd::Zero(nc, nv);
        Eigen::VectorXd gv(nc);
        for (int k = 0; k < nc; ++k) {
            gv(k) = to_double(g[k]);
            for (int a = 0; a < 3; ++a) {
                double diff = to_double(c[k + 1][a] - c[k][a]);
                J(k, 3 * (k + 1) + a) += 2.0 * diff;
                J(k, 3 * k + a) -= 2.0 * diff;
            }
            J(k, 3 * (k + 1) + 2) -= to_double(c[k + 1][2]);
            J(k, 3 * k + 2) -= to_double(c[k][2]);
        }
        Eigen::VectorXd lambda = (J * J.transpose()).ldlt().solve(gv);
        Eigen::VectorXd dx = J.transpose() * lambda;
        for (int i = 0; i < m; ++i)
            for (int a = 0; a < 3; ++a) c[i][a] -= dd(dx(3 * i + a));
    }

    for (int i = 0; i < m; ++i) {
        out.pearls[i].center = c[i];
        out.pearls[i].center[3] = dd(0.0);
        out.pearls[i].radius = c[i][2] * kInvSqrt2;
    }
    return out;
}

Ball solve_pole_pearl(const std::array<Ball, 6>& ring, const Point4& pole) {
    if (pole.infinite) throw Error(ErrorCode::ConstructionInfeasible, "pole must be finite");
    Vec4dd p = vec4_of(pole);
    dd D2 = dist2(p, ring[0].center);
    dd rho2 = D2 - sqr(ring[0].radius);
    if (!(rho2.hi > 0.0))
        throw Error(ErrorCode::ConstructionInfeasible, "pole lies inside a ring pearl (D <= r)");
    Ball pearl{p, sqrt(rho2)};
    for (int i = 0; i < 6; ++i) {
        double v = std::abs(to_double(pair_inner_dd(pearl, ring[i])));
        if (v > 1e-9)
            throw Error(ErrorCode::ConstructionInfeasible,
                        "pole pearl not orthogonal to ring pearl " + std::to_string(i));
    }
    for (int i = 0; i < 6; ++i)
        if (!triple_intersection_nonempty(pearl, ring[i], ring[(i + 1) % 6]))
            throw Error(ErrorCode::ConstructionInfeasible,
                        "hole at the pole between ring pearls " + std::to_string(i) + " and " +
                            std::to_string((i + 1) % 6));
    return pearl;
}

namespace {

struct QuadGeometry {
    std::array<std::pair<int, int>, 2> diagonals;
    Vec4dd common_point;
    double tangency_mismatch; // |tpA - tpB|
};

QuadGeometry quad_geometry(const std::array<Ball, 4>& quad) {
    std::vector<std::pair<int, int>> tangent;
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b)
            if (classify_pair(quad[a], quad[b], 1e-5) == PairClass::Tangent) tangent.push_back({a, b});
    if (tangent.size() != 2 || tangent[0].first == tangent[1].first || tangent[0].second == tangent[1].second ||
        tangent[0].first == tangent[1].second || tangent[0].second == tangent[1].first)
        throw Error(ErrorCode::ConstructionInfeasible, "quadruple diagonals are not a tangent matching");

    QuadGeometry geo;
    geo.diagonals = {tangent[0], tangent[1]};
    std::array<Vec4dd, 2> tp;
    for (int d = 0; d < 2; ++d) {
        const Ball& s1 = quad[geo.diagonals[d].first];
        const Ball& s2 = quad[geo.diagonals[d].second];
        dd t = s1.radius / (s1.radius + s2.radius);
        for (int i = 0; i < 4; ++i) tp[d][i] = s1.center[i] + t * (s2.center[i] - s1.center[i]);
    }
    geo.tangency_mismatch = to_double(dist(tp[0], tp[1]));
    for (int i = 0; i < 4; ++i) geo.common_point[i] = (tp[0][i] + tp[1][i]) * dd(0.5);

    double scale = to_double(quad[0].radius);
    if (geo.tangency_mismatch > 1e-5 * scale)
        throw Error(ErrorCode::ConstructionInfeasible, "diagonal tangency points do not coincide");
    return geo;
}

} // namespace

Point4 quad_common_point(const std::array<Ball, 4>& quad, double* residual) {
    QuadGeometry geo = quad_geometry(quad);
    if (residual) {
        double worst = 0.0;
        for (const Ball& s : quad)
            worst = std::max(worst, std::abs(to_double(dist(geo.common_point, s.center) - s.radius)));
        *residual = worst;
    }
    return point_of(geo.common_point);
}

Ball solve_junction_pearl(const std::array<Ball, 4>& quad, const std::vector<Ball>& others) {
    QuadGeometry geo = quad_geometry(quad);

    // unit diagonal directions
    std::array<Vec4dd, 2> diag;
    for (int d = 0; d < 2; ++d) {
        const Ball& s1 = quad[geo.diagonals[d].first];
        const Ball& s2 = quad[geo.diagonals[d].second];
        dd norm = dist(s1.center, s2.center);
        for (int i = 0; i < 4; ++i) diag[d][i] = (s2.center[i] - s1.center[i]) / norm;
    }

    // orthonormal basis of the plane perpendicular to both diagonals
    std::vector<Vec4dd> basis;
    for (int seed = 0; seed < 4 && basis.size() < 2; ++seed) {
        Vec4dd v{};
        v[seed] = dd(1.0);
        for (const auto& d : diag) {
            dd proj(0.0);
            for (int i = 0; i < 4; ++i) proj += d[i] * v[i];
            for (int i = 0; i < 4; ++i) v[i] -= proj * d[i];
        }
        for (const auto& b : basis) {
            dd proj(0.0);
            for (int i = 0; i < 4; ++i) proj += b[i] * v[i];
            for (int i = 0; i < 4; ++i) v[i] -= proj * b[i];
        }
        dd norm2(0.0);
        for (int i = 0; i < 4; ++i) norm2 += sqr(v[i]);
        if (to_double(norm2) > 1e-12) {
            dd norm = sqrt(norm2);
            for (int i = 0; i < 4; ++i) v[i] = v[i] / norm;
            basis.push_back(v);
        }
    }
    if (basis.size() != 2)
        throw Error(ErrorCode::ConstructionInfeasible, "degenerate diagonal directions");

    dd rP = quad[0].radius;
    for (int i = 1; i < 4; ++i)
        if (quad[i].radius < rP) rP = quad[i].radius;
    rP = rP * dd(0.5);

    // Any center p + rP*u with u perpendicular to both diagonals is orthogonal
    // to all four quad pearls; pick the direction with the largest clearance
    // from the rest of the necklace.
    Ball best{};
    double best_score = -std::numeric_limits<double>::infinity();
    int best_offender = -1;
    for (int cand = 0; cand < 4; ++cand) {
        Vec4dd u = basis[cand / 2];
        if (cand % 2) {
            for (int i = 0; i < 4; ++i) u[i] = -u[i];
        }
        Ball trial;
        trial.radius = rP;
        for (int i = 0; i < 4; ++i) trial.center[i] = geo.common_point[i] + rP * u[i];
        double score = std::numeric_limits<double>::infinity();
        int offender = -1;
        for (size_t o = 0; o < others.size(); ++o) {
            double margin = to_double(dist(trial.center, others[o].center) - (trial.radius + others[o].radius));
            if (margin < score) {
                score = margin;
                offender = static_cast<int>(o);
            }
        }
        if (score > best_score) {
            best_score = score;
            best = trial;
            best_offender = offender;
        }
    }
    if (!others.empty() && best_score <= 0.0)
        throw Error(ErrorCode::OverlapViolation,
                    "junction pearl overlaps necklace pearl " + std::to_string(best_offender));
    return best;
}

namespace {

std::vector<PairClass> declared_from_ids(const std::vector<PearlId>& ids, int levels) {
    const int n = static_cast<int>(ids.size());
    std::vector<PairClass> decl(static_cast<size_t>(n) * n, PairClass::Disjoint);
    auto set = [&](int a, int b, PairClass c) {
        decl[static_cast<size_t>(a) * n + b] = c;
        decl[static_cast<size_t>(b) * n + a] = c;
    };
    for (int a = 0; a < n; ++a) {
        set(a, a, PairClass::Equal);
        for (int b = a + 1; b < n; ++b) {
            const PearlId& A = ids[a];
            const PearlId& B = ids[b];
            if (A.kind == PearlKind::Meridian && B.kind == PearlKind::Meridian) {
                int dk = std::abs(A.level - B.level);
                int dm = std::abs(A.meridian - B.meridian);
                int di = std::min(dm, 6 - dm);
                if ((dk == 0 && di == 1) || (dk == 1 && di == 0)) set(a, b, PairClass::Orthogonal);
                else if (dk == 1 && di == 1) set(a, b, PairClass::Tangent);
            } else if (A.kind == PearlKind::Pole || B.kind == PearlKind::Pole) {
                const PearlId& P = (A.kind == PearlKind::Pole) ? A : B;
                const PearlId& M = (A.kind == PearlKind::Pole) ? B : A;
                if (M.kind == PearlKind::Meridian &&
                    ((P.level == 0 && M.level == 0) || (P.level == 1 && M.level == levels - 1)))
                    set(a, b, PairClass::Orthogonal);
            } else if (A.kind == PearlKind::Junction || B.kind == PearlKind::Junction) {
                const PearlId& J = (A.kind == PearlKind::Junction) ? A : B;
                const PearlId& M = (A.kind == PearlKind::Junction) ? B : A;
                if (M.kind == PearlKind::Meridian && (M.level == J.level || M.level == J.level + 1) &&
                    (M.meridian == J.meridian || M.meridian == (J.meridian + 1) % 6))
                    set(a, b, PairClass::Orthogonal);
            }
        }
    }
    return decl;
}

} // namespace

SpunNecklace spin_necklace(const SemiNecklace& n) {
    NecklaceReport pre = validate_semi(n, 1e-3);
    if (!pre.pass)
        throw Error(ErrorCode::ValidationRequired, "semi-necklace fails validation; cannot spin");
    SemiNecklace rep = repair_semi(n);
    const int l = static_cast<int>(rep.pearls.size());

    SpunNecklace sn;
    sn.name = n.name.empty() ? "spun" : ("spun(" + n.name + ")");
    sn.levels = l;

    for (int k = 0; k < l; ++k)
        for (int i = 0; i < 6; ++i) {
            auto [co, si] = hex_cos_sin(i);
            sn.pearls.push_back(spin_ball(rep.pearls[k], co, si));
            sn.ids.push_back({PearlKind::Meridian, k, i});
        }

    for (int m = 0; m < 2; ++m) {
        int k = (m == 0) ? 0 : l - 1;
        std::array<Ball, 6> ring;
        for (int i = 0; i < 6; ++i) ring[i] = sn.pearls[static_cast<size_t>(k) * 6 + i];
        Point4 pole(to_double(rep.pearls[k].center[0]), to_double(rep.pearls[k].center[1]), 0.0, 0.0);
        sn.pearls.push_back(solve_pole_pearl(ring, pole));
        sn.ids.push_back({PearlKind::Pole, m, 0});
    }

    std::vector<Ball> context = sn.pearls; // meridians + poles, later also previous junctions
    for (int k = 0; k + 1 < l; ++k)
        for (int i = 0; i < 6; ++i) {
            std::array<Ball, 4> quad = {
                sn.pearls[static_cast<size_t>(k) * 6 + i],
                sn.pearls[static_cast<size_t>(k + 1) * 6 + i],
                sn.pearls[static_cast<size_t>(k) * 6 + (i + 1) % 6],
                sn.pearls[static_cast<size_t>(k + 1) * 6 + (i + 1) % 6],
            };
            std::vector<Ball> others;
            others.reserve(context.size() - 4);
            for (size_t o = 0; o < context.size(); ++o) {
                size_t q1 = static_cast<size_t>(k) * 6 + i;
                size_t q2 = static_cast<size_t>(k + 1) * 6 + i;
                size_t q3 = static_cast<size_t>(k) * 6 + (i + 1) % 6;
                size_t q4 = static_cast<size_t>(k + 1) * 6 + (i + 1) % 6;
                if (o == q1 || o == q2 || o == q3 || o == q4) continue;
                others.push_back(context[o]);
            }
            Ball junction = solve_junction_pearl(quad, others);
            sn.pearls.push_back(junction);
            sn.ids.push_back({PearlKind::Junction, k, i});
            context.push_back(junction);
        }

    sn.declared = declared_from_ids(sn.ids, l);
    return sn;
}

SpunNecklace ring_necklace(const std::string& name, const std::vector<Ball>& pearls, double tau) {
    SpunNecklace sn;
    sn.name = name;
    sn.pearls = pearls;
    sn.levels = 1;
    const int n = static_cast<int>(pearls.size());
    for (int i = 0; i < n; ++i) sn.ids.push_back({PearlKind::Meridian, 0, i});
    sn.declared.assign(static_cast<size_t>(n) * n, PairClass::Disjoint);
    for (int a = 0; a < n; ++a) {
        sn.declared[static_cast<size_t>(a) * n + a] = PairClass::Equal;
        for (int b = a + 1; b < n; ++b) {
            PairClass c = classify_pair(pearls[a], pearls[b], tau);
            sn.declared[static_cast<size_t>(a) * n + b] = c;
            sn.declared[static_cast<size_t>(b) * n + a] = c;
        }
    }
    return sn;
}

bool triple_intersection_nonempty(const Ball& a, const Ball& b, const Ball& c) {
    // Cyclic projection onto the three closed balls; converges to a point of
    // the intersection when it is nonempty (balls are convex).
    const Ball* balls[3] = {&a, &b, &c};
    double x[4];
    for (int i = 0; i < 4; ++i)
        x[i] = (to_double(a.center[i]) + to_double(b.center[i]) + to_double(c.center[i])) / 3.0;
    for (int iter = 0; iter < 4000; ++iter)
        for (const Ball* s : balls) {
            double d2 = 0.0;
            for (int i = 0; i < 4; ++i) {
                double diff = x[i] - to_double(s->center[i]);
                d2 += diff * diff;
            }
            double d = std::sqrt(d2);
            double r = to_double(s->radius);
            if (d > r) {
                double t = r / d;
                for (int i = 0; i < 4; ++i)
                    x[i] = to_double(s->center[i]) + (x[i] - to_double(s->center[i])) * t;
            }
        }
    for (const Ball* s : balls) {
        double d2 = 0.0;
        for (int i = 0; i < 4; ++i) {
            double diff = x[i] - to_double(s->center[i]);
            d2 += diff * diff;
        }
        double r = to_double(s->radius);
        if (std::sqrt(d2) > r * (1.0 + 1e-9)) return false;
    }
    return true;
}

NecklaceReport validate_spun(SpunNecklace& sn, double tau) {
    NecklaceReport rep;
    rep.min_disjoint_margin = std::numeric_limits<double>::infinity();
    const int n = static_cast<int>(sn.pearls.size());

    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            dd v = pair_inner_dd(sn.pearls[a], sn.pearls[b]);
            double x = to_double(v);
            PairClass want = sn.declared_class(a, b);
            bool ok = true;
            switch (want) {
                case PairClass::Orthogonal:
                    rep.worst_orthogonal = std::max(rep.worst_orthogonal, std::abs(x));
                    ok = std::abs(x) <= tau;
                    break;
                case PairClass::Tangent:
                    rep.worst_tangent = std::max(rep.worst_tangent, std::abs(std::abs(x) - 1.0));
                    ok = std::abs(std::abs(x) - 1.0) <= tau;
                    break;
                case PairClass::Disjoint:
                    rep.min_disjoint_margin = std::min(rep.min_disjoint_margin, x - 1.0);
                    ok = x > 1.0;
                    break;
                default:
                    ok = false;
                    break;
            }
            if (!ok) {
                rep.pass = false;
                rep.failures.push_back({a, b, want, classify_pair(sn.pearls[a], sn.pearls[b], tau), x});
            }
        }

    // junction center offsets relative to the quadruple's common point (the
    // construction places centers at distance exactly one radius from it)
    for (int j = 0; j < n; ++j) {
        if (sn.ids[j].kind != PearlKind::Junction) continue;
        int k = sn.ids[j].level, i = sn.ids[j].meridian;
        std::array<Ball, 4> quad = {
            sn.pearls[sn.find(PearlKind::Meridian, k, i)],
            sn.pearls[sn.find(PearlKind::Meridian, k + 1, i)],
            sn.pearls[sn.find(PearlKind::Meridian, k, (i + 1) % 6)],
            sn.pearls[sn.find(PearlKind::Meridian, k + 1, (i + 1) % 6)],
        };
        Point4 p = quad_common_point(quad);
        double off = distance(p, point_of(sn.pearls[j].center)) / to_double(sn.pearls[j].radius);
        rep.max_junction_offset = std::max(rep.max_junction_offset, off);
    }
    if (rep.max_junction_offset > 0.0)
        rep.notes.push_back("junction centers sit one radius from the quadruple common point (see report field)");

    sn.validated = rep.pass;
    return rep;
}

} // namespace pearls
