#include "pearls/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace pearls {

namespace {

dd dist_dd(const Vec4dd& a, const Vec4dd& b) {
    dd s(0.0);
    for (int i = 0; i < 4; ++i) s += sqr(a[i] - b[i]);
    return sqrt(s);
}

std::array<std::int64_t, 6> quantize(const InversiveSphere& s) {
    std::array<std::int64_t, 6> key{};
    for (int i = 0; i < 6; ++i) key[i] = llround(to_double(s.v[i]) / 1e-9);
    return key;
}

bool shortlex_less(const Word& a, const Word& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace

GeneratorSet generators_from_necklace(const SpunNecklace& sn) {
    if (!sn.validated)
        throw Error(ErrorCode::ValidationRequired, "necklace must pass validate_spun first");
    GeneratorSet g;
    const int n = static_cast<int>(sn.pearls.size());
    g.raw_balls = sn.pearls;

    Vec4dd t{};
    for (const Ball& b : sn.pearls)
        for (int i = 0; i < 4; ++i) t[i] += b.center[i];
    for (int i = 0; i < 4; ++i) t[i] = t[i] / dd(double(n));
    dd maxd(0.0);
    for (const Ball& b : sn.pearls) {
        dd d = dist_dd(b.center, t);
        if (d > maxd) maxd = d;
    }
    g.frame.translation = t;
    g.frame.scale = (maxd.hi > 0.0) ? dd(1.0) / maxd : dd(1.0);

    for (const Ball& b : sn.pearls) {
        Ball nb;
        for (int i = 0; i < 4; ++i) nb.center[i] = (b.center[i] - t[i]) * g.frame.scale;
        nb.radius = b.radius * g.frame.scale;
        g.balls.push_back(nb);
        g.spheres.push_back(sphere_from_ball(nb));
        g.maps.push_back(inversion_in(g.spheres.back()));
    }
    g.nij.assign(static_cast<size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j && sn.declared_class(i, j) == PairClass::Orthogonal)
                g.nij[static_cast<size_t>(i) * n + j] = 2;
    return g;
}

Word reduce(const Word& w, const GeneratorSet& gens) {
    Word out = w;
    bool changed = true;
    while (changed) {
        changed = false;
        for (size_t i = 0; i + 1 < out.size();) {
            if (out[i] == out[i + 1]) {
                out.erase(out.begin() + i, out.begin() + i + 2);
                changed = true;
                if (i > 0) --i;
            } else if (gens.n_ij(out[i], out[i + 1]) == 2 && out[i] > out[i + 1]) {
                std::swap(out[i], out[i + 1]);
                changed = true;
                ++i;
            } else {
                ++i;
            }
        }
    }
    return out;
}

bool normal_form_extends(const Word& w, int j, const GeneratorSet& gens) {
    for (int k = static_cast<int>(w.size()) - 1; k >= 0; --k) {
        if (w[k] == j) return false;
        if (gens.n_ij(w[k], j) == 2) {
            if (w[k] > j) return false;
            continue; // commuting smaller letter: look deeper
        }
        return true;
    }
    return true;
}

OrbitFrontier init_frontier(const GeneratorSet& gens, double eps, int depth_limit,
                            std::uint64_t max_balls) {
    if (!(eps > 0.0)) throw Error(ErrorCode::InvalidEpsilon, "epsilon must be positive");
    OrbitFrontier f;
    f.eps = eps;
    f.depth_limit = depth_limit;
    f.max_balls = max_balls;
    f.depth = 0;
    f.shells.emplace_back();
    for (int j = 0; j < gens.size(); ++j) {
        OrbitFrontier::Entry e;
        e.word = {j};
        e.ball = gens.balls[j];
        e.map = gens.maps[j];
        auto key = quantize(gens.spheres[j]);
        if (f.seen.emplace(key, 0).second) f.shells[0].push_back({e.word, e.ball, 0});
        ++f.words_expanded;
        if (to_double(e.ball.radius) < eps)
            f.completed.push_back({e.word, e.ball, 0});
        else
            f.active.push_back(std::move(e));
    }
    return f;
}

void expand_frontier(OrbitFrontier& f, const GeneratorSet& gens, const std::string& checkpoint_path) {
    if (f.active.empty()) return;
    std::vector<OrbitFrontier::Entry> next;
    f.shells.emplace_back();
    const int child_depth = f.depth + 1;
    for (const auto& entry : f.active) {
        const int last = entry.word.back();
        for (int j = 0; j < gens.size(); ++j) {
            if (!normal_form_extends(entry.word, j, gens)) continue;
            ++f.words_expanded;
            if (f.words_expanded > f.max_balls) {
                if (!checkpoint_path.empty()) save_checkpoint(f, checkpoint_path);
                throw Error(ErrorCode::BudgetExceeded,
                            "ball budget exhausted at depth " + std::to_string(child_depth) +
                                (checkpoint_path.empty() ? "" : ("; checkpoint written to " + checkpoint_path)));
            }
            InversiveSphere img = map_sphere(entry.map, gens.spheres[j]);
            Ball child = ball_of(img);
            Word w = entry.word;
            w.push_back(j);

            if (gens.n_ij(last, j) == 0) {
                // non-commuting step: the child ball is genuinely nested in its parent
                double margin = to_double(entry.ball.radius -
                                          (dist_dd(entry.ball.center, child.center) + child.radius));
                f.min_nesting_margin = std::min(f.min_nesting_margin, margin);
            }
            auto key = quantize(img);
            if (f.seen.emplace(key, child_depth).second)
                f.shells[child_depth].push_back({w, child, child_depth});

            if (to_double(child.radius) < f.eps) {
                f.completed.push_back({std::move(w), child, child_depth});
            } else {
                OrbitFrontier::Entry e;
                e.word = std::move(w);
                e.ball = child;
                e.map = compose(entry.map, gens.maps[j]);
                next.push_back(std::move(e));
            }
        }
    }
    f.active = std::move(next);
    f.depth = child_depth;
}

void expand_to_completion(OrbitFrontier& f, const GeneratorSet& gens, const std::string& checkpoint_path) {
    while (!f.active.empty() && f.depth < f.depth_limit) expand_frontier(f, gens, checkpoint_path);
}

std::vector<Point4> limit_set_points(const OrbitFrontier& f, const GeneratorSet& gens) {
    std::vector<const LeafBall*> leaves;
    leaves.reserve(f.completed.size());
    for (const auto& lb : f.completed) leaves.push_back(&lb);
    std::sort(leaves.begin(), leaves.end(),
              [](const LeafBall* a, const LeafBall* b) { return shortlex_less(a->word, b->word); });
    std::vector<Point4> out;
    std::map<std::array<std::int64_t, 4>, bool> seen_pts;
    for (const LeafBall* lb : leaves) {
        std::array<std::int64_t, 4> key{};
        for (int i = 0; i < 4; ++i) key[i] = llround(to_double(lb->ball.center[i]) / 1e-9);
        if (!seen_pts.emplace(key, true).second) continue;
        Point4 p;
        for (int i = 0; i < 4; ++i)
            p.x[i] = to_double(lb->ball.center[i] / gens.frame.scale + gens.frame.translation[i]);
        out.push_back(p);
    }
    return out;
}

std::vector<Point4> limit_set_points(const SpunNecklace& sn, double eps, int depth_limit) {
    GeneratorSet gens = generators_from_necklace(sn);
    OrbitFrontier f = init_frontier(gens, eps, depth_limit);
    expand_to_completion(f, gens);
    return limit_set_points(f, gens);
}

const std::vector<LeafBall>& shell(const OrbitFrontier& f, int k) {
    if (k < 0 || k >= static_cast<int>(f.shells.size()))
        throw Error(ErrorCode::InsufficientDepth,
                    "shell " + std::to_string(k) + " not expanded (depth " + std::to_string(f.depth) + ")");
    return f.shells[k];
}

static std::int64_t ipow(std::int64_t base, int e) {
    std::int64_t r = 1;
    for (int i = 0; i < e; ++i) r *= base;
    return r;
}

CountReport count_report(const OrbitFrontier& f, int n, int k) {
    if (k > f.depth && !f.active.empty())
        throw Error(ErrorCode::InsufficientDepth, "frontier not expanded to depth " + std::to_string(k));
    CountReport rep;
    rep.n = n;
    rep.depth = k;
    std::int64_t cum = 0;
    for (int d = 0; d <= k; ++d) {
        std::int64_t sz = (d < static_cast<int>(f.shells.size())) ? f.shells[d].size() : 0;
        rep.shell_sizes.push_back(sz);
        cum += sz;
        rep.enumerated_cumulative.push_back(cum);
    }
    rep.paper_ET1 = std::int64_t(n) * (n - 2);
    rep.paper_ET2 = std::int64_t(n) * (std::int64_t(n) * n - 2 * n + 7);
    for (int d = 0; d <= k; ++d) {
        rep.paper_connected_sums.push_back(std::int64_t(n) * ((ipow(n - 1, d) - 1) / (n - 2)) + 1);
        rep.paper_shell_pearls.push_back(2 * std::int64_t(n) * ipow(n - 3, d));
    }
    return rep;
}

std::string CountReport::render() const {
    std::ostringstream os;
    os << "counts for n = " << n << ", depth <= " << depth << "\n";
    os << "depth  enumerated(cum)  new   paper-connected-sums  paper-shell-pearls\n";
    for (int d = 0; d <= depth; ++d) {
        os << "  " << d << "      " << enumerated_cumulative[d] << "  " << shell_sizes[d] << "  "
           << paper_connected_sums[d] << "  " << paper_shell_pearls[d] << "\n";
    }
    os << "paper E(T1) = n(n-2) = " << paper_ET1;
    if (depth >= 1)
        os << "  (enumerated depth<=1: " << enumerated_cumulative[1]
           << (enumerated_cumulative[1] == paper_ET1 ? ", agrees" : ", differs") << ")";
    os << "\n";
    os << "paper E(T2) = n(n^2-2n+7) = " << paper_ET2;
    if (depth >= 2)
        os << "  (enumerated depth<=2: " << enumerated_cumulative[2]
           << (enumerated_cumulative[2] == paper_ET2 ? ", agrees" : ", differs") << ")";
    os << "\n";
    os << "(agreement is reported, not asserted: the paper's counting assumes an\n"
          " adjacency structure it does not make explicit)\n";
    return os.str();
}

PoincareReport poincare_check(const SpunNecklace& sn) {
    if (!sn.validated)
        throw Error(ErrorCode::ValidationRequired, "necklace must pass validate_spun first");
    PoincareReport rep;
    const int n = static_cast<int>(sn.pearls.size());

    // dihedral angles at declared-orthogonal pairs, via the plain double
    // cosine formula (independent of the dd inversive-product path)
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            if (sn.declared_class(a, b) != PairClass::Orthogonal) continue;
            double d2 = 0.0;
            for (int i = 0; i < 4; ++i) {
                double diff = to_double(sn.pearls[a].center[i]) - to_double(sn.pearls[b].center[i]);
                d2 += diff * diff;
            }
            double r1 = to_double(sn.pearls[a].radius), r2 = to_double(sn.pearls[b].radius);
            double cosang = (r1 * r1 + r2 * r2 - d2) / (2.0 * r1 * r2);
            rep.worst_orthogonal_angle = std::max(rep.worst_orthogonal_angle, std::abs(cosang));
        }
    if (rep.worst_orthogonal_angle > 1e-6) {
        rep.pass = false;
        rep.notes.push_back("a declared-orthogonal pair meets at a non-right angle");
    }

    // face pairing: each inversion maps its own sphere to itself
    for (int a = 0; a < n; ++a) {
        InversiveSphere s = sphere_from_ball(sn.pearls[a]);
        InversiveSphere img = map_sphere(inversion_in(s), s);
        double scale = 1.0, diff = 0.0;
        for (int i = 0; i < 6; ++i) {
            scale = std::max(scale, std::abs(to_double(s.v[i])));
            diff = std::max(diff, std::abs(to_double(img.v[i] - s.v[i])));
        }
        rep.face_pairing_residual = std::max(rep.face_pairing_residual, diff / scale);
    }
    if (rep.face_pairing_residual > 1e-10) {
        rep.pass = false;
        rep.notes.push_back("an inversion fails to pair its own face with itself");
    }

    // no common interior point for any intersecting triple that is not
    // pairwise orthogonal (tangent pairs only share boundary points)
    std::vector<std::vector<int>> adj(n);
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            PairClass c = sn.declared_class(a, b);
            if (c == PairClass::Orthogonal || c == PairClass::Tangent) {
                adj[a].push_back(b);
            }
        }
    for (int a = 0; a < n; ++a)
        for (size_t i = 0; i < adj[a].size(); ++i)
            for (size_t j = i + 1; j < adj[a].size(); ++j) {
                int b = adj[a][i], c = adj[a][j];
                PairClass bc = sn.declared_class(b, c);
                if (bc != PairClass::Orthogonal && bc != PairClass::Tangent) continue;
                bool all_orthogonal = sn.declared_class(a, b) == PairClass::Orthogonal &&
                                      sn.declared_class(a, c) == PairClass::Orthogonal &&
                                      bc == PairClass::Orthogonal;
                if (all_orthogonal) continue; // right-angled triples may share interior
                if (!triple_intersection_nonempty(sn.pearls[a], sn.pearls[b], sn.pearls[c])) continue;
                // intersection exists; violation only if it reaches the interiors
                // (re-run the projection and measure the interior margin)
                double x[4];
                for (int t = 0; t < 4; ++t)
                    x[t] = (to_double(sn.pearls[a].center[t]) + to_double(sn.pearls[b].center[t]) +
                            to_double(sn.pearls[c].center[t])) / 3.0;
                const Ball* tri[3] = {&sn.pearls[a], &sn.pearls[b], &sn.pearls[c]};
                for (int iter = 0; iter < 4000; ++iter)
                    for (const Ball* s : tri) {
                        double d2 = 0.0;
                        for (int t = 0; t < 4; ++t) {
                            double diff = x[t] - to_double(s->center[t]);
                            d2 += diff * diff;
                        }
                        double d = std::sqrt(d2), r = to_double(s->radius);
                        if (d > r)
                            for (int t = 0; t < 4; ++t)
                                x[t] = to_double(s->center[t]) + (x[t] - to_double(s->center[t])) * (r / d);
                    }
                double interior_margin = std::numeric_limits<double>::infinity();
                double rmin = std::numeric_limits<double>::infinity();
                for (const Ball* s : tri) {
                    double d2 = 0.0;
                    for (int t = 0; t < 4; ++t) {
                        double diff = x[t] - to_double(s->center[t]);
                        d2 += diff * diff;
                    }
                    double r = to_double(s->radius);
                    interior_margin = std::min(interior_margin, r - std::sqrt(d2));
                    rmin = std::min(rmin, r);
                }
                if (interior_margin > 1e-7 * rmin) {
                    rep.pass = false;
                    ++rep.interior_triple_violations;
                    rep.notes.push_back("interior triple overlap at pearls " + std::to_string(a) + "," +
                                        std::to_string(b) + "," + std::to_string(c));
                }
            }
    return rep;
}

void save_checkpoint(const OrbitFrontier& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error(ErrorCode::IOError, "cannot write checkpoint " + path);
    out << "pearls-orbit-checkpoint 1\n";
    out.precision(17);
    // +inf does not round-trip portably through stream extraction
    double margin = std::isfinite(f.min_nesting_margin) ? f.min_nesting_margin : 1e300;
    out << f.eps << " " << f.depth_limit << " " << f.max_balls << " " << f.depth << " "
        << f.words_expanded << " " << margin << "\n";
    auto dump_words = [&out](const char* tag, size_t count, auto&& get_word) {
        out << tag << " " << count << "\n";
        for (size_t i = 0; i < count; ++i) {
            const Word& w = get_word(i);
            for (size_t j = 0; j < w.size(); ++j) out << (j ? " " : "") << w[j];
            out << "\n";
        }
    };
    dump_words("active", f.active.size(), [&](size_t i) -> const Word& { return f.active[i].word; });
    dump_words("completed", f.completed.size(), [&](size_t i) -> const Word& { return f.completed[i].word; });
    out << "shells " << f.shells.size() << "\n";
    for (size_t d = 0; d < f.shells.size(); ++d)
        dump_words("shell", f.shells[d].size(), [&](size_t i) -> const Word& { return f.shells[d][i].word; });
    if (!out) throw Error(ErrorCode::IOError, "write failure on checkpoint " + path);
}

namespace {

// Rebuild ball and full word map from the letters alone: the fold order
// matches the incremental expansion exactly, so results are bit-identical.
std::pair<Ball, MoebiusMap> replay_word(const Word& w, const GeneratorSet& gens) {
    MoebiusMap m = identity_map();
    Ball ball{};
    for (int j : w) {
        ball = ball_of(map_sphere(m, gens.spheres[j]));
        m = compose(m, gens.maps[j]);
    }
    return {ball, m};
}

Word parse_word_line(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorCode::IOError, "truncated checkpoint");
    std::istringstream ss(line);
    Word w;
    int x;
    while (ss >> x) w.push_back(x);
    return w;
}

} // namespace

OrbitFrontier load_checkpoint(const std::string& path, const GeneratorSet& gens) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IOError, "cannot open checkpoint " + path);
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "pearls-orbit-checkpoint" || version != 1)
        throw Error(ErrorCode::IOError, "unrecognized checkpoint format in " + path);
    OrbitFrontier f;
    in >> f.eps >> f.depth_limit >> f.max_balls >> f.depth >> f.words_expanded >> f.min_nesting_margin;
    if (f.min_nesting_margin >= 1e300)
        f.min_nesting_margin = std::numeric_limits<double>::infinity();
    std::string tag;
    size_t count = 0;
    in >> tag >> count;
    in.ignore();
    for (size_t i = 0; i < count; ++i) {
        Word w = parse_word_line(in);
        auto [ball, map] = replay_word(w, gens);
        f.active.push_back({std::move(w), ball, map});
    }
    in >> tag >> count;
    in.ignore();
    for (size_t i = 0; i < count; ++i) {
        Word w = parse_word_line(in);
        auto [ball, map] = replay_word(w, gens);
        int d = static_cast<int>(w.size()) - 1;
        f.completed.push_back({std::move(w), ball, d});
    }
    size_t nshells = 0;
    in >> tag >> nshells;
    for (size_t d = 0; d < nshells; ++d) {
        in >> tag >> count;
        in.ignore();
        f.shells.emplace_back();
        for (size_t i = 0; i < count; ++i) {
            Word w = parse_word_line(in);
            auto [ball, map] = replay_word(w, gens);
            f.seen.emplace(quantize(sphere_from_ball(ball)), static_cast<int>(d));
            f.shells.back().push_back({std::move(w), ball, static_cast<int>(d)});
        }
    }
    return f;
}

} // namespace pearls
