#pragma once

// Enumeration of the reflection group by reduced words and iteration of ball
// images.  The frontier expands every shortlex-normal-form word (one word per
// group element); two distinct elements can still carry the same image sphere
// (an inversion fixes each pearl orthogonal to its mirror), so quantized
// sphere deduplication is applied to the *emitted* shells, counts and cloud
// points, never to the expansion itself -- pruning words by sphere would drop
// whole subtrees of the limit set.
//
// Generators and orbit arithmetic live in a similarity-normalized frame
// (centers translated to their centroid and scaled to O(1)); emitted points
// are mapped back to the necklace's original coordinates.  Without this the
// Lorentz matrices of a necklace spanning seven orders of magnitude overflow
// even double-double precision in composed products.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pearls/necklace.hpp"

namespace pearls {

using Word = std::vector<int>;

struct Frame {
    Vec4dd translation{}; // x_norm = (x - translation) * scale
    dd scale{1.0};
};

struct GeneratorSet {
    std::vector<MoebiusMap> maps;         // inversions, normalized frame
    std::vector<InversiveSphere> spheres; // normalized frame
    std::vector<Ball> balls;              // normalized frame
    std::vector<Ball> raw_balls;          // original coordinates
    std::vector<int> nij;                 // n*n; 2 for orthogonal pairs, else 0
    Frame frame;

    int size() const { return static_cast<int>(maps.size()); }
    int n_ij(int i, int j) const { return nij[static_cast<size_t>(i) * maps.size() + j]; }
};

GeneratorSet generators_from_necklace(const SpunNecklace& sn); // ValidationRequired if not validated

// Confluent normal form under {jj -> e, ji -> ij when n_ij = 2 and i < j}.
Word reduce(const Word& w, const GeneratorSet& gens);
// True iff w + [j] is again a normal form (w assumed normal).
bool normal_form_extends(const Word& w, int j, const GeneratorSet& gens);

struct LeafBall {
    Word word;
    Ball ball;   // normalized frame
    int depth = 0; // |word| - 1; the pearls themselves are depth 0
};

struct OrbitFrontier {
    double eps = 0.0;
    int depth_limit = 0;
    std::uint64_t max_balls = 0;
    int depth = 0; // depth of the entries currently in `active`

    struct Entry {
        Word word;
        Ball ball;
        MoebiusMap map; // full word map I_{w_1} ... I_{w_k}
    };
    std::vector<Entry> active;
    std::vector<LeafBall> completed;              // radius < eps, word order of discovery
    std::vector<std::vector<LeafBall>> shells;    // new (dedup'd) spheres per depth
    std::map<std::array<std::int64_t, 6>, int> seen; // quantized sphere -> first depth
    double min_nesting_margin = std::numeric_limits<double>::infinity();
    std::uint64_t words_expanded = 0;
};

OrbitFrontier init_frontier(const GeneratorSet& gens, double eps, int depth_limit,
                            std::uint64_t max_balls = 50'000'000);

// One generation of expansion; throws BudgetExceeded (after writing
// `checkpoint_path` if nonempty) when the word count passes max_balls.
void expand_frontier(OrbitFrontier& f, const GeneratorSet& gens,
                     const std::string& checkpoint_path = "");

// Expand until the frontier empties or depth_limit is reached.
void expand_to_completion(OrbitFrontier& f, const GeneratorSet& gens,
                          const std::string& checkpoint_path = "");

// Centers of completed balls in original coordinates, shortlex word order,
// sphere-deduplicated.
std::vector<Point4> limit_set_points(const OrbitFrontier& f, const GeneratorSet& gens);
std::vector<Point4> limit_set_points(const SpunNecklace& sn, double eps, int depth_limit);

// New balls first seen at depth k (the depth band realizing the shells V_k).
const std::vector<LeafBall>& shell(const OrbitFrontier& f, int k); // InsufficientDepth if k > expanded

struct CountReport {
    int n = 0;
    int depth = 0;
    std::vector<std::int64_t> enumerated_cumulative; // index k: dedup'd balls of depth <= k
    std::vector<std::int64_t> shell_sizes;           // dedup'd new balls per depth
    std::int64_t paper_ET1 = 0;                      // n(n-2)
    std::int64_t paper_ET2 = 0;                      // n(n^2-2n+7)
    std::vector<std::int64_t> paper_connected_sums;  // n[((n-1)^k-1)/(n-2)]+1
    std::vector<std::int64_t> paper_shell_pearls;    // 2n(n-3)^k
    std::string render() const;
};

CountReport count_report(const OrbitFrontier& f, int n, int k);

struct PoincareReport {
    bool pass = true;
    double worst_orthogonal_angle = 0.0; // |cos(angle)| at declared right angles
    double face_pairing_residual = 0.0;  // max distance I_j(S_j) vs S_j
    int interior_triple_violations = 0;
    std::vector<std::string> notes;
};

// Checkable hypotheses of the Poincare polyhedron argument: dihedral angles
// are right (or faces tangent/disjoint), each inversion pairs its own face
// with itself, and no three ball interiors share a point unless the triple is
// pairwise orthogonal.
PoincareReport poincare_check(const SpunNecklace& sn);

void save_checkpoint(const OrbitFrontier& f, const std::string& path);
OrbitFrontier load_checkpoint(const std::string& path, const GeneratorSet& gens);

} // namespace pearls
