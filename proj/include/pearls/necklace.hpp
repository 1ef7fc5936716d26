#pragma once

// Semi-pearl necklaces (chains of pairwise orthogonal-or-disjoint balls in the
// upper half-space R^3_+) and their spun counterparts: six meridian copies per
// latitude level, two pole pearls on the rotation axis, and one junction pearl
// per hexagonal quadruple.  The bundled 85-pearl trefoil table is loaded from
// a checksummed data file.
//
// Published table values carry only 6-10 significant digits, while the spun
// construction needs the orthogonality/tangency relations to hold far more
// precisely (the group-axiom checks amplify any defect by the squared scale of
// the inversive vectors).  repair_semi therefore projects the table onto the
// exact constraint manifold d^2(C_k, C_{k+1}) = (z_k^2 + z_{k+1}^2)/2 by an
// underdetermined Newton iteration in double-double arithmetic; the projected
// centers differ from the printed ones by less than the printed rounding.

#include <array>
#include <string>
#include <vector>

#include "pearls/inversive.hpp"

namespace pearls {

struct SemiNecklace {
    std::string name;
    std::vector<Ball> pearls; // centers have x4 = 0, x3 >= 0
};

enum class PearlKind { Meridian, Pole, Junction };

struct PearlId {
    PearlKind kind = PearlKind::Meridian;
    int level = 0;    // latitude k for meridians/junctions; 0/1 for poles
    int meridian = 0; // page index i in [0,6)
};

struct SpunNecklace {
    std::string name;
    std::vector<Ball> pearls;
    std::vector<PearlId> ids;
    int levels = 0;
    bool validated = false;
    std::vector<PairClass> declared; // n*n matrix of declared classifications

    PairClass declared_class(int a, int b) const { return declared[a * pearls.size() + b]; }
    int find(PearlKind kind, int level, int meridian) const;
};

struct PairFailure {
    int a = 0, b = 0;
    PairClass declared = PairClass::Disjoint;
    PairClass measured = PairClass::Disjoint;
    double inner = 0.0;
};

struct NecklaceReport {
    bool pass = true;
    double worst_consecutive = 0.0;      // relative orthogonality residual, consecutive pairs
    double worst_hexagon = 0.0;          // relative |r - z/sqrt(2)| residual
    double worst_orthogonal = 0.0;       // |inner| over declared-orthogonal pairs
    double worst_tangent = 0.0;          // ||inner| - 1| over declared-tangent pairs
    double min_disjoint_margin = 0.0;    // min (inner - 1) over declared-disjoint pairs
    double max_junction_offset = 0.0;    // |center(P) - p| / radius(P) over junctions
    std::vector<PairFailure> failures;
    std::vector<std::string> notes;
};

// Bundled trefoil table of 85 pearls, verbatim published digits.
// Looks for trefoil85.json under $PEARLS_DATA_DIR, ./data, or the build-time
// data directory, and verifies its SHA-256 before use.
SemiNecklace load_trefoil_table();

NecklaceReport validate_semi(const SemiNecklace& n, double tau_table = 1e-3);

// Newton projection onto the exact consecutive-orthogonality manifold,
// followed by setting every radius to exactly z/sqrt(2).
SemiNecklace repair_semi(const SemiNecklace& n);

SpunNecklace spin_necklace(const SemiNecklace& n);

// A spun necklace given directly as a finite sphere family (e.g. the toy
// hexagonal ring); declared adjacency is measured by classification.
SpunNecklace ring_necklace(const std::string& name, const std::vector<Ball>& pearls, double tau = 1e-6);

// Sphere centered at `pole` orthogonal to all six ring pearls, radius
// sqrt(D^2 - r^2); verifies the no-hole triple intersections.
Ball solve_pole_pearl(const std::array<Ball, 6>& ring, const Point4& pole);

// Sphere orthogonal to the four pearls of a hexagonal quadruple (two
// orthogonal pairs with tangent diagonals).  The orthogonality system is rank
// 3 -- every solution passes through the quadruple's common point p -- so the
// returned sphere is the member of the two-parameter family with radius half
// the smallest quad radius whose center direction (perpendicular to both
// diagonals) maximizes the clearance from `others`.
Ball solve_junction_pearl(const std::array<Ball, 4>& quad, const std::vector<Ball>& others);

// Common point of a hexagonal quadruple (mean of the two diagonal tangency
// points); residual = max over the four spheres of | |p - c| - r |.
Point4 quad_common_point(const std::array<Ball, 4>& quad, double* residual = nullptr);

// Nonempty-intersection test for three closed balls via cyclic projection.
bool triple_intersection_nonempty(const Ball& a, const Ball& b, const Ball& c);

// Exhaustive pairwise classification against the declared adjacency.
// Sets sn.validated when the report passes.
NecklaceReport validate_spun(SpunNecklace& sn, double tau = 1e-6);

} // namespace pearls
