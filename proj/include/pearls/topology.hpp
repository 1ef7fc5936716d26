#pragma once

// Symbolic layer: the Coxeter-style presentation of the reflection group, and
// free-group word algebra for the trefoil monodromy facts (the monodromy has
// order six in the outer automorphism group, verified by an explicit
// inner-conjugator search).

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "pearls/orbit.hpp"

namespace pearls {

struct Presentation {
    std::vector<std::string> generators; // "I1".."In"
    std::vector<Word> relators;          // indices into generators; [j,j] and [i,j,i,j]
    std::string render() const;          // one relator per line
};

// Generator per pearl; involution relator for every generator and a
// commuting relator (I_i I_j)^2 for every orthogonal pair.  Deterministic
// ordering: involutions first, then commutators sorted by (i, j).
Presentation presentation_of(const SpunNecklace& sn);

// Free group F2 on {a, b}: letters +1/-1 for a/a^-1, +2/-2 for b/b^-1.
using FreeWord = std::vector<int>;

FreeWord free_reduce(const FreeWord& w);
FreeWord free_mul(const FreeWord& u, const FreeWord& v);
FreeWord free_inverse(const FreeWord& w);
std::string free_word_str(const FreeWord& w); // e.g. "b^-1 a b"

struct Automorphism {
    FreeWord image_a;
    FreeWord image_b;
    // explicit inverse images, the invertibility witness
    FreeWord inverse_image_a;
    FreeWord inverse_image_b;

    FreeWord apply(const FreeWord& w) const;
    FreeWord apply_inverse(const FreeWord& w) const;
};

Automorphism compose(const Automorphism& f, const Automorphism& g); // f after g

// a -> b^-1, b -> ab, with verified inverse a -> ba, b -> a^-1
Automorphism trefoil_monodromy();

// Search for w with |w| <= search_radius and phi^k(x) = w x w^-1 for both
// generators; breadth-first over freely reduced words, shortest result first.
std::optional<FreeWord> power_is_inner(const Automorphism& phi, int k, int search_radius);

// Action on H1 = Z^2 in (a, b) column coordinates.
std::array<std::array<long long, 2>, 2> homology_matrix(const Automorphism& phi);

// Multiplicative order of an integer 2x2 matrix (0 if it exceeds max_order).
int matrix_order(const std::array<std::array<long long, 2>, 2>& m, int max_order = 24);

} // namespace pearls
