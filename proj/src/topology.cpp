#include "pearls/topology.hpp"

#include <map>
#include <sstream>

namespace pearls {

Presentation presentation_of(const SpunNecklace& sn) {
    if (!sn.validated)
        throw Error(ErrorCode::ValidationRequired, "necklace must pass validate_spun first");
    Presentation p;
    const int n = static_cast<int>(sn.pearls.size());
    for (int j = 0; j < n; ++j) p.generators.push_back("I" + std::to_string(j + 1));
    for (int j = 0; j < n; ++j) p.relators.push_back({j, j});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (sn.declared_class(i, j) == PairClass::Orthogonal)
                p.relators.push_back({i, j, i, j}); // (I_i I_j)^2; tangent pairs contribute none
    return p;
}

std::string Presentation::render() const {
    std::ostringstream os;
    os << "generators:";
    for (const auto& g : generators) os << " " << g;
    os << "\nrelators:\n";
    for (const Word& r : relators) {
        for (size_t i = 0; i < r.size(); ++i) os << (i ? " " : "") << generators[r[i]];
        os << "\n";
    }
    return os.str();
}

FreeWord free_reduce(const FreeWord& w) {
    FreeWord out;
    for (int x : w) {
        if (!out.empty() && out.back() == -x)
            out.pop_back();
        else
            out.push_back(x);
    }
    return out;
}

FreeWord free_mul(const FreeWord& u, const FreeWord& v) {
    FreeWord out = free_reduce(u);
    for (int x : v) {
        if (!out.empty() && out.back() == -x)
            out.pop_back();
        else
            out.push_back(x);
    }
    return out;
}

FreeWord free_inverse(const FreeWord& w) {
    FreeWord out;
    for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(-*it);
    return out;
}

std::string free_word_str(const FreeWord& w) {
    if (w.empty()) return "1";
    std::ostringstream os;
    for (size_t i = 0; i < w.size(); ++i) {
        if (i) os << " ";
        os << (std::abs(w[i]) == 1 ? "a" : "b");
        if (w[i] < 0) os << "^-1";
    }
    return os.str();
}

FreeWord Automorphism::apply(const FreeWord& w) const {
    FreeWord out;
    for (int x : w) {
        const FreeWord& img = (std::abs(x) == 1) ? image_a : image_b;
        out = free_mul(out, x > 0 ? img : free_inverse(img));
    }
    return out;
}

FreeWord Automorphism::apply_inverse(const FreeWord& w) const {
    FreeWord out;
    for (int x : w) {
        const FreeWord& img = (std::abs(x) == 1) ? inverse_image_a : inverse_image_b;
        out = free_mul(out, x > 0 ? img : free_inverse(img));
    }
    return out;
}

Automorphism compose(const Automorphism& f, const Automorphism& g) {
    Automorphism h;
    h.image_a = f.apply(g.image_a);
    h.image_b = f.apply(g.image_b);
    h.inverse_image_a = g.apply_inverse(f.inverse_image_a);
    h.inverse_image_b = g.apply_inverse(f.inverse_image_b);
    return h;
}

Automorphism trefoil_monodromy() {
    Automorphism phi;
    phi.image_a = {-2};    // a -> b^-1
    phi.image_b = {1, 2};  // b -> ab
    phi.inverse_image_a = {2, 1}; // a -> ba  (phi(ba) = ab b^-1 ... = a)
    phi.inverse_image_b = {-1};   // b -> a^-1
    return phi;
}

std::optional<FreeWord> power_is_inner(const Automorphism& phi, int k, int search_radius) {
    FreeWord fa = {1}, fb = {2};
    for (int i = 0; i < k; ++i) {
        fa = phi.apply(fa);
        fb = phi.apply(fb);
    }
    auto conjugates = [&](const FreeWord& w) {
        FreeWord winv = free_inverse(w);
        return free_mul(free_mul(w, {1}), winv) == fa && free_mul(free_mul(w, {2}), winv) == fb;
    };
    std::vector<FreeWord> frontier = {{}};
    for (int depth = 0; depth <= search_radius; ++depth) {
        for (const FreeWord& w : frontier)
            if (conjugates(w)) return w;
        if (depth == search_radius) break;
        std::vector<FreeWord> next;
        for (const FreeWord& w : frontier)
            for (int g : {1, -1, 2, -2}) {
                if (!w.empty() && w.back() == -g) continue; // keep words freely reduced
                FreeWord w2 = w;
                w2.push_back(g);
                next.push_back(std::move(w2));
            }
        frontier = std::move(next);
    }
    return std::nullopt;
}

std::array<std::array<long long, 2>, 2> homology_matrix(const Automorphism& phi) {
    std::array<std::array<long long, 2>, 2> m{};
    // column j = exponent sums of phi(generator j)
    const FreeWord* imgs[2] = {&phi.image_a, &phi.image_b};
    for (int j = 0; j < 2; ++j)
        for (int x : *imgs[j]) {
            int row = std::abs(x) - 1;
            m[row][j] += (x > 0) ? 1 : -1;
        }
    return m;
}

int matrix_order(const std::array<std::array<long long, 2>, 2>& m, int max_order) {
    auto mul = [](const auto& a, const auto& b) {
        std::array<std::array<long long, 2>, 2> c{};
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k) c[i][j] += a[i][k] * b[k][j];
        return c;
    };
    std::array<std::array<long long, 2>, 2> p = {{{1, 0}, {0, 1}}};
    for (int k = 1; k <= max_order; ++k) {
        p = mul(p, m);
        if (p[0][0] == 1 && p[1][1] == 1 && p[0][1] == 0 && p[1][0] == 0) return k;
    }
    return 0;
}

} // namespace pearls
