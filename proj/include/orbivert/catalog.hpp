#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "error.hpp"
#include "lattice.hpp"
#include "matrix.hpp"
#include "rational.hpp"

namespace orbivert::catalog {

// Cartan matrix of E8, Bourbaki labelling (node 2 attached to node 4).
inline IntMatrix e8_gram()
{
    IntMatrix g(8, 8);
    for (std::size_t i = 0; i < 8; ++i)
        g(i, i) = 2;
    const int edges[7][2] = {{1, 3}, {3, 4}, {4, 2}, {4, 5}, {5, 6}, {6, 7}, {7, 8}};
    for (auto [a, b] : edges) {
        g(a - 1, b - 1) = -1;
        g(b - 1, a - 1) = -1;
    }
    return g;
}

inline IntegralLattice e8() { return IntegralLattice::validate(e8_gram(), "e8"); }

// Orthogonal sum of k copies of E8.
inline IntegralLattice e8_power(std::size_t k)
{
    IntMatrix g(8 * k, 8 * k);
    const IntMatrix e = e8_gram();
    for (std::size_t b = 0; b < k; ++b)
        for (std::size_t i = 0; i < 8; ++i)
            for (std::size_t j = 0; j < 8; ++j)
                g(8 * b + i, 8 * b + j) = e(i, j);
    return IntegralLattice::validate(g, k == 2 ? "e8e8" : "e8^" + std::to_string(k));
}

inline std::vector<std::string> lattice_names() { return {"e8", "e8e8"}; }

inline IntegralLattice lattice(std::string_view key)
{
    if (key == "e8")
        return e8();
    if (key == "e8e8")
        return e8_power(2);
    throw Error(ErrorCode::Parse, "unknown built-in lattice '" + std::string(key) + "'");
}

// Block permutation of E8^k: block i is sent to block perm[i].
inline IntMatrix block_permutation(const std::vector<std::size_t>& perm, std::size_t block = 8)
{
    const std::size_t k = perm.size();
    IntMatrix m(block * k, block * k);
    for (std::size_t b = 0; b < k; ++b)
        for (std::size_t i = 0; i < block; ++i)
            m(block * perm[b] + i, block * b + i) = 1;
    return m;
}

// Reflection in basis vector `root` (norm 2): v -> v - <v, e_root> e_root.
inline IntMatrix simple_reflection(const IntMatrix& gram, std::size_t root)
{
    const std::size_t n = gram.rows();
    IntMatrix m = IntMatrix::identity(n);
    for (std::size_t j = 0; j < n; ++j)
        m(root, j) -= gram(root, j);
    return m;
}

// Product s_1 s_2 ... s_n of all simple reflections.
inline IntMatrix coxeter_element(const IntMatrix& gram)
{
    IntMatrix m = IntMatrix::identity(gram.rows());
    for (std::size_t i = 0; i < gram.rows(); ++i)
        m = m * simple_reflection(gram, i);
    return m;
}

inline std::vector<std::string> automorphism_names() { return {"identity", "neg-identity", "block-swap", "reflection", "coxeter"}; }

inline IntMatrix automorphism(std::string_view key, const IntegralLattice& l)
{
    const std::size_t n = l.rank();
    if (key == "identity" || key == "id")
        return IntMatrix::identity(n);
    if (key == "neg-identity")
        return std::int64_t(-1) * IntMatrix::identity(n);
    if (key == "block-swap") {
        if (n % 2 != 0 || n == 0)
            throw Error(ErrorCode::DimensionMismatch, "block-swap needs an even rank");
        return block_permutation({1, 0}, n / 2);
    }
    if (key == "reflection")
        return simple_reflection(l.gram(), 0);
    if (key == "coxeter")
        return coxeter_element(l.gram());
    throw Error(ErrorCode::Parse, "unknown built-in automorphism '" + std::string(key) + "'");
}

inline std::vector<std::string> shift_names() { return {"zero", "half-root", "third-root"}; }

// Named shifts: "zero", "half-root" and "third-root" (a half or a third of
// the first basis vector).
inline RationalVector shift(std::string_view key, const IntegralLattice& l)
{
    RationalVector h(l.rank(), Rational(0));
    if (key == "zero" || key.empty())
        return h;
    if (key == "half-root") {
        h.at(0) = Rational(1, 2);
        return h;
    }
    if (key == "third-root") {
        h.at(0) = Rational(1, 3);
        return h;
    }
    throw Error(ErrorCode::Parse, "unknown built-in shift '" + std::string(key) + "'");
}

struct Example {
    std::string name;
    std::string lattice;
    std::string automorphism;
    std::string shift;
};

// Built-in twist examples used by the positivity suite.
inline std::vector<Example> examples()
{
    return {
        {"e8/identity", "e8", "identity", "zero"},
        {"e8/neg-identity", "e8", "neg-identity", "zero"},
        {"e8/half-root", "e8", "identity", "half-root"},
        {"e8/third-root", "e8", "identity", "third-root"},
        {"e8/reflection", "e8", "reflection", "zero"},
        {"e8/coxeter", "e8", "coxeter", "zero"},
        {"e8/neg-identity+half-root", "e8", "neg-identity", "half-root"},
        {"e8e8/block-swap", "e8e8", "block-swap", "zero"},
        {"e8e8/block-swap+half-root", "e8e8", "block-swap", "half-root"},
    };
}

} // namespace orbivert::catalog
