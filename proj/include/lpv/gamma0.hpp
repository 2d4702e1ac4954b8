#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "lpv/arith.hpp"
#include "lpv/qforms.hpp"

namespace lpv {

/// Cosets of Gamma0(N) in SL2(Z), indexed by canonical representatives of
/// P^1(Z/N), with the right-multiplication transition table under S and T.
struct CosetGraph {
    std::vector<std::pair<long, long>> points;  // canonical (c : d)
    std::vector<long> s_step;
    std::vector<long> t_step;
};

enum class SideKind { Even, Odd, FreeLeft, FreeRight };

/// One bottom side of the special polygon, between fractions i and i+1.
struct FareySide {
    SideKind kind;
    int generator;  // index into Gamma0Context::generators
};

struct Gamma0Context {
    Integer N;
    Integer index;
    std::vector<GL2Matrix> coset_reps;
    CosetGraph graph;
    /// generators[0] is the translation T; the rest pair polygon sides.
    /// For N = 1 the list is {T, S} and the Farey data below is empty.
    std::vector<GL2Matrix> generators;
    std::vector<Rational> fractions;  // 0 = x_0 < ... < x_n = 1
    std::vector<FareySide> sides;     // sides.size() = fractions.size() - 1
};

Gamma0Context build_context(const Integer& N);

/// Canonical representative of (c : d) in P^1(Z/N); requires gcd(c,d,N)=1.
std::pair<long, long> p1_normalize(long N, long c, long d);

struct WordTerm {
    int generator;
    long power;
};

/// Expresses gamma in Gamma0(N) as a word in ctx.generators; the product
/// of the word equals gamma up to sign. Rejects matrices outside Gamma0(N).
std::vector<WordTerm> decompose(const Gamma0Context& ctx, const GL2Matrix& gamma);

GL2Matrix word_product(const Gamma0Context& ctx, const std::vector<WordTerm>& word);

/// Witness that x is Gamma0(N)-equivalent to the cusp 0, when it is:
/// x = q1/q2 in lowest terms with gcd(q2, N) = 1.
struct CuspWitness {
    Rational target;
    GL2Matrix matrix;  // in Gamma0(N), matrix * 0 = target
};
std::optional<CuspWitness> is_equivalent_to_zero(const Integer& N, const Rational& x);

/// Orbit points gamma_i^j * 0 for every generator, j = 1 .. 2k-1 (powers
/// stop early once gamma^j projects to the identity). When the base point
/// would map to infinity, 0 is replaced by the smallest usable integer.
struct EvalPoint {
    Rational x;
    int generator;
    int power;
};
std::vector<EvalPoint> evaluation_points(const Gamma0Context& ctx, int k);

}  // namespace lpv
