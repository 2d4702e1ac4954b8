#include "lpv/gamma0.hpp"

#include <algorithm>
#include <numeric>
#include <map>

namespace lpv {

namespace {

long mod_pos(long x, long n) {
    long r = x % n;
    return r < 0 ? r + n : r;
}

}  // namespace

std::pair<long, long> p1_normalize(long N, long c, long d) {
    if (N == 1) return {0, 0};
    c = mod_pos(c, N);
    d = mod_pos(d, N);
    std::pair<long, long> best{N, N};
    for (long t = 1; t < N; ++t) {
        if (std::gcd(t, N) != 1) continue;
        std::pair<long, long> cand{mod_pos(t * c, N), mod_pos(t * d, N)};
        best = std::min(best, cand);
    }
    return best;
}

namespace {

GL2Matrix lift_coset_rep(long N, long c, long d) {
    if (c % N == 0) return GL2Matrix::identity();  // canonical (0 : 1)
    if (d % N == 0) return {0, -1, 1, 0};          // canonical (1 : 0)
    // Adjust d modulo N until gcd(c, d) = 1, then complete by Bezout.
    long dd = d;
    for (int tries = 0; tries < 4 * N + 8; ++tries, dd += N) {
        if (std::gcd(c, dd) != 1) continue;
        Integer a, b, g;
        mpz_gcdext(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t(),
                   Integer(dd).get_mpz_t(), Integer(c).get_mpz_t());
        // a*dd + b*c = 1  ->  [[a, -b],[c, dd]] has det a*dd + b*c = 1
        return {a, -b, Integer(c), Integer(dd)};
    }
    throw std::logic_error("lift_coset_rep: no coprime lift found");
}

struct SymbolSide {
    Integer a1, b1, a2, b2;  // x_i = a1/b1 < x_{i+1} = a2/b2
    int state;               // 0 unpaired, 1 even, 2 odd, 3 free
    long partner;            // stable id for free pairs
    long id;
};

const GL2Matrix kS{0, -1, 1, 0};
const GL2Matrix kU{0, -1, 1, -1};  // order 3: cycles 0 -> 1 -> inf -> 0

GL2Matrix side_matrix(const SymbolSide& s) {
    // maps 0 -> x_i, inf -> x_{i+1}, 1 -> mediant
    return {s.a2, s.a1, s.b2, s.b1};
}

GL2Matrix even_matrix(const SymbolSide& s) {
    return side_matrix(s) * kS * side_matrix(s).inverse_unimodular();
}

GL2Matrix odd_matrix(const SymbolSide& s) {
    // cycles x_i -> mediant -> x_{i+1} -> x_i
    return side_matrix(s) * kU * side_matrix(s).inverse_unimodular();
}

GL2Matrix free_matrix(const SymbolSide& si, const SymbolSide& sj) {
    // maps x_j -> x_{i+1}, x_{j+1} -> x_i; the neighbor below side i
    return side_matrix(si) * kS * side_matrix(sj).inverse_unimodular();
}

// Kulkarni-style special polygon over [0, 1]: subdivide at mediants until
// every bottom side carries an even, odd, or free pairing in Gamma0(N).
void build_farey_symbol(const Integer& N, Gamma0Context& ctx) {
    std::vector<SymbolSide> sides;
    long next_id = 0;
    sides.push_back({0, 1, 1, 1, 0, -1, next_id++});

    auto even_ok = [&](const SymbolSide& s) { return (s.b1 * s.b1 + s.b2 * s.b2) % N == 0; };
    auto odd_ok = [&](const SymbolSide& s) {
        return (s.b1 * s.b1 + s.b1 * s.b2 + s.b2 * s.b2) % N == 0;
    };
    auto free_ok = [&](const SymbolSide& x, const SymbolSide& y) {
        return (x.b1 * y.b1 + x.b2 * y.b2) % N == 0;
    };

    for (int guard = 0;; ++guard) {
        if (guard > 200000) throw std::logic_error("farey symbol construction did not terminate");
        bool all_paired = true;
        bool progressed = false;
        for (size_t i = 0; i < sides.size(); ++i) {
            if (sides[i].state != 0) continue;
            if (even_ok(sides[i])) {
                sides[i].state = 1;
                progressed = true;
                continue;
            }
            if (odd_ok(sides[i])) {
                sides[i].state = 2;
                progressed = true;
                continue;
            }
            bool paired = false;
            for (size_t j = 0; j < sides.size(); ++j) {
                if (j == i || sides[j].state != 0) continue;
                if (free_ok(sides[i], sides[j])) {
                    sides[i].state = 3;
                    sides[j].state = 3;
                    sides[i].partner = sides[j].id;
                    sides[j].partner = sides[i].id;
                    paired = true;
                    progressed = true;
                    break;
                }
            }
            if (!paired) all_paired = false;
        }
        if (all_paired) break;
        if (progressed) continue;
        // No side could be paired: subdivide the first unpaired side.
        for (size_t i = 0; i < sides.size(); ++i) {
            if (sides[i].state != 0) continue;
            SymbolSide left = sides[i], right = sides[i];
            Integer ma = sides[i].a1 + sides[i].a2, mb = sides[i].b1 + sides[i].b2;
            left.a2 = ma; left.b2 = mb; left.id = next_id++;
            right.a1 = ma; right.b1 = mb; right.id = next_id++;
            sides[i] = left;
            sides.insert(sides.begin() + i + 1, right);
            break;
        }
    }

    // Polygon area consistency: index = 3 * (#sides) + (#odd sides).
    long odd_count = 0;
    for (const auto& s : sides)
        if (s.state == 2) ++odd_count;
    if (ctx.index != Integer(3 * (long)sides.size() + odd_count))
        throw std::logic_error("farey symbol area does not match the index");

    ctx.generators.push_back({1, 1, 0, 1});  // T pairs the vertical sides
    std::map<long, int> free_gen;            // side id (left partner) -> generator index

    ctx.fractions.push_back(Rational(0));
    for (size_t i = 0; i < sides.size(); ++i)
        ctx.fractions.push_back(rational(sides[i].a2, sides[i].b2));

    auto check_member = [&](const GL2Matrix& g) {
        if (g.det() != 1 || g.m21() % N != 0)
            throw std::logic_error("farey pairing matrix is not in Gamma0(N)");
    };

    for (size_t i = 0; i < sides.size(); ++i) {
        const SymbolSide& s = sides[i];
        if (s.state == 1) {
            GL2Matrix g = even_matrix(s);
            check_member(g);
            ctx.generators.push_back(g);
            ctx.sides.push_back({SideKind::Even, (int)ctx.generators.size() - 1});
        } else if (s.state == 2) {
            GL2Matrix g = odd_matrix(s);
            check_member(g);
            ctx.generators.push_back(g);
            ctx.sides.push_back({SideKind::Odd, (int)ctx.generators.size() - 1});
        } else {
            auto it = free_gen.find(s.partner);
            if (it == free_gen.end()) {
                // First time this pair is seen: this is the left side i.
                auto pj = std::find_if(sides.begin(), sides.end(),
                                       [&](const SymbolSide& t) { return t.id == s.partner; });
                GL2Matrix g = free_matrix(s, *pj);
                check_member(g);
                ctx.generators.push_back(g);
                free_gen[s.id] = (int)ctx.generators.size() - 1;
                ctx.sides.push_back({SideKind::FreeLeft, (int)ctx.generators.size() - 1});
            } else {
                ctx.sides.push_back({SideKind::FreeRight, it->second});
            }
        }
    }
}

}  // namespace

Gamma0Context build_context(const Integer& N) {
    if (N < 1) throw std::invalid_argument("build_context: N must be positive");
    if (!N.fits_slong_p()) throw std::invalid_argument("build_context: N too large");
    const long n = N.get_si();

    Gamma0Context ctx;
    ctx.N = N;

    // P^1(Z/N) orbit enumeration.
    std::map<std::pair<long, long>, long> idx;
    for (long c = 0; c < std::max(n, 1L); ++c) {
        for (long d = 0; d < std::max(n, 1L); ++d) {
            if (n > 1 && std::gcd(std::gcd(c, d), n) != 1) continue;
            auto key = p1_normalize(n, c, d);
            if (idx.emplace(key, (long)idx.size()).second) continue;
        }
    }
    // Re-index in sorted key order for determinism.
    ctx.graph.points.clear();
    for (auto& [key, i] : idx) {
        i = (long)ctx.graph.points.size();
        ctx.graph.points.push_back(key);
    }
    ctx.index = (long)ctx.graph.points.size();

    Integer formula = N;
    for (const auto& [p, e] : factorize(N)) {
        (void)e;
        formula = formula / p * (p + 1);
    }
    if (formula != ctx.index) throw std::logic_error("coset count disagrees with index formula");

    for (const auto& [c, d] : ctx.graph.points) ctx.coset_reps.push_back(lift_coset_rep(n, c, d));

    ctx.graph.s_step.resize(ctx.graph.points.size());
    ctx.graph.t_step.resize(ctx.graph.points.size());
    for (size_t i = 0; i < ctx.graph.points.size(); ++i) {
        auto [c, d] = ctx.graph.points[i];
        ctx.graph.s_step[i] = idx.at(p1_normalize(n, d, mod_pos(-c, std::max(n, 1L))));
        ctx.graph.t_step[i] = idx.at(p1_normalize(n, c, mod_pos(c + d, std::max(n, 1L))));
    }

    if (n == 1) {
        ctx.generators.push_back({1, 1, 0, 1});
        ctx.generators.push_back(kS);
        return ctx;
    }
    build_farey_symbol(N, ctx);
    return ctx;
}

GL2Matrix word_product(const Gamma0Context& ctx, const std::vector<WordTerm>& word) {
    GL2Matrix acc = GL2Matrix::identity();
    for (const WordTerm& w : word) {
        const GL2Matrix& g = ctx.generators.at(w.generator);
        GL2Matrix base = w.power >= 0 ? g : g.inverse_unimodular();
        long e = std::abs(w.power);
        for (long i = 0; i < e; ++i) acc = acc * base;
    }
    return acc;
}

namespace {

void proj_normalize(Integer& a, Integer& b, Integer& c, Integer& d) {
    if (c < 0 || (c == 0 && a < 0)) {
        a = -a; b = -b; c = -c; d = -d;
    }
}

// Continued-fraction word for the full modular group: generators {T, S}.
std::vector<WordTerm> decompose_level_one(const GL2Matrix& gamma) {
    Integer a = gamma.m11(), b = gamma.m12(), c = gamma.m21(), d = gamma.m22();
    std::vector<WordTerm> word;
    for (int guard = 0; guard < 100000; ++guard) {
        proj_normalize(a, b, c, d);
        if (c == 0) {
            if (b != 0) word.push_back({0, b.get_si()});
            return word;
        }
        Integer m;
        mpz_fdiv_q(m.get_mpz_t(), a.get_mpz_t(), c.get_mpz_t());
        if (m != 0) {
            word.push_back({0, m.get_si()});
            a -= m * c;
            b -= m * d;
        }
        word.push_back({1, 1});
        // delta <- S^{-1} delta = [[c, d], [-a, -b]]
        Integer na = c, nb = d, nc = -a, nd = -b;
        a = na; b = nb; c = nc; d = nd;
    }
    throw std::logic_error("decompose: level-one reduction did not terminate");
}

}  // namespace

std::vector<WordTerm> decompose(const Gamma0Context& ctx, const GL2Matrix& gamma) {
    if (gamma.det() != 1 || gamma.m21() % ctx.N != 0)
        throw std::invalid_argument("decompose: matrix is not in Gamma0(N)");

    std::vector<WordTerm> word;
    if (ctx.N == 1) {
        word = decompose_level_one(gamma);
    } else {
        Integer a = gamma.m11(), b = gamma.m12(), c = gamma.m21(), d = gamma.m22();
        const size_t nsides = ctx.sides.size();
        for (int guard = 0;; ++guard) {
            if (guard > 200000) throw std::logic_error("decompose: descent did not terminate");
            proj_normalize(a, b, c, d);
            if (c == 0) {
                if (b != 0) word.push_back({0, b.get_si()});
                break;
            }
            const bool from_left = d > 0;  // approach side of the cusp a/c
            Rational u = rational(a, c);
            Integer m = floor_rational(u);
            if (denom(u) == 1 && from_left) m -= 1;
            if (m != 0) {
                if (!m.fits_slong_p()) throw std::logic_error("decompose: translation overflow");
                word.push_back({0, m.get_si()});
                a -= m * c;
                b -= m * d;
                u = rational(a, c);
            }
            // u now lies in [0, 1]; find the side whose closure contains it,
            // breaking vertex ties with the approach direction.
            size_t lo = 0, hi = nsides - 1;
            while (lo < hi) {
                size_t mid = (lo + hi) / 2;
                if (u <= ctx.fractions[mid + 1])
                    hi = mid;
                else
                    lo = mid + 1;
            }
            size_t side = lo;
            if (u == ctx.fractions[side] && from_left) {
                if (side == 0) throw std::logic_error("decompose: left exit at 0");
                side -= 1;
            } else if (u == ctx.fractions[side + 1] && !from_left) {
                if (side + 1 >= nsides + 1) throw std::logic_error("decompose: right exit at 1");
                side += 1;
            }

            const FareySide& fs = ctx.sides[side];
            const GL2Matrix& g = ctx.generators[fs.generator];
            long e = 1;
            if (fs.kind == SideKind::FreeRight) {
                e = -1;
            } else if (fs.kind == SideKind::Odd) {
                Rational med = rational(numer(ctx.fractions[side]) + numer(ctx.fractions[side + 1]),
                                        denom(ctx.fractions[side]) + denom(ctx.fractions[side + 1]));
                if (u > med || (u == med && !from_left)) e = -1;
            }
            word.push_back({fs.generator, e});
            GL2Matrix h = e == 1 ? g.inverse_unimodular() : g;  // h = g^{-e}
            Integer na = h.m11() * a + h.m12() * c, nb = h.m11() * b + h.m12() * d;
            Integer nc = h.m21() * a + h.m22() * c, nd = h.m21() * b + h.m22() * d;
            a = na; b = nb; c = nc; d = nd;
        }
    }

    // Merge adjacent powers of the same generator.
    std::vector<WordTerm> merged;
    for (const WordTerm& w : word) {
        if (!merged.empty() && merged.back().generator == w.generator) {
            merged.back().power += w.power;
            if (merged.back().power == 0) merged.pop_back();
        } else {
            merged.push_back(w);
        }
    }
    if (!word_product(ctx, merged).proj_equal(gamma))
        throw std::logic_error("decompose: word does not reproduce the matrix");
    return merged;
}

std::optional<CuspWitness> is_equivalent_to_zero(const Integer& N, const Rational& x) {
    if (N < 1) throw std::invalid_argument("is_equivalent_to_zero: N must be positive");
    const Integer& q1 = numer(x);
    const Integer& q2 = denom(x);
    if (gcd(q2, N) != 1) return std::nullopt;

    // Solve m11*q2 - q1*N*t = 1, then [[m11, q1],[N*t, q2]] * 0 = q1/q2.
    Integer g, m11, t;
    Integer nq1 = N * q1;
    mpz_gcdext(g.get_mpz_t(), m11.get_mpz_t(), t.get_mpz_t(),
               q2.get_mpz_t(), nq1.get_mpz_t());
    // g = m11*q2 + t*N*q1 = 1 since gcd(q2, N q1) = 1
    Integer m21 = -t * N;
    // Reduce the witness: subtract multiples of (N q1, N q2) from row 2...
    // shifting (m11, m21) by k*(N q1 ... ) keeps det; minimize |m21|.
    Integer step = N * q2;
    if (step != 0) {
        Integer k;
        Integer half = step / 2;
        mpz_fdiv_q(k.get_mpz_t(), Integer(m21 + half).get_mpz_t(), step.get_mpz_t());
        m21 -= k * step;
        m11 -= k * N * q1;
    }
    GL2Matrix w(m11, q1, m21, q2);
    if (w.det() != 1) throw std::logic_error("is_equivalent_to_zero: witness construction failed");
    return CuspWitness{x, w};
}

std::vector<EvalPoint> evaluation_points(const Gamma0Context& ctx, int k) {
    if (k <= 1) throw std::invalid_argument("evaluation_points: k must exceed 1");
    std::vector<EvalPoint> out;
    for (size_t gi = 0; gi < ctx.generators.size(); ++gi) {
        GL2Matrix pw = GL2Matrix::identity();
        for (int j = 1; j <= 2 * k - 1; ++j) {
            pw = pw * ctx.generators[gi];
            if (pw.proj_equal(GL2Matrix::identity())) break;
            std::optional<Rational> x = pw.mobius(Rational(0));
            for (long base = 1; !x; ++base) x = pw.mobius(Rational(base));
            out.push_back({*x, (int)gi, j});
        }
    }
    return out;
}

}  // namespace lpv
