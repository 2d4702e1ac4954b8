#include <doctest.h>

#include <random>
#include <set>

#include "lpv/qforms.hpp"

using namespace lpv;

namespace {

std::mt19937_64 rng(99);

GL2Matrix random_unimodular(int len = 6) {
    GL2Matrix g = GL2Matrix::identity();
    GL2Matrix T(1, 1, 0, 1), S(0, -1, 1, 0);
    for (int i = 0; i < len; ++i) {
        if (rng() % 2) {
            long e = (long)(rng() % 7) - 3;
            for (long j = 0; j < std::abs(e); ++j) g = g * (e > 0 ? T : T.inverse_unimodular());
        } else {
            g = g * S;
        }
    }
    return g;
}

QuadForm random_form(long range = 40) {
    Integer a((long)(rng() % (2 * range + 1)) - range);
    Integer b((long)(rng() % (2 * range + 1)) - range);
    Integer c((long)(rng() % (2 * range + 1)) - range);
    return {a, b, c};
}

// Box-scan oracle: every form with N | a, a < 0 < Q(x,1), disc = delta,
// scanning |a| <= delta v^2/4 and b in a window wide enough to cover
// |2au + bv| < v sqrt(delta).
std::vector<QuadForm> oracle_set(long N, long delta, const Rational& x) {
    const Integer& u = numer(x);
    const Integer& v = denom(x);
    Integer amax = Integer(delta) * v * v / 4;
    std::vector<QuadForm> out;
    for (Integer A = N; A <= amax; A += N) {
        Integer bspan = (2 * A * abs(u)) / v + integer_sqrt_floor(Integer(delta)) + 2;
        for (Integer b = -bspan; b <= bspan; ++b) {
            Integer num = b * b - delta;
            if (num % (4 * A) != 0) continue;
            QuadForm q(-A, b, -num / (4 * A));
            if (q.eval_at_rational(x) > 0) out.push_back(q);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

TEST_CASE("evaluation at rational points") {
    CHECK(QuadForm(-9, 2, 1).eval_at_rational(Rational(0)) == 1);
    CHECK(QuadForm(1, 0, -1).eval_at_rational(Rational(1)) == 0);
    CHECK(QuadForm(-9, 2, 62).eval_at_rational(rational(1, 3)) == rational(185, 3));
}

TEST_CASE("matrix action on forms") {
    QuadForm q(1, 0, -1);
    GL2Matrix T(1, 1, 0, 1);
    CHECK(apply_matrix(q, T) == QuadForm(1, 2, 0));
    CHECK(apply_matrix(q, GL2Matrix::identity()) == q);
    CHECK_THROWS_AS(apply_matrix(q, GL2Matrix(2, 0, 0, 1)), std::invalid_argument);

    for (int i = 0; i < 200; ++i) {
        QuadForm f = random_form();
        GL2Matrix g = random_unimodular();
        CHECK(apply_matrix(f, g).discriminant() == f.discriminant());
    }
}

TEST_CASE("action is compatible with the moebius transformation") {
    for (int i = 0; i < 150; ++i) {
        QuadForm f = random_form();
        GL2Matrix g = random_unimodular();
        Rational x = rational((long)(rng() % 21) - 10, (long)(rng() % 9) + 1);
        auto gx = g.mobius(x);
        if (!gx) continue;
        Rational den = g.m21() * x + g.m22();
        CHECK(apply_matrix(f, g).eval_at_rational(x) == den * den * f.eval_at_rational(*gx));
    }
}

TEST_CASE("fricke involution") {
    CHECK(fricke(QuadForm(9, 2, -1), 9) == QuadForm(-9, -2, 1));
    CHECK_THROWS_AS(fricke(QuadForm(8, 2, -1), 9), std::invalid_argument);
    for (int i = 0; i < 100; ++i) {
        QuadForm base = random_form(25);
        long N = (long)(rng() % 24) + 1;
        QuadForm q(base.a() * N, base.b(), base.c());
        QuadForm w = fricke(q, N);
        CHECK(w.discriminant() == q.discriminant());
        CHECK(w.a() % N == 0);
        CHECK(fricke(w, N) == q);
    }
}

TEST_CASE("enumeration examples at level 9") {
    CHECK(enumerate_at_rational(9, 5, Rational(0)).forms.empty());
    CHECK(enumerate_at_rational(9, 5, rational(3, 7)).forms.empty());

    LevelFormSet set = enumerate_at_rational(9, 2236, Rational(0));
    CHECK(!set.forms.empty());
    CHECK(set.forms == oracle_set(9, 2236, Rational(0)));
    for (const QuadForm& q : set.forms) {
        CHECK(q.a() < 0);
        CHECK(q.a() % 9 == 0);
        CHECK(q.discriminant() == 2236);
        CHECK(q.eval_at_rational(Rational(0)) > 0);
    }
}

TEST_CASE("enumeration matches the box oracle on random instances") {
    int done = 0;
    while (done < 40) {
        long N = (long)(rng() % 12) + 1;
        long delta = (long)(rng() % 996) + 5;
        long m4 = delta % 4;
        if (m4 != 0 && m4 != 1) continue;
        if (is_square(delta)) continue;
        Rational x = rational((long)(rng() % 13) - 6, (long)(rng() % 6) + 1);
        CAPTURE(N);
        CAPTURE(delta);
        LevelFormSet set = enumerate_at_rational(N, delta, x);
        CHECK(set.forms == oracle_set(N, delta, x));
        ++done;
    }
}

TEST_CASE("enumeration falls back exactly for huge numerators") {
    // x = K + 1/3 with K big enough to overflow the int64 fast path;
    // translation by -K must map the set onto the set at 1/3.
    Integer K("123456789012345678");
    Rational x = Rational(K) + rational(1, 3);
    LevelFormSet big = enumerate_at_rational(9, 2236, x);
    LevelFormSet small = enumerate_at_rational(9, 2236, rational(1, 3));
    REQUIRE(big.forms.size() == small.forms.size());
    std::vector<QuadForm> translated;
    for (const QuadForm& q : big.forms) {
        // [a,b,c] at x+K corresponds to [a, b + 2aK, Q(K,1)-style] at x
        Integer nb = q.b() + 2 * q.a() * K;
        Integer nc = q.a() * K * K + q.b() * K + q.c();
        translated.emplace_back(q.a(), nb, nc);
    }
    std::sort(translated.begin(), translated.end());
    CHECK(translated == small.forms);
}

TEST_CASE("nonzero values at rational points for nonsquare discriminants") {
    for (const QuadForm& q : enumerate_at_rational(9, 2236, rational(1, 5)).forms) {
        for (int i = 0; i < 5; ++i) {
            Rational x = rational((long)(rng() % 41) - 20, (long)(rng() % 12) + 1);
            CHECK(q.eval_at_rational(x) != 0);
        }
    }
}

TEST_CASE("height-bounded enumeration") {
    SUBCASE("empty above the radius bound") {
        // Im z > sqrt(delta)/(2N): im_sq > delta/(4N^2)
        ExactUpperPoint z{rational(1, 3), rational(2236, 4 * 81) + 1};
        CHECK(enumerate_negative_a_below_height(9, 2236, z).empty());
    }
    SUBCASE("agrees with the rational enumeration near the boundary") {
        for (const char* xs : {"0", "1/2", "1/5"}) {
            Rational x = rational(std::string(xs) == "0" ? 0 : 1,
                                  std::string(xs) == "0"   ? 1
                                  : std::string(xs) == "1/2" ? 2
                                                             : 5);
            ExactUpperPoint z{x, rational(1, 100000000)};
            auto low = enumerate_negative_a_below_height(9, 2236, z);
            auto rat = enumerate_at_rational(9, 2236, x);
            CHECK(low == rat.forms);
        }
    }
    SUBCASE("monotone in the height") {
        ExactUpperPoint z1{rational(1, 2), rational(1, 100)};
        ExactUpperPoint z2{rational(1, 2), rational(1, 10)};
        auto s1 = enumerate_negative_a_below_height(9, 2236, z1);
        auto s2 = enumerate_negative_a_below_height(9, 2236, z2);
        std::set<std::string> inner;
        for (const QuadForm& q : s1)
            inner.insert(q.a().get_str() + "," + q.b().get_str() + "," + q.c().get_str());
        for (const QuadForm& q : s2)
            CHECK(inner.count(q.a().get_str() + "," + q.b().get_str() + "," + q.c().get_str()) == 1);
        CHECK(s2.size() <= s1.size());
    }
    SUBCASE("empty residue class") {
        ExactUpperPoint z{rational(1, 3), rational(1, 50)};
        CHECK(enumerate_negative_a_below_height(9, 5, z).empty());
    }
    SUBCASE("input validation") {
        CHECK_THROWS_AS(enumerate_negative_a_below_height(9, 2236, {Rational(0), Rational(0)}),
                        std::invalid_argument);
        CHECK_THROWS_AS(enumerate_at_rational(9, 2236 * 2236, Rational(0)), std::invalid_argument);
    }
}

TEST_CASE("translation and mirror bijections") {
    CHECK(translate_bijection_check(9, 2236, Rational(0)));
    CHECK(translate_bijection_check(9, 2236, rational(1, 5)));
    CHECK(translate_bijection_check(9, 5, rational(2, 3)));  // empty sets
    CHECK(translate_bijection_check(4, 60, rational(-3, 7)));
}
