#include <doctest.h>

#include <random>

#include "lpv/genus.hpp"

using namespace lpv;

namespace {

std::mt19937_64 rng(555);

// Random form whose discriminant is divisible by d0 with a complementary
// factor that is itself a discriminant (0 or 1 mod 4), by rejection.
QuadForm random_form_for(long d0, long range = 1000) {
    while (true) {
        long a = (long)(rng() % (2 * range + 1)) - range;
        long b = (long)(rng() % (2 * range + 1)) - range;
        long c = (long)(rng() % (2 * range + 1)) - range;
        if (a == 0) continue;
        QuadForm q(a, b, c);
        if (q.discriminant() == 0) continue;
        if (q.discriminant() % d0 != 0) continue;
        Integer co = q.discriminant() / d0;
        Integer m4 = ((co % 4) + 4) % 4;
        if (m4 != 0 && m4 != 1) continue;
        return q;
    }
}

// Forms in the level set: a = -N*m, b solving b^2 = delta mod 4|a|.
std::vector<QuadForm> level_forms(long N, long delta, int want) {
    std::vector<QuadForm> out;
    for (long m = 1; (int)out.size() < want && m < 400; ++m) {
        long A = N * m;
        for (long b = 0; b < 2 * A && (int)out.size() < want; ++b) {
            if (((long long)b * b - delta) % (4LL * A) != 0) continue;
            long c = (long)(((long long)b * b - delta) / (-4LL * A));
            out.emplace_back(-A, b, c);
            if ((int)out.size() < want) out.emplace_back(-A, -b, c);
        }
    }
    return out;
}

int chi_def(long d0, const QuadForm& q) { return chi_by_definition({Discriminant(d0), q}); }
int chi_exp(long d0, const QuadForm& q) { return chi_explicit({Discriminant(d0), q}); }

}  // namespace

TEST_CASE("p_star picks the admissible signed prime power") {
    CHECK(p_star(5, 21) == 1);
    CHECK(p_star(3, 21) == -3);
    CHECK(p_star(2, 8) == 8);
    CHECK(p_star(2, -4) == -4);
    CHECK(p_star(7, -7) == -7);
    CHECK(p_star(13, 13) == 13);
    CHECK(p_star(2, -8) == -8);
    CHECK(p_star(3, 12) == -3);
    CHECK_THROWS_AS(p_star(4, 21), std::invalid_argument);
}

TEST_CASE("character by definition: base cases") {
    CHECK(chi_def(1, QuadForm(3, 2, -5)) == 1);
    // gcd(a, b, c, d0) > 1 forces zero
    CHECK(chi_def(8, QuadForm(2, 4, -6)) == 0);
    CHECK(chi_def(13, QuadForm(-9, 2, 62)) == 1);
    CHECK_THROWS_AS(chi_def(13, QuadForm(1, 1, -1)), std::invalid_argument);  // 13 ∤ 5
}

TEST_CASE("representative independence") {
    for (long d0 : {5, 13, 21, -3}) {
        for (int i = 0; i < 30; ++i) {
            QuadForm q = random_form_for(d0, 60);
            if (gcd(gcd(q.a(), q.b()), gcd(q.c(), Integer(std::abs(d0)))) > 1) continue;
            // collect three distinct coprime represented values
            std::vector<int> symbols;
            for (long x = -6; x <= 6 && symbols.size() < 3; ++x)
                for (long y = -6; y <= 6 && symbols.size() < 3; ++y) {
                    Integer v = q.eval_at_integers(x, y);
                    if (v == 0 || gcd(v, Integer(d0)) != 1) continue;
                    symbols.push_back(kronecker(d0, v.get_si()));
                }
            for (size_t j = 1; j < symbols.size(); ++j) CHECK(symbols[j] == symbols[0]);
        }
    }
}

TEST_CASE("explicit formula agrees with the definition") {
    const long d0s[] = {5, 8, 13, 21, -3, -4};
    int done = 0;
    while (done < 500) {
        long d0 = d0s[rng() % 6];
        QuadForm q = random_form_for(d0);
        CAPTURE(d0);
        CAPTURE(q.a().get_si());
        CAPTURE(q.b().get_si());
        CAPTURE(q.c().get_si());
        CHECK(chi_exp(d0, q) == chi_def(d0, q));
        ++done;
    }
}

TEST_CASE("mirror identity chi(-Q) = (d0|-1) chi(Q)") {
    for (long d0 : {5, 13, -3, -4, 8, 21}) {
        for (int i = 0; i < 40; ++i) {
            QuadForm q = random_form_for(d0, 200);
            CHECK(chi_def(d0, q.negated()) == kronecker(d0, -1) * chi_def(d0, q));
        }
    }
}

TEST_CASE("odd-coefficient mirror symmetry") {
    for (long d0 : {5, 8, 13, 21, -3, -4}) {
        for (int i = 0; i < 40; ++i) {
            QuadForm q = random_form_for(d0, 300);
            QuadForm m(q.a(), -q.b(), q.c());
            CAPTURE(d0);
            CHECK(chi_exp(d0, m) == chi_exp(d0, q));
            CHECK(chi_def(d0, m) == chi_def(d0, q));
        }
    }
}

TEST_CASE("sl2 invariance") {
    GL2Matrix T(1, 1, 0, 1), S(0, -1, 1, 0);
    for (long d0 : {5, 13, 21, -4}) {
        for (int i = 0; i < 60; ++i) {
            QuadForm q = random_form_for(d0, 200);
            GL2Matrix g = GL2Matrix::identity();
            for (int j = 0; j < 5; ++j) g = g * (rng() % 2 ? T : S);
            CHECK(chi_exp(d0, apply_matrix(q, g)) == chi_exp(d0, q));
        }
    }
}

TEST_CASE("fricke twist identity over level form sets") {
    struct Case {
        long N;
        long D;
        long D0;
    };
    const std::vector<Case> cases = {
        {9, 172, 13}, {9, 28, 13}, {9, 53, 5}, {25, 56, 21}, {25, 53, 8}, {25, 44, 21},
        {15, 28, 13}, {9, -20, -7}, {25, -3, -8},
    };
    int total = 0;
    for (const Case& c : cases) {
        REQUIRE(is_fundamental_discriminant(c.D));
        REQUIRE(is_fundamental_discriminant(c.D0));
        REQUIRE(gcd(c.D0, c.N) == 1);
        long delta = c.D * c.D0;
        int eps = kronecker(c.D0, c.N);
        for (const QuadForm& q : level_forms(c.N, delta, 30)) {
            QuadForm w = fricke(q, c.N);
            CAPTURE(c.N);
            CAPTURE(delta);
            CHECK(chi_exp(c.D0, w) == eps * chi_exp(c.D0, q));
            ++total;
        }
    }
    CHECK(total >= 200);
}

TEST_CASE("normalization produces an equivalent positive-leading form") {
    for (int i = 0; i < 200; ++i) {
        long a = -(long)(rng() % 500) - 1;
        long b = (long)(rng() % 1001) - 500;
        long c = (long)(rng() % 1001) - 500;
        QuadForm q(a, b, c);
        if (q.discriminant() <= 0) continue;
        QuadForm n = normalize_positive_leading(q);
        CHECK(n.a() > 0);
        CHECK(n.discriminant() == q.discriminant());
    }
}

TEST_CASE("batch evaluator matches the reference implementations") {
    const long d0s[] = {5, 8, 13, 21, -3, -4};
    for (long d0 : d0s) {
        GenusCharEvaluator ev(d0);
        for (int i = 0; i < 120; ++i) {
            QuadForm q = random_form_for(d0, 400);
            long a = q.a().get_si(), b = q.b().get_si(), c = q.c().get_si();
            int got = a > 0 ? ev.eval_positive_leading(a, b, c) : ev.eval_negative_leading(a, b, c);
            CHECK(got == chi_def(d0, q));
        }
    }
}
