#include "lpv/genus.hpp"

#include <numeric>

namespace lpv {

int kronecker_i64(int64_t a, int64_t n) {
    if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
    int result = 1;
    if (n < 0) {
        n = -n;
        if (a < 0) result = -result;  // (a | -1)
    }
    if (n % 2 == 0) {
        if (a % 2 == 0) return 0;
        int e = 0;
        while (n % 2 == 0) { n /= 2; ++e; }
        if (e % 2 == 1) {
            int64_t am8 = ((a % 8) + 8) % 8;
            if (am8 == 3 || am8 == 5) result = -result;  // (a | 2) per mod 8
        }
    }
    // Jacobi on odd positive n.
    a %= n;
    if (a < 0) a += n;
    while (a != 0) {
        while (a % 2 == 0) {
            a /= 2;
            int64_t nm8 = n % 8;
            if (nm8 == 3 || nm8 == 5) result = -result;
        }
        std::swap(a, n);
        if (a % 4 == 3 && n % 4 == 3) result = -result;
        a %= n;
    }
    return n == 1 ? result : 0;
}

Integer p_star(const Integer& p, const Integer& d) {
    if (p < 2 || !is_probable_prime(p)) throw std::invalid_argument("p_star: p must be prime");
    if (d == 0) throw std::invalid_argument("p_star: d must be nonzero");
    Integer pl = 1;
    Integer m = d;
    while (m % p == 0) { m /= p; pl *= p; }
    if (is_fundamental_discriminant(d / pl)) return pl;
    if (is_fundamental_discriminant(d / -pl)) return -pl;
    throw std::invalid_argument("p_star: no admissible sign (d not a discriminant?)");
}

namespace {

void check_divides(const GenusCharQuery& q) {
    if (!q.d0.fundamental())
        throw std::invalid_argument("genus character: d0 must be fundamental");
    if (q.d0.value() == 0 || q.form.discriminant() % q.d0.value() != 0)
        throw std::invalid_argument("genus character: d0 does not divide disc(form)");
    // The complementary factor must itself be a discriminant, otherwise
    // the represented-value symbol depends on the representative.
    Integer co = q.form.discriminant() / q.d0.value();
    Integer m4 = ((co % 4) + 4) % 4;
    if (m4 != 0 && m4 != 1)
        throw std::invalid_argument("genus character: disc/d0 is not a discriminant");
}

Integer content_with(const QuadForm& f, const Integer& d0) {
    Integer g = gcd(gcd(f.a(), f.b()), gcd(f.c(), abs(d0)));
    return g;
}

}  // namespace

int chi_by_definition(const GenusCharQuery& q) {
    check_divides(q);
    const Integer& d0 = q.d0.value();
    if (d0 == 1) return 1;
    if (content_with(q.form, d0) > 1) return 0;

    // Concentric L-inf boxes; an indefinite form represents a value
    // coprime to d0 quickly, and a hard failure beats a wrong 0.
    for (long r = 1; r <= 64; ++r) {
        for (long xx = -r; xx <= r; ++xx) {
            for (long yy = -r; yy <= r; ++yy) {
                if (std::max(std::abs(xx), std::abs(yy)) != r) continue;
                Integer val = q.form.eval_at_integers(xx, yy);
                if (val == 0) continue;
                if (gcd(val, d0) == 1) return kronecker(d0, val);
            }
        }
    }
    throw GenusSearchExhausted("chi_by_definition: no coprime represented value in budget");
}

QuadForm normalize_positive_leading(const QuadForm& q) {
    Integer disc = q.discriminant();
    if (disc <= 0 && q.a() <= 0)
        throw std::invalid_argument("normalize_positive_leading: needs an indefinite form");
    QuadForm f = q;
    // Swap [a,b,c] -> [c,-b,a] when c > 0; otherwise translate toward the
    // vertex first. While |a| >= sqrt(disc) the swapped leading strictly
    // shrinks, and once |a| < sqrt(disc) the vertex value is positive for
    // nonsquare discriminants. Square discriminants can land exactly on a
    // root; those fall through to the represented-value search below.
    if (f.a() != 0) {
        for (int guard = 0; guard < 20000; ++guard) {
            if (f.a() > 0) return f;
            if (f.c() > 0) { f = QuadForm(f.c(), -f.b(), f.a()); continue; }
            // m = nearest integer to the vertex -b/(2a) = b/(2|a|), a < 0
            Integer num = f.b(), den = -2 * f.a();  // den > 0
            Integer m;
            {
                Integer two_num = 2 * num + den;
                Integer two_den = 2 * den;
                mpz_fdiv_q(m.get_mpz_t(), two_num.get_mpz_t(), two_den.get_mpz_t());
            }
            Integer nb = f.b() + 2 * f.a() * m;
            Integer nc = f.a() * m * m + f.b() * m + f.c();
            if (nc == 0) break;
            f = QuadForm(nc, -nb, f.a());  // translate by m, then swap
        }
    }
    // Find a primitive pair representing a positive value and complete it
    // to a unimodular matrix; the transported form has that value as its
    // leading coefficient.
    for (long r = 1; r <= 64; ++r) {
        for (long xx = -r; xx <= r; ++xx) {
            for (long yy = -r; yy <= r; ++yy) {
                if (std::max(std::abs(xx), std::abs(yy)) != r) continue;
                long g = std::gcd(std::abs(xx), std::abs(yy));
                long px = xx / g, py = yy / g;
                if (q.eval_at_integers(px, py) <= 0) continue;
                Integer gg, s, t;
                mpz_gcdext(gg.get_mpz_t(), t.get_mpz_t(), s.get_mpz_t(),
                           Integer(px).get_mpz_t(), Integer(py).get_mpz_t());
                // t*px + s*py = 1 -> det of [[px, -s],[py, t]] is 1
                return apply_matrix(q, GL2Matrix(px, -s, py, t));
            }
        }
    }
    throw GenusSearchExhausted("normalize_positive_leading: no positive value in budget");
}

int chi_explicit(const GenusCharQuery& q) {
    check_divides(q);
    const Integer& d0 = q.d0.value();
    if (content_with(q.form, d0) > 1) return 0;
    if (d0 == 1) return 1;

    if (q.form.a() < 0 && q.form.discriminant() < 0) {
        // Definite forms of negative leading never represent positives;
        // chi(Q) = (d0|-1) chi(-Q) from r <-> -r on represented values.
        return kronecker(d0, -1) * chi_explicit({q.d0, q.form.negated()});
    }
    QuadForm f = q.form.a() > 0 ? q.form : normalize_positive_leading(q.form);
    Integer a = f.a(), c = f.c();
    int result = 1;
    for (const auto& [p, e] : factorize(a)) {
        Integer ps = p_star(p, d0);
        Integer pe;
        mpz_pow_ui(pe.get_mpz_t(), p.get_mpz_t(), e);
        int f1 = kronecker(d0 / ps, pe);
        int f2 = kronecker(ps, a / pe * c);
        if (f1 == 0 || f2 == 0) return 0;
        result *= f1 * f2;
    }
    return result;
}

GenusCharEvaluator::GenusCharEvaluator(int64_t d0) : d0_(d0) {
    if (!is_fundamental_discriminant(Integer((long)d0)))
        throw std::invalid_argument("GenusCharEvaluator: d0 must be fundamental");
    sign_flip_ = kronecker_i64(d0, -1);
    for (const auto& [p, e] : factorize(Integer((long)std::abs(d0)))) {
        (void)e;
        int64_t pl = p.get_si();
        int64_t ps = p_star(p, Integer((long)d0)).get_si();
        d0_primes_.push_back({pl, ps});
    }
}

int GenusCharEvaluator::eval_positive_leading(int64_t a, int64_t b, int64_t c) const {
    if (a <= 0) throw std::invalid_argument("eval_positive_leading: a must be positive");
    if (d0_ == 1) return 1;
    // gcd(a, b, c, d0) > 1?
    int64_t g = std::gcd(std::gcd(std::abs(a), std::abs(b)),
                         std::gcd(std::abs(c), std::abs(d0_)));
    if (g > 1) return 0;

    int result = 1;
    int64_t rest = a;
    auto apply_prime = [&](int64_t p) -> bool {
        int64_t pe = 1;
        while (rest % p == 0) { rest /= p; pe *= p; }
        int64_t ps = 1;
        for (const auto& dp : d0_primes_)
            if (dp.p == p) { ps = dp.pstar; break; }
        int f1 = kronecker_i64(d0_ / ps, pe);
        int f2 = kronecker_i64(ps, (a / pe) * c);
        if (f1 == 0 || f2 == 0) { result = 0; return false; }
        result *= f1 * f2;
        return true;
    };

    for (uint32_t p : detail::small_primes()) {
        if (int64_t(p) * p > rest) break;
        if (rest % p == 0)
            if (!apply_prime(p)) return 0;
    }
    if (rest > 1) {
        // Trial division covers rest up to 1e10; beyond that the cofactor
        // may be composite and needs a real factorization.
        if (rest <= 10000000000LL || is_probable_prime(Integer((long)rest))) {
            if (!apply_prime(rest)) return 0;
        } else {
            for (const auto& [p, e] : factorize(Integer((long)rest))) {
                (void)e;
                if (!apply_prime(p.get_si())) return 0;
            }
        }
    }
    return result;
}

int GenusCharEvaluator::eval_negative_leading(int64_t a, int64_t b, int64_t c) const {
    return sign_flip_ * eval_positive_leading(-a, -b, -c);
}

}  // namespace lpv
