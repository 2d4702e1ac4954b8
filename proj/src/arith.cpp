#include "lpv/arith.hpp"

#include <algorithm>
#include <cmath>

namespace lpv {

Rational rational(const Integer& num, const Integer& den) {
    if (den == 0) throw std::invalid_argument("rational: zero denominator");
    Rational q(num, den);
    q.canonicalize();
    return q;
}

Rational rational(long num, long den) {
    return rational(Integer(num), Integer(den));
}

Integer floor_rational(const Rational& q) {
    Integer r;
    mpz_fdiv_q(r.get_mpz_t(), numer(q).get_mpz_t(), denom(q).get_mpz_t());
    return r;
}

int kronecker(const Integer& a, const Integer& n) {
    return mpz_kronecker(a.get_mpz_t(), n.get_mpz_t());
}

int kronecker(long a, long n) {
    return kronecker(Integer(a), Integer(n));
}

Integer gcd(const Integer& a, const Integer& b) {
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

Integer integer_sqrt_floor(const Integer& n) {
    if (n < 0) throw std::invalid_argument("integer_sqrt_floor: negative input");
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

bool is_square(const Integer& n) {
    if (n < 0) return false;
    return mpz_perfect_square_p(n.get_mpz_t()) != 0;
}

namespace detail {

const std::vector<uint32_t>& small_primes() {
    static std::vector<uint32_t> primes = [] {
        const uint32_t limit = 100000;
        std::vector<bool> composite(limit + 1, false);
        std::vector<uint32_t> out;
        for (uint32_t p = 2; p <= limit; ++p) {
            if (composite[p]) continue;
            out.push_back(p);
            for (uint64_t q = uint64_t(p) * p; q <= limit; q += p) composite[q] = true;
        }
        return out;
    }();
    return primes;
}

}  // namespace detail

bool is_probable_prime(const Integer& n) {
    return mpz_probab_prime_p(n.get_mpz_t(), 30) != 0;
}

namespace {

// Pollard rho (Brent variant) for composites that survive trial division.
Integer pollard_rho(const Integer& n) {
    if (n % 2 == 0) return 2;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xb5297a4dUL);
    while (true) {
        Integer x = rng.get_z_range(n - 3) + 2;
        Integer c = rng.get_z_range(n - 2) + 1;
        Integer y = x, d = 1;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            Integer diff = x > y ? x - y : y - x;
            if (diff == 0) break;
            d = gcd(diff, n);
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_into(Integer n, std::vector<std::pair<Integer, int>>& out) {
    if (n <= 1) return;
    if (is_probable_prime(n)) {
        out.emplace_back(n, 1);
        return;
    }
    Integer d = pollard_rho(n);
    factor_into(d, out);
    factor_into(n / d, out);
}

}  // namespace

std::vector<std::pair<Integer, int>> factorize(const Integer& n) {
    Integer m = abs(n);
    std::vector<std::pair<Integer, int>> out;
    if (m <= 1) return out;
    for (uint32_t p : detail::small_primes()) {
        if (Integer(p) * p > m) break;
        if (m % p == 0) {
            int e = 0;
            while (m % p == 0) { m /= p; ++e; }
            out.emplace_back(Integer(p), e);
        }
    }
    if (m > 1) {
        std::vector<std::pair<Integer, int>> rest;
        factor_into(m, rest);
        std::sort(rest.begin(), rest.end());
        // merge equal primes from the recursive split
        for (auto& [p, e] : rest) {
            if (!out.empty() && out.back().first == p)
                out.back().second += e;
            else
                out.emplace_back(p, e);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool is_fundamental_discriminant(const Integer& d) {
    if (d == 1) return true;
    if (d == 0) return false;
    Integer mod4 = ((d % 4) + 4) % 4;
    auto squarefree = [](const Integer& m) {
        for (auto& [p, e] : factorize(m))
            if (e > 1) return false;
        return true;
    };
    if (mod4 == 1) return squarefree(d);
    if (mod4 == 0) {
        Integer m = d / 4;
        Integer m4 = ((m % 4) + 4) % 4;
        if (m4 != 2 && m4 != 3) return false;
        return squarefree(m);
    }
    return false;
}

Discriminant::Discriminant(Integer value) : value_(std::move(value)) {
    Integer mod4 = ((value_ % 4) + 4) % 4;
    if (mod4 != 0 && mod4 != 1)
        throw std::invalid_argument("Discriminant: value must be 0 or 1 mod 4");
    fundamental_ = is_fundamental_discriminant(value_);
}

std::pair<Integer, Integer> pell_one(const Integer& d) {
    if (d <= 0 || is_square(d))
        throw std::invalid_argument("pell_one: d must be positive and nonsquare");
    // Continued fraction of sqrt(d): a_i = floor((P_i + a0)/Q_i),
    // P_{i+1} = a_i Q_i - P_i, Q_{i+1} = (d - P_{i+1}^2)/Q_i.
    Integer a0 = integer_sqrt_floor(d);
    Integer P = 0, Q = 1, a = a0;
    Integer h_prev = 1, h = a0;  // convergent numerators
    Integer k_prev = 0, k = 1;   // convergent denominators
    long period = 0;
    while (true) {
        ++period;
        P = a * Q - P;
        Q = (d - P * P) / Q;
        a = (P + a0) / Q;
        if (Q == 1) break;  // period complete at the next step
        Integer h_next = a * h + h_prev;
        Integer k_next = a * k + k_prev;
        h_prev = h; h = h_next;
        k_prev = k; k = k_next;
    }
    // h/k is now the convergent just before the period closes;
    // h^2 - d k^2 = (-1)^period.
    if (h * h - d * k * k == 1) return {h, k};
    return {h * h + d * k * k, 2 * h * k};
}

PellSolution pell_fundamental(const Integer& delta) {
    if (delta <= 0) throw std::invalid_argument("pell_fundamental: delta must be positive");
    if (is_square(delta)) throw std::invalid_argument("pell_fundamental: delta must not be a square");

    // Fast path: scan small u for the least t^2 - delta u^2 = 4.
    const unsigned long long brute_limit = 1000000;
    if (delta.fits_ulong_p()) {
        const unsigned long long d = delta.get_ui();
        auto cap = (unsigned long long)std::sqrt((double)(~0ULL >> 2) / (double)d);
        cap = std::min(cap, brute_limit);
        for (unsigned long long u = 1; u <= cap; ++u) {
            unsigned long long t2 = d * u * u + 4;
            auto r = (unsigned long long)std::sqrt((double)t2);
            while (r > 0 && r * r > t2) --r;
            while ((r + 1) * (r + 1) <= t2) ++r;
            if (r * r == t2) return {Integer((unsigned long)r), Integer((unsigned long)u)};
        }
    } else {
        for (unsigned long u = 1; u <= 4096; ++u) {
            Integer t2 = delta * u * u + 4;
            if (is_square(t2)) return {integer_sqrt_floor(t2), Integer(u)};
        }
    }

    // Continued-fraction fallback. Solutions with even u come from the
    // Pell equation for delta (or delta/4); an odd solution exists only
    // for delta = 1 mod 4 and then cubes to the fundamental unit of
    // Z[sqrt(delta)], which pins u via u*(delta*u^2 + 3) = 2*y1.
    if (delta % 4 == 0) {
        auto [x, y] = pell_one(delta / 4);
        return {2 * x, y};
    }
    auto [x1, y1] = pell_one(delta);
    Integer target = 2 * y1;
    Integer approx;
    Integer q = target / delta;
    mpz_root(approx.get_mpz_t(), q.get_mpz_t(), 3);
    for (Integer u = approx - 2; u <= approx + 2; ++u) {
        if (u <= 0) continue;
        if (u * (delta * u * u + 3) != target) continue;
        Integer t2 = delta * u * u + 4;
        if (!is_square(t2)) continue;
        return {integer_sqrt_floor(t2), u};
    }
    return {2 * x1, 2 * y1};
}

}  // namespace lpv
