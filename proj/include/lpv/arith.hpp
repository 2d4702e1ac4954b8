#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

namespace lpv {

// Exact arbitrary-precision scalars. mpq_class keeps values canonical
// (lowest terms, positive denominator) as long as construction goes
// through rational() below or through arithmetic on canonical values.
using Integer = mpz_class;
using Rational = mpq_class;

/// Build a canonical rational num/den. Throws on den == 0.
Rational rational(const Integer& num, const Integer& den);
Rational rational(long num, long den = 1);

inline const Integer& numer(const Rational& q) { return q.get_num(); }
inline const Integer& denom(const Rational& q) { return q.get_den(); }

Integer floor_rational(const Rational& q);

/// Full Kronecker symbol (a|n), defined for all integers n including
/// zero, negative and even values. (a|-1) is sign(a)-dependent, (a|2)
/// follows the mod-8 rule, (a|0) is 1 only for a = +-1.
int kronecker(const Integer& a, const Integer& n);
int kronecker(long a, long n);

/// True iff d is 1, squarefree with d = 1 mod 4, or 4m with m squarefree
/// and m = 2,3 mod 4. Both signs allowed; 1 counts, 0 does not.
bool is_fundamental_discriminant(const Integer& d);

/// Exact floor of sqrt(n); throws on negative input.
Integer integer_sqrt_floor(const Integer& n);
bool is_square(const Integer& n);

/// Smallest positive (t, u) with t^2 - delta*u^2 = 4.
/// delta must be positive and not a perfect square.
struct PellSolution {
    Integer t;
    Integer u;
};
PellSolution pell_fundamental(const Integer& delta);

/// Fundamental solution of x^2 - d*y^2 = 1 (d > 0 nonsquare), via the
/// continued fraction expansion of sqrt(d).
std::pair<Integer, Integer> pell_one(const Integer& d);

/// Discriminant wrapper: an integer = 0,1 mod 4 plus its fundamentality.
class Discriminant {
  public:
    explicit Discriminant(Integer value);
    const Integer& value() const { return value_; }
    bool fundamental() const { return fundamental_; }

  private:
    Integer value_;
    bool fundamental_;
};

/// Prime factorization as (prime, exponent) pairs, primes ascending.
/// Trial division with a Pollard-rho fallback for large cofactors.
std::vector<std::pair<Integer, int>> factorize(const Integer& n);

bool is_probable_prime(const Integer& n);

/// gcd helpers over mpz.
Integer gcd(const Integer& a, const Integer& b);

namespace detail {
// Shared small-prime table (all primes below 100000).
const std::vector<uint32_t>& small_primes();
}  // namespace detail

}  // namespace lpv
