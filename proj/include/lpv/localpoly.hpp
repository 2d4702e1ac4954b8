#pragma once

#include <functional>
#include <vector>

#include "lpv/arith.hpp"
#include "lpv/genus.hpp"
#include "lpv/qforms.hpp"

namespace lpv {

/// Slash evaluation at its pole is a distinct failure mode.
struct SlashPole : std::domain_error {
    using std::domain_error::domain_error;
};

/// Parameters (k, N, D, D0) with delta = D*D0. Validated on construction:
/// k >= 2, D and D0 fundamental with (-1)^k D > 0 and (-1)^k D0 > 0, both
/// coprime to N, delta nonsquare, and (D|p) = (D0|p) for every p | N.
struct LocalPolyParams {
    int k;
    Integer N;
    Integer D;
    Integer D0;
    Integer delta;

    static LocalPolyParams checked(int k, Integer N, Integer D, Integer D0);
};

/// One lifted Hecke factor T_p + shift * p^(1-2k), applied in weight 2-2k.
struct HeckeFactor {
    long p;
    long shift;
};

/// Product of lifted factors; primes pairwise distinct and coprime to N.
class HeckeSpec {
  public:
    HeckeSpec() = default;
    static HeckeSpec checked(std::vector<HeckeFactor> factors, const Integer& N);
    const std::vector<HeckeFactor>& factors() const { return factors_; }
    bool empty() const { return factors_.empty(); }

  private:
    std::vector<HeckeFactor> factors_;
};

/// Dense polynomial over Rational, coefficients ascending, trailing zeros
/// trimmed.
class UnivariatePoly {
  public:
    UnivariatePoly() = default;
    explicit UnivariatePoly(std::vector<Rational> coeffs);

    const std::vector<Rational>& coeffs() const { return coeffs_; }
    long degree() const { return (long)coeffs_.size() - 1; }  // -1 for zero poly
    bool is_zero() const { return coeffs_.empty(); }
    Rational coeff(size_t i) const;
    Rational eval(const Rational& x) const;

    UnivariatePoly operator+(const UnivariatePoly& o) const;
    UnivariatePoly operator*(const UnivariatePoly& o) const;
    UnivariatePoly scaled(const Rational& s) const;
    bool operator==(const UnivariatePoly& o) const { return coeffs_ == o.coeffs_; }

  private:
    void trim();
    std::vector<Rational> coeffs_;
};

using Evaluable = std::function<Rational(const Rational&)>;

/// Sum of chi_{D0}(Q) Q(x,1)^{k-1} over the enumerated set at x. Exact.
Rational nonconst_sum(const LocalPolyParams& params, const Rational& x);

Evaluable nonconst_sum_evaluable(const LocalPolyParams& params);

/// Same weighted sum but with Q(X,1)^{k-1} kept as a polynomial in X,
/// the set being selected at x0.
UnivariatePoly weighted_poly(const LocalPolyParams& params, const Rational& x0);

/// Unweighted sums over the same sets (no genus character).
Rational zagier_sum(const Integer& N, const Integer& delta, const Rational& x);

/// The x=0 set gives a quadratic A x^2 + C with A = -C*N.
struct ZagierZeroPoly {
    Integer A;
    Integer C;
    UnivariatePoly poly;
};
ZagierZeroPoly zagier_zero_poly(const Integer& N, const Integer& delta);

/// Weight 2-2k slash: (gamma21 x + gamma22)^{2k-2} f(gamma x).
/// Throws SlashPole when gamma21 x + gamma22 = 0.
Rational slash(const Evaluable& f, int k, const GL2Matrix& gamma, const Rational& x);

/// Applies prod_i (T_{p_i} + s_i p_i^{1-2k}) in weight 2-2k pointwise:
/// (f|T_p)(x) = p^{1-2k} f(px) + p^{-1} sum_{j mod p} f((x+j)/p).
Rational hecke_apply(const Evaluable& f, int k, const HeckeSpec& spec, const Rational& x);

/// Leaf expansion of the Hecke product at x: pairs (argument, coefficient),
/// arguments deduplicated with summed coefficients.
std::vector<std::pair<Rational, Rational>> hecke_leaves(int k, const HeckeSpec& spec,
                                                        const Rational& x);

/// Truncated evaluation of the constant-at-infinity series
///   -2^{3-2k} / ((2k-1) binom(2k-2,k-1)) * sum_{a>0, N|a} a^{-k} *
///       sum_{b mod 2a, b^2 = delta mod 4a} chi_{D0}([a,b,(b^2-delta)/4a]).
/// The last-decade magnitude is a heuristic tail indicator, not a bound.
struct CInfinityApprox {
    double estimate;
    Rational exact_partial;   // prefactor * partial sum, exact
    double last_decade_abs;
};
CInfinityApprox c_infinity_approx(const LocalPolyParams& params, long trunc_a);

/// c = (-1)^k 2^{3-2k} delta^{1/2-k}, split as (rational factor) *
/// delta^(e/2) with e = 1-2k, plus a double.
struct CkDelta {
    Rational coeff;
    int sqrt_delta_exponent;
    double value;
};
CkDelta c_k_delta(int k, const Integer& delta);

}  // namespace lpv
