#pragma once

#include <cstdint>
#include <vector>

#include "lpv/arith.hpp"
#include "lpv/qforms.hpp"

namespace lpv {

/// Raised when the coprime-representative box search runs out of budget.
/// A wrong silent 0 would poison every downstream sum, so this is fatal.
struct GenusSearchExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GenusCharQuery {
    Discriminant d0;   // fundamental
    QuadForm form;     // d0 must divide disc(form)
};

/// Extended genus character, straight from the definition: 0 when
/// gcd(a,b,c,d0) > 1, otherwise the Kronecker symbol (d0 | r) at any
/// represented value r coprime to d0 (independent of the choice).
int chi_by_definition(const GenusCharQuery& q);

/// Same value via the explicit product formula over primes dividing the
/// leading coefficient. Forms with a <= 0 are first replaced by an
/// SL2-equivalent form with positive leading coefficient.
int chi_explicit(const GenusCharQuery& q);

/// p^* = +-p^l where |p^*| is the exact power of p dividing d and d/p^*
/// is a fundamental discriminant (1 admitted); the positive sign wins
/// when both qualify.
Integer p_star(const Integer& p, const Integer& d);

/// SL2-equivalent form with positive leading coefficient, produced by
/// translations and [a,b,c] -> [c,-b,a] swaps. Requires an indefinite
/// nonsquare discriminant.
QuadForm normalize_positive_leading(const QuadForm& q);

/// Batch evaluator for one fixed fundamental d0, int64 forms, positive
/// leading coefficient required. Used by the enumeration-sum hot path.
class GenusCharEvaluator {
  public:
    explicit GenusCharEvaluator(int64_t d0);

    /// chi_{d0}([a,b,c]) for a > 0 with d0 | b^2-4ac (not re-checked).
    int eval_positive_leading(int64_t a, int64_t b, int64_t c) const;

    /// chi_{d0}([a,b,c]) for a < 0, via chi(Q) = (d0|-1) chi(-Q).
    int eval_negative_leading(int64_t a, int64_t b, int64_t c) const;

    int64_t d0() const { return d0_; }

  private:
    int64_t d0_;
    int sign_flip_;  // (d0 | -1)
    struct PrimePower { int64_t p; int64_t pstar; };
    std::vector<PrimePower> d0_primes_;
};

/// Full Kronecker symbol on int64 arguments (matches kronecker()).
int kronecker_i64(int64_t a, int64_t n);

}  // namespace lpv
