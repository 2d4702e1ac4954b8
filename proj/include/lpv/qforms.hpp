#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "lpv/arith.hpp"

namespace lpv {

/// Integer binary quadratic form [a,b,c](X,Y) = aX^2 + bXY + cY^2.
/// No normalization is implied; [a,b,c] and [-a,-b,-c] are distinct.
class QuadForm {
  public:
    QuadForm(Integer a, Integer b, Integer c);

    const Integer& a() const { return a_; }
    const Integer& b() const { return b_; }
    const Integer& c() const { return c_; }
    const Integer& discriminant() const { return disc_; }

    Rational eval_at_rational(const Rational& x) const;
    Integer eval_at_integers(const Integer& x, const Integer& y) const;

    QuadForm negated() const { return {-a_, -b_, -c_}; }

    bool operator==(const QuadForm& o) const {
        return a_ == o.a_ && b_ == o.b_ && c_ == o.c_;
    }
    bool operator<(const QuadForm& o) const;

  private:
    Integer a_, b_, c_;
    Integer disc_;
};

/// 2x2 integer matrix with cached determinant.
class GL2Matrix {
  public:
    GL2Matrix(Integer m11, Integer m12, Integer m21, Integer m22);
    static GL2Matrix identity();

    const Integer& m11() const { return m11_; }
    const Integer& m12() const { return m12_; }
    const Integer& m21() const { return m21_; }
    const Integer& m22() const { return m22_; }
    const Integer& det() const { return det_; }

    GL2Matrix operator*(const GL2Matrix& o) const;
    GL2Matrix inverse_unimodular() const;  // requires det = +-1
    GL2Matrix power(long e) const;         // e >= 0

    /// Moebius action on a rational point; nullopt at the pole.
    std::optional<Rational> mobius(const Rational& x) const;

    bool is_identity() const;
    bool proj_equal(const GL2Matrix& o) const;  // equal up to sign

    bool operator==(const GL2Matrix& o) const {
        return m11_ == o.m11_ && m12_ == o.m12_ && m21_ == o.m21_ && m22_ == o.m22_;
    }

  private:
    Integer m11_, m12_, m21_, m22_;
    Integer det_;
};

/// Right action (Q o gamma)(x,y) = Q(m11 x + m12 y, m21 x + m22 y).
/// gamma must be unimodular (det 1); preserves the discriminant.
QuadForm apply_matrix(const QuadForm& q, const GL2Matrix& gamma);

/// Fricke involution on level-N forms: [a,b,c] -> [cN, -b, a/N].
/// Requires N | a.
QuadForm fricke(const QuadForm& q, const Integer& N);

/// The complete set {Q = [a,b,c] : N|a, disc Q = delta, a < 0 < Q(x,1)}
/// for a rational x and a positive nonsquare delta.
struct LevelFormSet {
    Integer level;
    Integer delta;
    Rational point;
    std::vector<QuadForm> forms;  // sorted by (a, b, c)
};

LevelFormSet enumerate_at_rational(const Integer& N, const Integer& delta,
                                   const Rational& x);

/// int64 form for the enumeration fast path.
struct FormI64 {
    int64_t a, b, c;
};

/// Fast-path enumeration; returns nullopt when the bounds do not fit
/// comfortably in int64 (caller falls back to the exact big-int path).
std::optional<std::vector<FormI64>> enumerate_small(const Integer& N,
                                                    const Integer& delta,
                                                    const Rational& x);

/// A point x + iy in the upper half plane with rational x and rational y^2,
/// so that sign tests against geodesics stay exact.
struct ExactUpperPoint {
    Rational re;
    Rational im_sq;  // > 0
};

/// All Q = [a,b,c] with N|a, disc = delta, a < 0 < Q_z where
/// Q_z = (a|z|^2 + b Re z + c)/Im z. Empty whenever Im z > sqrt(delta)/(2N).
std::vector<QuadForm> enumerate_negative_a_below_height(const Integer& N,
                                                        const Integer& delta,
                                                        const ExactUpperPoint& z);

/// Verifies that [a,b,c] -> [a, b+2a, a+b+c] maps the set at x+1 onto the
/// set at x, and [a,b,c] -> [a,-b,c] maps the set at x onto the set at -x.
bool translate_bijection_check(const Integer& N, const Integer& delta,
                               const Rational& x);

}  // namespace lpv
