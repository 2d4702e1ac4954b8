#include "lpv/qforms.hpp"

#include <algorithm>
#include <cmath>

namespace lpv {

QuadForm::QuadForm(Integer a, Integer b, Integer c)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
    disc_ = b_ * b_ - 4 * a_ * c_;
}

Rational QuadForm::eval_at_rational(const Rational& x) const {
    const Integer& u = numer(x);
    const Integer& v = denom(x);
    Integer num = a_ * u * u + b_ * u * v + c_ * v * v;
    return rational(num, v * v);
}

Integer QuadForm::eval_at_integers(const Integer& x, const Integer& y) const {
    return a_ * x * x + b_ * x * y + c_ * y * y;
}

bool QuadForm::operator<(const QuadForm& o) const {
    if (a_ != o.a_) return a_ < o.a_;
    if (b_ != o.b_) return b_ < o.b_;
    return c_ < o.c_;
}

GL2Matrix::GL2Matrix(Integer m11, Integer m12, Integer m21, Integer m22)
    : m11_(std::move(m11)), m12_(std::move(m12)),
      m21_(std::move(m21)), m22_(std::move(m22)) {
    det_ = m11_ * m22_ - m12_ * m21_;
}

GL2Matrix GL2Matrix::identity() { return {1, 0, 0, 1}; }

GL2Matrix GL2Matrix::operator*(const GL2Matrix& o) const {
    return {m11_ * o.m11_ + m12_ * o.m21_, m11_ * o.m12_ + m12_ * o.m22_,
            m21_ * o.m11_ + m22_ * o.m21_, m21_ * o.m12_ + m22_ * o.m22_};
}

GL2Matrix GL2Matrix::inverse_unimodular() const {
    if (det_ == 1) return {m22_, -m12_, -m21_, m11_};
    if (det_ == -1) return {-m22_, m12_, m21_, -m11_};
    throw std::invalid_argument("inverse_unimodular: determinant is not +-1");
}

GL2Matrix GL2Matrix::power(long e) const {
    if (e < 0) throw std::invalid_argument("power: negative exponent");
    GL2Matrix r = identity();
    for (long i = 0; i < e; ++i) r = r * (*this);
    return r;
}

std::optional<Rational> GL2Matrix::mobius(const Rational& x) const {
    Integer num = m11_ * numer(x) + m12_ * denom(x);
    Integer den = m21_ * numer(x) + m22_ * denom(x);
    if (den == 0) return std::nullopt;
    return rational(num, den);
}

bool GL2Matrix::is_identity() const {
    return m11_ == 1 && m12_ == 0 && m21_ == 0 && m22_ == 1;
}

bool GL2Matrix::proj_equal(const GL2Matrix& o) const {
    return (*this == o) ||
           (m11_ == -o.m11_ && m12_ == -o.m12_ && m21_ == -o.m21_ && m22_ == -o.m22_);
}

QuadForm apply_matrix(const QuadForm& q, const GL2Matrix& g) {
    if (g.det() != 1)
        throw std::invalid_argument("apply_matrix: matrix must have determinant 1");
    Integer na = q.eval_at_integers(g.m11(), g.m21());
    Integer nc = q.eval_at_integers(g.m12(), g.m22());
    Integer nb = 2 * q.a() * g.m11() * g.m12() +
                 q.b() * (g.m11() * g.m22() + g.m12() * g.m21()) +
                 2 * q.c() * g.m21() * g.m22();
    return {na, nb, nc};
}

QuadForm fricke(const QuadForm& q, const Integer& N) {
    if (N <= 0) throw std::invalid_argument("fricke: level must be positive");
    if (q.a() % N != 0)
        throw std::invalid_argument("fricke: level does not divide the leading coefficient");
    return {q.c() * N, -q.b(), q.a() / N};
}

namespace {

void check_enumeration_args(const Integer& N, const Integer& delta) {
    if (N <= 0) throw std::invalid_argument("enumeration: level must be positive");
    if (delta <= 0) throw std::invalid_argument("enumeration: delta must be positive");
    if (is_square(delta)) throw std::invalid_argument("enumeration: delta must not be a square");
    Integer m4 = delta % 4;
    if (m4 != 0 && m4 != 1)
        throw std::invalid_argument("enumeration: delta must be 0 or 1 mod 4");
}

int64_t floor_div_i64(int64_t num, int64_t den) {
    int64_t q = num / den, r = num % den;
    if (r != 0 && ((r < 0) != (den < 0))) --q;
    return q;
}

int64_t ceil_div_i64(int64_t num, int64_t den) {
    return -floor_div_i64(-num, den);
}

int64_t isqrt_i64(int64_t n) {
    if (n < 0) return -1;
    auto r = (int64_t)std::sqrt((double)n);
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

}  // namespace

// Enumeration bound. Writing x = u/v in lowest terms, every form in the
// set satisfies Q(x,1) = (a u^2 + b u v + c v^2)/v^2 > 0 with an integer
// numerator, so Q(x,1) >= 1/v^2. For a < 0 the maximum of Q(.,1) over the
// reals is delta/(4|a|) (value at the vertex), which forces
// |a| <= delta v^2 / 4. For fixed a the identity
//   4a Q(x,1) = (2ax + b)^2 - delta
// turns a < 0 < Q(x,1) into (2au + bv)^2 < delta v^2, a window of width
// 2 sqrt(delta) in b; c = (b^2 - delta)/(4a) must be integral.
std::optional<std::vector<FormI64>> enumerate_small(const Integer& N,
                                                    const Integer& delta,
                                                    const Rational& x) {
    check_enumeration_args(N, delta);
    const Integer& nu = numer(x);
    const Integer& nv = denom(x);

    Integer amax_z = delta * nv * nv / 4;
    // int64 safety: every intermediate below stays within ~2^62.
    Integer wbound = delta * nv * nv;                      // W^2
    Integer tmax = 2 * amax_z * abs(nu) + wbound;          // |b v| upper bound
    Integer bmax = tmax / nv + 1;
    const Integer lim62("4611686018427387904");            // 2^62
    if (wbound >= lim62 || tmax >= lim62 || bmax * bmax >= lim62 ||
        !nu.fits_slong_p() || !nv.fits_slong_p() || !N.fits_slong_p())
        return std::nullopt;

    const int64_t u = nu.get_si(), v = nv.get_si();
    const int64_t n = N.get_si();
    const int64_t del = delta.get_si();
    const int64_t amax = amax_z.get_si();
    const int64_t W = isqrt_i64(del * v * v);  // strict window: |2au+bv| <= W

    std::vector<FormI64> out;
    for (int64_t A = n; A <= amax; A += n) {  // a = -A
        const int64_t A4 = 4 * A;
        // |b v - 2 A u| <= W
        const int64_t blo = ceil_div_i64(2 * A * u - W, v);
        const int64_t bhi = floor_div_i64(2 * A * u + W, v);
        if (blo > bhi) continue;
        int64_t m = (blo * blo - del) % A4;
        if (m < 0) m += A4;
        int64_t s = (2 * blo + 1) % A4;
        if (s < 0) s += A4;
        for (int64_t b = blo; b <= bhi; ++b) {
            if (m == 0) out.push_back({-A, b, (del - b * b) / A4});
            m += s;
            if (m >= A4) m -= A4;
            s += 2;
            if (s >= A4) s -= A4;
        }
    }
    std::sort(out.begin(), out.end(), [](const FormI64& p, const FormI64& q) {
        if (p.a != q.a) return p.a < q.a;
        if (p.b != q.b) return p.b < q.b;
        return p.c < q.c;
    });
    return out;
}

namespace {

// Exact big-int version of the same window scan.
std::vector<QuadForm> enumerate_exact(const Integer& N, const Integer& delta,
                                      const Rational& x) {
    const Integer& u = numer(x);
    const Integer& v = denom(x);
    Integer amax = delta * v * v / 4;
    Integer W = integer_sqrt_floor(delta * v * v);
    std::vector<QuadForm> out;
    for (Integer A = N; A <= amax; A += N) {
        Integer A4 = 4 * A;
        Integer lo = 2 * A * u - W, hi = 2 * A * u + W;
        Integer blo, bhi;
        mpz_cdiv_q(blo.get_mpz_t(), lo.get_mpz_t(), v.get_mpz_t());
        mpz_fdiv_q(bhi.get_mpz_t(), hi.get_mpz_t(), v.get_mpz_t());
        for (Integer b = blo; b <= bhi; ++b) {
            Integer num = b * b - delta;
            if (num % A4 == 0) out.emplace_back(-A, b, -num / A4);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

LevelFormSet enumerate_at_rational(const Integer& N, const Integer& delta,
                                   const Rational& x) {
    check_enumeration_args(N, delta);
    LevelFormSet set{N, delta, x, {}};
    if (auto fast = enumerate_small(N, delta, x)) {
        set.forms.reserve(fast->size());
        for (const FormI64& f : *fast)
            set.forms.emplace_back(Integer((long)f.a), Integer((long)f.b), Integer((long)f.c));
    } else {
        set.forms = enumerate_exact(N, delta, x);
    }
    return set;
}

std::vector<QuadForm> enumerate_negative_a_below_height(const Integer& N,
                                                        const Integer& delta,
                                                        const ExactUpperPoint& z) {
    check_enumeration_args(N, delta);
    if (z.im_sq <= 0)
        throw std::invalid_argument("enumerate_negative_a_below_height: Im z must be positive");

    // a < 0 < Q_z means a(x^2+y^2) + bx + c > 0, equivalently
    // (2ax + b)^2 + 4a^2 y^2 < delta; in particular 4a^2 y^2 < delta.
    const Integer& xu = numer(z.re);
    const Integer& xv = denom(z.re);
    const Integer& yu = numer(z.im_sq);
    const Integer& yv = denom(z.im_sq);

    std::vector<QuadForm> out;
    for (Integer A = N; 4 * A * A * yu < delta * yv; A += N) {
        Integer A4 = 4 * A;
        // (b xv - 2A xu)^2 * yv < (delta yv - 4 A^2 yu) * xv^2  =: R
        Integer R = (delta * yv - 4 * A * A * yu) * xv * xv;
        Integer w2 = R / yv;  // floor; strict test redone exactly per b
        Integer W = integer_sqrt_floor(w2);
        Integer lo = 2 * A * xu - W - 1, hi = 2 * A * xu + W + 1;
        Integer blo, bhi;
        mpz_cdiv_q(blo.get_mpz_t(), lo.get_mpz_t(), xv.get_mpz_t());
        mpz_fdiv_q(bhi.get_mpz_t(), hi.get_mpz_t(), xv.get_mpz_t());
        for (Integer b = blo; b <= bhi; ++b) {
            Integer t = b * xv - 2 * A * xu;
            if (t * t * yv >= R) continue;
            Integer num = b * b - delta;
            if (num % A4 == 0) out.emplace_back(-A, b, -num / A4);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool translate_bijection_check(const Integer& N, const Integer& delta,
                               const Rational& x) {
    LevelFormSet at_x = enumerate_at_rational(N, delta, x);
    LevelFormSet at_x1 = enumerate_at_rational(N, delta, x + 1);
    LevelFormSet at_mx = enumerate_at_rational(N, delta, Rational(-x));

    std::vector<QuadForm> mapped;
    mapped.reserve(at_x1.forms.size());
    for (const QuadForm& q : at_x1.forms)
        mapped.emplace_back(q.a(), q.b() + 2 * q.a(), q.a() + q.b() + q.c());
    std::sort(mapped.begin(), mapped.end());
    if (mapped != at_x.forms) return false;

    std::vector<QuadForm> mirrored;
    mirrored.reserve(at_x.forms.size());
    for (const QuadForm& q : at_x.forms) mirrored.emplace_back(q.a(), -q.b(), q.c());
    std::sort(mirrored.begin(), mirrored.end());
    return mirrored == at_mx.forms;
}

}  // namespace lpv
