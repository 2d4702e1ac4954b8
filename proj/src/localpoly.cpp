#include "lpv/localpoly.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace lpv {

LocalPolyParams LocalPolyParams::checked(int k, Integer N, Integer D, Integer D0) {
    if (k < 2) throw std::invalid_argument("params: k must be at least 2");
    if (N < 1) throw std::invalid_argument("params: N must be positive");
    const int sign = (k % 2 == 0) ? 1 : -1;
    if (sign * D <= 0) throw std::invalid_argument("params: (-1)^k D must be positive");
    if (sign * D0 <= 0) throw std::invalid_argument("params: (-1)^k D0 must be positive");
    if (!is_fundamental_discriminant(D))
        throw std::invalid_argument("params: D is not a fundamental discriminant");
    if (!is_fundamental_discriminant(D0))
        throw std::invalid_argument("params: D0 is not a fundamental discriminant");
    if (gcd(D, N) != 1) throw std::invalid_argument("params: gcd(D, N) != 1");
    if (gcd(D0, N) != 1) throw std::invalid_argument("params: gcd(D0, N) != 1");
    Integer delta = D * D0;
    if (is_square(delta)) throw std::invalid_argument("params: D*D0 is a square");
    for (const auto& [p, e] : factorize(N)) {
        (void)e;
        if (kronecker(D, p) != kronecker(D0, p))
            throw std::invalid_argument("params: (D|p) != (D0|p) at a prime dividing N");
    }
    return {k, std::move(N), std::move(D), std::move(D0), std::move(delta)};
}

HeckeSpec HeckeSpec::checked(std::vector<HeckeFactor> factors, const Integer& N) {
    for (size_t i = 0; i < factors.size(); ++i) {
        if (!is_probable_prime(Integer(factors[i].p)))
            throw std::invalid_argument("hecke: factor base must be prime");
        if (N % factors[i].p == 0)
            throw std::invalid_argument("hecke: prime divides the level");
        for (size_t j = i + 1; j < factors.size(); ++j)
            if (factors[i].p == factors[j].p)
                throw std::invalid_argument("hecke: primes must be pairwise distinct");
    }
    HeckeSpec s;
    s.factors_ = std::move(factors);
    return s;
}

UnivariatePoly::UnivariatePoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) {
    trim();
}

void UnivariatePoly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Rational UnivariatePoly::coeff(size_t i) const {
    return i < coeffs_.size() ? coeffs_[i] : Rational(0);
}

Rational UnivariatePoly::eval(const Rational& x) const {
    Rational acc = 0;
    for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * x + coeffs_[i];
    return acc;
}

UnivariatePoly UnivariatePoly::operator+(const UnivariatePoly& o) const {
    std::vector<Rational> out(std::max(coeffs_.size(), o.coeffs_.size()), Rational(0));
    for (size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
    for (size_t i = 0; i < o.coeffs_.size(); ++i) out[i] += o.coeffs_[i];
    return UnivariatePoly(std::move(out));
}

UnivariatePoly UnivariatePoly::operator*(const UnivariatePoly& o) const {
    if (coeffs_.empty() || o.coeffs_.empty()) return {};
    std::vector<Rational> out(coeffs_.size() + o.coeffs_.size() - 1, Rational(0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
    return UnivariatePoly(std::move(out));
}

UnivariatePoly UnivariatePoly::scaled(const Rational& s) const {
    std::vector<Rational> out = coeffs_;
    for (auto& c : out) c *= s;
    return UnivariatePoly(std::move(out));
}

namespace {

Integer pow_integer(const Integer& base, unsigned long e) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

// Per-form character values for an enumerated set, with the int64 batch
// evaluator when everything fits and the generic route otherwise.
struct CharacterizedSet {
    std::vector<QuadForm> forms;
    std::vector<int> chi;
};

CharacterizedSet characterized_set(const LocalPolyParams& params, const Rational& x) {
    CharacterizedSet out;
    if (params.D0.fits_slong_p()) {
        if (auto fast = enumerate_small(params.N, params.delta, x)) {
            GenusCharEvaluator chi(params.D0.get_si());
            out.forms.reserve(fast->size());
            out.chi.reserve(fast->size());
            for (const FormI64& f : *fast) {
                out.forms.emplace_back(Integer((long)f.a), Integer((long)f.b),
                                       Integer((long)f.c));
                out.chi.push_back(chi.eval_negative_leading(f.a, f.b, f.c));
            }
            return out;
        }
    }
    LevelFormSet set = enumerate_at_rational(params.N, params.delta, x);
    Discriminant d0(params.D0);
    out.forms = std::move(set.forms);
    out.chi.reserve(out.forms.size());
    for (const QuadForm& q : out.forms) out.chi.push_back(chi_explicit({d0, q}));
    return out;
}

}  // namespace

Rational nonconst_sum(const LocalPolyParams& params, const Rational& x) {
    const Integer& v = denom(x);
    const Integer& u = numer(x);
    // Fast path sums (t^2 - delta v^2)/(4a) = Q(x,1) v^2 in int64.
    if (params.D0.fits_slong_p()) {
        if (auto fast = enumerate_small(params.N, params.delta, x)) {
            GenusCharEvaluator chi(params.D0.get_si());
            const int64_t uu = u.get_si(), vv = v.get_si(), del = params.delta.get_si();
            Integer acc = 0;
            for (const FormI64& f : *fast) {
                int s = chi.eval_negative_leading(f.a, f.b, f.c);
                if (s == 0) continue;
                int64_t t = 2 * f.a * uu + f.b * vv;
                int64_t num = (del * vv * vv - t * t) / (-4 * f.a);
                acc += s * pow_integer(Integer((long)num), params.k - 1);
            }
            return rational(acc, pow_integer(v, 2 * (params.k - 1)));
        }
    }
    CharacterizedSet set = characterized_set(params, x);
    Rational acc = 0;
    for (size_t i = 0; i < set.forms.size(); ++i) {
        if (set.chi[i] == 0) continue;
        Rational val = set.forms[i].eval_at_rational(x);
        Rational pw = 1;
        for (int j = 0; j < params.k - 1; ++j) pw *= val;
        acc += set.chi[i] * pw;
    }
    return acc;
}

Evaluable nonconst_sum_evaluable(const LocalPolyParams& params) {
    return [params](const Rational& x) { return nonconst_sum(params, x); };
}

UnivariatePoly weighted_poly(const LocalPolyParams& params, const Rational& x0) {
    CharacterizedSet set = characterized_set(params, x0);
    UnivariatePoly acc;
    for (size_t i = 0; i < set.forms.size(); ++i) {
        if (set.chi[i] == 0) continue;
        const QuadForm& q = set.forms[i];
        UnivariatePoly base({Rational(q.c()), Rational(q.b()), Rational(q.a())});
        UnivariatePoly pw({Rational(1)});
        for (int j = 0; j < params.k - 1; ++j) pw = pw * base;
        acc = acc + pw.scaled(Rational(set.chi[i]));
    }
    if (acc.degree() > 2 * params.k - 2)
        throw std::logic_error("weighted_poly: degree bound violated");
    return acc;
}

Rational zagier_sum(const Integer& N, const Integer& delta, const Rational& x) {
    LevelFormSet set = enumerate_at_rational(N, delta, x);
    Rational acc = 0;
    for (const QuadForm& q : set.forms) acc += q.eval_at_rational(x);
    return acc;
}

ZagierZeroPoly zagier_zero_poly(const Integer& N, const Integer& delta) {
    LevelFormSet set = enumerate_at_rational(N, delta, Rational(0));
    Integer A = 0, B = 0, C = 0;
    for (const QuadForm& q : set.forms) {
        A += q.a();
        B += q.b();
        C += q.c();
    }
    if (B != 0) throw std::logic_error("zagier_zero_poly: odd coefficient did not cancel");
    if (A != -C * N) throw std::logic_error("zagier_zero_poly: A = -C*N violated");
    return {A, C, UnivariatePoly({Rational(C), Rational(0), Rational(A)})};
}

Rational slash(const Evaluable& f, int k, const GL2Matrix& gamma, const Rational& x) {
    Rational den = gamma.m21() * x + gamma.m22();
    if (den == 0) throw SlashPole("slash: evaluation point maps to the pole");
    Rational num = gamma.m11() * x + gamma.m12();
    Rational factor = 1;
    for (int i = 0; i < 2 * k - 2; ++i) factor *= den;
    return factor * f(num / den);
}

std::vector<std::pair<Rational, Rational>> hecke_leaves(int k, const HeckeSpec& spec,
                                                        const Rational& x) {
    auto cmp = [](const Rational& a, const Rational& b) { return mpq_cmp(a.get_mpq_t(), b.get_mpq_t()) < 0; };
    std::map<Rational, Rational, decltype(cmp)> leaves(cmp);
    leaves[x] = 1;
    for (const HeckeFactor& fac : spec.factors()) {
        std::map<Rational, Rational, decltype(cmp)> next(cmp);
        Integer p(fac.p);
        Rational p_pow = rational(1, pow_integer(p, 2 * k - 1));  // p^{1-2k}
        Rational p_inv = rational(1, p);
        for (const auto& [arg, coef] : leaves) {
            next[arg * Rational(p)] += coef * p_pow;
            for (long j = 0; j < fac.p; ++j)
                next[(arg + j) / Rational(p)] += coef * p_inv;
            next[arg] += coef * Rational(fac.shift) * p_pow;
        }
        leaves = std::move(next);
    }
    std::vector<std::pair<Rational, Rational>> out;
    out.reserve(leaves.size());
    for (auto& [arg, coef] : leaves)
        if (coef != 0) out.emplace_back(arg, coef);
    return out;
}

Rational hecke_apply(const Evaluable& f, int k, const HeckeSpec& spec, const Rational& x) {
    Rational acc = 0;
    for (const auto& [arg, coef] : hecke_leaves(k, spec, x)) acc += coef * f(arg);
    return acc;
}

CInfinityApprox c_infinity_approx(const LocalPolyParams& params, long trunc_a) {
    if (trunc_a < params.N)
        throw std::invalid_argument("c_infinity_approx: truncation below the level");
    if (!params.D0.fits_slong_p() || !params.delta.fits_slong_p() || !params.N.fits_slong_p())
        throw std::invalid_argument("c_infinity_approx: parameters too large for the scanner");

    const int64_t n = params.N.get_si(), del = params.delta.get_si();
    GenusCharEvaluator chi(params.D0.get_si());

    Integer binom;
    mpz_bin_uiui(binom.get_mpz_t(), 2 * params.k - 2, params.k - 1);
    Rational prefactor = rational(Integer(-1) * 8,
                                  pow_integer(2, 2 * params.k) * (2 * params.k - 1) * binom);

    Rational partial = 0, last_decade = 0;
    const long decade_start = trunc_a - trunc_a / 10;
    for (int64_t a = n; a <= trunc_a; a += n) {
        int64_t inner = 0;
        const int64_t a4 = 4 * a;
        for (int64_t b = 0; b < 2 * a; ++b) {
            int64_t r = (b * b - del) % a4;
            if (r < 0) r += a4;
            if (r != 0) continue;
            inner += chi.eval_positive_leading(a, b, (b * b - del) / a4);
        }
        if (inner == 0) continue;
        Rational term = rational(Integer((long)inner), pow_integer(Integer((long)a), params.k));
        partial += term;
        if (a > decade_start) last_decade += term;
    }
    Rational exact = prefactor * partial;
    Rational decade = prefactor * last_decade;
    return {exact.get_d(), exact, std::abs(decade.get_d())};
}

CkDelta c_k_delta(int k, const Integer& delta) {
    if (delta <= 0) throw std::invalid_argument("c_k_delta: delta must be positive");
    Integer sign = (k % 2 == 0) ? 1 : -1;
    Rational coeff = rational(sign * 8, pow_integer(2, 2 * k));  // (-1)^k 2^{3-2k}
    int e = 1 - 2 * k;
    double value = coeff.get_d() * std::pow(delta.get_d(), e / 2.0);
    return {coeff, e, value};
}

}  // namespace lpv
