#include "lpv/maassnum.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lpv/genus.hpp"

namespace lpv {

namespace {

constexpr double kPi = 3.14159265358979323846;

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
const double kGLNode[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                           0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                           0.9445750230732326, 0.9894009349916499};
const double kGLWeight[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                             0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                             0.0622535239386479, 0.0271524594117541};

template <typename F>
double gl16(const F& f, double a, double b) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (int i = 0; i < 8; ++i) {
        acc += kGLWeight[i] * (f(mid + half * kGLNode[i]) + f(mid - half * kGLNode[i]));
    }
    return acc * half;
}

template <typename F>
double adaptive(const F& f, double a, double b, double tol, int depth) {
    double whole = gl16(f, a, b);
    double mid = 0.5 * (a + b);
    double split = gl16(f, a, mid) + gl16(f, mid, b);
    if (depth > 24 || std::abs(whole - split) <= tol * std::max(1.0, std::abs(split)))
        return split;
    return adaptive(f, a, mid, tol / 2, depth + 1) + adaptive(f, mid, b, tol / 2, depth + 1);
}

}  // namespace

double beta_incomplete(double v, int k, double tol) {
    if (v < 0.0 || v > 1.0) throw std::invalid_argument("beta_incomplete: v outside [0,1]");
    if (k < 2) throw std::invalid_argument("beta_incomplete: k must be at least 2");
    if (v == 0.0) return 0.0;
    double theta = std::asin(std::sqrt(v));
    auto integrand = [k](double t) {
        double s = std::sin(t);
        return 2.0 * std::pow(s, 2 * k - 2);
    };
    return adaptive(integrand, 0.0, theta, tol, 0);
}

MaassParams MaassParams::checked(int k, long N, long long D, long long D0) {
    if (k < 2) throw std::invalid_argument("maass params: k must be at least 2");
    if (N < 1) throw std::invalid_argument("maass params: N must be positive");
    long long dm = ((D % 4) + 4) % 4;
    if (dm != 0 && dm != 1) throw std::invalid_argument("maass params: D not a discriminant");
    if (!is_fundamental_discriminant(Integer((long)D0)))
        throw std::invalid_argument("maass params: D0 must be fundamental");
    const long long sign = (k % 2 == 0) ? 1 : -1;
    if (sign * D <= 0 || sign * D0 <= 0)
        throw std::invalid_argument("maass params: sign condition (-1)^k D, (-1)^k D0 > 0");
    long long delta = D * D0;
    if (delta <= 0 || is_square(Integer((long)delta)))
        throw std::invalid_argument("maass params: D*D0 must be positive and nonsquare");
    return {k, N, D, D0, delta};
}

MaassParams MaassParams::from(const LocalPolyParams& p) {
    return checked(p.k, p.N.get_si(), p.D.get_si(), p.D0.get_si());
}

namespace {

std::complex<double> cpow_int(std::complex<double> z, int e) {
    std::complex<double> r = 1.0;
    for (int i = 0; i < e; ++i) r *= z;
    return r;
}

double binom_double(int n, int k) {
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b.get_d();
}

}  // namespace

MaassValue eval_F(const MaassEvalConfig& cfg, ComplexPoint z,
                  const std::vector<FormI64>& on_geodesic_ok) {
    const MaassParams& pp = cfg.params;
    if (z.im <= 0) throw std::invalid_argument("eval_F: point must be in the upper half plane");
    if (cfg.a_bound < pp.N || cfg.a_bound % pp.N != 0)
        throw std::invalid_argument("eval_F: a_bound must be a positive multiple of N");

    const double x = z.re, y = z.im;
    const double x2y2 = x * x + y * y;
    const long long del = pp.delta;
    const double dy2 = (double)del * y * y;
    const double hw = cfg.b_window * std::sqrt((double)del);
    GenusCharEvaluator chi(pp.D0);

    const long decade_start = cfg.a_bound - cfg.a_bound / 10;
    std::complex<double> acc = 0.0;
    double tail = 0.0;

    auto allowed = [&](long long a, long long b, long long c) {
        for (const FormI64& f : on_geodesic_ok) {
            if (f.a == a && f.b == b && f.c == c) return true;
            if (f.a == -a && f.b == -b && f.c == -c) return true;
        }
        return false;
    };

    for (long A = pp.N; A <= cfg.a_bound; A += pp.N) {
        const long long A4 = 4LL * A;
        for (int sgn_a = -1; sgn_a <= 1; sgn_a += 2) {
            const long long a = sgn_a * (long long)A;
            const double center = -2.0 * (double)a * x;
            const long long blo = (long long)std::ceil(center - hw);
            const long long bhi = (long long)std::floor(center + hw);
            for (long long b = blo; b <= bhi; ++b) {
                long long r = (b * b - del) % A4;
                if (r < 0) r += A4;
                if (r != 0) continue;
                const long long c = (b * b - del) / (4 * a);
                const double qz_num = (double)a * x2y2 + (double)b * x + (double)c;
                const double scale =
                    std::abs((double)a) * x2y2 + std::abs((double)b * x) + std::abs((double)c) + 1.0;
                if (std::abs(qz_num) < cfg.geodesic_margin * scale) {
                    if (allowed(a, b, c)) continue;  // two-sided limit: sgn = 0
                    throw GeodesicHit("eval_F: point on the geodesic of a retained form",
                                      {a, b, c});
                }
                int s = a > 0 ? chi.eval_positive_leading(a, b, c)
                              : chi.eval_negative_leading(a, b, c);
                if (s == 0) continue;
                const double sgn = qz_num > 0 ? 1.0 : -1.0;
                const std::complex<double> q_z1((double)a * (x * x - y * y) + (double)b * x + (double)c,
                                                y * (2.0 * (double)a * x + (double)b));
                const double v = dy2 / (qz_num * qz_num + dy2);
                const double beta = beta_incomplete(v, pp.k, cfg.quadrature_tol);
                const std::complex<double> term =
                    (double)s * sgn * cpow_int(q_z1, pp.k - 1) * beta;
                acc += term;
                if (A > decade_start) tail += std::abs(term);
            }
        }
    }
    const double pref = std::pow((double)del, 0.5 - pp.k) /
                        (binom_double(2 * pp.k - 2, pp.k - 1) * 2.0 * kPi);
    return {pref * acc, pref * tail};
}

double check_modularity(const MaassEvalConfig& cfg, const IntMatrix2& g, ComplexPoint z) {
    if (g.m11 * g.m22 - g.m12 * g.m21 != 1)
        throw std::invalid_argument("check_modularity: matrix must have determinant 1");
    if (g.m21 % cfg.params.N != 0)
        throw std::invalid_argument("check_modularity: matrix is not in Gamma0(N)");
    std::complex<double> zz(z.re, z.im);
    std::complex<double> den = (double)g.m21 * zz + (double)g.m22;
    std::complex<double> gz = ((double)g.m11 * zz + (double)g.m12) / den;
    MaassValue fz = eval_F(cfg, z);
    MaassValue fgz = eval_F(cfg, {gz.real(), gz.imag()});
    std::complex<double> lhs = cpow_int(den, 2 * cfg.params.k - 2) * fgz.value;
    return std::abs(lhs - fz.value) / std::max(1.0, std::abs(fz.value));
}

double check_fricke(const MaassEvalConfig& cfg, ComplexPoint z) {
    std::complex<double> zz(z.re, z.im);
    std::complex<double> w = -1.0 / ((double)cfg.params.N * zz);
    MaassValue fz = eval_F(cfg, z);
    MaassValue fw = eval_F(cfg, {w.real(), w.imag()});
    int eps = kronecker_i64(cfg.params.D0, cfg.params.N);
    std::complex<double> lhs = std::pow((double)cfg.params.N, cfg.params.k - 1) *
                               cpow_int(zz, 2 * cfg.params.k - 2) * fw.value;
    return std::abs(lhs - (double)eps * fz.value) / std::max(1.0, std::abs(fz.value));
}

FormI64 minimal_level_form(const MaassEvalConfig& cfg) {
    const long long del = cfg.params.delta;
    for (long A = cfg.params.N; A <= cfg.a_bound; A += cfg.params.N) {
        const long long A4 = 4LL * A;
        for (long long b = 0; b < 2 * A; ++b) {
            long long r = (b * b - del) % A4;
            if (r < 0) r += A4;
            if (r != 0) continue;
            return {-(long long)A, b, (del - b * b) / A4};
        }
    }
    throw std::runtime_error("minimal_level_form: no form found below the truncation");
}

ComplexPoint point_on_geodesic(const MaassEvalConfig& cfg, const FormI64& q0) {
    if (q0.a == 0) throw std::invalid_argument("point_on_geodesic: leading coefficient is zero");
    const double center = -(double)q0.b / (2.0 * (double)q0.a);
    const double radius = std::sqrt((double)cfg.params.delta) / (2.0 * std::abs((double)q0.a));

    // Pick the arc angle whose point stays farthest from every other
    // retained geodesic (relative distance), probing a small fan.
    double best_phi = 0.0, best_clear = -1.0;
    for (int i = 1; i <= 40; ++i) {
        double phi = kPi * i / 42.0;
        ComplexPoint z{center + radius * std::cos(phi), radius * std::sin(phi)};
        if (z.im < 1e-3) continue;
        double x2y2 = z.re * z.re + z.im * z.im;
        double clear = 1e300;
        const long long del = cfg.params.delta;
        const double hw = cfg.b_window * std::sqrt((double)del);
        for (long A = cfg.params.N; A <= cfg.a_bound; A += cfg.params.N) {
            const long long A4 = 4LL * A;
            for (int sgn_a = -1; sgn_a <= 1; sgn_a += 2) {
                const long long a = sgn_a * (long long)A;
                const double c0 = -2.0 * (double)a * z.re;
                for (long long b = (long long)std::ceil(c0 - hw); b <= (long long)std::floor(c0 + hw); ++b) {
                    long long r = (b * b - del) % A4;
                    if (r < 0) r += A4;
                    if (r != 0) continue;
                    const long long c = (b * b - del) / (4 * a);
                    if ((a == q0.a && b == q0.b && c == q0.c) ||
                        (a == -q0.a && b == -q0.b && c == -q0.c))
                        continue;
                    double qn = (double)a * x2y2 + (double)b * z.re + (double)c;
                    double scale = std::abs((double)a) * x2y2 + std::abs((double)b * z.re) +
                                   std::abs((double)c) + 1.0;
                    clear = std::min(clear, std::abs(qn) / scale);
                }
            }
        }
        if (clear > best_clear) {
            best_clear = clear;
            best_phi = phi;
        }
    }
    if (best_clear <= cfg.geodesic_margin * 100)
        throw std::runtime_error("point_on_geodesic: no crossing-free point found");
    return {center + radius * std::cos(best_phi), radius * std::sin(best_phi)};
}

LadderResult check_exceptional_average(const MaassEvalConfig& cfg, const FormI64& q0,
                                       const std::vector<double>& ws) {
    ComplexPoint z0 = point_on_geodesic(cfg, q0);
    std::vector<FormI64> allowed{q0};
    MaassValue at = eval_F(cfg, z0, allowed);
    LadderResult out;
    out.z0 = z0;
    for (double w : ws) {
        MaassValue up = eval_F(cfg, {z0.re, z0.im + w}, allowed);
        MaassValue dn = eval_F(cfg, {z0.re, z0.im - w}, allowed);
        out.w.push_back(w);
        out.residual.push_back(std::abs(at.value - 0.5 * (up.value + dn.value)));
    }
    return out;
}

double check_hecke_relation(const MaassEvalConfig& cfg, long p,
                            const std::vector<ComplexPoint>& zs) {
    const MaassParams& pp = cfg.params;
    if (std::gcd((long long)p, (long long)pp.N * std::abs(pp.D0)) != 1)
        throw std::invalid_argument("check_hecke_relation: p must be coprime to N*D0");
    if (pp.D % ((long long)p * p) == 0)
        throw std::invalid_argument("check_hecke_relation: p^2 divides D");

    MaassEvalConfig shifted = cfg;
    shifted.params = MaassParams::checked(pp.k, pp.N, pp.D * p * p, pp.D0);

    const double p1k = std::pow((double)p, 1.0 - 2.0 * pp.k);
    const int chi_dp = kronecker_i64(pp.D, p);
    double worst = 0.0;
    for (ComplexPoint z : zs) {
        std::complex<double> lhs =
            p1k * eval_F(cfg, {z.re * p, z.im * p}).value;
        for (long j = 0; j < p; ++j)
            lhs += eval_F(cfg, {(z.re + j) / p, z.im / p}).value / (double)p;
        std::complex<double> rhs = shifted.a_bound >= shifted.params.N
                                       ? eval_F(shifted, z).value
                                       : std::complex<double>(0.0);
        rhs += std::pow((double)p, -(double)pp.k) * (double)chi_dp * eval_F(cfg, z).value;
        double res = std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs));
        worst = std::max(worst, res);
    }
    return worst;
}

}  // namespace lpv
