#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include "lpv/localpoly.hpp"
#include "lpv/qforms.hpp"

namespace lpv {

/// Numeric-layer parameters. D need not be fundamental here: the
/// discriminant-shifting Hecke identity evaluates the D*p^2 family.
struct MaassParams {
    int k;
    long N;
    long long D;
    long long D0;     // fundamental
    long long delta;  // D * D0, positive nonsquare

    static MaassParams checked(int k, long N, long long D, long long D0);
    static MaassParams from(const LocalPolyParams& p);
};

struct MaassEvalConfig {
    MaassParams params;
    long a_bound;           // truncation on |a|, a multiple of N
    int b_window;           // half-width multiplier on sqrt(delta)
    double quadrature_tol = 1e-10;
    double geodesic_margin = 1e-9;  // relative proximity that counts as "on"
};

struct ComplexPoint {
    double re;
    double im;
};

/// beta(v; k-1/2, 1/2) = int_0^v u^{k-3/2} (1-u)^{-1/2} du, computed after
/// u = sin^2(theta), which removes the endpoint singularity at v = 1.
double beta_incomplete(double v, int k, double tol = 1e-12);

/// Raised when an evaluation point sits on the geodesic of a retained form
/// that was not explicitly allowed.
struct GeodesicHit : std::runtime_error {
    FormI64 form;
    GeodesicHit(const std::string& msg, FormI64 f) : std::runtime_error(msg), form(f) {}
};

struct MaassValue {
    std::complex<double> value;
    double tail_indicator;  // outermost-decade term mass; heuristic only
};

/// Truncated evaluation of the weight 2-2k locally harmonic form: the sum
/// of chi(Q) sgn(Q_z) Q(z,1)^{k-1} beta(delta y^2/|Q(z,1)|^2; k-1/2, 1/2)
/// over |a| <= a_bound, N | a, scaled by delta^{1/2-k}/(binom(2k-2,k-1) 2 pi).
/// Terms decay like delta^{k-1/2} y^{2k-1} |Q(z,1)|^{-k}.
MaassValue eval_F(const MaassEvalConfig& cfg, ComplexPoint z,
                  const std::vector<FormI64>& on_geodesic_ok = {});

struct IntMatrix2 {
    long long m11, m12, m21, m22;
};

/// |(cz+d)^{2k-2} F(gamma z) - F(z)| / max(1, |F(z)|).
double check_modularity(const MaassEvalConfig& cfg, const IntMatrix2& gamma, ComplexPoint z);

/// |N^{k-1} z^{2k-2} F(-1/(Nz)) - (D0|N) F(z)| / max(1, |F(z)|).
double check_fricke(const MaassEvalConfig& cfg, ComplexPoint z);

/// Residuals |F(z0) - (F(z0+iw) + F(z0-iw))/2| for a ladder of w, with z0
/// on the geodesic of q0 (and away from crossings with other geodesics).
struct LadderResult {
    ComplexPoint z0;
    std::vector<double> w;
    std::vector<double> residual;
};
LadderResult check_exceptional_average(const MaassEvalConfig& cfg, const FormI64& q0,
                                       const std::vector<double>& ws);

/// Pointwise T_p at weight 2-2k against the discriminant-shifted family:
/// F_D|T_p vs F_{Dp^2} + p^{-k} (D|p) F_D. Requires gcd(p, N D0) = 1 and
/// p^2 not dividing D. Returns the max normalized residual over zs.
double check_hecke_relation(const MaassEvalConfig& cfg, long p,
                            const std::vector<ComplexPoint>& zs);

/// A form [-A, b, c] in the level set with the smallest |a|, for picking
/// test geodesics.
FormI64 minimal_level_form(const MaassEvalConfig& cfg);

ComplexPoint point_on_geodesic(const MaassEvalConfig& cfg, const FormI64& q0);

}  // namespace lpv
