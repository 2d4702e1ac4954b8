#pragma once

#include <string>
#include <vector>

#include "lpv/gamma0.hpp"
#include "lpv/localpoly.hpp"

namespace lpv {

enum class Verdict { Vanishing, NonVanishing };

struct VanishJob {
    int k = 2;
    Integer N;
    Integer D0;
    std::vector<Integer> candidates;
    HeckeSpec hecke;
    Rational base_point = Rational(0);
    int threads = 1;
    /// The Atkin-Lehner eigenvalue hypothesis cannot be checked here and
    /// is carried as user-asserted metadata into the report.
    std::string al_assertion;
};

struct PointValue {
    Rational x;
    int generator;
    int power;
    Rational value;  // S(x) - S(base)
};

struct CandidateReport {
    Integer D;
    Integer D0;
    bool skipped = false;
    std::string skip_reason;
    Verdict verdict = Verdict::NonVanishing;
    int rounds_used = 0;
    Rational base_value;            // S(base)
    std::vector<PointValue> table;  // every evaluated orbit point
};

struct VanishReport {
    int k;
    Integer N;
    std::string al_assertion;
    std::vector<CandidateReport> candidates;
};

/// S(x) = (chi-weighted sum of Q(x,1)^{k-1}) slashed through the lifted
/// Hecke product, evaluated exactly.
Rational S_value(const LocalPolyParams& params, const HeckeSpec& spec, const Rational& x);

Rational P_relative(const LocalPolyParams& params, const HeckeSpec& spec,
                    const Rational& base, const Rational& x);

/// Two-phase decision: NONVANISHING on the first nonzero generator-orbit
/// value; otherwise VANISHING once every escalation point gamma_i^j * 0,
/// j <= 2k-1, evaluates to zero. Invalid candidates are reported with a
/// reason, never silently dropped.
VanishReport decide(const VanishJob& job);

}  // namespace lpv
