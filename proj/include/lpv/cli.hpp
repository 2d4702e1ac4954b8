#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lpv/localpoly.hpp"
#include "lpv/vanish.hpp"

namespace lpv::cli {

/// Lossless text form: "p/q", integers without the "/1".
std::string render_rational(const Rational& r);
Rational parse_rational(const std::string& s);

struct MaassSection {
    long long D = 0;
    long long D0 = 0;
    long a_bound = 0;
    int b_window = 16;
    double quadrature_tol = 1e-10;
    double modularity_tol = 1e-4;
    double fricke_tol = 1e-4;
    double hecke_tol = 1e-3;
    long hecke_p = 0;  // 0 = skip the Hecke relation check
};

struct JobConfig {
    int k = 2;
    Integer N = 1;
    std::optional<Integer> d0_explicit;
    std::vector<Integer> d0_auto;
    std::vector<Integer> discriminants;
    std::vector<HeckeFactor> hecke;
    std::string mode = "decide";  // decide | table | zagier | maass-check
    std::vector<Rational> points;
    Rational base_point = Rational(0);
    std::string format = "text";  // text | csv | json
    std::string output_path;
    int threads = 1;
    Integer max_denominator = 10000;
    bool force = false;
    Integer zagier_delta = 0;
    /// Free-form note asserting the eigenvalue hypotheses of the inputs;
    /// carried into decide reports, never checked.
    std::string al_assertion;
    MaassSection maass;
};

/// Parses the JSON configuration document (schema in the README).
JobConfig parse_config_text(const std::string& json_text);
JobConfig load_config_file(const std::string& path);

/// D0 for a candidate D: the explicit value if set, otherwise the first
/// auto candidate whose Kronecker symbols match D at every prime dividing N.
std::optional<Integer> select_d0(const JobConfig& cfg, const Integer& D);

/// Executes one configured job; returns the process exit code
/// (0 ok, 2 validation failure, 3 computation error).
int run_job(const JobConfig& cfg, std::ostream& out, std::ostream& err);

/// Full command line entry point.
int run_main(int argc, char** argv);

}  // namespace lpv::cli
