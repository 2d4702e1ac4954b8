#include "lpv/vanish.hpp"

#include <algorithm>
#include <future>
#include <map>

namespace lpv {

Rational S_value(const LocalPolyParams& params, const HeckeSpec& spec, const Rational& x) {
    return hecke_apply(nonconst_sum_evaluable(params), params.k, spec, x);
}

Rational P_relative(const LocalPolyParams& params, const HeckeSpec& spec,
                    const Rational& base, const Rational& x) {
    return S_value(params, spec, x) - S_value(params, spec, base);
}

namespace {

Rational mod_one(const Rational& x) {
    return x - Rational(floor_rational(x));
}

struct UniquePoint {
    Rational residue;
    Rational value;  // filled during evaluation
    bool evaluated = false;
};

// Evaluate S at all residues, slot-parallel and order-stable.
void evaluate_batch(const LocalPolyParams& params, const HeckeSpec& spec,
                    std::vector<UniquePoint>& pts, const std::vector<size_t>& todo,
                    int threads) {
    if (threads < 2 || todo.size() < 2) {
        for (size_t i : todo) {
            pts[i].value = S_value(params, spec, pts[i].residue);
            pts[i].evaluated = true;
        }
        return;
    }
    std::vector<std::future<void>> futs;
    int nt = std::min<int>(threads, (int)todo.size());
    for (int w = 0; w < nt; ++w) {
        futs.push_back(std::async(std::launch::async, [&, w] {
            for (size_t idx = w; idx < todo.size(); idx += nt) {
                size_t i = todo[idx];
                pts[i].value = S_value(params, spec, pts[i].residue);
                pts[i].evaluated = true;
            }
        }));
    }
    for (auto& f : futs) f.get();
}

}  // namespace

VanishReport decide(const VanishJob& job) {
    VanishReport report;
    report.k = job.k;
    report.N = job.N;
    report.al_assertion = job.al_assertion;

    Gamma0Context ctx = build_context(job.N);
    std::vector<EvalPoint> orbit = evaluation_points(ctx, job.k);

    for (const Integer& D : job.candidates) {
        CandidateReport cr;
        cr.D = D;
        cr.D0 = job.D0;
        LocalPolyParams params{0, 0, 0, 0, 0};
        try {
            params = LocalPolyParams::checked(job.k, job.N, D, job.D0);
        } catch (const std::exception& e) {
            cr.skipped = true;
            cr.skip_reason = e.what();
            report.candidates.push_back(std::move(cr));
            continue;
        }

        cr.base_value = S_value(params, job.hecke, job.base_point);

        // Dedupe orbit points modulo 1 (S is 1-periodic) and against the
        // base point; every orbit entry still lands in the report table.
        auto cmp = [](const Rational& a, const Rational& b) {
            return mpq_cmp(a.get_mpq_t(), b.get_mpq_t()) < 0;
        };
        std::vector<UniquePoint> unique_pts;
        std::map<Rational, size_t, decltype(cmp)> index(cmp);
        std::vector<size_t> point_slot(orbit.size());
        Rational base_residue = mod_one(job.base_point);
        for (size_t i = 0; i < orbit.size(); ++i) {
            Rational r = mod_one(orbit[i].x);
            auto it = index.find(r);
            if (it == index.end()) {
                it = index.emplace(r, unique_pts.size()).first;
                UniquePoint up;
                up.residue = r;
                if (r == base_residue) {
                    up.value = cr.base_value;
                    up.evaluated = true;
                }
                unique_pts.push_back(std::move(up));
            }
            point_slot[i] = it->second;
        }

        auto round_indices = [&](bool first_round) {
            std::vector<size_t> todo;
            for (size_t i = 0; i < orbit.size(); ++i) {
                bool is_first = orbit[i].power == 1;
                if (is_first != first_round) continue;
                size_t slot = point_slot[i];
                if (!unique_pts[slot].evaluated &&
                    std::find(todo.begin(), todo.end(), slot) == todo.end())
                    todo.push_back(slot);
            }
            return todo;
        };

        evaluate_batch(params, job.hecke, unique_pts, round_indices(true), job.threads);
        auto record = [&](bool first_round) {
            bool nonzero = false;
            for (size_t i = 0; i < orbit.size(); ++i) {
                bool is_first = orbit[i].power == 1;
                if (is_first != first_round) continue;
                const UniquePoint& up = unique_pts[point_slot[i]];
                if (!up.evaluated) continue;
                Rational v = up.value - cr.base_value;
                cr.table.push_back({orbit[i].x, orbit[i].generator, orbit[i].power, v});
                if (v != 0) nonzero = true;
            }
            return nonzero;
        };

        if (record(true)) {
            cr.verdict = Verdict::NonVanishing;
            cr.rounds_used = 1;
        } else {
            evaluate_batch(params, job.hecke, unique_pts, round_indices(false), job.threads);
            bool nonzero = record(false);
            cr.verdict = nonzero ? Verdict::NonVanishing : Verdict::Vanishing;
            cr.rounds_used = 2;
        }
        report.candidates.push_back(std::move(cr));
    }
    return report;
}

}  // namespace lpv
