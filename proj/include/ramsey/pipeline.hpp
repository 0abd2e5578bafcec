#pragma once

#include <string>
#include <vector>

#include "ramsey/anchor.hpp"
#include "ramsey/augmented.hpp"
#include "ramsey/checks.hpp"
#include "ramsey/errors.hpp"
#include "ramsey/model.hpp"
#include "ramsey/regulator.hpp"
#include "ramsey/simulate.hpp"

namespace ramsey {

struct PipelineOptions {
    /// Proceed when the controllability rank test fails. Never overrides an
    /// unstable forcing block.
    bool force = false;
    RiccatiOptions riccati;
    SylvesterMethod sylvester = SylvesterMethod::vectorized;
};

/// Everything the five solution steps produce for one model.
struct Solution {
    ModelSpec model;  // admitted (symmetrized) copy
    CheckReport checks;
    std::vector<std::string> warnings;
    RegulatorSolution regulator;
    AugmentedSolution augmented;
    AnchoredState anchored;
    ClosedLoopSystem closed_loop;
};

inline Solution solve(const ModelSpec& spec, const PipelineOptions& opts = {}) {
    Solution out;
    const ScaledModel scaled = rescale(spec);
    out.model = scaled.original;
    out.checks = run_checks(scaled);
    if (!out.checks.forcing_stable) {
        throw CheckError("checks", out.checks.failures().back());
    }
    if (!out.checks.controllable) {
        if (!opts.force) throw CheckError("checks", out.checks.failures().front());
        out.warnings.push_back(out.checks.failures().front() + " (continuing: --force)");
    }
    out.regulator = solve_riccati(out.model, opts.riccati);
    out.augmented = solve_sylvester(out.model, out.regulator, opts.sylvester);
    out.anchored = anchor_x0(out.model, out.regulator, out.augmented);
    out.closed_loop = build_closed_loop(out.model, out.regulator, out.augmented, out.anchored);
    return out;
}

}  // namespace ramsey
