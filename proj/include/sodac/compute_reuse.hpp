// Computation reuse for linear stages: exact search (ordp) for small tap
// counts and a greedy heuristic (hsbr) for larger kernels. Both emit plans
// in the shift-reuse search space documented in docs/compute-reuse.md and
// checked symbolically by verify_plan.
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sodac/compute_plan.hpp"

namespace sodac {

struct LinearTap {
    std::string array;
    std::vector<int64_t> offset;
    int64_t lin = 0;
    Rational weight;
};

struct LinearStencil {
    std::vector<LinearTap> taps;  // sorted by (array, lin); zero weights dropped

    size_t tap_count() const { return taps.size(); }
    // Distinct |weights| other than 0 and 1: the multiplier count of the
    // naive plan.
    std::vector<Rational> nontrivial_weights() const;
};

// Coefficient extraction gate. Returns nullopt (NotLinear) unless the stage
// expression is an affine tap combination with zero constant term, divisions
// only by literals, and -- for integer stages -- no division at all.
std::optional<LinearStencil> extract_linear(const StageGraph& graph, int node_id);

inline constexpr int kOrdpMaxTaps = 10;
inline constexpr int64_t kUnlimitedBudget = -1;

// Exact minimum (adds + mults, then delay storage, then mults) over the
// shift-reuse space, subject to delay_elems <= storage_budget.
// Throws TooManyTaps above kOrdpMaxTaps and InfeasibleBudget below 0
// (kUnlimitedBudget lifts the constraint).
ComputePlan ordp(const LinearStencil& stencil, int64_t storage_budget);

struct HsbrConfig {
    uint64_t seed = 1;
    int restarts = 3;
    int64_t max_expansions = 200000;
};

ComputePlan hsbr(const LinearStencil& stencil, int64_t storage_budget, HsbrConfig config = {});

struct CounterexampleReport {
    bool ok = true;
    std::string array;
    std::vector<int64_t> offset;
    int64_t lin = 0;
    Rational expected;
    Rational got;
    std::string str() const;
};

// Symbolic expansion of the plan DAG (delays included) compared
// coefficient-by-coefficient against the stencil, in exact arithmetic.
CounterexampleReport verify_plan(const ComputePlan& plan, const LinearStencil& stencil);

// Naive linear plan: one multiplier per non-unit weight, taps-1 adds.
ComputePlan naive_linear_plan(const LinearStencil& stencil);

}  // namespace sodac
