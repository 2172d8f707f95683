// Per-stage arithmetic DAG executed by one PE. Built either directly from
// the stage expression (naive) or by the computation-reuse planners, in
// which case edges may carry delays: an operand with delay d consumes the
// producing node's value from d stream positions earlier, realized as a
// shift register of ceil(d/k) entries per lane.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sodac/ast.hpp"
#include "sodac/stencil_ir.hpp"

namespace sodac {

enum class PlanOp {
    tap,       // read producer array at tap_lin (window read, free storage)
    constant,  // rational literal
    add,
    sub,
    mul,   // node * node (non-linear stages only)
    mulc,  // node * constant weight
    div,   // node / node (non-linear stages only)
    neg,
};

struct PlanNode {
    PlanOp op{};
    int a = -1;
    int b = -1;
    int64_t delay_a = 0;
    int64_t delay_b = 0;
    Rational value;                   // constant / mulc weight
    std::string tap_array;            // tap
    std::vector<int64_t> tap_offset;  // tap
    int64_t tap_lin = 0;              // tap, linearized with the graph strides
};

struct ComputePlan {
    std::vector<PlanNode> nodes;  // operands precede their consumers
    int root = -1;
    bool from_creuse = false;

    int mults_per_output = 0;
    int adds_per_output = 0;
    int divs_per_output = 0;
    int64_t delay_elems = 0;  // shift-register storage, in elements at k=1
    int depth = 0;            // longest op chain; taps and constants are depth 0

    int64_t max_delay() const {
        int64_t d = 0;
        for (const auto& n : nodes) d = std::max({d, n.delay_a, n.delay_b});
        return d;
    }
};

// Recomputes mults/adds/divs, delay storage, and depth from the node list.
void finalize_counts(ComputePlan& plan);

// Direct translation of the stage expression; no delays, evaluation order
// mirrors the source.
ComputePlan naive_plan(const StageGraph& graph, int node_id);

std::string dump_compute_plan_json(const ComputePlan& plan, const std::string& stage);

}  // namespace sodac
