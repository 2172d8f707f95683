// Minimal reuse-buffer planning: per consumer edge, a window of the last
// span + k streamed elements, decomposed round-robin across k lanes, with
// FIFO segments spanning the gaps between tap groups.
//
// PE lane j reading the tap at normalized position u (linearized offset
// minus the window minimum) finds it at window index j + u, window index 0
// being the oldest retained element. One window admits k new elements and
// retires k per cycle in steady state, so buffer storage is independent of
// the PE count up to the k - 1 rounding slack.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sodac/stencil_ir.hpp"

namespace sodac {

struct EdgePlan {
    int edge_id = -1;
    std::string producer;
    std::string consumer;
    int64_t min_lin = 0;
    int64_t max_lin = 0;
    int64_t span = 0;
    int64_t unroll = 1;
    // Extra entry-side retention so sibling edges of one consumer stay
    // aligned to the stage's firing schedule (max over sibling max_lin
    // minus this edge's max_lin). Zero for single-input stages.
    int64_t align_elems = 0;
    // Distinct normalized tap positions, ascending; each occupies window
    // indices [u, u + unroll).
    std::vector<int64_t> tap_positions;
    // FIFO lengths (elements) covering the gaps between consecutive tap
    // groups, oldest side first; the trailing entry segment covers
    // align_elems when nonzero.
    std::vector<int64_t> segments;
    int64_t tap_register_count = 0;  // total_elems - sum(segments)
    int64_t total_elems = 0;         // span + unroll + align_elems
    int elem_bits = 0;
    int64_t total_bits = 0;

    // Window index PE lane j uses for the tap at linearized offset `lin`.
    int64_t window_index(int64_t lane, int64_t lin) const { return lane + (lin - min_lin); }
};

struct ReusePlan {
    int64_t unroll = 1;
    std::vector<EdgePlan> edges;  // parallel to StageGraph::edges

    const EdgePlan& for_edge(int edge_id) const { return edges.at(edge_id); }
};

// Throws Error(UnrollMismatch) unless k >= 1 and k divides the tile width.
ReusePlan plan_reuse(const StageGraph& graph, int64_t k);

// Total buffered bits over all edges.
int64_t buffer_bits(const ReusePlan& plan);

std::string dump_plan_json(const ReusePlan& plan);

}  // namespace sodac
