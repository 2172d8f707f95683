#include "sodac/reuse_planner.hpp"

#include <algorithm>
#include <numeric>

#include "json.hpp"

namespace sodac {

ReusePlan plan_reuse(const StageGraph& graph, int64_t k) {
    if (k < 1) throw Error(ErrorCode::UnrollMismatch, "unroll factor must be at least 1");
    if (graph.tile_width() % k != 0)
        throw Error(ErrorCode::UnrollMismatch,
                    "tile width " + std::to_string(graph.tile_width()) +
                        " is not divisible by unroll factor " + std::to_string(k));

    ReusePlan plan;
    plan.unroll = k;
    plan.edges.resize(graph.edges.size());

    for (size_t n = 0; n < graph.nodes.size(); ++n) {
        const GraphNode& node = graph.nodes[n];
        if (node.kind != GraphNode::Kind::stage) continue;
        int64_t stage_max_lin = INT64_MIN;
        for (int e : node.in_edges)
            stage_max_lin = std::max(stage_max_lin, graph.edges[e].footprint.max_lin);

        for (int e : node.in_edges) {
            const GraphEdge& edge = graph.edges[e];
            EdgePlan ep;
            ep.edge_id = e;
            ep.producer = graph.nodes[edge.producer].name;
            ep.consumer = node.name;
            ep.min_lin = edge.footprint.min_lin;
            ep.max_lin = edge.footprint.max_lin;
            ep.span = edge.footprint.span();
            ep.unroll = k;
            ep.align_elems = stage_max_lin - ep.max_lin;
            ep.elem_bits = elem_type_bits(graph.nodes[edge.producer].elem_type);

            for (int64_t lin : edge.footprint.lin_offsets)
                ep.tap_positions.push_back(lin - ep.min_lin);

            // FIFO segments between consecutive tap groups of k registers each.
            for (size_t t = 0; t + 1 < ep.tap_positions.size(); ++t) {
                int64_t gap = ep.tap_positions[t + 1] - (ep.tap_positions[t] + k);
                if (gap > 0) ep.segments.push_back(gap);
            }
            if (ep.align_elems > 0) ep.segments.push_back(ep.align_elems);

            ep.total_elems = ep.span + k + ep.align_elems;
            int64_t seg_sum = std::accumulate(ep.segments.begin(), ep.segments.end(), int64_t{0});
            ep.tap_register_count = ep.total_elems - seg_sum;
            ep.total_bits = ep.total_elems * ep.elem_bits;
            plan.edges[e] = std::move(ep);
        }
    }
    return plan;
}

int64_t buffer_bits(const ReusePlan& plan) {
    int64_t bits = 0;
    for (const auto& ep : plan.edges) bits += ep.total_bits;
    return bits;
}

std::string dump_plan_json(const ReusePlan& plan) {
    nlohmann::ordered_json j;
    j["unroll"] = plan.unroll;
    j["total_bits"] = buffer_bits(plan);
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& ep : plan.edges) {
        nlohmann::ordered_json e;
        e["producer"] = ep.producer;
        e["consumer"] = ep.consumer;
        e["span"] = ep.span;
        e["tap_positions"] = ep.tap_positions;
        e["segments"] = ep.segments;
        e["tap_registers"] = ep.tap_register_count;
        e["align_elems"] = ep.align_elems;
        e["total_elems"] = ep.total_elems;
        e["total_bits"] = ep.total_bits;
        j["edges"].push_back(std::move(e));
    }
    return j.dump(2);
}

}  // namespace sodac
