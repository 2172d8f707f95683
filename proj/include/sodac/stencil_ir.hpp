// Lowering of a StencilProgram into a stage graph with per-edge window
// footprints, linearized spans, and valid-region computation.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "sodac/ast.hpp"

namespace sodac {

// Window footprint of one producer->consumer edge. Linearization is
// row-major with the first declared dimension contiguous: stride_0 = 1,
// stride_d = product of tile extents below d.
struct Footprint {
    std::vector<std::vector<int64_t>> offsets;  // distinct, sorted by linearized position
    std::vector<int64_t> lin_offsets;           // parallel to offsets
    int64_t min_lin = 0;
    int64_t max_lin = 0;

    int64_t span() const { return max_lin - min_lin; }
};

int64_t footprint_span(const Footprint& footprint);

struct GraphEdge {
    int producer = -1;
    int consumer = -1;
    Footprint footprint;
};

struct GraphNode {
    enum class Kind { input, stage };

    std::string name;
    Kind kind = Kind::input;
    ElemType elem_type{};
    bool is_output = false;
    ExprPtr expr;                          // stage nodes only
    std::map<std::string, int> bindings;   // tap array name -> producer node index
    std::vector<int> in_edges;             // edge indices, ordered
    std::vector<int> out_edges;
};

struct StageGraph {
    std::vector<GraphNode> nodes;     // topological: inputs first, stages in evaluation order
    std::vector<GraphEdge> edges;
    std::vector<int64_t> tile_shape;  // effective; -1 marks the runtime trailing extent
    std::vector<int64_t> strides;     // strides[0..rank-1]; computed from concrete leading extents
    size_t rank = 0;
    int output_node = -1;
    int64_t declared_unroll = 1;
    int64_t iterate_factor = 1;

    int64_t tile_width() const { return tile_shape.front(); }
    std::vector<int> input_nodes() const;
    std::vector<int> stage_nodes() const;
    int64_t linearize(const std::vector<int64_t>& offset) const;
};

// Per-dimension [lo, hi) bounds of positions computable without out-of-tile
// reads, after composing stage radii across all iterate copies.
struct ValidRegion {
    std::vector<int64_t> lo;
    std::vector<int64_t> hi;  // exclusive

    bool empty() const {
        for (size_t d = 0; d < lo.size(); ++d)
            if (hi[d] <= lo[d]) return true;
        return lo.empty();
    }
    int64_t volume() const {
        int64_t v = 1;
        for (size_t d = 0; d < lo.size(); ++d) v *= hi[d] > lo[d] ? hi[d] - lo[d] : 0;
        return v;
    }
};

// Lowers the program. iterate_factor > 1 replicates the local/output pipeline
// into chained copies (requires a single-input, single-output program whose
// output type matches the input type). tile_width_override replaces the
// declared first extent.
StageGraph lower(const StencilProgram& program,
                 std::optional<int64_t> tile_width_override = std::nullopt,
                 std::optional<int64_t> iterate_override = std::nullopt);

// Valid region of every node, indexed by node id, for concrete tile extents.
std::vector<ValidRegion> valid_regions(const StageGraph& graph,
                                       const std::vector<int64_t>& tile_extents);

// Valid region of the output node. Throws Error(EmptyRegion) if the composed
// stencil radii exceed the tile extents.
ValidRegion valid_region(const StageGraph& graph, const std::vector<int64_t>& tile_extents);

// Concrete per-dimension extents: declared shape with the runtime trailing
// extent substituted. Throws if inconsistent.
std::vector<int64_t> resolve_extents(const StageGraph& graph, int64_t last_extent);

// Graph dump (nodes, edges, offsets, spans) as a JSON document string.
std::string dump_graph_json(const StageGraph& graph);

}  // namespace sodac
