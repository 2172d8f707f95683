#include "sodac/stencil_ir.hpp"

#include <algorithm>
#include <set>

#include "json.hpp"

namespace sodac {

namespace {

void collect_taps(const Expr& e, std::map<std::string, std::set<std::vector<int64_t>>>& taps) {
    switch (e.kind) {
        case Expr::Kind::literal: return;
        case Expr::Kind::tap:
            taps[e.tap.array].insert(e.tap.offsets);
            return;
        case Expr::Kind::binary:
            collect_taps(*e.lhs, taps);
            collect_taps(*e.rhs, taps);
            return;
    }
}

Footprint make_footprint(const std::set<std::vector<int64_t>>& offsets,
                         const std::vector<int64_t>& strides) {
    Footprint fp;
    std::vector<std::pair<int64_t, std::vector<int64_t>>> by_lin;
    for (const auto& off : offsets) {
        int64_t lin = 0;
        for (size_t d = 0; d < off.size(); ++d) lin += off[d] * strides[d];
        by_lin.emplace_back(lin, off);
    }
    std::sort(by_lin.begin(), by_lin.end());
    for (auto& [lin, off] : by_lin) {
        fp.lin_offsets.push_back(lin);
        fp.offsets.push_back(off);
    }
    if (by_lin.size() > 1 &&
        std::adjacent_find(fp.lin_offsets.begin(), fp.lin_offsets.end()) != fp.lin_offsets.end())
        throw Error(ErrorCode::Internal, "distinct offsets linearized to the same position");
    fp.min_lin = fp.lin_offsets.empty() ? 0 : fp.lin_offsets.front();
    fp.max_lin = fp.lin_offsets.empty() ? 0 : fp.lin_offsets.back();
    return fp;
}

}  // namespace

int64_t footprint_span(const Footprint& footprint) { return footprint.span(); }

std::vector<int> StageGraph::input_nodes() const {
    std::vector<int> ids;
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].kind == GraphNode::Kind::input) ids.push_back(static_cast<int>(i));
    return ids;
}

std::vector<int> StageGraph::stage_nodes() const {
    std::vector<int> ids;
    for (size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i].kind == GraphNode::Kind::stage) ids.push_back(static_cast<int>(i));
    return ids;
}

int64_t StageGraph::linearize(const std::vector<int64_t>& offset) const {
    int64_t lin = 0;
    for (size_t d = 0; d < offset.size(); ++d) lin += offset[d] * strides[d];
    return lin;
}

StageGraph lower(const StencilProgram& program, std::optional<int64_t> tile_width_override,
                 std::optional<int64_t> iterate_override) {
    StageGraph g;
    g.rank = program.rank();
    g.tile_shape = program.tile_shape();
    if (tile_width_override) {
        if (*tile_width_override < 1)
            throw Error(ErrorCode::SemanticError, "tile width must be positive");
        g.tile_shape.front() = *tile_width_override;
    }
    g.declared_unroll = program.unroll_factor;
    g.iterate_factor = iterate_override.value_or(program.iterate_factor);
    if (g.iterate_factor < 1)
        throw Error(ErrorCode::SemanticError, "iterate factor must be a positive integer");

    // Strides require concrete extents for every dimension but the last.
    g.strides.assign(g.rank, 1);
    for (size_t d = 1; d < g.rank; ++d) {
        if (g.tile_shape[d - 1] < 0)
            throw Error(ErrorCode::Internal, "non-trailing unbounded extent survived parsing");
        g.strides[d] = g.strides[d - 1] * g.tile_shape[d - 1];
    }

    int64_t q = g.iterate_factor;
    if (q > 1) {
        if (program.inputs.size() != 1)
            throw Error(ErrorCode::IterateShapeError,
                        "iterate factor > 1 requires a single-input program");
        if (program.outputs.front().elem_type != program.inputs.front().elem_type)
            throw Error(ErrorCode::IterateShapeError,
                        "iterate factor > 1 requires the output type (" +
                            std::string(elem_type_name(program.outputs.front().elem_type)) +
                            ") to match the input type (" +
                            std::string(elem_type_name(program.inputs.front().elem_type)) + ")",
                        program.outputs.front().pos);
    }

    std::set<std::string> used_names;
    for (const auto& in : program.inputs) {
        GraphNode node;
        node.name = in.name;
        node.kind = GraphNode::Kind::input;
        node.elem_type = in.elem_type;
        used_names.insert(node.name);
        g.nodes.push_back(std::move(node));
    }
    for (const auto& s : program.locals) used_names.insert(s.name);
    for (const auto& s : program.outputs) used_names.insert(s.name);

    auto copy_name = [&](const std::string& base, int64_t copy) {
        if (copy == 0) return base;
        std::string name = base + "__i" + std::to_string(copy + 1);
        while (used_names.count(name)) name += "_";
        used_names.insert(name);
        return name;
    };

    std::vector<StageDecl> pipeline = program.locals;
    pipeline.insert(pipeline.end(), program.outputs.begin(), program.outputs.end());

    for (int64_t copy = 0; copy < q; ++copy) {
        // name of each source-level array in this copy's scope
        std::map<std::string, int> scope;
        if (copy == 0) {
            for (size_t i = 0; i < program.inputs.size(); ++i)
                scope[program.inputs[i].name] = static_cast<int>(i);
        } else {
            // the previous copy's output stands in for the input
            scope[program.inputs.front().name] = static_cast<int>(g.nodes.size()) - 1;
        }

        for (const auto& stage : pipeline) {
            GraphNode node;
            node.name = copy_name(stage.name, copy);
            node.kind = GraphNode::Kind::stage;
            node.elem_type = stage.elem_type;
            node.expr = stage.expr;
            node.is_output = stage.is_output && copy == q - 1;
            int node_id = static_cast<int>(g.nodes.size());

            std::map<std::string, std::set<std::vector<int64_t>>> taps;
            collect_taps(*stage.expr, taps);
            for (const auto& [array, offsets] : taps) {
                auto it = scope.find(array);
                if (it == scope.end())
                    throw Error(ErrorCode::Internal, "unresolved tap '" + array + "' in lowering");
                GraphEdge edge;
                edge.producer = it->second;
                edge.consumer = node_id;
                edge.footprint = make_footprint(offsets, g.strides);
                int edge_id = static_cast<int>(g.edges.size());
                node.bindings[array] = it->second;
                node.in_edges.push_back(edge_id);
                g.edges.push_back(std::move(edge));
            }
            g.nodes.push_back(std::move(node));
            for (int e : g.nodes.back().in_edges) g.nodes[g.edges[e].producer].out_edges.push_back(e);
            scope[stage.name] = node_id;
            if (g.nodes.back().is_output) g.output_node = node_id;
        }
    }
    if (g.output_node < 0) throw Error(ErrorCode::Internal, "lowering produced no output node");
    return g;
}

std::vector<int64_t> resolve_extents(const StageGraph& graph, int64_t last_extent) {
    std::vector<int64_t> extents = graph.tile_shape;
    if (extents.back() < 0) {
        if (last_extent < 1)
            throw Error(ErrorCode::SemanticError,
                        "program has an unbounded trailing extent; a concrete extent is required");
        extents.back() = last_extent;
    } else if (last_extent > 0 && last_extent != extents.back()) {
        throw Error(ErrorCode::SemanticError,
                    "provided trailing extent " + std::to_string(last_extent) +
                        " conflicts with the declared extent " + std::to_string(extents.back()));
    }
    return extents;
}

std::vector<ValidRegion> valid_regions(const StageGraph& graph,
                                       const std::vector<int64_t>& tile_extents) {
    if (tile_extents.size() != graph.rank)
        throw Error(ErrorCode::Internal, "tile extents rank mismatch");
    for (int64_t e : tile_extents)
        if (e < 1) throw Error(ErrorCode::SemanticError, "tile extents must be positive");

    std::vector<ValidRegion> regions(graph.nodes.size());
    for (size_t i = 0; i < graph.nodes.size(); ++i) {
        ValidRegion r;
        if (graph.nodes[i].kind == GraphNode::Kind::input) {
            r.lo.assign(graph.rank, 0);
            r.hi = tile_extents;
        } else {
            r.lo.assign(graph.rank, INT64_MIN / 4);
            r.hi.assign(graph.rank, INT64_MAX / 4);
            for (int e : graph.nodes[i].in_edges) {
                const GraphEdge& edge = graph.edges[e];
                const ValidRegion& prod = regions[edge.producer];
                for (const auto& off : edge.footprint.offsets) {
                    for (size_t d = 0; d < graph.rank; ++d) {
                        r.lo[d] = std::max(r.lo[d], prod.lo[d] - off[d]);
                        r.hi[d] = std::min(r.hi[d], prod.hi[d] - off[d]);
                    }
                }
            }
        }
        regions[i] = std::move(r);
    }
    return regions;
}

ValidRegion valid_region(const StageGraph& graph, const std::vector<int64_t>& tile_extents) {
    ValidRegion out = valid_regions(graph, tile_extents)[graph.output_node];
    if (out.empty())
        throw Error(ErrorCode::EmptyRegion,
                    "composed stencil radii exceed tile extents; no valid output positions");
    return out;
}

std::string dump_graph_json(const StageGraph& graph) {
    nlohmann::ordered_json j;
    j["rank"] = graph.rank;
    j["tile_shape"] = graph.tile_shape;
    j["iterate_factor"] = graph.iterate_factor;
    j["nodes"] = nlohmann::ordered_json::array();
    for (const auto& node : graph.nodes) {
        nlohmann::ordered_json n;
        n["name"] = node.name;
        n["kind"] = node.kind == GraphNode::Kind::input ? "input" : "stage";
        n["type"] = elem_type_name(node.elem_type);
        if (node.is_output) n["output"] = true;
        j["nodes"].push_back(std::move(n));
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& edge : graph.edges) {
        nlohmann::ordered_json e;
        e["producer"] = graph.nodes[edge.producer].name;
        e["consumer"] = graph.nodes[edge.consumer].name;
        e["offsets"] = edge.footprint.offsets;
        e["lin_offsets"] = edge.footprint.lin_offsets;
        e["span"] = edge.footprint.span();
        j["edges"].push_back(std::move(e));
    }
    return j.dump(2);
}

}  // namespace sodac
