#include "sodac/compute_plan.hpp"

#include <algorithm>
#include <map>

#include "json.hpp"

namespace sodac {

void finalize_counts(ComputePlan& plan) {
    plan.mults_per_output = 0;
    plan.adds_per_output = 0;
    plan.divs_per_output = 0;
    std::vector<int> depth(plan.nodes.size(), 0);
    std::vector<int64_t> max_delay(plan.nodes.size(), 0);
    for (size_t i = 0; i < plan.nodes.size(); ++i) {
        const PlanNode& n = plan.nodes[i];
        switch (n.op) {
            case PlanOp::tap:
            case PlanOp::constant: break;
            case PlanOp::add:
            case PlanOp::sub:
            case PlanOp::neg: ++plan.adds_per_output; break;
            case PlanOp::mul:
            case PlanOp::mulc: ++plan.mults_per_output; break;
            case PlanOp::div: ++plan.divs_per_output; break;
        }
        int d = 0;
        if (n.a >= 0) {
            d = std::max(d, depth[n.a] + 1);
            if (plan.nodes[n.a].op != PlanOp::tap && plan.nodes[n.a].op != PlanOp::constant)
                max_delay[n.a] = std::max(max_delay[n.a], n.delay_a);
        }
        if (n.b >= 0) {
            d = std::max(d, depth[n.b] + 1);
            if (plan.nodes[n.b].op != PlanOp::tap && plan.nodes[n.b].op != PlanOp::constant)
                max_delay[n.b] = std::max(max_delay[n.b], n.delay_b);
        }
        if (n.op == PlanOp::tap || n.op == PlanOp::constant) d = 0;
        depth[i] = d;
    }
    plan.delay_elems = 0;
    for (int64_t d : max_delay) plan.delay_elems += d;
    plan.depth = plan.root >= 0 ? depth[plan.root] : 0;
}

namespace {

int build_naive(const Expr& e, const StageGraph& graph, const GraphNode& stage, ComputePlan& plan,
                std::map<std::pair<std::string, int64_t>, int>& tap_cache) {
    switch (e.kind) {
        case Expr::Kind::literal: {
            PlanNode n;
            n.op = PlanOp::constant;
            n.value = e.literal;
            plan.nodes.push_back(std::move(n));
            return static_cast<int>(plan.nodes.size()) - 1;
        }
        case Expr::Kind::tap: {
            int64_t lin = graph.linearize(e.tap.offsets);
            auto key = std::make_pair(e.tap.array, lin);
            auto it = tap_cache.find(key);
            if (it != tap_cache.end()) return it->second;
            PlanNode n;
            n.op = PlanOp::tap;
            n.tap_array = e.tap.array;
            n.tap_offset = e.tap.offsets;
            n.tap_lin = lin;
            plan.nodes.push_back(std::move(n));
            int id = static_cast<int>(plan.nodes.size()) - 1;
            tap_cache.emplace(key, id);
            return id;
        }
        case Expr::Kind::binary: break;
    }
    int a = build_naive(*e.lhs, graph, stage, plan, tap_cache);
    int b = build_naive(*e.rhs, graph, stage, plan, tap_cache);
    PlanNode n;
    switch (e.op) {
        case BinOp::add: n.op = PlanOp::add; break;
        case BinOp::sub: n.op = PlanOp::sub; break;
        case BinOp::mul:
            // constant * node lowers to a single weighted multiplier
            if (plan.nodes[a].op == PlanOp::constant) {
                n.op = PlanOp::mulc;
                n.value = plan.nodes[a].value;
                n.a = b;
                plan.nodes.push_back(std::move(n));
                return static_cast<int>(plan.nodes.size()) - 1;
            }
            if (plan.nodes[b].op == PlanOp::constant) {
                n.op = PlanOp::mulc;
                n.value = plan.nodes[b].value;
                n.a = a;
                plan.nodes.push_back(std::move(n));
                return static_cast<int>(plan.nodes.size()) - 1;
            }
            n.op = PlanOp::mul;
            break;
        case BinOp::div: n.op = PlanOp::div; break;
    }
    n.a = a;
    n.b = b;
    plan.nodes.push_back(std::move(n));
    return static_cast<int>(plan.nodes.size()) - 1;
}

}  // namespace

ComputePlan naive_plan(const StageGraph& graph, int node_id) {
    const GraphNode& stage = graph.nodes[node_id];
    if (stage.kind != GraphNode::Kind::stage || !stage.expr)
        throw Error(ErrorCode::Internal, "naive_plan called on a non-stage node");
    ComputePlan plan;
    std::map<std::pair<std::string, int64_t>, int> tap_cache;
    plan.root = build_naive(*stage.expr, graph, stage, plan, tap_cache);
    finalize_counts(plan);
    return plan;
}

std::string dump_compute_plan_json(const ComputePlan& plan, const std::string& stage) {
    nlohmann::ordered_json j;
    j["stage"] = stage;
    j["creuse"] = plan.from_creuse;
    j["mults_per_output"] = plan.mults_per_output;
    j["adds_per_output"] = plan.adds_per_output;
    if (plan.divs_per_output) j["divs_per_output"] = plan.divs_per_output;
    j["delay_elems"] = plan.delay_elems;
    j["depth"] = plan.depth;
    j["nodes"] = nlohmann::ordered_json::array();
    for (const auto& n : plan.nodes) {
        nlohmann::ordered_json node;
        switch (n.op) {
            case PlanOp::tap: {
                node["op"] = "tap";
                node["array"] = n.tap_array;
                node["offset"] = n.tap_offset;
                break;
            }
            case PlanOp::constant:
                node["op"] = "const";
                node["value"] = n.value.str();
                break;
            case PlanOp::add: node["op"] = "add"; break;
            case PlanOp::sub: node["op"] = "sub"; break;
            case PlanOp::mul: node["op"] = "mul"; break;
            case PlanOp::mulc:
                node["op"] = "mulc";
                node["value"] = n.value.str();
                break;
            case PlanOp::div: node["op"] = "div"; break;
            case PlanOp::neg: node["op"] = "neg"; break;
        }
        if (n.a >= 0) {
            node["a"] = n.a;
            if (n.delay_a) node["delay_a"] = n.delay_a;
        }
        if (n.b >= 0) {
            node["b"] = n.b;
            if (n.delay_b) node["delay_b"] = n.delay_b;
        }
        j["nodes"].push_back(std::move(node));
    }
    j["root"] = plan.root;
    return j.dump(2);
}

}  // namespace sodac
