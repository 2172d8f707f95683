#include <functional>
#include <map>

#include "creuse_internal.hpp"

namespace sodac::creuse {

ComputePlan emit_plan(const std::vector<Instance>& instances, int root_instance,
                      bool root_negated, const std::vector<std::string>& array_names,
                      const LinearStencil& stencil) {
    ComputePlan plan;
    plan.from_creuse = true;

    std::map<Pos, std::vector<int64_t>> offset_of;
    for (const auto& tap : stencil.taps) {
        int idx = static_cast<int>(
            std::find(array_names.begin(), array_names.end(), tap.array) - array_names.begin());
        offset_of[{idx, tap.lin}] = tap.offset;
    }

    std::map<Pos, int> tap_nodes;
    auto leaf_node = [&](Pos pos) {
        auto it = tap_nodes.find(pos);
        if (it != tap_nodes.end()) return it->second;
        PlanNode n;
        n.op = PlanOp::tap;
        n.tap_array = array_names[pos.first];
        n.tap_lin = pos.second;
        auto off = offset_of.find(pos);
        if (off == offset_of.end())
            throw Error(ErrorCode::Internal, "creuse leaf outside the stencil window");
        n.tap_offset = off->second;
        plan.nodes.push_back(std::move(n));
        int id = static_cast<int>(plan.nodes.size()) - 1;
        tap_nodes.emplace(pos, id);
        return id;
    };

    std::vector<int> emitted(instances.size(), -1);
    std::function<int(int)> emit = [&](int idx) -> int {
        if (emitted[idx] >= 0) return emitted[idx];
        const Instance& inst = instances[idx];
        int a = inst.opa.is_leaf ? leaf_node(inst.opa.leaf) : emit(inst.opa.inst);
        if (inst.kind == Instance::Kind::mult) {
            PlanNode n;
            n.op = PlanOp::mulc;
            n.value = inst.mult_const;
            n.a = a;
            n.delay_a = inst.opa.is_leaf ? 0 : inst.opa.delay;
            if (inst.opa.is_leaf && inst.opa.delay != 0)
                throw Error(ErrorCode::Internal, "leaf operands carry no delay");
            plan.nodes.push_back(std::move(n));
        } else {
            int b = inst.opb.is_leaf ? leaf_node(inst.opb.leaf) : emit(inst.opb.inst);
            PlanNode n;
            n.op = inst.opb.negate ? PlanOp::sub : PlanOp::add;
            n.a = a;
            n.b = b;
            n.delay_a = inst.opa.is_leaf ? 0 : inst.opa.delay;
            n.delay_b = inst.opb.is_leaf ? 0 : inst.opb.delay;
            plan.nodes.push_back(std::move(n));
        }
        emitted[idx] = static_cast<int>(plan.nodes.size()) - 1;
        return emitted[idx];
    };

    int root;
    if (root_instance < 0) {
        // Degenerate target: a single unit-weight tap.
        if (stencil.taps.size() != 1 || !(stencil.taps[0].weight.abs() == Rational(1)))
            throw Error(ErrorCode::Internal, "instance-free plan for a non-trivial stencil");
        int idx = static_cast<int>(std::find(array_names.begin(), array_names.end(),
                                             stencil.taps[0].array) -
                                   array_names.begin());
        root = leaf_node({idx, stencil.taps[0].lin});
        root_negated = stencil.taps[0].weight.sign() < 0;
    } else {
        root = emit(root_instance);
    }
    if (root_negated) {
        PlanNode n;
        n.op = PlanOp::neg;
        n.a = root;
        plan.nodes.push_back(std::move(n));
        root = static_cast<int>(plan.nodes.size()) - 1;
    }
    plan.root = root;
    finalize_counts(plan);
    return plan;
}

}  // namespace sodac::creuse
