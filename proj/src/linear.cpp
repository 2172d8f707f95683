#include <map>

#include "sodac/compute_reuse.hpp"

namespace sodac {

namespace {

struct Affine {
    std::map<std::pair<std::string, std::vector<int64_t>>, Rational> weights;
    Rational constant;
};

bool has_div(const Expr& e) {
    if (e.kind != Expr::Kind::binary) return false;
    return e.op == BinOp::div || has_div(*e.lhs) || has_div(*e.rhs);
}

// Returns false when the expression is not affine in its taps.
bool extract(const Expr& e, Affine& out) {
    switch (e.kind) {
        case Expr::Kind::literal:
            out.constant = e.literal;
            return true;
        case Expr::Kind::tap:
            out.weights[{e.tap.array, e.tap.offsets}] = Rational(1);
            return true;
        case Expr::Kind::binary: break;
    }
    Affine lhs, rhs;
    if (!extract(*e.lhs, lhs) || !extract(*e.rhs, rhs)) return false;
    switch (e.op) {
        case BinOp::add:
        case BinOp::sub: {
            out = std::move(lhs);
            int sign = e.op == BinOp::add ? 1 : -1;
            out.constant = sign > 0 ? out.constant + rhs.constant : out.constant - rhs.constant;
            for (auto& [tap, w] : rhs.weights) {
                Rational& slot = out.weights[tap];
                slot = sign > 0 ? slot + w : slot - w;
            }
            return true;
        }
        case BinOp::mul: {
            // one side must be a pure constant
            if (lhs.weights.empty()) {
                out = std::move(rhs);
                for (auto& [tap, w] : out.weights) w = w * lhs.constant;
                out.constant = out.constant * lhs.constant;
                return true;
            }
            if (rhs.weights.empty()) {
                out = std::move(lhs);
                for (auto& [tap, w] : out.weights) w = w * rhs.constant;
                out.constant = out.constant * rhs.constant;
                return true;
            }
            return false;
        }
        case BinOp::div: {
            if (!rhs.weights.empty() || rhs.constant.is_zero()) return false;
            out = std::move(lhs);
            for (auto& [tap, w] : out.weights) w = w / rhs.constant;
            out.constant = out.constant / rhs.constant;
            return true;
        }
    }
    return false;
}

}  // namespace

std::vector<Rational> LinearStencil::nontrivial_weights() const {
    std::vector<Rational> distinct;
    for (const auto& tap : taps) {
        Rational a = tap.weight.abs();
        if (a == Rational(1) || a.is_zero()) continue;
        bool seen = false;
        for (const auto& d : distinct) seen = seen || d == a;
        if (!seen) distinct.push_back(a);
    }
    return distinct;
}

std::optional<LinearStencil> extract_linear(const StageGraph& graph, int node_id) {
    const GraphNode& stage = graph.nodes[node_id];
    if (stage.kind != GraphNode::Kind::stage || !stage.expr) return std::nullopt;

    // Integer stages: truncating division makes rational-weight plans
    // unfaithful, so any surviving division disables reuse.
    if (elem_type_is_integer(stage.elem_type) && has_div(*stage.expr)) return std::nullopt;

    Affine affine;
    if (!extract(*stage.expr, affine)) return std::nullopt;
    if (!affine.constant.is_zero()) return std::nullopt;

    LinearStencil stencil;
    for (const auto& [tap, w] : affine.weights) {
        if (w.is_zero()) continue;
        if (elem_type_is_integer(stage.elem_type) && !w.is_integer()) return std::nullopt;
        LinearTap lt;
        lt.array = tap.first;
        lt.offset = tap.second;
        lt.lin = graph.linearize(tap.second);
        lt.weight = w;
        stencil.taps.push_back(std::move(lt));
    }
    if (stencil.taps.empty()) return std::nullopt;
    std::sort(stencil.taps.begin(), stencil.taps.end(), [](const LinearTap& a, const LinearTap& b) {
        return a.array != b.array ? a.array < b.array : a.lin < b.lin;
    });
    return stencil;
}

ComputePlan naive_linear_plan(const LinearStencil& stencil) {
    ComputePlan plan;
    std::vector<int> terms;
    for (const auto& tap : stencil.taps) {
        PlanNode t;
        t.op = PlanOp::tap;
        t.tap_array = tap.array;
        t.tap_offset = tap.offset;
        t.tap_lin = tap.lin;
        plan.nodes.push_back(std::move(t));
        int id = static_cast<int>(plan.nodes.size()) - 1;
        Rational a = tap.weight.abs();
        if (!(a == Rational(1))) {
            PlanNode m;
            m.op = PlanOp::mulc;
            m.value = a;
            m.a = id;
            plan.nodes.push_back(std::move(m));
            id = static_cast<int>(plan.nodes.size()) - 1;
        }
        terms.push_back(tap.weight.sign() < 0 ? ~id : id);  // ~id marks a negated term
    }
    int acc = -1;
    bool acc_valid = false;
    for (int t : terms) {
        bool negated = t < 0;
        int id = negated ? ~t : t;
        if (!acc_valid) {
            if (negated) {
                PlanNode n;
                n.op = PlanOp::neg;
                n.a = id;
                plan.nodes.push_back(std::move(n));
                id = static_cast<int>(plan.nodes.size()) - 1;
            }
            acc = id;
            acc_valid = true;
            continue;
        }
        PlanNode n;
        n.op = negated ? PlanOp::sub : PlanOp::add;
        n.a = acc;
        n.b = id;
        plan.nodes.push_back(std::move(n));
        acc = static_cast<int>(plan.nodes.size()) - 1;
    }
    plan.root = acc;
    plan.from_creuse = true;
    finalize_counts(plan);
    return plan;
}

std::string CounterexampleReport::str() const {
    if (ok) return "ok";
    std::string s = "coefficient mismatch at " + array + "(";
    for (size_t i = 0; i < offset.size(); ++i) s += (i ? ", " : "") + std::to_string(offset[i]);
    s += "): expected " + expected.str() + ", got " + got.str();
    return s;
}

}  // namespace sodac
