#include <map>

#include "sodac/compute_reuse.hpp"

namespace sodac {

namespace {

struct Expansion {
    std::map<std::pair<std::string, int64_t>, Rational> weights;  // (array, lin) -> coeff
    Rational constant;
    bool linear = true;
};

Expansion shift(Expansion e, int64_t delay) {
    if (delay == 0) return e;
    Expansion out;
    out.constant = e.constant;
    out.linear = e.linear;
    for (auto& [pos, w] : e.weights) out.weights[{pos.first, pos.second - delay}] = w;
    return out;
}

}  // namespace

CounterexampleReport verify_plan(const ComputePlan& plan, const LinearStencil& stencil) {
    std::vector<Expansion> ex(plan.nodes.size());
    for (size_t i = 0; i < plan.nodes.size(); ++i) {
        const PlanNode& n = plan.nodes[i];
        Expansion& out = ex[i];
        switch (n.op) {
            case PlanOp::tap:
                out.weights[{n.tap_array, n.tap_lin}] = Rational(1);
                break;
            case PlanOp::constant:
                out.constant = n.value;
                break;
            case PlanOp::add:
            case PlanOp::sub: {
                Expansion a = shift(ex[n.a], n.delay_a);
                Expansion b = shift(ex[n.b], n.delay_b);
                out = a;
                out.linear = a.linear && b.linear;
                int sign = n.op == PlanOp::add ? 1 : -1;
                out.constant = sign > 0 ? out.constant + b.constant : out.constant - b.constant;
                for (auto& [pos, w] : b.weights) {
                    Rational& slot = out.weights[pos];
                    slot = sign > 0 ? slot + w : slot - w;
                }
                break;
            }
            case PlanOp::neg: {
                Expansion a = shift(ex[n.a], n.delay_a);
                out.linear = a.linear;
                out.constant = -a.constant;
                for (auto& [pos, w] : a.weights) out.weights[pos] = -w;
                break;
            }
            case PlanOp::mulc: {
                Expansion a = shift(ex[n.a], n.delay_a);
                out.linear = a.linear;
                out.constant = a.constant * n.value;
                for (auto& [pos, w] : a.weights) out.weights[pos] = w * n.value;
                break;
            }
            case PlanOp::mul:
            case PlanOp::div: {
                Expansion a = shift(ex[n.a], n.delay_a);
                Expansion b = shift(ex[n.b], n.delay_b);
                if (n.op == PlanOp::mul && a.weights.empty()) {
                    out = b;
                    for (auto& [pos, w] : out.weights) w = w * a.constant;
                    out.constant = out.constant * a.constant;
                } else if (b.weights.empty() && (!b.constant.is_zero() || n.op == PlanOp::mul)) {
                    out = a;
                    if (n.op == PlanOp::mul) {
                        for (auto& [pos, w] : out.weights) w = w * b.constant;
                        out.constant = out.constant * b.constant;
                    } else {
                        for (auto& [pos, w] : out.weights) w = w / b.constant;
                        out.constant = out.constant / b.constant;
                    }
                } else {
                    out.linear = false;
                }
                break;
            }
        }
    }

    const Expansion& got = ex[plan.root];
    CounterexampleReport report;
    if (!got.linear) {
        report.ok = false;
        report.array = "<non-linear-node>";
        return report;
    }

    std::map<std::pair<std::string, int64_t>, std::pair<Rational, Rational>> merged;
    std::map<std::pair<std::string, int64_t>, std::vector<int64_t>> offsets;
    for (const auto& tap : stencil.taps) {
        merged[{tap.array, tap.lin}].first = tap.weight;
        offsets[{tap.array, tap.lin}] = tap.offset;
    }
    for (const auto& [pos, w] : got.weights) {
        if (w.is_zero()) continue;
        merged[pos].second = w;
    }
    for (const auto& [pos, pair] : merged) {
        if (pair.first == pair.second) continue;
        report.ok = false;
        report.array = pos.first;
        report.lin = pos.second;
        report.offset = offsets.count(pos) ? offsets[pos] : std::vector<int64_t>{};
        report.expected = pair.first;
        report.got = pair.second;
        return report;
    }
    if (!got.constant.is_zero()) {
        report.ok = false;
        report.array = "<constant-term>";
        report.expected = Rational(0);
        report.got = got.constant;
    }
    return report;
}

}  // namespace sodac
