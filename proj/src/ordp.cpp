// Exact computation-reuse search.
//
// Moves on a goal shape, newest goal first:
//   leaf     a single +1 term is a free window read
//   reuse    an existing instance with the same pattern, consumed at the
//            alignment difference d >= 0 (delay-line storage d)
//   content  extract the rational content c != 1 as one multiplier
//   split    partition the support (the leading term pins one side) into
//            two sub-goals joined by one add/sub
//
// Iterative deepening on total ops with an admissible lower bound, a
// dominance-pruned transposition table, and lexicographic tie-breaking on
// (ops, delay storage, multiplier count, first found in canonical order).
#include <cmath>
#include <functional>
#include <unordered_map>

#include "creuse_internal.hpp"

namespace sodac {

using namespace creuse;

namespace {

struct Goal {
    Shape shape;   // absolute positions, leading coefficient positive
    int slot_inst; // instance whose operand this resolves; -1 = plan root
    int which;     // 0 = opa, 1 = opb
};

struct Searcher {
    int64_t budget = -1;  // -1 = unlimited
    int op_limit = 0;

    std::vector<Goal> goals;
    std::vector<Instance> instances;
    Operand root_ref;
    bool root_resolved = false;

    int ops_used = 0;
    int mults_used = 0;
    int64_t delay_used = 0;

    bool found = false;
    int64_t best_delay = 0;
    int best_mults = 0;
    std::vector<Instance> best_instances;
    Operand best_root;

    int64_t expansions = 0;
    static constexpr int64_t kExpansionGuard = 60'000'000;
    std::unordered_map<std::string, std::array<int64_t, 3>> memo;

    bool budget_ok(int64_t delay) const { return budget < 0 || delay <= budget; }

    int goal_lb(const Goal& g) const {
        if (g.shape.size() == 1 && g.shape.terms[0].coeff == Rational(1)) return 0;
        for (const auto& inst : instances)
            if (inst.align >= g.shape.align() && inst.pattern == g.shape.pattern_key()) return 0;
        int lb = 0;
        size_t n = g.shape.size();
        while ((size_t{1} << lb) < n) ++lb;
        bool needs_mult = false;
        for (const auto& t : g.shape.terms)
            if (!(t.coeff.abs() == Rational(1))) needs_mult = true;
        return std::max(lb + (needs_mult ? 1 : 0), 1);
    }

    int state_lb() const {
        int max_individual = 0;
        std::vector<std::string> distinct;
        for (const auto& g : goals) {
            int lb = goal_lb(g);
            max_individual = std::max(max_individual, lb);
            if (lb > 0) {
                std::string key = g.shape.pattern_key();
                if (std::find(distinct.begin(), distinct.end(), key) == distinct.end())
                    distinct.push_back(key);
            }
        }
        return std::max<int>(max_individual, static_cast<int>(distinct.size()));
    }

    std::string state_key() const {
        std::vector<std::string> parts;
        for (const auto& g : goals) parts.push_back(g.shape.absolute_key());
        std::sort(parts.begin(), parts.end());
        std::string key;
        for (auto& p : parts) {
            key += p;
            key += '|';
        }
        key += '#';
        std::vector<std::string> insts;
        for (const auto& i : instances)
            insts.push_back(i.shape.absolute_key() + "@" + std::to_string(i.max_consumed_delay));
        std::sort(insts.begin(), insts.end());
        for (auto& p : insts) {
            key += p;
            key += '|';
        }
        return key;
    }

    void resolve(int slot_inst, int which, Operand op) {
        if (slot_inst < 0) {
            root_ref = op;
            root_resolved = true;
        } else if (which == 0) {
            Operand negate_kept = instances[slot_inst].opa;
            op.negate = negate_kept.negate;
            instances[slot_inst].opa = op;
        } else {
            Operand negate_kept = instances[slot_inst].opb;
            op.negate = negate_kept.negate;
            instances[slot_inst].opb = op;
        }
    }

    // Worse-or-equal than the best already found at this limit.
    bool dominated_by_best() const {
        if (!found) return false;
        if (delay_used != best_delay) return delay_used > best_delay;
        return mults_used >= best_mults;
    }

    void record_solution() {
        if (found && (delay_used > best_delay ||
                      (delay_used == best_delay && mults_used >= best_mults)))
            return;
        found = true;
        best_delay = delay_used;
        best_mults = mults_used;
        best_instances = instances;
        best_root = root_ref;
    }

    void dfs() {
        if (++expansions > kExpansionGuard)
            throw Error(ErrorCode::Internal, "ordp search exceeded its expansion guard");
        if (goals.empty()) {
            record_solution();
            return;
        }
        if (ops_used + state_lb() > op_limit) return;
        if (dominated_by_best()) return;

        std::string key = state_key();
        auto it = memo.find(key);
        if (it != memo.end()) {
            auto& [o, d, m] = it->second;
            if (o <= ops_used && d <= delay_used && m <= mults_used) return;
            if (ops_used <= o && delay_used <= d && mults_used <= m)
                it->second = {ops_used, delay_used, mults_used};
        } else {
            memo.emplace(std::move(key),
                         std::array<int64_t, 3>{ops_used, delay_used, mults_used});
        }

        // Select the newest goal; ties by pattern key, then insertion order.
        size_t pick = 0;
        for (size_t i = 1; i < goals.size(); ++i) {
            int64_t ai = goals[i].shape.align(), ap = goals[pick].shape.align();
            if (ai > ap || (ai == ap && goals[i].shape.pattern_key() <
                                            goals[pick].shape.pattern_key()))
                pick = i;
        }
        Goal g = goals[pick];
        goals.erase(goals.begin() + pick);

        // leaf
        if (g.shape.size() == 1 && g.shape.terms[0].coeff == Rational(1)) {
            Operand op;
            op.is_leaf = true;
            op.leaf = g.shape.terms[0].pos;
            resolve(g.slot_inst, g.which, op);
            dfs();
            goals.insert(goals.begin() + pick, g);
            return;  // a free exact resolution is never beaten
        }

        std::string pattern = g.shape.pattern_key();
        int64_t align = g.shape.align();

        // reuse at delay 0 is free and exact: take it and stop.
        bool reused_free = false;
        for (size_t i = 0; i < instances.size() && !reused_free; ++i) {
            if (instances[i].align == align && instances[i].pattern == pattern) {
                Operand op;
                op.inst = static_cast<int>(i);
                op.delay = 0;
                resolve(g.slot_inst, g.which, op);
                dfs();
                reused_free = true;
            }
        }
        if (reused_free) {
            goals.insert(goals.begin() + pick, g);
            return;
        }

        // delayed reuse
        for (size_t i = 0; i < instances.size(); ++i) {
            if (instances[i].pattern != pattern) continue;
            int64_t d = instances[i].align - align;
            if (d <= 0) continue;
            int64_t delta = std::max<int64_t>(0, d - instances[i].max_consumed_delay);
            if (!budget_ok(delay_used + delta)) continue;
            int64_t saved = instances[i].max_consumed_delay;
            instances[i].max_consumed_delay = std::max(saved, d);
            delay_used += delta;
            Operand op;
            op.inst = static_cast<int>(i);
            op.delay = d;
            resolve(g.slot_inst, g.which, op);
            dfs();
            delay_used -= delta;
            instances[i].max_consumed_delay = saved;
        }

        if (ops_used < op_limit) {
            // content extraction
            Rational c = g.shape.content();
            bool negative_lead = g.shape.leading().coeff.sign() < 0;
            if (!negative_lead && !(c == Rational(1)) && !c.is_zero()) {
                Instance inst;
                inst.kind = Instance::Kind::mult;
                inst.mult_const = c;
                inst.shape = g.shape;
                inst.pattern = pattern;
                inst.align = align;
                instances.push_back(inst);
                int inst_id = static_cast<int>(instances.size()) - 1;
                Operand op;
                op.inst = inst_id;
                resolve(g.slot_inst, g.which, op);
                ++ops_used;
                ++mults_used;
                Goal residual;
                residual.shape = g.shape.scaled(Rational(1) / c);
                residual.slot_inst = inst_id;
                residual.which = 0;
                goals.push_back(residual);
                dfs();
                goals.pop_back();
                --ops_used;
                --mults_used;
                instances.pop_back();
            }

            // support splits: the leading term pins side A
            size_t n = g.shape.size();
            if (n >= 2) {
                const Term& lead = g.shape.leading();
                std::vector<Term> rest;
                for (const auto& t : g.shape.terms)
                    if (!(t.pos == lead.pos)) rest.push_back(t);
                size_t m = rest.size();
                for (uint64_t mask = 0; mask + 1 < (uint64_t{1} << m); ++mask) {
                    Shape a, b;
                    a.terms.push_back(lead);
                    for (size_t i = 0; i < m; ++i)
                        ((mask >> i) & 1 ? a : b).terms.push_back(rest[i]);
                    std::sort(a.terms.begin(), a.terms.end());
                    std::sort(b.terms.begin(), b.terms.end());

                    bool flip = b.leading().coeff.sign() < 0;
                    if (flip) b = b.negated();

                    Instance inst;
                    inst.kind = Instance::Kind::add;
                    inst.shape = g.shape;
                    inst.pattern = pattern;
                    inst.align = align;
                    inst.opb.negate = flip;
                    instances.push_back(inst);
                    int inst_id = static_cast<int>(instances.size()) - 1;
                    Operand op;
                    op.inst = inst_id;
                    resolve(g.slot_inst, g.which, op);
                    ++ops_used;
                    goals.push_back(Goal{a, inst_id, 0});
                    goals.push_back(Goal{b, inst_id, 1});
                    dfs();
                    goals.pop_back();
                    goals.pop_back();
                    --ops_used;
                    instances.pop_back();
                }
            }
        }
        goals.insert(goals.begin() + pick, g);
    }
};

}  // namespace

ComputePlan ordp(const LinearStencil& stencil, std::optional<int64_t> storage_budget) {
    if (storage_budget && *storage_budget < 0)
        throw Error(ErrorCode::InfeasibleBudget,
                    "storage budget must be non-negative, got " +
                        std::to_string(*storage_budget));
    if (stencil.taps.size() > kOrdpMaxTaps)
        throw Error(ErrorCode::TooManyTaps,
                    "ordp handles at most " + std::to_string(kOrdpMaxTaps) + " taps, got " +
                        std::to_string(stencil.taps.size()) + "; use hsbr");
    if (stencil.taps.empty())
        throw Error(ErrorCode::Internal, "empty stencil reached ordp");

    std::vector<std::string> array_names;
    Shape target = shape_of(stencil, array_names);

    bool root_negated = target.leading().coeff.sign() < 0;
    if (root_negated) target = target.negated();

    ComputePlan naive = naive_linear_plan(stencil);
    int naive_ops = naive.mults_per_output + naive.adds_per_output;

    // Trivial target: one unit tap.
    if (target.size() == 1 && target.terms[0].coeff == Rational(1)) {
        return emit_plan({}, -1, false, array_names, stencil);
    }

    Searcher s;
    s.budget = storage_budget ? *storage_budget : -1;
    int base_ops = root_negated ? 1 : 0;

    Goal root;
    root.shape = target;
    root.slot_inst = -1;
    root.which = 0;
    int lb = 0;
    {
        s.goals.push_back(root);
        lb = s.state_lb();
        s.goals.clear();
    }

    for (int limit = lb; limit + base_ops < naive_ops; ++limit) {
        s.goals.assign(1, root);
        s.instances.clear();
        s.ops_used = 0;
        s.mults_used = 0;
        s.delay_used = 0;
        s.found = false;
        s.root_resolved = false;
        s.memo.clear();
        s.op_limit = limit;
        s.dfs();
        if (s.found) {
            ComputePlan plan =
                emit_plan(s.best_instances, s.best_root.inst, root_negated, array_names, stencil);
            if (s.best_root.is_leaf)
                plan = emit_plan({}, -1, root_negated, array_names, stencil);
            return plan;
        }
    }
    // Nothing beats the naive construction within the budget.
    return naive;
}

}  // namespace sodac
