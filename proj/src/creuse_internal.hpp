// Shared shape machinery for the computation-reuse planners.
//
// A shape is a linear form over leaf streams: a sorted term list mapping
// (array, linearized offset) to a rational coefficient. Plans are DAGs of
// instances; each instance produces a shape-valued stream that consumers may
// read d positions late (a delay line of d elements), so one instance serves
// every shifted occurrence of its pattern.
#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "sodac/compute_reuse.hpp"

namespace sodac::creuse {

using Pos = std::pair<int, int64_t>;  // (array index, linearized offset)

struct Term {
    Pos pos;
    Rational coeff;
    bool operator<(const Term& o) const { return pos < o.pos; }
};

struct Shape {
    std::vector<Term> terms;  // sorted by pos, no zero coefficients

    bool empty() const { return terms.empty(); }
    size_t size() const { return terms.size(); }

    // Newest stream position: the largest linearized offset (ties across
    // arrays resolved toward the smaller array index).
    int64_t align() const {
        int64_t best = INT64_MIN;
        for (const auto& t : terms) best = std::max(best, t.pos.second);
        return best;
    }

    const Term& leading() const {
        const Term* lead = nullptr;
        for (const auto& t : terms)
            if (!lead || t.pos.second > lead->pos.second ||
                (t.pos.second == lead->pos.second && t.pos.first < lead->pos.first))
                lead = &t;
        return *lead;
    }

    Shape shifted(int64_t delay) const {  // toward older positions
        Shape s = *this;
        for (auto& t : s.terms) t.pos.second -= delay;
        return s;
    }

    Shape negated() const {
        Shape s = *this;
        for (auto& t : s.terms) t.coeff = -t.coeff;
        return s;
    }

    Shape scaled(const Rational& c) const {
        Shape s = *this;
        for (auto& t : s.terms) t.coeff = t.coeff * c;
        return s;
    }

    // Positive rational content: gcd of numerators over lcm of denominators.
    Rational content() const {
        int64_t g = 0, l = 1;
        for (const auto& t : terms) {
            int64_t num = t.coeff.num() < 0 ? -t.coeff.num() : t.coeff.num();
            g = std::gcd(g, num);
            l = std::lcm(l, t.coeff.den());
        }
        return Rational(g, l);
    }

    // Pattern: the shape shifted so its newest position is 0. Two shapes
    // with equal patterns are the same stream observed at different delays.
    std::string pattern_key() const {
        int64_t a = align();
        std::string key;
        for (const auto& t : terms) {
            key += std::to_string(t.pos.first);
            key += ':';
            key += std::to_string(t.pos.second - a);
            key += '=';
            key += t.coeff.str();
            key += ';';
        }
        return key;
    }

    std::string absolute_key() const {
        std::string key;
        for (const auto& t : terms) {
            key += std::to_string(t.pos.first);
            key += ':';
            key += std::to_string(t.pos.second);
            key += '=';
            key += t.coeff.str();
            key += ';';
        }
        return key;
    }
};

inline Shape shape_of(const LinearStencil& stencil, std::vector<std::string>& array_names) {
    Shape s;
    for (const auto& tap : stencil.taps) {
        auto it = std::find(array_names.begin(), array_names.end(), tap.array);
        int idx;
        if (it == array_names.end()) {
            array_names.push_back(tap.array);
            idx = static_cast<int>(array_names.size()) - 1;
        } else {
            idx = static_cast<int>(it - array_names.begin());
        }
        s.terms.push_back(Term{{idx, tap.lin}, tap.weight});
    }
    std::sort(s.terms.begin(), s.terms.end());
    return s;
}

// --- plan assembly -------------------------------------------------------

struct Operand {
    bool is_leaf = false;
    Pos leaf{};        // when is_leaf
    int inst = -1;     // producing instance otherwise
    int64_t delay = 0;
    bool negate = false;  // subtract instead of add (second operand only)
};

struct Instance {
    enum class Kind { add, mult };
    Kind kind{};
    Rational mult_const;
    Operand opa, opb;  // mult uses opa only
    Shape shape;       // absolute
    std::string pattern;
    int64_t align = 0;
    int64_t max_consumed_delay = 0;
};

// Lowers an instance DAG into a ComputePlan. `root_negated` wraps the final
// value in a negation (the target's leading coefficient was negative).
ComputePlan emit_plan(const std::vector<Instance>& instances, int root_instance,
                      bool root_negated, const std::vector<std::string>& array_names,
                      const LinearStencil& stencil);

}  // namespace sodac::creuse
