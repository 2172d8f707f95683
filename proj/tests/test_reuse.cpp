#include <map>
#include <set>

#include "doctest.h"
#include "sodac/parser.hpp"
#include "sodac/reuse_planner.hpp"
#include "support/corpus.hpp"
#include "support/fixtures.hpp"

using namespace sodac;
using namespace sodac::testing;

namespace {

// Brute-force live-set oracle: stream the tile one element per cycle in
// row-major order, emit each valid output the moment its newest tap arrives,
// retain every element that a not-yet-emitted output still needs, and record
// the largest set of simultaneously retained elements (including the one
// arriving this cycle).
int64_t oracle_min_live_set(const std::vector<std::vector<int64_t>>& offsets,
                            const std::vector<int64_t>& extents) {
    size_t rank = extents.size();
    int64_t total = 1;
    for (int64_t e : extents) total *= e;

    auto seq_of = [&](const std::vector<int64_t>& coord) {
        int64_t seq = 0, stride = 1;
        for (size_t d = 0; d < rank; ++d) {
            seq += coord[d] * stride;
            stride *= extents[d];
        }
        return seq;
    };

    // For every valid output: arrival sequence of all taps.
    std::map<int64_t, std::vector<int64_t>> emit_at;      // newest-tap seq -> list of outputs
    std::map<int64_t, std::vector<int64_t>> taps_of_out;  // output id -> tap seqs
    std::vector<int64_t> coord(rank, 0);
    int64_t out_id = 0;
    while (true) {
        bool inside = true;
        std::vector<int64_t> taps;
        for (const auto& off : offsets) {
            std::vector<int64_t> tap(rank);
            for (size_t d = 0; d < rank; ++d) {
                tap[d] = coord[d] + off[d];
                if (tap[d] < 0 || tap[d] >= extents[d]) inside = false;
            }
            if (!inside) break;
            taps.push_back(seq_of(tap));
        }
        if (inside) {
            int64_t newest = *std::max_element(taps.begin(), taps.end());
            emit_at[newest].push_back(out_id);
            taps_of_out[out_id] = taps;
            ++out_id;
        }
        size_t d = 0;
        while (d < rank && ++coord[d] == extents[d]) coord[d++] = 0;
        if (d == rank) break;
    }
    REQUIRE(out_id > 0);

    // pending consumer count per element
    std::map<int64_t, int64_t> pending;
    for (const auto& [o, taps] : taps_of_out)
        for (int64_t t : taps) ++pending[t];

    // The buffer is a contiguous shift-register window, so the storage the
    // hardware needs is the distance from the oldest still-needed element to
    // the newest arrival, measured while the arriving element is live.
    std::set<int64_t> live;
    int64_t max_window = 0;
    for (int64_t t = 0; t < total; ++t) {
        if (pending.count(t)) live.insert(t);
        if (!live.empty())
            max_window = std::max(max_window, t - *live.begin() + 1);
        auto it = emit_at.find(t);
        if (it != emit_at.end()) {
            for (int64_t o : it->second)
                for (int64_t tap : taps_of_out[o])
                    if (--pending[tap] == 0) live.erase(tap);
        }
    }
    return max_window;
}

const EdgePlan& plan_for(const ReusePlan& plan, const StageGraph& g, const std::string& producer,
                         const std::string& consumer) {
    for (const auto& ep : plan.edges)
        if (ep.producer == producer && ep.consumer == consumer) return ep;
    (void)g;
    FAIL("no edge plan ", producer, " -> ", consumer);
    static EdgePlan dummy;
    return dummy;
}

}  // namespace

TEST_CASE("plan_reuse: blur edge totals at k=1 match span+1") {
    StageGraph g = lower(parse_source(kBlurSource));
    ReusePlan plan = plan_reuse(g, 1);
    CHECK(plan_for(plan, g, "image", "blur_x").total_elems == 3);
    CHECK(plan_for(plan, g, "blur_x", "blur_y").total_elems == 6001);
}

TEST_CASE("plan_reuse: blur_y at k=16 stays within the rounding bound") {
    StageGraph g = lower(parse_source(kBlurSource), 3200);  // 3200 % 16 == 0
    ReusePlan plan = plan_reuse(g, 16);
    const EdgePlan& ep = plan_for(plan, g, "blur_x", "blur_y");
    CHECK(ep.span == 6400);
    CHECK(ep.total_elems == 6416);
    CHECK(ep.total_elems <= (ep.span + 1 + 15) / 16 * 16);
}

TEST_CASE("plan_reuse: classic line-buffer segmentation for blur_y") {
    StageGraph g = lower(parse_source(kBlurSource));
    ReusePlan p1 = plan_reuse(g, 1);
    const EdgePlan& e1 = plan_for(p1, g, "blur_x", "blur_y");
    CHECK(e1.segments == std::vector<int64_t>{2999, 2999});
    CHECK(e1.tap_register_count == 3);

    StageGraph g16 = lower(parse_source(kBlurSource), 3200);
    ReusePlan p16 = plan_reuse(g16, 16);
    const EdgePlan& e16 = plan_for(p16, g16, "blur_x", "blur_y");
    CHECK(e16.segments == std::vector<int64_t>{3184, 3184});
    CHECK(e16.tap_register_count == 48);
}

TEST_CASE("plan_reuse: identity needs k registers and no FIFOs") {
    StageGraph g = lower(parse_source(kIdentitySource));
    for (int64_t k : {1, 2, 4, 8, 16}) {
        ReusePlan plan = plan_reuse(g, k);
        const EdgePlan& ep = plan.edges[0];
        CHECK(ep.total_elems == k);
        CHECK(ep.segments.empty());
    }
}

TEST_CASE("plan_reuse: unroll must divide the tile width") {
    StageGraph g = lower(parse_source(kBlurSource));  // width 3000
    CHECK_THROWS_AS(plan_reuse(g, 16), Error);        // 3000 % 16 != 0
    try {
        plan_reuse(g, 16);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnrollMismatch);
    }
    CHECK_THROWS_AS(plan_reuse(g, 0), Error);
    CHECK_NOTHROW(plan_reuse(g, 8));
}

TEST_CASE("buffer_bits: frozen values") {
    StageGraph g = lower(parse_source(kBlurSource));
    ReusePlan plan = plan_reuse(g, 1);
    // (3 + 6001) float32 elements
    CHECK(buffer_bits(plan) == (3 + 6001) * 32);

    ReusePlan empty;
    CHECK(buffer_bits(empty) == 0);

    const char* ident64 =
        "kernel: k\ninput int64: a(64, *)\noutput int64: o(0, 0) = a(0, 0)\n";
    ReusePlan p4 = plan_reuse(lower(parse_source(ident64)), 4);
    CHECK(buffer_bits(p4) == 4 * 64);
}

TEST_CASE("property: k=1 totals equal the brute-force live-set oracle") {
    Rng rng(90210);
    for (int iter = 0; iter < 40; ++iter) {
        LinearStencilSpec spec;
        spec.rank = static_cast<int>(rand_int(rng, 1, 2));
        spec.tile_width = 16 * rand_int(rng, 1, 4);
        spec.max_taps = 6;
        GeneratedProgram gp = random_linear_program(rng, spec, "p" + std::to_string(iter));
        StageGraph g = lower(parse_source(gp.source));
        ReusePlan plan = plan_reuse(g, 1);

        std::vector<int64_t> extents = g.tile_shape;
        if (extents.back() < 0) extents.back() = 16;
        std::vector<std::vector<int64_t>> offsets;
        for (const auto& [off, w] : gp.stages[0].taps) offsets.push_back(off);
        int64_t oracle = oracle_min_live_set(offsets, extents);
        const EdgePlan& ep = plan.edges[g.nodes[g.stage_nodes()[0]].in_edges[0]];
        CHECK(ep.total_elems == oracle);
    }
}

TEST_CASE("property: buffer storage is independent of PE count up to rounding") {
    Rng rng(31337);
    for (int iter = 0; iter < 25; ++iter) {
        LinearStencilSpec spec;
        spec.rank = 2;
        spec.tile_width = 64;
        spec.max_stages = 2;
        GeneratedProgram gp = random_linear_program(rng, spec, "p" + std::to_string(iter));
        StageGraph g = lower(parse_source(gp.source));
        ReusePlan base = plan_reuse(g, 1);
        for (int64_t k : {2, 4, 8, 16}) {
            ReusePlan plan = plan_reuse(g, k);
            for (size_t e = 0; e < plan.edges.size(); ++e) {
                CHECK(plan.edges[e].total_elems - base.edges[e].total_elems < k);
                CHECK(plan.edges[e].total_elems >= base.edges[e].total_elems);
            }
        }
    }
}

TEST_CASE("plan_reuse: every footprint offset maps to a unique in-window tap index per lane") {
    StageGraph g = lower(parse_source(kBlurSource), 3200);
    ReusePlan plan = plan_reuse(g, 16);
    for (const auto& edge : g.edges) {
        const EdgePlan& ep = plan.edges[&edge - g.edges.data()];
        for (int64_t lane = 0; lane < 16; ++lane) {
            std::set<int64_t> seen;
            for (int64_t lin : edge.footprint.lin_offsets) {
                int64_t idx = ep.window_index(lane, lin);
                CHECK(idx >= 0);
                CHECK(idx < ep.span + 16);
                CHECK(seen.insert(idx).second);
            }
        }
    }
}

TEST_CASE("dump_plan_json is stable") {
    StageGraph g = lower(parse_source(kBlurSource));
    CHECK(dump_plan_json(plan_reuse(g, 1)) == dump_plan_json(plan_reuse(g, 1)));
    CHECK(dump_plan_json(plan_reuse(g, 1)).find("\"total_elems\": 6001") != std::string::npos);
}
