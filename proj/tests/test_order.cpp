#include "doctest.h"

#include "fathom/enumerate.hpp"
#include "fathom/order.hpp"

using namespace fathom;
using namespace fathom::flows;
using namespace fathom::order;

namespace {

OrbitId separated_orbit(const FlowModel& f, OrbitIndex idx) {
    for (OrbitId k : f.removable_orbits()) {
        const Region& r = f.regions()[f.region_slot_of(k)];
        if (!r.hopf_linked && f.index_of(k) == idx) return k;
    }
    throw Error("no separated orbit of that index");
}

OrbitId pair_member(const FlowModel& f, OrbitIndex idx, std::size_t nth = 0) {
    std::size_t seen = 0;
    for (const auto& c : f.components().pairs) {
        if (seen++ == nth) return idx == OrbitIndex::Repulsive ? c.rep_member : c.att_member;
    }
    throw Error("no such pair");
}

FlowModel f3_tower(int n) {
    FlowModel f = basic_flow(BasicOp::III);
    for (int i = 1; i < n; ++i)
        f = replace_orbit(f, separated_orbit(f, OrbitIndex::Attractive), BasicHandleKind::DU);
    return f;
}

// II(II(III(h,h),h),h) as in the figure: both attachments on the chain ends
FlowModel flow_223() {
    FlowModel f = basic_flow(BasicOp::III);
    f = replace_orbit(f, separated_orbit(f, OrbitIndex::Attractive), BasicHandleKind::HU);
    f = replace_orbit(f, separated_orbit(f, OrbitIndex::Repulsive), BasicHandleKind::HU);
    return f;
}

// II(II(II(II(h,h),h),h),h) as in the figure: two independent chains; the
// third step attaches to the founding flow's pair (ordinal 2 after the hu
// attachment), not to the pair the second step brought in
FlowModel flow_2222() {
    FlowModel f = basic_flow(BasicOp::II, OrbitIndex::Attractive);
    f = replace_orbit(f, separated_orbit(f, OrbitIndex::Attractive), BasicHandleKind::HU);
    f = replace_orbit(f, pair_member(f, OrbitIndex::Attractive, 1), BasicHandleKind::DDU,
                      OrbitIndex::Attractive);
    f = replace_orbit(f, separated_orbit(f, OrbitIndex::Attractive), BasicHandleKind::HU);
    return f;
}

} // namespace

TEST_CASE("saddle poset basics") {
    auto f_ii = identify(basic_handle(BasicHandleKind::HDU, Polarity::Attractive),
                         basic_handle(BasicHandleKind::HDU, Polarity::Repulsive));
    auto p = saddle_poset(f_ii);
    CHECK(p.covers().empty());
    CHECK(!p.total()); // two incomparable saddles

    auto single = saddle_poset(basic_flow(BasicOp::III));
    CHECK(single.total()); // singleton

    auto chain2 = saddle_poset(f3_tower(2));
    CHECK(chain2.total());
    CHECK(chain2.covers().size() == 1);
}

TEST_CASE("figure: II(II(III(h,h),h),h) is a 3-chain") {
    FlowModel f = flow_223();
    CHECK(links::canonicalize(f.link()).shape == "h·h·u·u·u");
    auto p = saddle_poset(f);
    CHECK(p.total());
    CHECK(p.covers().size() == 2);
    auto labels = sigma_labels(p, f);
    CHECK(labels.size() == 3);
    // positional labels run along the chain
    for (const auto& [a, b] : p.covers()) {
        std::string la, lb;
        for (const auto& [k, s] : labels) {
            if (k == a) la = s;
            if (k == b) lb = s;
        }
        CHECK(la < lb);
    }
}

TEST_CASE("figure: the four-step chain flow has two independent 2-chains") {
    FlowModel f = flow_2222();
    CHECK(links::canonicalize(f.link()).shape == "h·h·h·u·u·u·u");
    auto p = saddle_poset(f);
    CHECK(!p.total());
    auto covers = p.covers();
    CHECK(covers.size() == 2);
    // the two chains are disjoint
    CHECK(covers[0].first != covers[1].first);
    CHECK(covers[0].second != covers[1].second);
    // creation order matches the figure labels s1<s2, s3<s4
    auto log = f.log();
    CHECK(covers[0] == std::make_pair(log[0].new_saddle, log[1].new_saddle));
    CHECK(covers[1] == std::make_pair(log[2].new_saddle, log[3].new_saddle));
}

TEST_CASE("f3 chains") {
    CHECK(is_f3(basic_flow(BasicOp::III)));
    CHECK(!is_f3(basic_flow(BasicOp::I)));
    CHECK(!is_f3(flow_223()));

    auto one = f3_chain(basic_flow(BasicOp::III));
    CHECK(one.size() == 3); // d_r, u1, d_a

    for (int n = 1; n <= 6; ++n) {
        FlowModel f = f3_tower(n);
        CHECK(is_f3(f));
        auto chain = f3_chain(f);
        CHECK(chain.size() == static_cast<std::size_t>(n) + 2);
        auto p = f3_poset(f);
        CHECK(p.total());
        CHECK(p.covers().size() == chain.size() - 1);
        // endpoints: repulsive at the bottom, attractive on top
        CHECK(f.index_of(chain.front()) == OrbitIndex::Repulsive);
        CHECK(f.index_of(chain.back()) == OrbitIndex::Attractive);
        // creation order runs up the chain
        for (std::size_t i = 1; i + 2 < chain.size(); ++i)
            CHECK(chain[i] < chain[i + 1]);
        // the saddle poset restricted to saddles is the same chain
        auto sp = saddle_poset(f);
        CHECK(sp.total());
        CHECK(sp.covers().size() == static_cast<std::size_t>(n) - (n ? 1 : 0));
    }

    CHECK_THROWS_AS(f3_chain(basic_flow(BasicOp::I)), Error);
}

TEST_CASE("commuting steps: figures") {
    // two I attachments commute
    auto f_ii = identify(basic_handle(BasicHandleKind::HDU, Polarity::Attractive),
                         basic_handle(BasicHandleKind::HDU, Polarity::Repulsive));
    auto c1 = commuting_steps(f_ii);
    CHECK(c1.size() == 1);
    CHECK(c1[0] == std::make_pair(std::size_t{1}, std::size_t{2}));

    // operation-III towers have no commuting pairs
    for (int n = 2; n <= 4; ++n)
        CHECK(commuting_steps(f3_tower(n)).empty());

    // the four-step figure flow: steps 2 and 4 commute (different chains)
    auto c4 = commuting_steps(flow_2222());
    bool has_24 = false;
    for (auto [i, j] : c4) has_24 |= (i == 2 && j == 4);
    CHECK(has_24);
}

TEST_CASE("reported pairs rebuild to the same canonical flow") {
    for (int n = 2; n <= 4; ++n) {
        for (const auto& cf : census::enumerate_flows(n).flows) {
            std::string canon = cf.flow.canonical_form();
            for (auto [i, j] : commuting_steps(cf.flow)) {
                FlowModel rb = rebuild_reordered(cf.flow, i, j);
                CHECK(rb.canonical_form() == canon);
            }
        }
    }
}

TEST_CASE("flows with a 2-chain have a non-commuting pair") {
    for (int n = 2; n <= 4; ++n) {
        for (const auto& cf : census::enumerate_flows(n).flows) {
            if (cf.flow.heteroclinic_edges().empty()) continue;
            auto reported = commuting_steps(cf.flow);
            std::size_t steps = cf.flow.log().size();
            std::size_t all_pairs = steps * (steps - 1) / 2;
            CHECK(reported.size() < all_pairs);
        }
    }
}

TEST_CASE("poset acyclicity over the census") {
    for (int n = 1; n <= 4; ++n)
        for (const auto& cf : census::enumerate_flows(n).flows)
            CHECK_NOTHROW(saddle_poset(cf.flow));
}

TEST_CASE("poset json") {
    auto f = f3_tower(2);
    auto p = saddle_poset(f);
    std::string j = poset_json(p, f);
    CHECK(j.find("\"elements\"") != std::string::npos);
    CHECK(j.find("\"covers\"") != std::string::npos);
    CHECK(j.find("\"total\": true") != std::string::npos);
}

TEST_CASE("heteroclinic edges are covering edges") {
    for (int n = 1; n <= 4; ++n) {
        for (const auto& cf : census::enumerate_flows(n, {.with_class_table = false}).flows) {
            auto p = saddle_poset(cf.flow);
            CHECK(p.covers().size() == cf.flow.heteroclinic_edges().size());
        }
    }
}
