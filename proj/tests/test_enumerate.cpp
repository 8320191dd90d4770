#include "doctest.h"

#include <set>

#include "fathom/enumerate.hpp"
#include "oracle.hpp"

using namespace fathom;
using namespace fathom::flows;
using namespace fathom::census;

TEST_CASE("one-saddle census") {
    auto c = enumerate_flows(1);
    std::set<std::string> links;
    for (const auto& [link, idx] : c.by_link) links.insert(link);
    CHECK(links == std::set<std::string>{"h·h·u", "h·d0·u",
                                         "h·d2·u", "d0·d2·u"});
    CHECK(c.flows.size() == 4);
    CHECK(c.collisions().empty());

    auto d = enumerate_flows(1, {.dualize = true});
    CHECK(d.flows.size() == 3);
}

TEST_CASE("two-saddle census reproduces the case analysis") {
    auto c = enumerate_flows(2);
    std::set<std::string> shapes;
    for (const auto& cf : c.flows)
        shapes.insert(links::canonicalize(cf.flow.link()).shape);
    CHECK(shapes == std::set<std::string>{
                        "h·h·h·u·u", "h·h·d·u·u",
                        "h·d·d·u·u", "d·d·d·u·u",
                        "h·h·u·u", "h·d·u·u",
                        "d·d·u·u"});

    // two distinct flows share the indexed link h.d0.d2.u.u
    auto groups = c.collisions();
    bool found = false;
    for (const auto& g : groups)
        if (g.link_text == "h·d0·d2·u·u") {
            CHECK(g.flow_indices.size() >= 2);
            found = true;
        }
    CHECK(found);
}

TEST_CASE("census determinism") {
    auto a = enumerate_flows(3);
    auto b = enumerate_flows(3);
    REQUIRE(a.flows.size() == b.flows.size());
    for (std::size_t i = 0; i < a.flows.size(); ++i)
        CHECK(a.flows[i].key == b.flows[i].key);
}

TEST_CASE("monotone growth: every flow extends a smaller one") {
    for (int n = 2; n <= 4; ++n) {
        auto small = enumerate_flows(n - 1);
        std::set<std::string> small_keys;
        for (const auto& cf : small.flows) small_keys.insert(cf.key);
        for (const auto& cf : enumerate_flows(n).flows) {
            // replay the log prefix
            const auto& log = cf.flow.log();
            FlowModel cur = basic_flow(log[0].basic_op, log[0].separated_index);
            std::map<OrbitId, OrbitId> map;
            for (OrbitId k = 0; k < cur.orbit_slots(); ++k) map[k] = k;
            for (std::size_t t = 1; t + 1 < log.size(); ++t) {
                FlowModel next =
                    replace_orbit(cur, map.at(log[t].replaced), log[t].attached,
                                  log[t].separated_index);
                const auto& ns = next.log().back();
                for (std::size_t i = 0; i < log[t].created.size(); ++i)
                    map[log[t].created[i]] = ns.created[i];
                map[log[t].new_saddle] = ns.new_saddle;
                cur = std::move(next);
            }
            CHECK(small_keys.count(cur.canonical_form()) == 1);
        }
    }
}

TEST_CASE("fat handle enumeration classifies into the three classes") {
    for (int n = 1; n <= 4; ++n) {
        for (Polarity p : {Polarity::Repulsive, Polarity::Attractive}) {
            auto handles = enumerate_fat_handles(n, p);
            CHECK(!handles.empty());
            for (const auto& h : handles) {
                auto c = h.handle.handle_class();
                CHECK((c == HandleClass::ClassI || c == HandleClass::ClassII ||
                       c == HandleClass::ClassIII));
            }
        }
    }
    // the four basic handle families
    auto h1 = enumerate_fat_handles(1, Polarity::Repulsive);
    std::set<std::string> shapes;
    for (const auto& h : h1) shapes.insert(h.handle.shape());
    CHECK(shapes == std::set<std::string>{"hdu", "ddu", "hu", "du"});
}

TEST_CASE("bound handling") {
    CHECK_THROWS_AS(enumerate_flows(0), BoundError);
    CHECK_THROWS_AS(enumerate_flows(99), BoundError);
    CHECK_NOTHROW(enumerate_flows(2, {.dualize = false, .bound = 2}));
    CHECK_THROWS_AS(enumerate_flows(3, {.dualize = false, .bound = 2}), BoundError);
}

TEST_CASE("oracle isomorphism sanity") {
    auto a = basic_flow(BasicOp::III);
    auto b = basic_flow(BasicOp::III);
    CHECK(oracle::isomorphic(a, b));
    CHECK(!oracle::isomorphic(a, basic_flow(BasicOp::I)));
    auto f2a = basic_flow(BasicOp::II, OrbitIndex::Attractive);
    auto f2r = basic_flow(BasicOp::II, OrbitIndex::Repulsive);
    CHECK(!oracle::isomorphic(f2a, f2r));
    CHECK(oracle::isomorphic(f2a, f2r.dual()));
}

TEST_CASE("census agrees with the independent oracle (small sizes)") {
    for (int n = 1; n <= 3; ++n) {
        for (bool dualize : {false, true}) {
            auto c = enumerate_flows(n, {.dualize = dualize});
            CHECK(c.flows.size() == oracle::census_count(n, dualize));
        }
    }
}

TEST_CASE("collision groups exist for every n >= 2") {
    for (int n = 2; n <= 4; ++n) {
        auto c = enumerate_flows(n, {.with_class_table = false});
        CHECK(!c.collisions().empty());
        // same link implies same saddle count across a group, trivially
        for (const auto& g : c.collisions())
            for (std::size_t i : g.flow_indices)
                CHECK(c.flows[i].flow.saddle_count() == static_cast<std::size_t>(n));
    }
}

TEST_CASE("duality maps the census to itself and preserves classes") {
    for (int n = 1; n <= 3; ++n) {
        auto c = enumerate_flows(n, {.with_class_table = false});
        std::set<std::string> keys;
        for (const auto& cf : c.flows) keys.insert(cf.key);
        for (const auto& cf : c.flows) {
            auto d = cf.flow.dual();
            CHECK(keys.count(d.canonical_form()) == 1);
            for (OrbitId k : cf.flow.removable_orbits())
                CHECK(remove_orbit(cf.flow, k).handle_class() ==
                      remove_orbit(d, k).handle_class());
        }
    }
}
