#include "doctest.h"

#include <algorithm>
#include <random>

#include "fathom/link.hpp"

using namespace fathom;
using namespace fathom::links;

namespace {

IndexedLink hopf() { return make_hopf(OrbitIndex::Repulsive, OrbitIndex::Attractive); }

std::string canon(const IndexedLink& l) { return canonicalize(l).text; }

OrbitId component_of_index(const IndexedLink& l, OrbitIndex i) {
    for (const auto& p : l.pairs()) {
        if (p.ia == i) return p.a;
        if (p.ib == i) return p.b;
    }
    for (const auto& s : l.separated())
        if (s.index == i) return s.id;
    throw Error("no component of that index");
}

OrbitId separated_of_index(const IndexedLink& l, OrbitIndex i) {
    for (const auto& s : l.separated())
        if (s.index == i) return s.id;
    throw Error("no separated component of that index");
}

} // namespace

TEST_CASE("make_hopf") {
    CHECK(canon(hopf()) == "h");
    CHECK(canon(make_hopf(OrbitIndex::Attractive, OrbitIndex::Repulsive)) == "h");
    CHECK_THROWS_AS(make_hopf(OrbitIndex::Saddle, OrbitIndex::Attractive), Error);
}

TEST_CASE("make_unknot") {
    CHECK(canon(make_unknot(OrbitIndex::Saddle)) == "u");
    CHECK(canon(make_unknot(OrbitIndex::Repulsive)) == "d0");
    CHECK(canon(make_unknot(OrbitIndex::Attractive)) == "d2");
}

TEST_CASE("split_sum") {
    auto hu = split_sum(hopf(), make_unknot(OrbitIndex::Saddle));
    CHECK(canon(hu) == "h·u");
    auto big = split_sum(op_i(hopf(), hopf()), hopf());
    CHECK(canon(big) == "h·h·h·u");
    IndexedLink empty;
    CHECK(canon(split_sum(empty, hu)) == canon(hu));
}

TEST_CASE("remove_component") {
    auto h = hopf();
    auto d2 = remove_component(h, component_of_index(h, OrbitIndex::Repulsive));
    CHECK(canon(d2) == "d2");
    auto hd = split_sum(hopf(), make_unknot(OrbitIndex::Attractive));
    auto back = remove_component(hd, separated_of_index(hd, OrbitIndex::Attractive));
    CHECK(canon(back) == "h");
    auto hu = split_sum(hopf(), make_unknot(OrbitIndex::Saddle));
    CHECK_THROWS_AS(remove_component(hu, separated_of_index(hu, OrbitIndex::Saddle)), Error);
    CHECK_THROWS_AS(remove_component(hu, OrbitId{99}), SelectorError);
}

TEST_CASE("operation I") {
    auto f1 = op_i(hopf(), hopf());
    CHECK(canon(f1) == "h·h·u");
    CHECK(canon(op_i(f1, hopf())) == "h·h·h·u·u");
    // III(h,h) = d.d.u then operation I
    auto h1 = hopf(), h2 = hopf();
    auto ddu = op_iii(h1, h2, component_of_index(h1, OrbitIndex::Repulsive),
                      component_of_index(h2, OrbitIndex::Attractive));
    CHECK(canon(op_i(ddu, hopf())) == "h·d0·d2·u·u");
}

TEST_CASE("operation II") {
    auto h2 = hopf();
    auto f = op_ii(hopf(), h2, component_of_index(h2, OrbitIndex::Repulsive));
    CHECK(canon(f) == "h·d2·u");

    auto h3 = hopf();
    auto g = op_ii(f, h3, component_of_index(h3, OrbitIndex::Repulsive));
    CHECK(canon(g) == "h·d2·d2·u·u");
    CHECK(canonicalize(g).shape == "h·d·d·u·u");

    // II(h, h.d.u) removing the d gives h.h.u.u
    auto k = separated_of_index(f, OrbitIndex::Attractive);
    CHECK(canon(op_ii(hopf(), f, k)) == "h·h·u·u");
}

TEST_CASE("operation III") {
    auto h1 = hopf(), h2 = hopf();
    auto f = op_iii(h1, h2, component_of_index(h1, OrbitIndex::Repulsive),
                    component_of_index(h2, OrbitIndex::Attractive));
    CHECK(canon(f) == "d0·d2·u");

    auto h3 = hopf();
    auto g = op_iii(f, h3, separated_of_index(f, OrbitIndex::Repulsive),
                    component_of_index(h3, OrbitIndex::Attractive));
    CHECK(canon(g) == "d0·d2·u·u");

    auto h4 = hopf(), h5 = hopf();
    CHECK_THROWS_AS(op_iii(h4, h5, component_of_index(h4, OrbitIndex::Attractive),
                           component_of_index(h5, OrbitIndex::Attractive)),
                    Error);
}

TEST_CASE("canonicalize invariance and equality") {
    // permutation invariance
    auto a = split_sum(split_sum(make_unknot(OrbitIndex::Saddle), hopf()),
                       make_unknot(OrbitIndex::Repulsive));
    auto b = split_sum(split_sum(make_unknot(OrbitIndex::Repulsive), hopf()),
                       make_unknot(OrbitIndex::Saddle));
    CHECK(links_equal(a, b));

    // I(III(h,h),h) and II(II(h,h),h) share the link h.d.d.u.u
    auto h1 = hopf(), h2 = hopf();
    auto d = op_iii(h1, h2, component_of_index(h1, OrbitIndex::Repulsive),
                    component_of_index(h2, OrbitIndex::Attractive));
    auto left = op_i(d, hopf());
    auto h3 = hopf();
    auto inner = op_ii(hopf(), h3, component_of_index(h3, OrbitIndex::Repulsive));
    auto h4 = hopf();
    auto right = op_ii(inner, h4, component_of_index(h4, OrbitIndex::Attractive));
    CHECK(canonicalize(left).shape == "h·d·d·u·u");
    CHECK(canonicalize(right).shape == "h·d·d·u·u");

    auto f1 = op_i(hopf(), hopf());
    auto h5 = hopf();
    auto f2 = op_ii(hopf(), h5, component_of_index(h5, OrbitIndex::Repulsive));
    CHECK(!links_equal(f1, f2));
}

namespace {

IndexedLink random_link(std::mt19937& rng, int max_components) {
    std::uniform_int_distribution<int> count(0, max_components);
    std::uniform_int_distribution<int> kind(0, 3);
    IndexedLink l;
    int n = count(rng);
    for (int i = 0; i < n; ++i) {
        switch (kind(rng)) {
            case 0: l.add_pair(OrbitIndex::Repulsive, OrbitIndex::Attractive); break;
            case 1: l.add_separated(OrbitIndex::Repulsive); break;
            case 2: l.add_separated(OrbitIndex::Attractive); break;
            default: l.add_separated(OrbitIndex::Saddle); break;
        }
    }
    return l;
}

IndexedLink shuffled_copy(const IndexedLink& l, std::mt19937& rng) {
    // rebuild with components inserted in a random order
    struct Item {
        bool pair;
        OrbitIndex i;
    };
    std::vector<Item> items;
    for (const auto& p : l.pairs()) items.push_back({true, p.ia});
    for (const auto& s : l.separated()) items.push_back({false, s.index});
    std::shuffle(items.begin(), items.end(), rng);
    IndexedLink out;
    for (const auto& it : items) {
        if (it.pair) out.add_pair(OrbitIndex::Repulsive, OrbitIndex::Attractive);
        else out.add_separated(it.i);
    }
    return out;
}

} // namespace

TEST_CASE("canonicalize is idempotent and relabeling-invariant") {
    std::mt19937 rng(20130922);
    for (int trial = 0; trial < 300; ++trial) {
        IndexedLink l = random_link(rng, 20);
        auto c = canonicalize(l);
        CHECK(canonicalize(parse_link(c.text)).text == c.text);
        CHECK(canonicalize(shuffled_copy(l, rng)).text == c.text);
    }
}

TEST_CASE("each operation adds exactly one saddle") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 100; ++trial) {
        IndexedLink l1 = random_link(rng, 6);
        IndexedLink l2 = random_link(rng, 6);
        CHECK(op_i(l1, l2).saddle_count() == l1.saddle_count() + l2.saddle_count() + 1);
        if (l2.count_index(OrbitIndex::Attractive) > 0) {
            OrbitId k = component_of_index(l2, OrbitIndex::Attractive);
            CHECK(op_ii(l1, l2, k).saddle_count() == l1.saddle_count() + l2.saddle_count() + 1);
        }
        if (l1.count_index(OrbitIndex::Repulsive) > 0 &&
            l2.count_index(OrbitIndex::Attractive) > 0) {
            OrbitId k1 = component_of_index(l1, OrbitIndex::Repulsive);
            OrbitId k2 = component_of_index(l2, OrbitIndex::Attractive);
            CHECK(op_iii(l1, l2, k1, k2).saddle_count() ==
                  l1.saddle_count() + l2.saddle_count() + 1);
        }
    }
}

TEST_CASE("notation round-trip") {
    for (const char* text :
         {"h", "h·u", "h·h·d0·d2·u·u", "d0·d2·u"}) {
        CHECK(canonicalize(parse_link(text)).text == text);
    }
    CHECK(canonicalize(parse_link("h * u * d0")).text == "h·d0·u");
    CHECK_THROWS_AS(parse_link("h!u"), ParseError);
    CHECK_THROWS_AS(parse_link("d3"), ParseError);
}
