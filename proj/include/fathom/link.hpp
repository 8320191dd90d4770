#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "fathom/errors.hpp"
#include "fathom/types.hpp"

namespace fathom::links {

using fathom::OrbitId;
using fathom::OrbitIndex;

// Two unknotted components linked once. In every link reachable from the
// generator the index pair is {0,2}; other pairs are representable anyway.
struct HopfPair {
    OrbitId a = 0, b = 0;
    OrbitIndex ia = OrbitIndex::Repulsive, ib = OrbitIndex::Attractive;
    std::uint32_t rank = 0; // formation order, used by positional selectors
};

struct SeparatedOrbit {
    OrbitId id = 0;
    OrbitIndex index = OrbitIndex::Saddle;
    std::uint32_t rank = 0; // separation order
};

// A disjoint union of Hopf pairs and separated unknots with indices.
// Saddles (index 1) are always separated.
class IndexedLink {
public:
    const std::vector<HopfPair>& pairs() const { return pairs_; }
    const std::vector<SeparatedOrbit>& separated() const { return separated_; }

    std::size_t component_count() const { return pairs_.size() + separated_.size(); }
    std::size_t saddle_count() const;
    std::size_t count_index(OrbitIndex i) const; // over all orbits, pairs included

    bool has_orbit(OrbitId k) const;
    std::optional<OrbitIndex> index_of(OrbitId k) const;
    bool is_pair_member(OrbitId k) const;
    // Partner of a Hopf pair member.
    std::optional<OrbitId> partner_of(OrbitId k) const;

    OrbitId add_separated(OrbitIndex i);
    OrbitId add_separated_ranked(OrbitIndex i, std::uint32_t rank);
    void add_pair(OrbitIndex ia, OrbitIndex ib);

private:
    friend IndexedLink split_sum(const IndexedLink&, const IndexedLink&);
    friend IndexedLink remove_component(const IndexedLink&, OrbitId);

    std::vector<HopfPair> pairs_;
    std::vector<SeparatedOrbit> separated_;
    OrbitId next_id_ = 0;
    std::uint32_t next_rank_ = 0;
};

struct CanonicalLink {
    std::string text;  // indexed normal form, e.g. "h·d0·d2·u"
    std::string shape; // index-blind form, e.g. "h·d·d·u"
    bool operator==(const CanonicalLink& o) const { return text == o.text; }
    bool operator!=(const CanonicalLink& o) const { return !(*this == o); }
};

IndexedLink make_hopf(OrbitIndex i, OrbitIndex j);
IndexedLink make_unknot(OrbitIndex i);
IndexedLink split_sum(const IndexedLink& l1, const IndexedLink& l2);
// Deletes a separated component; for a pair member, the partner survives as a
// separated unknot. Index-1 removal is refused.
IndexedLink remove_component(const IndexedLink& l, OrbitId k);

IndexedLink op_i(const IndexedLink& l1, const IndexedLink& l2);
IndexedLink op_ii(const IndexedLink& l1, const IndexedLink& l2, OrbitId k2);
IndexedLink op_iii(const IndexedLink& l1, const IndexedLink& l2, OrbitId k1, OrbitId k2);

CanonicalLink canonicalize(const IndexedLink& l);
bool links_equal(const IndexedLink& l1, const IndexedLink& l2);

// Parses the textual notation: `h`, `h[i,j]`, `d0`, `d2`, `u` joined by
// `·` or `*`. Round-trips with canonicalize().text.
IndexedLink parse_link(std::string_view text);

} // namespace fathom::links
