#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fathom/flow.hpp"

namespace fathom::order {

using flows::FlowModel;

// Strict partial order on saddle orbits (optionally extended by the two
// endpoint orbits of an operation-III-only flow).
class SaddlePoset {
public:
    SaddlePoset() = default;
    // Transitive closure of the given edges; throws on a cycle.
    SaddlePoset(std::vector<OrbitId> elements,
                const std::vector<std::pair<OrbitId, OrbitId>>& edges);

    const std::vector<OrbitId>& elements() const { return elems_; }
    bool less(OrbitId a, OrbitId b) const;
    bool comparable(OrbitId a, OrbitId b) const { return less(a, b) || less(b, a); }
    std::vector<std::pair<OrbitId, OrbitId>> covers() const;
    bool total() const;

private:
    std::size_t pos(OrbitId k) const;
    std::vector<OrbitId> elems_;
    std::vector<std::vector<bool>> lt_;
};

SaddlePoset saddle_poset(const FlowModel& flow);
bool is_total(const SaddlePoset& p);

// True when the flow was built from operation III alone.
bool is_f3(const FlowModel& flow);

// The chain d_r < u_1 < ... < u_n < d_a as orbit ids, length n + 2.
std::vector<OrbitId> f3_chain(const FlowModel& flow);

// Saddle poset extended by the endpoint orbits (operation-III-only flows).
SaddlePoset f3_poset(const FlowModel& flow);

// Positional labels: chain components ordered by their first-created saddle,
// elements within a component by depth. sigma_label(i) = "s<i>".
std::vector<std::pair<OrbitId, std::string>> sigma_labels(const SaddlePoset& p,
                                                          const FlowModel& flow);

// Unordered pairs of construction steps (1-based log indices) whose
// attachments can be reordered without changing the flow: the saddles are
// incomparable and the reordered rebuild yields the same canonical form.
std::vector<std::pair<std::size_t, std::size_t>> commuting_steps(const FlowModel& flow);

// Rebuild with step i deferred until after step j (1-based, i < j). For
// i == 1 the founding basic flow trades places with step j's attachment.
// Throws when the reordering is not constructible.
FlowModel rebuild_reordered(const FlowModel& flow, std::size_t i, std::size_t j);

std::string poset_json(const SaddlePoset& p, const FlowModel& flow);

} // namespace fathom::order
