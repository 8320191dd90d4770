#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fathom/errors.hpp"
#include "fathom/link.hpp"
#include "fathom/types.hpp"

namespace fathom::flows {

using fathom::OrbitId;
using fathom::OrbitIndex;
using fathom::Polarity;

enum class BasicOp : std::uint8_t { I, II, III };

// The four basic fat round handles, named by their orbit contents.
enum class BasicHandleKind : std::uint8_t { HDU, DDU, HU, DU };

enum class HandleClass : std::uint8_t { ClassI, ClassII, ClassIII };

constexpr bool is_solid_torus(HandleClass c) { return c != HandleClass::ClassI; }

// HDU and DDU keep an orbit in the core (thick tori); HU and DU do not.
constexpr HandleClass class_of(BasicHandleKind k) {
    switch (k) {
        case BasicHandleKind::HDU:
        case BasicHandleKind::DDU: return HandleClass::ClassI;
        case BasicHandleKind::HU: return HandleClass::ClassII;
        default: return HandleClass::ClassIII;
    }
}

const char* to_string(BasicHandleKind k);
const char* to_string(HandleClass c);
const char* to_string(BasicOp op);

using RegionId = std::uint32_t;

// A canonical region of the flow, oriented from its repulsive end to its
// attractive end. The resident at the repulsive end always has index 0, the
// one at the attractive end index 2; when hopf_linked is set the two
// residents form a Hopf pair. Saddles are listed in order along the region.
struct Region {
    RegionId id = 0;
    std::optional<OrbitId> rep_resident;
    std::optional<OrbitId> att_resident;
    bool hopf_linked = false;
    std::uint32_t pair_rank = 0;
    std::vector<OrbitId> saddles;

    std::size_t resident_count() const {
        return (rep_resident ? 1u : 0u) + (att_resident ? 1u : 0u);
    }
    bool holds(OrbitId k) const {
        return (rep_resident && *rep_resident == k) || (att_resident && *att_resident == k);
    }
};

struct ConstructionStep {
    bool is_basic = false;
    BasicOp basic_op = BasicOp::I;                 // step 1 only
    std::optional<OrbitIndex> separated_index;     // basic II variant / DDU variant
    OrbitId new_saddle = 0;

    // attachment steps
    OrbitId replaced = 0;
    BasicHandleKind attached = BasicHandleKind::HDU;
    HandleClass attached_class = HandleClass::ClassI;
    HandleClass derived_class = HandleClass::ClassI;
    std::optional<std::pair<OrbitId, OrbitId>> heteroclinic;
    RegionId vacated_region = 0;
    std::vector<OrbitId> created;                  // fresh non-saddle orbits, creation order
};

// Component view of a flow's non-saddle orbits, used by textual selectors.
struct Component {
    bool is_pair = false;
    std::uint32_t rank = 0;
    OrbitId rep_member = 0; // pair member of index 0 (pairs only)
    OrbitId att_member = 0; // pair member of index 2 (pairs only)
    OrbitId sep_id = 0;     // separated orbit (non-pairs only)
    OrbitIndex sep_index = OrbitIndex::Saddle;
};

struct ComponentList {
    std::vector<Component> pairs; // by formation rank
    std::vector<Component> d0;    // by separation rank
    std::vector<Component> d2;
};

class FatHandle;

class FlowModel {
public:
    std::size_t saddle_count() const;
    std::size_t orbit_slots() const { return orbit_index_.size(); }
    bool alive(OrbitId k) const { return k < alive_.size() && alive_[k]; }
    OrbitIndex index_of(OrbitId k) const;
    std::uint32_t rank_of(OrbitId k) const { return rank_[k]; }

    const std::vector<Region>& regions() const { return regions_; }
    const std::vector<ConstructionStep>& log() const { return steps_; }
    const std::vector<std::pair<OrbitId, OrbitId>>& heteroclinic_edges() const { return edges_; }

    // Non-saddle orbits in creation order.
    std::vector<OrbitId> removable_orbits() const;
    std::vector<OrbitId> saddles() const;

    std::size_t region_slot_of(OrbitId non_saddle) const;
    std::vector<std::size_t> region_slots_of_saddle(OrbitId s) const;
    RegionId find_region_root(RegionId r) const;

    bool has_index(OrbitIndex i) const;

    links::IndexedLink link() const;
    ComponentList components() const;

    std::string canonical_form() const;
    // canonical form with one region distinguished (used by fat handles)
    std::string canonical_form_marked(RegionId marked) const;
    // region order realizing the canonical form (drives deterministic layout)
    std::vector<RegionId> canonical_region_order() const;
    FlowModel dual() const;

    std::string display_name(OrbitId k) const;
    std::string json_string() const;

    bool operator==(const FlowModel& o) const { return canonical_form() == o.canonical_form(); }
    bool operator!=(const FlowModel& o) const { return !(*this == o); }

private:
    friend FlowModel basic_flow(BasicOp, std::optional<OrbitIndex>);
    friend FatHandle remove_orbit(const FlowModel&, OrbitId);
    friend FlowModel identify(const FatHandle&, const FatHandle&);
    friend FlowModel replace_orbit(const FlowModel&, OrbitId, BasicHandleKind,
                                   std::optional<OrbitIndex>, std::optional<bool>);
    friend class FatHandle;
    friend FlowModel identify_impl(const FatHandle&, const FatHandle&, bool, bool);

    OrbitId new_orbit(OrbitIndex i);
    Region& region_by_id(RegionId r);
    const Region& region_by_id(RegionId r) const;

    std::vector<OrbitIndex> orbit_index_;
    std::vector<bool> alive_;
    std::vector<std::uint32_t> rank_;
    std::vector<Region> regions_;
    std::vector<std::pair<RegionId, RegionId>> merged_; // vacated id -> fused id
    std::vector<ConstructionStep> steps_;
    std::vector<std::pair<OrbitId, OrbitId>> edges_;    // repulsive-side saddle -> attractive-side
    RegionId next_region_ = 0;
    std::uint32_t next_rank_ = 0;
};

// A flow with one attractive or repulsive orbit removed. Removing an
// attractive orbit yields a repulsive handle and vice versa.
class FatHandle {
public:
    Polarity polarity() const { return polarity_; }
    HandleClass handle_class() const { return cls_; }
    OrbitId removed_orbit() const { return removed_; }
    RegionId vacated_region() const { return vacated_; }
    const FlowModel& content() const { return content_; }

    // Flagged when the removal left the handle without any index-0 or any
    // index-2 orbit; legitimate for intermediate handles.
    bool lacks_side() const;

    std::optional<OrbitId> core() const;            // class [I]: orbit left in the core
    std::optional<OrbitId> resident() const;        // class [III]: orbit in the identification region
    std::optional<OrbitId> frontier_saddle() const; // classes [II] and [III]

    std::string shape() const; // orbit letters, e.g. "hduu"
    std::string canonical_form() const;

private:
    friend FatHandle remove_orbit(const FlowModel&, OrbitId);
    friend FlowModel identify(const FatHandle&, const FatHandle&);
    friend FlowModel identify_impl(const FatHandle&, const FatHandle&, bool, bool);

    FlowModel content_;
    OrbitId removed_ = 0;
    RegionId vacated_ = 0;
    Polarity polarity_ = Polarity::Repulsive;
    HandleClass cls_ = HandleClass::ClassI;
};

// Basic flows: one operation applied to Hopf links. Operation II needs the
// index of the surviving separated orbit.
FlowModel basic_flow(BasicOp op, std::optional<OrbitIndex> separated = {});

FatHandle remove_orbit(const FlowModel& flow, OrbitId k);

HandleClass classify(const FatHandle& fh);

// Basic fat handles; DDU takes the index of its separated orbit.
FatHandle basic_handle(BasicHandleKind kind, Polarity polarity,
                       std::optional<OrbitIndex> separated = {});

struct BasicHandleSpec {
    BasicOp seed_op;
    std::optional<OrbitIndex> seed_separated;
    OrbitId cap; // orbit of the seed flow whose removal yields the handle
};
BasicHandleSpec basic_handle_spec(BasicHandleKind kind, Polarity polarity,
                                  std::optional<OrbitIndex> separated = {});

// False exactly when one side is class [I] and the other class [II].
bool admissible(const FatHandle& attractive, const FatHandle& repulsive);

FlowModel identify(const FatHandle& attractive, const FatHandle& repulsive);

// remove_orbit + identification with a fresh basic handle of the matching
// polarity; appends one construction step.
FlowModel replace_orbit(const FlowModel& flow, OrbitId k, BasicHandleKind kind,
                        std::optional<OrbitIndex> separated = {},
                        std::optional<bool> attach_ranks_first = {});

links::IndexedLink link_of(const FlowModel& flow);

} // namespace fathom::flows
