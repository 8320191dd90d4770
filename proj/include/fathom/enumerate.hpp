#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "fathom/flow.hpp"

namespace fathom::census {

using flows::FatHandle;
using flows::FlowModel;
using flows::HandleClass;

struct Options {
    bool dualize = false;         // quotient by the global 0 <-> 2 index reversal
    int bound = 0;                // 0: use the configured default
    bool with_class_table = true; // deduplicate derivable fat handles per class
};

// Default enumeration bound: FATHOM_ENUM_BOUND when set, otherwise 6.
int default_bound();

struct CensusFlow {
    FlowModel flow;
    std::string key; // canonical form (dual-minimized when dualize is on)
};

struct CollisionGroup {
    std::string link_text;
    std::vector<std::size_t> flow_indices;
};

struct FlowCensus {
    int n = 0;
    bool dualize = false;
    std::vector<CensusFlow> flows; // sorted by key
    std::map<std::string, std::vector<std::size_t>> by_link;
    std::array<std::size_t, 3> class_table{}; // deduplicated fat handles per class

    std::vector<CollisionGroup> collisions() const;
};

// All flows reachable by a basic flow plus admissible replacements, with
// exactly n saddle orbits, deduplicated by canonical form.
FlowCensus enumerate_flows(int n, Options opts = {});

struct CensusHandle {
    FatHandle handle;
    std::string key;
};

// Every fat handle obtained by one legal removal from a census flow.
std::vector<CensusHandle> enumerate_fat_handles(int n, Polarity p, Options opts = {});

std::vector<CollisionGroup> link_collisions(int n, Options opts = {});

} // namespace fathom::census
