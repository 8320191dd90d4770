#include "fathom/enumerate.hpp"

#include <algorithm>
#include <cstdlib>

#include "fathom/link.hpp"

namespace fathom::census {

using flows::BasicHandleKind;
using flows::BasicOp;

int default_bound() {
    if (const char* env = std::getenv("FATHOM_ENUM_BOUND")) {
        int v = std::atoi(env);
        if (v >= 1) return v;
    }
    return 6;
}

namespace {

std::string census_key(const FlowModel& f, bool dualize) {
    std::string c = f.canonical_form();
    if (!dualize) return c;
    std::string d = f.dual().canonical_form();
    return std::min(c, d);
}

struct AttachChoice {
    BasicHandleKind kind;
    std::optional<OrbitIndex> variant;
};

const std::vector<AttachChoice>& attach_choices() {
    static const std::vector<AttachChoice> kChoices = {
        {BasicHandleKind::HDU, {}},
        {BasicHandleKind::DDU, OrbitIndex::Repulsive},
        {BasicHandleKind::DDU, OrbitIndex::Attractive},
        {BasicHandleKind::HU, {}},
        {BasicHandleKind::DU, {}},
    };
    return kChoices;
}

std::vector<FlowModel> basic_flows() {
    return {flows::basic_flow(BasicOp::I),
            flows::basic_flow(BasicOp::II, OrbitIndex::Repulsive),
            flows::basic_flow(BasicOp::II, OrbitIndex::Attractive),
            flows::basic_flow(BasicOp::III)};
}

} // namespace

std::vector<CollisionGroup> FlowCensus::collisions() const {
    std::vector<CollisionGroup> out;
    for (const auto& [link, idxs] : by_link)
        if (idxs.size() >= 2) out.push_back({link, idxs});
    return out;
}

FlowCensus enumerate_flows(int n, Options opts) {
    int bound = opts.bound > 0 ? opts.bound : default_bound();
    if (n < 1) throw BoundError("saddle count must be at least 1");
    if (n > bound)
        throw BoundError("enumeration bound exceeded (n=" + std::to_string(n) +
                         ", bound=" + std::to_string(bound) + ")");

    std::map<std::string, FlowModel> level;
    for (const FlowModel& f : basic_flows())
        level.emplace(census_key(f, opts.dualize), f);

    for (int depth = 2; depth <= n; ++depth) {
        std::map<std::string, FlowModel> next;
        for (const auto& [key, f] : level) {
            for (OrbitId k : f.removable_orbits()) {
                for (const AttachChoice& c : attach_choices()) {
                    try {
                        FlowModel g = flows::replace_orbit(f, k, c.kind, c.variant);
                        next.emplace(census_key(g, opts.dualize), std::move(g));
                    } catch (const BitorusError&) {
                    }
                }
            }
        }
        level = std::move(next);
    }

    FlowCensus census;
    census.n = n;
    census.dualize = opts.dualize;
    for (auto& [key, f] : level) {
        std::size_t idx = census.flows.size();
        census.by_link[links::canonicalize(f.link()).text].push_back(idx);
        census.flows.push_back({std::move(f), key});
    }
    if (opts.with_class_table) {
        for (Polarity p : {Polarity::Repulsive, Polarity::Attractive}) {
            std::map<std::string, HandleClass> handles;
            for (const auto& cf : census.flows)
                for (OrbitId k : cf.flow.removable_orbits()) {
                    flows::FatHandle h = flows::remove_orbit(cf.flow, k);
                    if (h.polarity() != p) continue;
                    handles.emplace(h.canonical_form(), h.handle_class());
                }
            for (const auto& [key, cls] : handles)
                ++census.class_table[static_cast<std::size_t>(cls)];
        }
    }
    return census;
}

std::vector<CensusHandle> enumerate_fat_handles(int n, Polarity p, Options opts) {
    FlowCensus census = enumerate_flows(n, opts);
    std::map<std::string, FatHandle> dedup;
    for (const auto& cf : census.flows)
        for (OrbitId k : cf.flow.removable_orbits()) {
            FatHandle h = flows::remove_orbit(cf.flow, k);
            if (h.polarity() != p) continue;
            dedup.emplace(h.canonical_form(), std::move(h));
        }
    std::vector<CensusHandle> out;
    for (auto& [key, h] : dedup) out.push_back({std::move(h), key});
    return out;
}

std::vector<CollisionGroup> link_collisions(int n, Options opts) {
    return enumerate_flows(n, opts).collisions();
}

} // namespace fathom::census
