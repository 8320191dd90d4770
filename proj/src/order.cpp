#include "fathom/order.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>

#include "json.hpp"

namespace fathom::order {

using flows::BasicHandleKind;
using flows::BasicOp;
using flows::ConstructionStep;
using flows::FatHandle;
using flows::HandleClass;
using flows::Region;

SaddlePoset::SaddlePoset(std::vector<OrbitId> elements,
                         const std::vector<std::pair<OrbitId, OrbitId>>& edges)
    : elems_(std::move(elements)) {
    std::size_t n = elems_.size();
    lt_.assign(n, std::vector<bool>(n, false));
    for (const auto& [a, b] : edges) lt_[pos(a)][pos(b)] = true;
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (lt_[i][k] && lt_[k][j]) lt_[i][j] = true;
    for (std::size_t i = 0; i < n; ++i)
        if (lt_[i][i])
            throw Error("heteroclinic cycle detected; the construction is inconsistent");
}

std::size_t SaddlePoset::pos(OrbitId k) const {
    for (std::size_t i = 0; i < elems_.size(); ++i)
        if (elems_[i] == k) return i;
    throw SelectorError("orbit is not an element of the poset");
}

bool SaddlePoset::less(OrbitId a, OrbitId b) const { return lt_[pos(a)][pos(b)]; }

std::vector<std::pair<OrbitId, OrbitId>> SaddlePoset::covers() const {
    std::vector<std::pair<OrbitId, OrbitId>> out;
    std::size_t n = elems_.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (!lt_[i][j]) continue;
            bool direct = true;
            for (std::size_t k = 0; k < n && direct; ++k)
                if (lt_[i][k] && lt_[k][j]) direct = false;
            if (direct) out.push_back({elems_[i], elems_[j]});
        }
    return out;
}

bool SaddlePoset::total() const {
    for (std::size_t i = 0; i < elems_.size(); ++i)
        for (std::size_t j = i + 1; j < elems_.size(); ++j)
            if (!lt_[i][j] && !lt_[j][i]) return false;
    return true;
}

SaddlePoset saddle_poset(const FlowModel& flow) {
    return SaddlePoset(flow.saddles(), flow.heteroclinic_edges());
}

bool is_total(const SaddlePoset& p) { return p.total(); }

bool is_f3(const FlowModel& flow) {
    const auto& log = flow.log();
    if (log.empty() || !log[0].is_basic || log[0].basic_op != BasicOp::III) return false;
    for (std::size_t i = 1; i < log.size(); ++i)
        if (log[i].is_basic || log[i].attached != BasicHandleKind::DU) return false;
    return true;
}

std::vector<OrbitId> f3_chain(const FlowModel& flow) {
    if (!is_f3(flow))
        throw Error("the flow is not built from operation III alone");
    // exactly one region, holding both endpoint orbits
    for (const auto& r : flow.regions()) {
        if (r.rep_resident && r.att_resident) {
            std::vector<OrbitId> chain;
            chain.push_back(*r.rep_resident);
            chain.insert(chain.end(), r.saddles.begin(), r.saddles.end());
            chain.push_back(*r.att_resident);
            return chain;
        }
    }
    throw Error("internal: operation-III flow without its endpoint region");
}

SaddlePoset f3_poset(const FlowModel& flow) {
    std::vector<OrbitId> chain = f3_chain(flow);
    std::vector<std::pair<OrbitId, OrbitId>> edges;
    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        edges.push_back({chain[i], chain[i + 1]});
    return SaddlePoset(chain, edges);
}

std::vector<std::pair<OrbitId, std::string>> sigma_labels(const SaddlePoset& p,
                                                          const FlowModel& flow) {
    (void)flow;
    const auto& el = p.elements();
    std::size_t n = el.size();
    // comparability components
    std::vector<std::size_t> comp(n);
    std::iota(comp.begin(), comp.end(), std::size_t{0});
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        while (comp[x] != x) x = comp[x] = comp[comp[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (p.comparable(el[i], el[j])) comp[find(i)] = find(j);
    std::map<std::size_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[find(i)].push_back(i);
    std::vector<std::vector<std::size_t>> ordered;
    for (auto& [root, members] : groups) {
        std::sort(members.begin(), members.end(), [&](std::size_t a, std::size_t b) {
            std::size_t da = 0, db = 0;
            for (std::size_t k = 0; k < n; ++k) {
                if (p.less(el[k], el[a])) ++da;
                if (p.less(el[k], el[b])) ++db;
            }
            if (da != db) return da < db;
            return el[a] < el[b];
        });
        ordered.push_back(members);
    }
    std::sort(ordered.begin(), ordered.end(),
              [&](const auto& a, const auto& b) { return el[a[0]] < el[b[0]]; });
    std::vector<std::pair<OrbitId, std::string>> out;
    std::size_t next = 1;
    for (const auto& g : ordered)
        for (std::size_t i : g) out.push_back({el[i], "s" + std::to_string(next++)});
    return out;
}

// ---- reordered rebuilds -------------------------------------------------

namespace {

struct IdMap {
    std::map<OrbitId, OrbitId> m;
    OrbitId at(OrbitId k) const {
        auto it = m.find(k);
        if (it == m.end()) throw Error("reordering refers to an orbit that does not exist yet");
        return it->second;
    }
};

FlowModel replay_step(const FlowModel& cur, const ConstructionStep& s, IdMap& map) {
    OrbitId target = map.at(s.replaced);
    if (!cur.alive(target)) throw Error("reordering target was already consumed");
    FlowModel next = flows::replace_orbit(cur, target, s.attached, s.separated_index);
    const ConstructionStep& ns = next.log().back();
    if (ns.created.size() != s.created.size())
        throw Error("internal: replay created a different handle");
    for (std::size_t i = 0; i < s.created.size(); ++i) map.m[s.created[i]] = ns.created[i];
    map.m[s.new_saddle] = ns.new_saddle;
    return next;
}

// Role-wise orbit correspondence between a basic flow (minus one orbit) and a
// freshly built basic handle of the matching kind.
struct HandleRoles {
    std::vector<std::pair<OrbitId, OrbitId>> pairs_members; // (rep, att) per intact pair
    std::optional<OrbitId> core;
    std::optional<OrbitId> sep;
    OrbitId saddle = 0;
};

HandleRoles roles_of(const FatHandle& h) {
    HandleRoles out;
    const FlowModel& f = h.content();
    out.core = h.core();
    for (const auto& r : f.regions()) {
        if (r.hopf_linked) {
            out.pairs_members.push_back({*r.rep_resident, *r.att_resident});
        } else {
            if (r.rep_resident && (!out.core || *out.core != *r.rep_resident))
                out.sep = *r.rep_resident;
            if (r.att_resident && (!out.core || *out.core != *r.att_resident))
                out.sep = *r.att_resident;
        }
    }
    if (h.handle_class() == HandleClass::ClassIII) {
        out.sep = h.resident();
        out.core.reset();
    }
    out.saddle = f.saddles().front();
    return out;
}

BasicHandleKind kind_of_handle(const FatHandle& h) {
    bool has_pair = false;
    std::size_t seps = 0;
    for (const auto& r : h.content().regions()) {
        if (r.hopf_linked) has_pair = true;
        else seps += r.resident_count();
    }
    if (has_pair && seps > 0) return BasicHandleKind::HDU;
    if (has_pair) return BasicHandleKind::HU;
    return seps >= 2 ? BasicHandleKind::DDU : BasicHandleKind::DU;
}

std::optional<OrbitIndex> variant_of_handle(const FatHandle& h, BasicHandleKind kind) {
    if (kind != BasicHandleKind::DDU) return std::nullopt;
    HandleRoles r = roles_of(h);
    if (!r.sep) throw Error("internal: ddu handle without a separated orbit");
    return h.content().index_of(*r.sep);
}

void map_roles(IdMap& map, const HandleRoles& from, const HandleRoles& to) {
    if (from.pairs_members.size() != to.pairs_members.size() ||
        from.core.has_value() != to.core.has_value() ||
        from.sep.has_value() != to.sep.has_value())
        throw Error("internal: handle role mismatch in reordering");
    for (std::size_t i = 0; i < from.pairs_members.size(); ++i) {
        map.m[from.pairs_members[i].first] = to.pairs_members[i].first;
        map.m[from.pairs_members[i].second] = to.pairs_members[i].second;
    }
    if (from.core) map.m[*from.core] = *to.core;
    if (from.sep) map.m[*from.sep] = *to.sep;
    map.m[from.saddle] = to.saddle;
}

FlowModel rebuild_defer(const FlowModel& flow, std::size_t i, std::size_t j) {
    const auto& log = flow.log();
    FlowModel cur = flows::basic_flow(log[0].basic_op, log[0].separated_index);
    IdMap map;
    for (OrbitId k = 0; k < cur.orbit_slots(); ++k) map.m[k] = k;
    std::vector<std::size_t> sequence;
    for (std::size_t t = 2; t <= log.size(); ++t) {
        if (t == i) continue;
        sequence.push_back(t);
        if (t == j) sequence.push_back(i);
    }
    for (std::size_t t : sequence) cur = replay_step(cur, log[t - 1], map);
    return cur;
}

std::vector<OrbitId> handle_nonsaddles(const FatHandle& h) {
    std::vector<OrbitId> out;
    const FlowModel& f = h.content();
    for (OrbitId k = 0; k < f.orbit_slots(); ++k)
        if (f.alive(k) && f.index_of(k) != OrbitIndex::Saddle) out.push_back(k);
    return out;
}

FlowModel rebuild_exchange_seed(const FlowModel& flow, std::size_t j) {
    const auto& log = flow.log();
    const ConstructionStep& sj = log[j - 1];
    FlowModel old_seed = flows::basic_flow(log[0].basic_op, log[0].separated_index);
    if (sj.replaced >= old_seed.orbit_slots())
        throw Error("the step does not attach to the founding flow");

    // the attachment of step j becomes the founding flow
    Polarity bpol = flow.index_of(sj.replaced) == OrbitIndex::Attractive
                        ? Polarity::Attractive
                        : Polarity::Repulsive;
    flows::BasicHandleSpec spec =
        flows::basic_handle_spec(sj.attached, bpol, sj.separated_index);
    FlowModel cur = flows::basic_flow(spec.seed_op, spec.seed_separated);

    IdMap map;
    {
        // step j's handle orbits correspond positionally to the new seed's
        FatHandle fresh = flows::basic_handle(sj.attached, bpol, sj.separated_index);
        std::vector<OrbitId> fresh_ids = handle_nonsaddles(fresh);
        if (fresh_ids.size() != sj.created.size())
            throw Error("internal: handle size mismatch in seed exchange");
        for (std::size_t idx = 0; idx < fresh_ids.size(); ++idx)
            map.m[sj.created[idx]] = fresh_ids[idx];
        map.m[sj.new_saddle] = fresh.content().saddles().front();
    }

    FatHandle old_handle = flows::remove_orbit(old_seed, sj.replaced);
    BasicHandleKind seam_kind = kind_of_handle(old_handle);
    std::optional<OrbitIndex> seam_variant = variant_of_handle(old_handle, seam_kind);

    for (std::size_t t = 2; t <= log.size(); ++t) {
        if (t != j) {
            cur = replay_step(cur, log[t - 1], map);
            continue;
        }
        // the old founding flow attaches as a handle at the new seed's cap
        FlowModel next = flows::replace_orbit(cur, spec.cap, seam_kind, seam_variant);
        const ConstructionStep& ns = next.log().back();
        Polarity seam_pol = opposite(bpol);
        FatHandle fresh2 = flows::basic_handle(seam_kind, seam_pol, seam_variant);
        std::vector<OrbitId> fresh2_ids = handle_nonsaddles(fresh2);
        if (fresh2_ids.size() != ns.created.size())
            throw Error("internal: seam handle size mismatch");
        // translate the fresh handle's role ids into the combined flow
        HandleRoles to = roles_of(fresh2);
        auto translate = [&](OrbitId id) {
            for (std::size_t p = 0; p < fresh2_ids.size(); ++p)
                if (fresh2_ids[p] == id) return ns.created[p];
            throw Error("internal: seam role translation failed");
        };
        HandleRoles to_next;
        for (const auto& pm : to.pairs_members)
            to_next.pairs_members.push_back({translate(pm.first), translate(pm.second)});
        if (to.core) to_next.core = translate(*to.core);
        if (to.sep) to_next.sep = translate(*to.sep);
        to_next.saddle = ns.new_saddle;
        map_roles(map, roles_of(old_handle), to_next);
        cur = next;
    }
    return cur;
}

} // namespace

FlowModel rebuild_reordered(const FlowModel& flow, std::size_t i, std::size_t j) {
    const auto& log = flow.log();
    if (i < 1 || j <= i || j > log.size()) throw Error("invalid step pair");
    if (i >= 2) return rebuild_defer(flow, i, j);
    return rebuild_exchange_seed(flow, j);
}

std::vector<std::pair<std::size_t, std::size_t>> commuting_steps(const FlowModel& flow) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    SaddlePoset p = saddle_poset(flow);
    const auto& log = flow.log();
    std::string canon = flow.canonical_form();
    for (std::size_t i = 1; i <= log.size(); ++i) {
        for (std::size_t j = i + 1; j <= log.size(); ++j) {
            if (p.comparable(log[i - 1].new_saddle, log[j - 1].new_saddle)) continue;
            try {
                FlowModel rb = rebuild_reordered(flow, i, j);
                if (rb.canonical_form() == canon) out.push_back({i, j});
            } catch (const Error&) {
            }
        }
    }
    return out;
}

std::string poset_json(const SaddlePoset& p, const FlowModel& flow) {
    nlohmann::json j;
    j["elements"] = nlohmann::json::array();
    for (OrbitId k : p.elements()) j["elements"].push_back(flow.display_name(k));
    j["covers"] = nlohmann::json::array();
    for (const auto& [a, b] : p.covers())
        j["covers"].push_back({flow.display_name(a), flow.display_name(b)});
    j["total"] = p.total();
    return j.dump(2);
}

} // namespace fathom::order
