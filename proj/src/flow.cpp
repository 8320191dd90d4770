#include "fathom/flow.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace fathom::flows {

const char* to_string(BasicHandleKind k) {
    switch (k) {
        case BasicHandleKind::HDU: return "hdu";
        case BasicHandleKind::DDU: return "ddu";
        case BasicHandleKind::HU: return "hu";
        default: return "du";
    }
}

const char* to_string(HandleClass c) {
    switch (c) {
        case HandleClass::ClassI: return "[I]";
        case HandleClass::ClassII: return "[II]";
        default: return "[III]";
    }
}

const char* to_string(BasicOp op) {
    switch (op) {
        case BasicOp::I: return "I";
        case BasicOp::II: return "II";
        default: return "III";
    }
}

std::size_t FlowModel::saddle_count() const {
    std::size_t n = 0;
    for (std::size_t k = 0; k < orbit_index_.size(); ++k)
        if (alive_[k] && orbit_index_[k] == OrbitIndex::Saddle) ++n;
    return n;
}

OrbitIndex FlowModel::index_of(OrbitId k) const {
    if (k >= orbit_index_.size()) throw SelectorError("unknown orbit");
    return orbit_index_[k];
}

std::vector<OrbitId> FlowModel::removable_orbits() const {
    std::vector<OrbitId> out;
    for (OrbitId k = 0; k < orbit_index_.size(); ++k)
        if (alive_[k] && orbit_index_[k] != OrbitIndex::Saddle) out.push_back(k);
    return out;
}

std::vector<OrbitId> FlowModel::saddles() const {
    std::vector<OrbitId> out;
    for (OrbitId k = 0; k < orbit_index_.size(); ++k)
        if (alive_[k] && orbit_index_[k] == OrbitIndex::Saddle) out.push_back(k);
    return out;
}

std::size_t FlowModel::region_slot_of(OrbitId k) const {
    for (std::size_t i = 0; i < regions_.size(); ++i)
        if (regions_[i].holds(k)) return i;
    throw SelectorError("orbit not resident in any region");
}

std::vector<std::size_t> FlowModel::region_slots_of_saddle(OrbitId s) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < regions_.size(); ++i)
        for (OrbitId x : regions_[i].saddles)
            if (x == s) { out.push_back(i); break; }
    return out;
}

RegionId FlowModel::find_region_root(RegionId r) const {
    bool moved = true;
    while (moved) {
        moved = false;
        for (const auto& [from, to] : merged_)
            if (from == r) { r = to; moved = true; break; }
    }
    return r;
}

bool FlowModel::has_index(OrbitIndex i) const {
    for (OrbitId k = 0; k < orbit_index_.size(); ++k)
        if (alive_[k] && orbit_index_[k] == i) return true;
    return false;
}

OrbitId FlowModel::new_orbit(OrbitIndex i) {
    OrbitId id = static_cast<OrbitId>(orbit_index_.size());
    orbit_index_.push_back(i);
    alive_.push_back(true);
    rank_.push_back(next_rank_++);
    return id;
}

Region& FlowModel::region_by_id(RegionId r) {
    for (auto& reg : regions_)
        if (reg.id == r) return reg;
    throw Error("internal: missing region");
}

const Region& FlowModel::region_by_id(RegionId r) const {
    for (const auto& reg : regions_)
        if (reg.id == r) return reg;
    throw Error("internal: missing region");
}

links::IndexedLink FlowModel::link() const {
    links::IndexedLink out;
    // pairs in formation order, then separated orbits in separation order
    std::vector<const Region*> linked;
    for (const auto& r : regions_)
        if (r.hopf_linked) linked.push_back(&r);
    std::sort(linked.begin(), linked.end(),
              [](const Region* a, const Region* b) { return a->pair_rank < b->pair_rank; });
    for (const auto* r : linked) {
        (void)r;
        out.add_pair(OrbitIndex::Repulsive, OrbitIndex::Attractive);
    }
    std::vector<std::pair<std::uint32_t, OrbitIndex>> seps;
    for (const auto& r : regions_) {
        if (r.hopf_linked) continue;
        if (r.rep_resident) seps.push_back({rank_[*r.rep_resident], OrbitIndex::Repulsive});
        if (r.att_resident) seps.push_back({rank_[*r.att_resident], OrbitIndex::Attractive});
    }
    std::sort(seps.begin(), seps.end());
    for (const auto& [rk, idx] : seps) out.add_separated(idx);
    for (std::size_t i = 0; i < saddle_count(); ++i) out.add_separated(OrbitIndex::Saddle);
    return out;
}

links::IndexedLink link_of(const FlowModel& flow) { return flow.link(); }

ComponentList FlowModel::components() const {
    ComponentList out;
    for (const auto& r : regions_) {
        if (r.hopf_linked) {
            Component c;
            c.is_pair = true;
            c.rank = r.pair_rank;
            c.rep_member = *r.rep_resident;
            c.att_member = *r.att_resident;
            out.pairs.push_back(c);
        } else {
            if (r.rep_resident) {
                Component c;
                c.rank = rank_[*r.rep_resident];
                c.sep_id = *r.rep_resident;
                c.sep_index = OrbitIndex::Repulsive;
                out.d0.push_back(c);
            }
            if (r.att_resident) {
                Component c;
                c.rank = rank_[*r.att_resident];
                c.sep_id = *r.att_resident;
                c.sep_index = OrbitIndex::Attractive;
                out.d2.push_back(c);
            }
        }
    }
    auto by_rank = [](const Component& a, const Component& b) { return a.rank < b.rank; };
    std::sort(out.pairs.begin(), out.pairs.end(), by_rank);
    std::sort(out.d0.begin(), out.d0.end(), by_rank);
    std::sort(out.d2.begin(), out.d2.end(), by_rank);
    return out;
}

std::string FlowModel::display_name(OrbitId k) const {
    std::size_t nth = 0;
    bool saddle = orbit_index_[k] == OrbitIndex::Saddle;
    for (OrbitId i = 0; i <= k; ++i)
        if ((orbit_index_[i] == OrbitIndex::Saddle) == saddle) ++nth;
    return (saddle ? "u" : "k") + std::to_string(nth);
}

// ---- canonical form ---------------------------------------------------

namespace {

constexpr RegionId kNoMark = static_cast<RegionId>(-1);

std::string region_shape(const Region& r, RegionId marked) {
    std::string s;
    s += r.id == marked ? '!' : '.';
    s += r.hopf_linked ? 'L' : '-';
    s += r.rep_resident ? 'r' : '-';
    s += r.att_resident ? 'a' : '-';
    s += '#';
    s += std::to_string(r.saddles.size());
    return s;
}

struct Labeler {
    std::map<OrbitId, int> map;
    int next = 0;
    int get(OrbitId k) {
        auto it = map.find(k);
        if (it != map.end()) return it->second;
        map.emplace(k, next);
        return next++;
    }
};

std::string serialize_ordered(const FlowModel& f, const std::vector<const Region*>& order,
                              RegionId marked) {
    Labeler lab;
    std::string out;
    for (const Region* r : order) {
        out += '(';
        if (r->id == marked) out += '!';
        if (r->hopf_linked) out += 'L';
        if (r->rep_resident) { out += 'r'; out += std::to_string(lab.get(*r->rep_resident)); }
        if (r->att_resident) { out += 'a'; out += std::to_string(lab.get(*r->att_resident)); }
        out += '|';
        for (std::size_t i = 0; i < r->saddles.size(); ++i) {
            if (i) out += ',';
            out += std::to_string(lab.get(r->saddles[i]));
        }
        out += ')';
    }
    std::vector<std::pair<int, int>> edges;
    for (const auto& [a, b] : f.heteroclinic_edges())
        edges.push_back({lab.get(a), lab.get(b)});
    std::sort(edges.begin(), edges.end());
    out += "|E";
    for (const auto& [a, b] : edges)
        out += std::to_string(a) + ">" + std::to_string(b) + ";";
    return out;
}

void best_order_rec(const FlowModel& f, std::vector<std::vector<const Region*>>& groups,
                    std::size_t gi, std::vector<const Region*>& acc, std::string& best,
                    std::vector<const Region*>& best_order, RegionId marked) {
    if (gi == groups.size()) {
        std::string s = serialize_ordered(f, acc, marked);
        if (best.empty() || s < best) {
            best = std::move(s);
            best_order = acc;
        }
        return;
    }
    auto& g = groups[gi];
    std::vector<const Region*> perm = g;
    std::sort(perm.begin(), perm.end());
    do {
        acc.insert(acc.end(), perm.begin(), perm.end());
        best_order_rec(f, groups, gi + 1, acc, best, best_order, marked);
        acc.resize(acc.size() - perm.size());
    } while (std::next_permutation(perm.begin(), perm.end()));
}

std::pair<std::string, std::vector<const Region*>> canonical_marked(const FlowModel& f,
                                                                    RegionId marked) {
    std::vector<const Region*> regs;
    for (const auto& r : f.regions()) regs.push_back(&r);
    std::stable_sort(regs.begin(), regs.end(), [&](const Region* a, const Region* b) {
        return region_shape(*a, marked) < region_shape(*b, marked);
    });
    std::vector<std::vector<const Region*>> groups;
    for (const Region* r : regs) {
        if (groups.empty() ||
            region_shape(*groups.back().back(), marked) != region_shape(*r, marked))
            groups.push_back({});
        groups.back().push_back(r);
    }
    std::string best;
    std::vector<const Region*> best_order, acc;
    best_order_rec(f, groups, 0, acc, best, best_order, marked);
    return {best, best_order};
}

} // namespace

std::string FlowModel::canonical_form() const { return canonical_marked(*this, kNoMark).first; }

std::string FlowModel::canonical_form_marked(RegionId marked) const {
    return canonical_marked(*this, marked).first;
}

std::vector<RegionId> FlowModel::canonical_region_order() const {
    std::vector<RegionId> out;
    for (const Region* r : canonical_marked(*this, kNoMark).second) out.push_back(r->id);
    return out;
}

FlowModel FlowModel::dual() const {
    FlowModel d = *this;
    for (auto& i : d.orbit_index_) i = opposite(i);
    for (auto& r : d.regions_) {
        std::swap(r.rep_resident, r.att_resident);
        std::reverse(r.saddles.begin(), r.saddles.end());
    }
    for (auto& [a, b] : d.edges_) std::swap(a, b);
    for (auto& s : d.steps_) {
        if (s.separated_index) s.separated_index = opposite(*s.separated_index);
        if (s.heteroclinic) std::swap(s.heteroclinic->first, s.heteroclinic->second);
    }
    return d;
}

std::string FlowModel::json_string() const {
    nlohmann::json j;
    j["orbits"] = nlohmann::json::array();
    for (OrbitId k = 0; k < orbit_index_.size(); ++k) {
        if (!alive_[k]) continue;
        j["orbits"].push_back({{"id", display_name(k)},
                               {"index", static_cast<int>(orbit_index_[k])}});
    }
    j["hopf_pairs"] = nlohmann::json::array();
    j["regions"] = nlohmann::json::array();
    for (const auto& r : regions_) {
        nlohmann::json jr;
        jr["id"] = "r" + std::to_string(r.id);
        jr["rep_resident"] = r.rep_resident ? nlohmann::json(display_name(*r.rep_resident))
                                            : nlohmann::json(nullptr);
        jr["att_resident"] = r.att_resident ? nlohmann::json(display_name(*r.att_resident))
                                            : nlohmann::json(nullptr);
        jr["hopf_linked"] = r.hopf_linked;
        jr["saddles"] = nlohmann::json::array();
        for (OrbitId s : r.saddles) jr["saddles"].push_back(display_name(s));
        j["regions"].push_back(jr);
        if (r.hopf_linked)
            j["hopf_pairs"].push_back({display_name(*r.rep_resident), display_name(*r.att_resident)});
    }
    j["construction"] = nlohmann::json::array();
    for (std::size_t i = 0; i < steps_.size(); ++i) {
        const auto& s = steps_[i];
        nlohmann::json js;
        js["step"] = i + 1;
        if (s.is_basic) {
            js["basic"] = to_string(s.basic_op);
            if (s.separated_index)
                js["separated_index"] = static_cast<int>(*s.separated_index);
        } else {
            js["replaced"] = display_name(s.replaced);
            js["attached"] = to_string(s.attached);
            if (s.separated_index)
                js["separated_index"] = static_cast<int>(*s.separated_index);
            js["attached_class"] = to_string(s.attached_class);
            js["derived_class"] = to_string(s.derived_class);
        }
        js["saddle"] = display_name(s.new_saddle);
        if (s.heteroclinic)
            js["heteroclinic"] = {display_name(s.heteroclinic->first),
                                  display_name(s.heteroclinic->second)};
        j["construction"].push_back(js);
    }
    j["heteroclinic_edges"] = nlohmann::json::array();
    for (const auto& [a, b] : edges_)
        j["heteroclinic_edges"].push_back({display_name(a), display_name(b)});
    j["link"] = links::canonicalize(link()).text;
    j["canonical"] = canonical_form();
    return j.dump(2);
}

// ---- construction ------------------------------------------------------

FlowModel basic_flow(BasicOp op, std::optional<OrbitIndex> separated) {
    FlowModel f;
    ConstructionStep step;
    step.is_basic = true;
    step.basic_op = op;
    switch (op) {
        case BasicOp::I: {
            OrbitId a0 = f.new_orbit(OrbitIndex::Repulsive);
            OrbitId a2 = f.new_orbit(OrbitIndex::Attractive);
            OrbitId b0 = f.new_orbit(OrbitIndex::Repulsive);
            OrbitId b2 = f.new_orbit(OrbitIndex::Attractive);
            OrbitId u = f.new_orbit(OrbitIndex::Saddle);
            f.regions_.push_back({f.next_region_++, a0, a2, true, 0, {u}});
            f.regions_.push_back({f.next_region_++, b0, b2, true, 1, {u}});
            step.new_saddle = u;
            break;
        }
        case BasicOp::II: {
            if (!separated || *separated == OrbitIndex::Saddle)
                throw SelectorError("operation II needs the index of its separated orbit (0 or 2)");
            OrbitId k0 = f.new_orbit(OrbitIndex::Repulsive);
            OrbitId k2 = f.new_orbit(OrbitIndex::Attractive);
            OrbitId d = f.new_orbit(*separated);
            OrbitId u = f.new_orbit(OrbitIndex::Saddle);
            f.regions_.push_back({f.next_region_++, k0, k2, true, 0, {u}});
            Region rd{f.next_region_++, {}, {}, false, 0, {u}};
            if (*separated == OrbitIndex::Repulsive) rd.rep_resident = d;
            else rd.att_resident = d;
            f.regions_.push_back(rd);
            step.separated_index = separated;
            step.new_saddle = u;
            break;
        }
        case BasicOp::III: {
            OrbitId d0 = f.new_orbit(OrbitIndex::Repulsive);
            OrbitId d2 = f.new_orbit(OrbitIndex::Attractive);
            OrbitId u = f.new_orbit(OrbitIndex::Saddle);
            // one region; both orbits sit where the identification was made
            f.regions_.push_back({f.next_region_++, d0, d2, false, 0, {u}});
            step.new_saddle = u;
            break;
        }
    }
    f.steps_.push_back(step);
    return f;
}

FatHandle remove_orbit(const FlowModel& flow, OrbitId k) {
    if (!flow.alive(k)) throw SelectorError("unknown or already removed orbit");
    OrbitIndex ki = flow.index_of(k);
    if (ki == OrbitIndex::Saddle)
        throw Error("saddle orbits cannot be removed from a flow");

    FatHandle h;
    h.content_ = flow;
    std::size_t slot = flow.region_slot_of(k);
    Region& r = h.content_.regions_[slot];
    bool was_linked = r.hopf_linked;
    OrbitId partner = 0;
    bool have_partner = false;
    if (r.rep_resident && *r.rep_resident == k) {
        r.rep_resident.reset();
        if (r.att_resident) { partner = *r.att_resident; have_partner = true; }
    } else {
        r.att_resident.reset();
        if (r.rep_resident) { partner = *r.rep_resident; have_partner = true; }
    }
    r.hopf_linked = false;
    h.content_.alive_[k] = false;
    if (was_linked && have_partner)
        h.content_.rank_[partner] = h.content_.next_rank_++;

    h.removed_ = k;
    h.vacated_ = r.id;
    h.polarity_ = (ki == OrbitIndex::Attractive) ? Polarity::Repulsive : Polarity::Attractive;
    h.cls_ = was_linked ? HandleClass::ClassI
           : have_partner ? HandleClass::ClassIII
                          : HandleClass::ClassII;
    return h;
}

HandleClass classify(const FatHandle& fh) { return fh.handle_class(); }

bool FatHandle::lacks_side() const {
    return !content_.has_index(OrbitIndex::Repulsive) || !content_.has_index(OrbitIndex::Attractive);
}

std::optional<OrbitId> FatHandle::core() const {
    if (cls_ != HandleClass::ClassI) return std::nullopt;
    const Region& r = content_.region_by_id(vacated_);
    return r.rep_resident ? r.rep_resident : r.att_resident;
}

std::optional<OrbitId> FatHandle::resident() const {
    if (cls_ != HandleClass::ClassIII) return std::nullopt;
    const Region& r = content_.region_by_id(vacated_);
    return r.rep_resident ? r.rep_resident : r.att_resident;
}

std::optional<OrbitId> FatHandle::frontier_saddle() const {
    if (cls_ == HandleClass::ClassI) return std::nullopt;
    const Region& r = content_.region_by_id(vacated_);
    if (r.saddles.empty()) return std::nullopt;
    return polarity_ == Polarity::Repulsive ? r.saddles.back() : r.saddles.front();
}

std::string FatHandle::shape() const {
    std::size_t h = 0, d = 0, u = content_.saddle_count();
    for (const auto& r : content_.regions()) {
        if (r.hopf_linked) ++h;
        else d += r.resident_count();
    }
    std::string s;
    s.append(h, 'h');
    s.append(d, 'd');
    s.append(u, 'u');
    return s;
}

std::string FatHandle::canonical_form() const {
    std::string tag = polarity_ == Polarity::Repulsive ? "R/" : "A/";
    tag += to_string(cls_);
    return tag + "|" + content_.canonical_form_marked(vacated_);
}

namespace {

BasicHandleKind shape_kind(const FatHandle& h) {
    bool has_pair = false;
    std::size_t seps = 0;
    for (const auto& r : h.content().regions()) {
        if (r.hopf_linked) has_pair = true;
        else seps += r.resident_count();
    }
    if (has_pair && seps > 0) return BasicHandleKind::HDU;
    if (has_pair) return BasicHandleKind::HU;
    if (seps >= 2) return BasicHandleKind::DDU;
    return BasicHandleKind::DU;
}

} // namespace

BasicHandleSpec basic_handle_spec(BasicHandleKind kind, Polarity polarity,
                                  std::optional<OrbitIndex> separated) {
    // cap = orbit removed from the seed flow to obtain the handle
    switch (kind) {
        case BasicHandleKind::HDU:
            return {BasicOp::I, {}, polarity == Polarity::Repulsive ? OrbitId{3} : OrbitId{2}};
        case BasicHandleKind::DDU: {
            if (!separated || *separated == OrbitIndex::Saddle)
                throw SelectorError("ddu needs the index of its separated orbit (0 or 2)");
            return {BasicOp::II, separated,
                    polarity == Polarity::Repulsive ? OrbitId{1} : OrbitId{0}};
        }
        case BasicHandleKind::HU: {
            // the separated orbit of the seed is the one removed
            OrbitIndex cap_index = polarity == Polarity::Repulsive ? OrbitIndex::Attractive
                                                                   : OrbitIndex::Repulsive;
            return {BasicOp::II, cap_index, OrbitId{2}};
        }
        default:
            return {BasicOp::III, {}, polarity == Polarity::Repulsive ? OrbitId{1} : OrbitId{0}};
    }
}

FatHandle basic_handle(BasicHandleKind kind, Polarity polarity,
                       std::optional<OrbitIndex> separated) {
    BasicHandleSpec spec = basic_handle_spec(kind, polarity, separated);
    return remove_orbit(basic_flow(spec.seed_op, spec.seed_separated), spec.cap);
}

bool admissible(const FatHandle& attractive, const FatHandle& repulsive) {
    if (attractive.polarity() != Polarity::Attractive ||
        repulsive.polarity() != Polarity::Repulsive)
        throw PolarityError("admissibility is defined for one attractive and one repulsive handle");
    HandleClass a = attractive.handle_class(), r = repulsive.handle_class();
    bool mix = (a == HandleClass::ClassI && r == HandleClass::ClassII) ||
               (a == HandleClass::ClassII && r == HandleClass::ClassI);
    return !mix;
}

// flow_is_a: which side carries the construction history forward (its orbit
// ids and log come first); the other side is treated as the attachment.
FlowModel identify_impl(const FatHandle& a, const FatHandle& r, bool flow_is_a,
                        bool attach_ranks_first) {
    if (a.polarity_ != Polarity::Attractive || r.polarity_ != Polarity::Repulsive)
        throw PolarityError("identification needs one attractive and one repulsive fat handle");
    if (!admissible(a, r)) throw BitorusError();

    const FatHandle& flow_side = flow_is_a ? a : r;
    const FatHandle& attach_side = flow_is_a ? r : a;

    FlowModel out = flow_side.content_;
    const FlowModel& add = attach_side.content_;

    OrbitId ooff = static_cast<OrbitId>(out.orbit_index_.size());
    RegionId roff = out.next_region_;

    for (OrbitId k = 0; k < add.orbit_index_.size(); ++k) {
        out.orbit_index_.push_back(add.orbit_index_[k]);
        out.alive_.push_back(add.alive_[k]);
        out.rank_.push_back(add.rank_[k]); // renumbered below
    }

    // Component ranks: each side keeps its internal order; attach_ranks_first
    // puts the attachment's components ahead of the flow's in selector order.
    bool flow_first = !attach_ranks_first;
    {
        std::vector<std::pair<std::uint32_t, OrbitId>> fo, ao;
        for (OrbitId k = 0; k < ooff; ++k)
            if (out.alive_[k]) fo.push_back({out.rank_[k], k});
        for (OrbitId k = 0; k < add.orbit_index_.size(); ++k)
            if (add.alive_[k]) ao.push_back({add.rank_[k], k + ooff});
        std::sort(fo.begin(), fo.end());
        std::sort(ao.begin(), ao.end());
        std::uint32_t next = 0;
        for (const auto& [rk, id] : flow_first ? fo : ao) out.rank_[id] = next++;
        for (const auto& [rk, id] : flow_first ? ao : fo) out.rank_[id] = next++;
        out.next_rank_ = next;
    }
    std::uint32_t flow_pairs = 0, add_pairs = 0;
    for (const auto& reg : out.regions_)
        if (reg.hopf_linked) ++flow_pairs;
    for (const auto& reg : add.regions_)
        if (reg.hopf_linked) ++add_pairs;
    if (!flow_first)
        for (auto& reg : out.regions_) reg.pair_rank += add_pairs;

    for (const auto& reg : add.regions_) {
        Region nr = reg;
        nr.id += roff;
        if (nr.rep_resident) *nr.rep_resident += ooff;
        if (nr.att_resident) *nr.att_resident += ooff;
        for (auto& s : nr.saddles) s += ooff;
        if (flow_first) nr.pair_rank += flow_pairs;
        out.regions_.push_back(nr);
    }
    out.next_region_ = roff + add.next_region_;
    for (const auto& [from, to] : add.merged_)
        out.merged_.push_back({from + roff, to + roff});
    for (const auto& [x, y] : add.edges_)
        out.edges_.push_back({x + ooff, y + ooff});

    // locate the two vacated regions; the repulsive one supplies the
    // repulsive end of the fused region
    RegionId flow_vac = flow_side.vacated_;
    RegionId add_vac = attach_side.vacated_ + roff;
    RegionId rep_vac = flow_is_a ? add_vac : flow_vac;
    RegionId att_vac = flow_is_a ? flow_vac : add_vac;

    Region fused;
    fused.id = out.next_region_++;
    {
        const Region& rv = out.region_by_id(rep_vac);
        const Region& av = out.region_by_id(att_vac);
        fused.rep_resident = rv.rep_resident;
        fused.att_resident = av.att_resident;
        fused.saddles = rv.saddles;
        fused.saddles.insert(fused.saddles.end(), av.saddles.begin(), av.saddles.end());
        fused.hopf_linked = (a.cls_ == HandleClass::ClassI && r.cls_ == HandleClass::ClassI);
        if (fused.hopf_linked) {
            const Region& fv = out.region_by_id(flow_vac);
            fused.pair_rank = fv.pair_rank;
        }
    }

    std::optional<std::pair<OrbitId, OrbitId>> seam_edge;
    if (is_solid_torus(a.cls_) && is_solid_torus(r.cls_)) {
        const Region& rv = out.region_by_id(rep_vac);
        const Region& av = out.region_by_id(att_vac);
        seam_edge = {{rv.saddles.back(), av.saddles.front()}};
        out.edges_.push_back(*seam_edge);
    }

    out.regions_.erase(std::remove_if(out.regions_.begin(), out.regions_.end(),
                                      [&](const Region& x) {
                                          return x.id == rep_vac || x.id == att_vac;
                                      }),
                       out.regions_.end());
    out.regions_.push_back(fused);
    out.merged_.push_back({rep_vac, fused.id});
    out.merged_.push_back({att_vac, fused.id});

    // splice the construction log
    const FlowModel& addf = attach_side.content_;
    bool add_is_basic = addf.steps_.size() == 1;
    auto remap_step = [&](ConstructionStep s) {
        s.new_saddle += ooff;
        if (!s.is_basic) s.replaced += ooff;
        for (auto& c : s.created) c += ooff;
        if (s.heteroclinic) {
            s.heteroclinic->first += ooff;
            s.heteroclinic->second += ooff;
        }
        s.vacated_region += roff;
        return s;
    };
    ConstructionStep seam;
    seam.is_basic = false;
    seam.replaced = flow_side.removed_;
    seam.derived_class = flow_side.cls_;
    seam.attached_class = attach_side.cls_;
    seam.heteroclinic = seam_edge;
    seam.vacated_region = flow_vac;
    if (add_is_basic) {
        seam.attached = shape_kind(attach_side);
        if (seam.attached == BasicHandleKind::DDU) {
            for (const auto& reg : addf.regions_)
                if (!reg.hopf_linked && reg.resident_count() == 1 && reg.id != attach_side.vacated_)
                    seam.separated_index = reg.rep_resident ? OrbitIndex::Repulsive
                                                            : OrbitIndex::Attractive;
        }
        seam.new_saddle = addf.steps_[0].new_saddle + ooff;
        for (OrbitId k = 0; k < addf.orbit_index_.size(); ++k)
            if (addf.alive_[k] && addf.orbit_index_[k] != OrbitIndex::Saddle)
                seam.created.push_back(k + ooff);
        out.steps_.push_back(seam);
    } else {
        // iterated attachment: its own history follows the seam
        ConstructionStep first = remap_step(addf.steps_[0]);
        seam.attached = attach_side.cls_ == HandleClass::ClassI
                            ? (addf.steps_[0].basic_op == BasicOp::I ? BasicHandleKind::HDU
                                                                     : BasicHandleKind::DDU)
                            : (attach_side.cls_ == HandleClass::ClassII ? BasicHandleKind::HU
                                                                     : BasicHandleKind::DU);
        seam.new_saddle = first.new_saddle;
        for (OrbitId k = 0; k < addf.orbit_index_.size(); ++k)
            if (addf.alive_[k] && addf.orbit_index_[k] != OrbitIndex::Saddle)
                seam.created.push_back(k + ooff);
        out.steps_.push_back(seam);
        for (std::size_t i = 1; i < addf.steps_.size(); ++i)
            out.steps_.push_back(remap_step(addf.steps_[i]));
    }
    return out;
}

FlowModel identify(const FatHandle& attractive, const FatHandle& repulsive) {
    bool a_basic = attractive.content().log().size() == 1;
    bool r_basic = repulsive.content().log().size() == 1;
    // the non-basic side carries the construction history forward
    bool flow_is_a = !a_basic && r_basic;
    return identify_impl(attractive, repulsive, flow_is_a, false);
}

FlowModel replace_orbit(const FlowModel& flow, OrbitId k, BasicHandleKind kind,
                        std::optional<OrbitIndex> separated,
                        std::optional<bool> attach_ranks_first) {
    FatHandle fh = remove_orbit(flow, k);
    Polarity bp = opposite(fh.polarity());
    FatHandle b = basic_handle(kind, bp, separated);
    bool ranks_first;
    if (attach_ranks_first) {
        ranks_first = *attach_ranks_first;
    } else {
        switch (kind) {
            case BasicHandleKind::HU: ranks_first = true; break;
            case BasicHandleKind::DU:
                ranks_first = flow.index_of(k) == OrbitIndex::Attractive;
                break;
            default: ranks_first = false; break;
        }
    }
    FlowModel out = fh.polarity() == Polarity::Repulsive
                        ? identify_impl(b, fh, false, ranks_first)
                        : identify_impl(fh, b, true, ranks_first);
    ConstructionStep& seam = out.steps_.back();
    seam.attached = kind;
    if (kind == BasicHandleKind::DDU) seam.separated_index = separated;
    return out;
}

} // namespace fathom::flows
