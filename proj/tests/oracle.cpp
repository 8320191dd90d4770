#include "oracle.hpp"

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "fathom/link.hpp"

namespace oracle {

using fathom::OrbitId;
using fathom::OrbitIndex;
using fathom::Polarity;
using fathom::flows::BasicHandleKind;
using fathom::flows::BasicOp;
using fathom::flows::FlowModel;
using fathom::flows::Region;

namespace {

struct RegionView {
    bool linked = false;
    bool has_rep = false, has_att = false;
    std::vector<OrbitId> saddles;
    OrbitId rep = 0, att = 0;
};

std::vector<RegionView> views(const FlowModel& f) {
    std::vector<RegionView> out;
    for (const Region& r : f.regions()) {
        RegionView v;
        v.linked = r.hopf_linked;
        v.has_rep = r.rep_resident.has_value();
        v.has_att = r.att_resident.has_value();
        if (v.has_rep) v.rep = *r.rep_resident;
        if (v.has_att) v.att = *r.att_resident;
        v.saddles = r.saddles;
        out.push_back(v);
    }
    return out;
}

bool same_shape(const RegionView& a, const RegionView& b) {
    return a.linked == b.linked && a.has_rep == b.has_rep && a.has_att == b.has_att &&
           a.saddles.size() == b.saddles.size();
}

struct Matcher {
    const FlowModel& fa;
    const FlowModel& fb;
    std::vector<RegionView> va, vb;
    std::vector<bool> used;
    std::map<OrbitId, OrbitId> fwd, rev;

    bool bind(OrbitId x, OrbitId y) {
        auto f = fwd.find(x);
        if (f != fwd.end()) return f->second == y;
        auto r = rev.find(y);
        if (r != rev.end()) return false;
        fwd[x] = y;
        rev[y] = x;
        return true;
    }

    bool match_region(const RegionView& a, const RegionView& b,
                      std::vector<std::pair<OrbitId, OrbitId>>& bound) {
        auto try_bind = [&](OrbitId x, OrbitId y) {
            std::size_t before = fwd.size();
            if (!bind(x, y)) return false;
            if (fwd.size() > before) bound.push_back({x, y});
            return true;
        };
        if (a.has_rep && !try_bind(a.rep, b.rep)) return false;
        if (a.has_att && !try_bind(a.att, b.att)) return false;
        for (std::size_t i = 0; i < a.saddles.size(); ++i)
            if (!try_bind(a.saddles[i], b.saddles[i])) return false;
        return true;
    }

    void unbind(const std::vector<std::pair<OrbitId, OrbitId>>& bound) {
        for (auto& [x, y] : bound) {
            fwd.erase(x);
            rev.erase(y);
        }
    }

    bool rec(std::size_t i) {
        if (i == va.size()) return edges_match();
        for (std::size_t j = 0; j < vb.size(); ++j) {
            if (used[j] || !same_shape(va[i], vb[j])) continue;
            std::vector<std::pair<OrbitId, OrbitId>> bound;
            if (match_region(va[i], vb[j], bound)) {
                used[j] = true;
                if (rec(i + 1)) return true;
                used[j] = false;
            }
            unbind(bound);
        }
        return false;
    }

    bool edges_match() const {
        auto ea = fa.heteroclinic_edges();
        auto eb = fb.heteroclinic_edges();
        if (ea.size() != eb.size()) return false;
        std::vector<std::pair<OrbitId, OrbitId>> mapped;
        for (auto [x, y] : ea) {
            auto fx = fwd.find(x), fy = fwd.find(y);
            if (fx == fwd.end() || fy == fwd.end()) return false;
            mapped.push_back({fx->second, fy->second});
        }
        std::sort(mapped.begin(), mapped.end());
        std::sort(eb.begin(), eb.end());
        return mapped == eb;
    }
};

} // namespace

bool isomorphic(const FlowModel& a, const FlowModel& b) {
    if (a.saddle_count() != b.saddle_count()) return false;
    if (a.regions().size() != b.regions().size()) return false;
    for (OrbitIndex i : {OrbitIndex::Repulsive, OrbitIndex::Attractive}) {
        std::size_t ca = 0, cb = 0;
        for (OrbitId k : a.removable_orbits()) ca += a.index_of(k) == i;
        for (OrbitId k : b.removable_orbits()) cb += b.index_of(k) == i;
        if (ca != cb) return false;
    }
    Matcher m{a, b, views(a), views(b), std::vector<bool>(b.regions().size(), false), {}, {}};
    return m.rec(0);
}

namespace {

void generate(const FlowModel& f, int n, std::vector<FlowModel>& out) {
    if (static_cast<int>(f.saddle_count()) == n) {
        out.push_back(f);
        return;
    }
    struct Choice {
        BasicHandleKind kind;
        std::optional<OrbitIndex> variant;
    };
    static const std::vector<Choice> kChoices = {
        {BasicHandleKind::HDU, {}},
        {BasicHandleKind::DDU, OrbitIndex::Repulsive},
        {BasicHandleKind::DDU, OrbitIndex::Attractive},
        {BasicHandleKind::HU, {}},
        {BasicHandleKind::DU, {}},
    };
    for (OrbitId k : f.removable_orbits())
        for (const Choice& c : kChoices) {
            try {
                generate(fathom::flows::replace_orbit(f, k, c.kind, c.variant), n, out);
            } catch (const fathom::BitorusError&) {
            }
        }
}

std::vector<FlowModel> all_paths(int n) {
    std::vector<FlowModel> raw;
    generate(fathom::flows::basic_flow(BasicOp::I), n, raw);
    generate(fathom::flows::basic_flow(BasicOp::II, OrbitIndex::Repulsive), n, raw);
    generate(fathom::flows::basic_flow(BasicOp::II, OrbitIndex::Attractive), n, raw);
    generate(fathom::flows::basic_flow(BasicOp::III), n, raw);
    return raw;
}

std::string bucket_key(const FlowModel& f, bool dualize) {
    auto key_of = [](const FlowModel& g) {
        std::string key = fathom::links::canonicalize(g.link()).text;
        key += "|" + std::to_string(g.heteroclinic_edges().size());
        std::vector<std::string> shapes;
        for (const Region& r : g.regions()) {
            std::string s;
            s += r.hopf_linked ? 'L' : '-';
            s += r.rep_resident ? 'r' : '-';
            s += r.att_resident ? 'a' : '-';
            s += std::to_string(r.saddles.size());
            shapes.push_back(s);
        }
        std::sort(shapes.begin(), shapes.end());
        for (const auto& s : shapes) key += "|" + s;
        return key;
    };
    std::string k = key_of(f);
    if (!dualize) return k;
    return std::min(k, key_of(f.dual()));
}

} // namespace

std::size_t raw_path_count(int n) { return all_paths(n).size(); }

std::size_t census_count(int n, bool dualize) {
    std::vector<FlowModel> raw = all_paths(n);
    std::map<std::string, std::vector<FlowModel>> buckets;
    for (FlowModel& f : raw) buckets[bucket_key(f, dualize)].push_back(std::move(f));
    std::size_t classes = 0;
    for (auto& [key, flows] : buckets) {
        std::vector<const FlowModel*> reps;
        for (const FlowModel& f : flows) {
            bool known = false;
            for (const FlowModel* rep : reps) {
                if (isomorphic(f, *rep) || (dualize && isomorphic(f, rep->dual()))) {
                    known = true;
                    break;
                }
            }
            if (!known) reps.push_back(&f);
        }
        classes += reps.size();
    }
    return classes;
}

} // namespace oracle
