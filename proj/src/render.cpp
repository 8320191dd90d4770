#include "fathom/render.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>

namespace fathom::render {

using flows::FlowModel;
using flows::Region;
using flows::RegionId;

namespace {

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

std::string node_label(const FlowModel& flow, OrbitId k) {
    if (flow.index_of(k) == OrbitIndex::Saddle) return flow.display_name(k);
    return flow.index_of(k) == OrbitIndex::Repulsive ? "d_r" : "d_a";
}

} // namespace

DiagramDoc hasse_dot(const order::SaddlePoset& p, const FlowModel& flow) {
    std::string out = "digraph hasse {\n  rankdir=BT;\n  node [shape=circle];\n";
    for (OrbitId k : p.elements())
        out += "  \"" + node_label(flow, k) + "\";\n";
    auto covers = p.covers();
    std::vector<std::pair<std::string, std::string>> edges;
    for (const auto& [a, b] : covers)
        edges.push_back({node_label(flow, a), node_label(flow, b)});
    std::sort(edges.begin(), edges.end());
    for (const auto& [a, b] : edges)
        out += "  \"" + a + "\" -> \"" + b + "\";\n";
    out += "}\n";
    return {DiagramDoc::Kind::Hasse, out};
}

DiagramDoc filtration_dot(const FlowModel& flow) {
    const auto& log = flow.log();
    std::string out = "digraph filtration {\n  rankdir=LR;\n  node [shape=box];\n";
    for (std::size_t i = 0; i < log.size(); ++i) {
        const auto& s = log[i];
        std::string label = "M" + std::to_string(i + 1) + ": ";
        if (s.is_basic) {
            label += std::string("basic ") + flows::to_string(s.basic_op);
            if (s.separated_index)
                label += std::string(" d") + index_digit(*s.separated_index);
        } else {
            label += std::string("+") + flows::to_string(s.attached) + " " +
                     flows::to_string(s.derived_class) + "+" +
                     flows::to_string(s.attached_class) + " at " +
                     flow.display_name(s.replaced);
        }
        out += "  m" + std::to_string(i + 1) + " [label=\"" + label + "\"];\n";
    }
    for (std::size_t i = 1; i < log.size(); ++i)
        out += "  m" + std::to_string(i) + " -> m" + std::to_string(i + 1) + ";\n";
    for (const auto& [i, j] : order::commuting_steps(flow))
        out += "  m" + std::to_string(i) + " -> m" + std::to_string(j) +
               " [style=dashed, dir=none, constraint=false, label=\"commutes\"];\n";
    out += "}\n";
    return {DiagramDoc::Kind::Filtration, out};
}

// ---- schematic -----------------------------------------------------------

namespace {

constexpr double kDot = 4.5;
constexpr double kPad = 7.0;

struct Node {
    struct Ring {
        OrbitId saddle = 0;
        std::vector<Node> pockets;
        double radius = 0; // filled by measure()
    };
    std::optional<OrbitId> inner_dot;
    std::optional<OrbitId> outer_dot;
    bool linked = false;
    OrbitId pair_rep = 0, pair_att = 0;
    std::vector<Ring> rings;
    double radius = 0;
};

struct Builder {
    const FlowModel& flow;
    std::set<RegionId> visited;

    const Region& region(RegionId id) const {
        for (const auto& r : flow.regions())
            if (r.id == id) return r;
        throw Error("internal: missing region");
    }

    std::optional<RegionId> other_region_of(OrbitId saddle, RegionId home) const {
        for (const auto& r : flow.regions()) {
            if (r.id == home) continue;
            for (OrbitId s : r.saddles)
                if (s == saddle) return r.id;
        }
        return std::nullopt;
    }

    Node build(RegionId id, std::optional<OrbitId> via) {
        visited.insert(id);
        const Region& r = region(id);
        Node node;
        node.linked = r.hopf_linked;

        std::vector<OrbitId> saddles;
        std::size_t via_pos = 0;
        for (std::size_t i = 0; i < r.saddles.size(); ++i) {
            if (via && r.saddles[i] == *via) {
                via_pos = i;
                continue;
            }
            saddles.push_back(r.saddles[i]);
        }
        bool reversed = via && via_pos == 0;
        if (reversed) std::reverse(saddles.begin(), saddles.end());

        if (r.hopf_linked) {
            node.pair_rep = *r.rep_resident;
            node.pair_att = *r.att_resident;
        } else if (reversed) {
            node.inner_dot = r.att_resident;
            node.outer_dot = r.rep_resident;
        } else {
            node.inner_dot = r.rep_resident;
            node.outer_dot = r.att_resident;
        }

        for (OrbitId s : saddles) {
            Node::Ring ring;
            ring.saddle = s;
            if (auto other = other_region_of(s, id); other && !visited.count(*other))
                ring.pockets.push_back(build(*other, s));
            node.rings.push_back(std::move(ring));
        }
        return node;
    }
};

void measure(Node& n) {
    double r = n.linked ? 2.5 * kDot + kPad : (n.inner_dot ? kDot + kPad : kPad);
    for (auto& ring : n.rings) {
        double need = kPad;
        for (auto& p : ring.pockets) {
            measure(p);
            need = std::max(need, 2 * p.radius + kPad);
        }
        r += need;
        ring.radius = r;
        r += 2.0; // stroke separation
    }
    if (n.outer_dot) r += 2 * kDot + kPad;
    n.radius = r + 2.0;
}

struct Emitter {
    const FlowModel& flow;
    std::string body;
    std::map<OrbitId, std::pair<double, double>> saddle_pos;

    void dot(double x, double y, OrbitIndex idx, OrbitId k) {
        const char* cls = idx == OrbitIndex::Attractive ? "orbit-att" : "orbit-rep";
        const char* fill = idx == OrbitIndex::Attractive ? "#000" : "#fff";
        body += "  <circle class=\"" + std::string(cls) + "\" cx=\"" + num(x) + "\" cy=\"" +
                num(y) + "\" r=\"" + num(kDot) + "\" fill=\"" + fill +
                "\" stroke=\"#000\"><title>" + flow.display_name(k) + "</title></circle>\n";
    }

    void pair_dots(double x, double y, OrbitId rep, OrbitId att) {
        body += "  <circle class=\"link\" cx=\"" + num(x - kDot) + "\" cy=\"" + num(y) +
                "\" r=\"" + num(2 * kDot) + "\" fill=\"none\" stroke=\"#888\"/>\n";
        body += "  <circle class=\"link\" cx=\"" + num(x + kDot) + "\" cy=\"" + num(y) +
                "\" r=\"" + num(2 * kDot) + "\" fill=\"none\" stroke=\"#888\"/>\n";
        dot(x - kDot, y, OrbitIndex::Repulsive, rep);
        dot(x + kDot, y, OrbitIndex::Attractive, att);
    }

    void saddle_marker(double x, double y, OrbitId k) {
        saddle_pos[k] = {x, y};
        body += "  <g class=\"saddle\"><circle cx=\"" + num(x) + "\" cy=\"" + num(y) +
                "\" r=\"" + num(kDot) + "\" fill=\"#fff\" stroke=\"#000\"/>" +
                "<line x1=\"" + num(x - kDot * 0.7) + "\" y1=\"" + num(y - kDot * 0.7) +
                "\" x2=\"" + num(x + kDot * 0.7) + "\" y2=\"" + num(y + kDot * 0.7) +
                "\" stroke=\"#000\"/>" + "<line x1=\"" + num(x - kDot * 0.7) + "\" y1=\"" +
                num(y + kDot * 0.7) + "\" x2=\"" + num(x + kDot * 0.7) + "\" y2=\"" +
                num(y - kDot * 0.7) + "\" stroke=\"#000\"/><title>" + flow.display_name(k) +
                "</title></g>\n";
    }

    void emit(const Node& n, double cx, double cy) {
        if (n.linked) {
            pair_dots(cx, cy, n.pair_rep, n.pair_att);
        } else if (n.inner_dot) {
            dot(cx, cy, flow.index_of(*n.inner_dot), *n.inner_dot);
        }
        double prev = n.linked ? 2.5 * kDot + kPad : (n.inner_dot ? kDot + kPad : kPad);
        for (const auto& ring : n.rings) {
            // pockets live in the chamber inside this ring
            double mid = (prev + ring.radius) / 2.0;
            double angle = 2.2; // radians, lower-left
            for (const auto& p : ring.pockets) {
                double px = cx + mid * std::cos(angle);
                double py = cy + mid * std::sin(angle);
                emit(p, px, py);
                angle += 1.1;
            }
            body += "  <circle class=\"ring\" cx=\"" + num(cx) + "\" cy=\"" + num(cy) +
                    "\" r=\"" + num(ring.radius) + "\" fill=\"none\" stroke=\"#000\"/>\n";
            saddle_marker(cx, cy - ring.radius, ring.saddle);
            prev = ring.radius;
        }
        if (n.outer_dot) {
            double rr = prev + kDot + kPad / 2;
            dot(cx + rr * std::cos(0.8), cy + rr * std::sin(0.8),
                flow.index_of(*n.outer_dot), *n.outer_dot);
        }
    }
};

} // namespace

DiagramDoc schematic_svg(const FlowModel& flow, std::size_t max_saddles) {
    if (flow.saddle_count() > max_saddles)
        throw BoundError("flow too large to draw (limit " + std::to_string(max_saddles) +
                         " saddles)");
    std::vector<RegionId> order = flow.canonical_region_order();

    Builder builder{flow, {}};
    // roots and orphan regions (forests cannot occur, but stay safe)
    std::vector<std::pair<Node, RegionId>> roots;
    for (RegionId id : order)
        if (!builder.visited.count(id)) roots.push_back({builder.build(id, {}), id});

    double total = 0, height = 0;
    for (auto& [n, id] : roots) {
        measure(n);
        total += 2 * n.radius + 2 * kPad;
        height = std::max(height, 2 * n.radius + 2 * kPad);
    }

    std::string body;
    Emitter em{flow, {}, {}};
    double x = kPad;
    for (auto& [n, id] : roots) {
        double cx = x + n.radius + kPad;
        double cy = height / 2;
        // enclosing boundary
        em.body += "  <circle class=\"boundary\" cx=\"" + num(cx) + "\" cy=\"" + num(cy) +
                   "\" r=\"" + num(n.radius) + "\" fill=\"none\" stroke=\"#aaa\" "
                   "stroke-dasharray=\"2,3\"/>\n";
        em.emit(n, cx, cy);
        x += 2 * n.radius + 2 * kPad;
    }

    // heteroclinic connections between saddle markers
    for (const auto& [a, b] : flow.heteroclinic_edges()) {
        auto pa = em.saddle_pos.find(a);
        auto pb = em.saddle_pos.find(b);
        if (pa == em.saddle_pos.end() || pb == em.saddle_pos.end()) continue;
        double mx = (pa->second.first + pb->second.first) / 2;
        double my = (pa->second.second + pb->second.second) / 2 - 14;
        em.body += "  <path class=\"heteroclinic\" d=\"M " + num(pa->second.first) + " " +
                   num(pa->second.second) + " Q " + num(mx) + " " + num(my) + " " +
                   num(pb->second.first) + " " + num(pb->second.second) +
                   "\" fill=\"none\" stroke=\"#000\" stroke-dasharray=\"4,3\"/>\n";
    }

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(total + kPad) +
                      "\" height=\"" + num(height) + "\" viewBox=\"0 0 " + num(total + kPad) +
                      " " + num(height) + "\">\n" + em.body + "</svg>\n";
    return {DiagramDoc::Kind::Schematic, svg};
}

} // namespace fathom::render
