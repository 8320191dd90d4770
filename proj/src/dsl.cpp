#include "fathom/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace fathom::dsl {

using flows::BasicHandleKind;
using flows::BasicOp;
using flows::Component;
using flows::ComponentList;
using flows::ConstructionStep;
using flows::FlowModel;
using links::IndexedLink;

// ---- selector text ------------------------------------------------------

std::string Selector::text() const {
    std::string s;
    switch (side) {
        case Side::Left: s += "left:"; break;
        case Side::Right: s += "right:"; break;
        case Side::At: s += "at:"; break;
        case Side::Default: break;
    }
    if (role == Role::Position) {
        s += "#" + std::to_string(position);
        return s;
    }
    if (role == Role::Hopf) {
        s += "hopf.";
        s += index_digit(index);
    } else {
        s += "sep.d";
        s += index_digit(index);
    }
    if (ordinal > 0) s += "#" + std::to_string(ordinal);
    return s;
}

FlowExpr& FlowExpr::operator=(const FlowExpr& o) {
    kind = o.kind;
    selectors = o.selectors;
    left = o.left ? std::make_unique<FlowExpr>(*o.left) : nullptr;
    right = o.right ? std::make_unique<FlowExpr>(*o.right) : nullptr;
    return *this;
}

bool FlowExpr::equals(const FlowExpr& o) const {
    if (kind != o.kind || selectors != o.selectors) return false;
    if (static_cast<bool>(left) != static_cast<bool>(o.left)) return false;
    if (static_cast<bool>(right) != static_cast<bool>(o.right)) return false;
    if (left && !left->equals(*o.left)) return false;
    if (right && !right->equals(*o.right)) return false;
    return true;
}

// ---- parsing ------------------------------------------------------------

namespace {

struct Cursor {
    std::string_view s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    bool try_eat(char c) {
        skip_ws();
        if (i < s.size() && s[i] == c) {
            ++i;
            return true;
        }
        return false;
    }
    void expect(char c, const char* what) {
        if (!try_eat(c)) throw ParseError(std::string("expected ") + what, i);
    }
    bool try_word(std::string_view w) {
        skip_ws();
        if (s.substr(i, w.size()) != w) return false;
        i += w.size();
        return true;
    }
    int parse_int() {
        skip_ws();
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) throw ParseError("expected a number", i);
        return std::stoi(std::string(s.substr(start, i - start)));
    }
};

OrbitIndex parse_index_digit(Cursor& c) {
    c.skip_ws();
    if (c.i >= c.s.size()) throw ParseError("expected orbit index", c.i);
    char d = c.s[c.i++];
    if (d == '0') return OrbitIndex::Repulsive;
    if (d == '2') return OrbitIndex::Attractive;
    throw ParseError("orbit index must be 0 or 2", c.i - 1);
}

Selector parse_selector(Cursor& c) {
    Selector sel;
    c.skip_ws();
    if (c.try_word("left:")) sel.side = Selector::Side::Left;
    else if (c.try_word("right:")) sel.side = Selector::Side::Right;
    else if (c.try_word("at:")) sel.side = Selector::Side::At;
    c.skip_ws();
    if (c.try_eat('#')) {
        sel.role = Selector::Role::Position;
        sel.position = c.parse_int();
        return sel;
    }
    if (c.try_word("hopf.")) {
        sel.role = Selector::Role::Hopf;
        sel.index = parse_index_digit(c);
    } else if (c.try_word("sep.d")) {
        sel.role = Selector::Role::Sep;
        sel.index = parse_index_digit(c);
    } else {
        throw ParseError("expected a selector (hopf.<i>, sep.d<i> or #n)", c.i);
    }
    if (c.try_eat('#')) sel.ordinal = c.parse_int();
    return sel;
}

FlowExpr parse_expr(Cursor& c) {
    c.skip_ws();
    if (c.try_eat('h')) {
        FlowExpr e;
        e.kind = FlowExpr::Kind::Leaf;
        return e;
    }
    FlowExpr e;
    if (c.try_word("III")) e.kind = FlowExpr::Kind::OpIII;
    else if (c.try_word("II")) e.kind = FlowExpr::Kind::OpII;
    else if (c.try_word("I")) e.kind = FlowExpr::Kind::OpI;
    else throw ParseError("expected 'h' or an operation I/II/III", c.i);
    c.expect('(', "'('");
    e.left = std::make_unique<FlowExpr>(parse_expr(c));
    c.expect(',', "','");
    e.right = std::make_unique<FlowExpr>(parse_expr(c));
    if (c.try_eat(';')) {
        e.selectors.push_back(parse_selector(c));
        while (c.try_eat(',')) e.selectors.push_back(parse_selector(c));
    }
    c.expect(')', "')'");
    return e;
}

} // namespace

FlowExpr parse(std::string_view text) {
    Cursor c{text};
    FlowExpr e = parse_expr(c);
    if (!c.done()) throw ParseError("trailing input after expression", c.i);
    return e;
}

std::string print(const FlowExpr& e) {
    if (e.is_leaf()) return "h";
    std::string name = e.kind == FlowExpr::Kind::OpI ? "I"
                     : e.kind == FlowExpr::Kind::OpII ? "II" : "III";
    std::string out = name + "(" + print(*e.left) + "," + print(*e.right);
    if (!e.selectors.empty()) {
        out += "; ";
        for (std::size_t i = 0; i < e.selectors.size(); ++i) {
            if (i) out += ", ";
            out += e.selectors[i].text();
        }
    }
    out += ")";
    return out;
}

// ---- selector resolution -------------------------------------------------

namespace {

OrbitId resolve_in_flow(const FlowModel& f, const Selector& sel) {
    ComponentList comps = f.components();
    auto pick = [&](const std::vector<Component>& v, int ord) -> const Component& {
        if (ord < 1 || static_cast<std::size_t>(ord) > v.size())
            throw SelectorError("selector ordinal out of range: " + sel.text());
        return v[static_cast<std::size_t>(ord) - 1];
    };
    switch (sel.role) {
        case Selector::Role::Hopf: {
            const Component& c = pick(comps.pairs, sel.ordinal ? sel.ordinal : 1);
            return sel.index == OrbitIndex::Repulsive ? c.rep_member : c.att_member;
        }
        case Selector::Role::Sep: {
            const auto& v = sel.index == OrbitIndex::Repulsive ? comps.d0 : comps.d2;
            return pick(v, sel.ordinal ? sel.ordinal : 1).sep_id;
        }
        default: {
            std::vector<OrbitId> flat;
            for (const auto& p : comps.pairs) {
                flat.push_back(p.rep_member);
                flat.push_back(p.att_member);
            }
            for (const auto& s : comps.d0) flat.push_back(s.sep_id);
            for (const auto& s : comps.d2) flat.push_back(s.sep_id);
            if (sel.position < 1 || static_cast<std::size_t>(sel.position) > flat.size())
                throw SelectorError("positional selector out of range: " + sel.text());
            return flat[static_cast<std::size_t>(sel.position) - 1];
        }
    }
}

OrbitId resolve_in_link(const IndexedLink& l, const Selector& sel) {
    std::vector<links::HopfPair> pairs = l.pairs();
    std::sort(pairs.begin(), pairs.end(),
              [](const auto& a, const auto& b) { return a.rank < b.rank; });
    auto seps = [&](OrbitIndex want) {
        std::vector<links::SeparatedOrbit> v;
        for (const auto& s : l.separated())
            if (s.index == want) v.push_back(s);
        std::sort(v.begin(), v.end(), [](const auto& a, const auto& b) { return a.rank < b.rank; });
        return v;
    };
    switch (sel.role) {
        case Selector::Role::Hopf: {
            int ord = sel.ordinal ? sel.ordinal : 1;
            if (ord < 1 || static_cast<std::size_t>(ord) > pairs.size())
                throw SelectorError("selector ordinal out of range: " + sel.text());
            const auto& p = pairs[static_cast<std::size_t>(ord) - 1];
            if (p.ia == sel.index) return p.a;
            if (p.ib == sel.index) return p.b;
            throw SelectorError("pair has no member of the requested index: " + sel.text());
        }
        case Selector::Role::Sep: {
            auto v = seps(sel.index);
            int ord = sel.ordinal ? sel.ordinal : 1;
            if (ord < 1 || static_cast<std::size_t>(ord) > v.size())
                throw SelectorError("selector ordinal out of range: " + sel.text());
            return v[static_cast<std::size_t>(ord) - 1].id;
        }
        default: {
            std::vector<OrbitId> flat;
            for (const auto& p : pairs) {
                flat.push_back(p.ia == OrbitIndex::Repulsive ? p.a : p.b);
                flat.push_back(p.ia == OrbitIndex::Repulsive ? p.b : p.a);
            }
            for (const auto& s : seps(OrbitIndex::Repulsive)) flat.push_back(s.id);
            for (const auto& s : seps(OrbitIndex::Attractive)) flat.push_back(s.id);
            if (sel.position < 1 || static_cast<std::size_t>(sel.position) > flat.size())
                throw SelectorError("positional selector out of range: " + sel.text());
            return flat[static_cast<std::size_t>(sel.position) - 1];
        }
    }
}

// Explicit spelling of the component holding orbit k.
std::string spell_orbit(const FlowModel& f, OrbitId k, Selector::Side side) {
    ComponentList comps = f.components();
    Selector sel;
    sel.side = side;
    for (std::size_t i = 0; i < comps.pairs.size(); ++i) {
        if (comps.pairs[i].rep_member == k || comps.pairs[i].att_member == k) {
            sel.role = Selector::Role::Hopf;
            sel.index = comps.pairs[i].rep_member == k ? OrbitIndex::Repulsive
                                                       : OrbitIndex::Attractive;
            sel.ordinal = static_cast<int>(i) + 1;
            return sel.text();
        }
    }
    auto scan = [&](const std::vector<Component>& v, OrbitIndex idx) -> bool {
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i].sep_id == k) {
                sel.role = Selector::Role::Sep;
                sel.index = idx;
                sel.ordinal = static_cast<int>(i) + 1;
                return true;
            }
        return false;
    };
    if (scan(comps.d0, OrbitIndex::Repulsive) || scan(comps.d2, OrbitIndex::Attractive))
        return sel.text();
    throw SelectorError("orbit is not a removable component");
}

// candidate targets of a flow: attractive orbits first, component order
std::vector<OrbitId> candidate_targets(const FlowModel& f, std::optional<OrbitIndex> only) {
    ComponentList comps = f.components();
    std::vector<OrbitId> out;
    auto add_att = [&] {
        for (const auto& p : comps.pairs) out.push_back(p.att_member);
        for (const auto& s : comps.d2) out.push_back(s.sep_id);
    };
    auto add_rep = [&] {
        for (const auto& p : comps.pairs) out.push_back(p.rep_member);
        for (const auto& s : comps.d0) out.push_back(s.sep_id);
    };
    if (!only) {
        add_att();
        add_rep();
    } else if (*only == OrbitIndex::Attractive) {
        add_att();
    } else {
        add_rep();
    }
    return out;
}

struct Plan {
    BasicHandleKind kind = BasicHandleKind::HDU;
    std::optional<OrbitIndex> variant;
    OrbitId target = 0;
    std::optional<bool> ranks_first;
    std::string spelling;
};

struct NodeSelectors {
    const Selector* at = nullptr;
    std::vector<const Selector*> removal;
};

NodeSelectors split_selectors(const FlowExpr& e) {
    NodeSelectors out;
    for (const auto& s : e.selectors) {
        if (s.side == Selector::Side::At) {
            if (out.at) throw SelectorError("duplicate at: selector");
            out.at = &s;
        } else {
            out.removal.push_back(&s);
        }
    }
    return out;
}

} // namespace

// ---- link evaluation ------------------------------------------------------

namespace {

IndexedLink link_eval_node(const FlowExpr& e);

// Which argument does a removal selector address?
bool removal_is_left(const FlowExpr& e, const Selector& s, bool second_of_two) {
    if (s.side == Selector::Side::Left) return true;
    if (s.side == Selector::Side::Right) return false;
    if (e.kind == FlowExpr::Kind::OpIII) return !second_of_two;
    return false; // operation II defaults to the second argument
}

IndexedLink link_eval_node(const FlowExpr& e) {
    if (e.is_leaf()) return links::make_hopf(OrbitIndex::Repulsive, OrbitIndex::Attractive);
    NodeSelectors sels = split_selectors(e);
    IndexedLink lhs = link_eval_node(*e.left);
    IndexedLink rhs = link_eval_node(*e.right);
    switch (e.kind) {
        case FlowExpr::Kind::OpI:
            return links::op_i(lhs, rhs);
        case FlowExpr::Kind::OpII: {
            if (sels.removal.size() > 1)
                throw SelectorError("operation II takes a single removal selector");
            bool from_left =
                !sels.removal.empty() && removal_is_left(e, *sels.removal[0], false);
            const IndexedLink& rem = from_left ? lhs : rhs;
            const IndexedLink& keep = from_left ? rhs : lhs;
            if (sels.removal.empty()) {
                // unique legal choice, else ambiguity, judged at the link level
                std::vector<OrbitId> cands;
                for (const auto& p : rhs.pairs()) {
                    cands.push_back(p.a);
                    cands.push_back(p.b);
                }
                for (const auto& s : rhs.separated())
                    if (s.index != OrbitIndex::Saddle) cands.push_back(s.id);
                std::map<std::string, IndexedLink> groups;
                for (OrbitId k : cands) {
                    IndexedLink r = links::op_ii(lhs, rhs, k);
                    groups.emplace(links::canonicalize(r).text, r);
                }
                if (groups.size() == 1) return groups.begin()->second;
                std::vector<std::string> names;
                for (const auto& [t, l] : groups) names.push_back(t);
                throw AmbiguityError("operation II needs a removal selector", names);
            }
            OrbitId k = resolve_in_link(rem, *sels.removal[0]);
            return links::op_ii(keep, rem, k);
        }
        default: {
            // operation III: one removal per argument; explicit side tags win,
            // otherwise the first selector addresses the left argument
            const Selector* left_sel = nullptr;
            const Selector* right_sel = nullptr;
            bool second = false;
            for (const Selector* s : sels.removal) {
                (removal_is_left(e, *s, second) ? left_sel : right_sel) = s;
                second = true;
            }
            auto forced = [&](const IndexedLink& l, OrbitIndex want,
                              const Selector* s) -> OrbitId {
                if (s) return resolve_in_link(l, *s);
                std::vector<OrbitId> c;
                for (const auto& p : l.pairs()) {
                    if (p.ia == want) c.push_back(p.a);
                    if (p.ib == want) c.push_back(p.b);
                }
                for (const auto& sep : l.separated())
                    if (sep.index == want) c.push_back(sep.id);
                if (c.size() != 1)
                    throw AmbiguityError("operation III needs removal selectors", {});
                return c[0];
            };
            // honour the swapped reading when an explicit selector names an
            // attractive component of the left argument (or dually)
            if (left_sel) {
                OrbitId k = resolve_in_link(lhs, *left_sel);
                if (lhs.index_of(k) == OrbitIndex::Attractive) {
                    OrbitId k1 = forced(rhs, OrbitIndex::Repulsive, right_sel);
                    return links::op_iii(rhs, lhs, k1, k);
                }
                OrbitId k2 = forced(rhs, OrbitIndex::Attractive, right_sel);
                return links::op_iii(lhs, rhs, k, k2);
            }
            if (right_sel) {
                OrbitId k = resolve_in_link(rhs, *right_sel);
                if (rhs.index_of(k) == OrbitIndex::Repulsive) {
                    OrbitId k2 = forced(lhs, OrbitIndex::Attractive, nullptr);
                    return links::op_iii(rhs, lhs, k, k2);
                }
                OrbitId k1 = forced(lhs, OrbitIndex::Repulsive, nullptr);
                return links::op_iii(lhs, rhs, k1, k);
            }
            OrbitId k1 = forced(lhs, OrbitIndex::Repulsive, nullptr);
            OrbitId k2 = forced(rhs, OrbitIndex::Attractive, nullptr);
            return links::op_iii(lhs, rhs, k1, k2);
        }
    }
}

} // namespace

links::IndexedLink link_eval(const FlowExpr& e) { return link_eval_node(e); }

// ---- elaboration ----------------------------------------------------------

namespace {

FlowModel run_plans(const FlowModel& f, const std::vector<Plan>& plans) {
    struct Result {
        Plan plan;
        FlowModel flow;
        std::string canon;
    };
    std::vector<Result> ok;
    std::optional<BitorusError> bitorus;
    std::optional<Error> other;
    for (const Plan& p : plans) {
        try {
            FlowModel out = flows::replace_orbit(f, p.target, p.kind, p.variant, p.ranks_first);
            ok.push_back({p, std::move(out), {}});
            ok.back().canon = ok.back().flow.canonical_form();
        } catch (const BitorusError& e) {
            if (!bitorus) bitorus = e;
        } catch (const Error& e) {
            if (!other) other = Error(e.what());
        }
    }
    if (ok.empty()) {
        if (bitorus) throw *bitorus;
        if (other) throw *other;
        throw SelectorError("no legal removal choice");
    }
    std::vector<std::string> distinct;
    std::vector<std::string> spellings;
    for (const auto& r : ok) {
        if (std::find(distinct.begin(), distinct.end(), r.canon) == distinct.end()) {
            distinct.push_back(r.canon);
            spellings.push_back(r.plan.spelling);
        }
    }
    if (distinct.size() > 1) {
        std::string msg = "ambiguous selection; candidates:";
        for (const auto& s : spellings) msg += " [" + s + "]";
        throw AmbiguityError(msg, spellings);
    }
    return ok.front().flow;
}

FlowModel elaborate_node(const FlowExpr& e) {
    if (e.is_leaf())
        throw Error("a bare Hopf link is not a flow; apply an operation");
    bool lleaf = e.left->is_leaf();
    bool rleaf = e.right->is_leaf();
    NodeSelectors sels = split_selectors(e);

    if (lleaf && rleaf) {
        switch (e.kind) {
            case FlowExpr::Kind::OpI:
                return flows::basic_flow(BasicOp::I);
            case FlowExpr::Kind::OpII: {
                if (sels.removal.size() > 1)
                    throw SelectorError("operation II takes a single removal selector");
                if (!sels.removal.empty()) {
                    const Selector& s = *sels.removal[0];
                    if (s.role != Selector::Role::Hopf)
                        throw SelectorError("a Hopf link has no separated components");
                    return flows::basic_flow(BasicOp::II, opposite(s.index));
                }
                std::vector<std::string> names = {"right:hopf.0#1", "right:hopf.2#1"};
                throw AmbiguityError(
                    "II(h,h) is ambiguous; candidates: [right:hopf.0#1] [right:hopf.2#1]", names);
            }
            default:
                return flows::basic_flow(BasicOp::III);
        }
    }
    if (!lleaf && !rleaf)
        throw Error("elaboration needs a Hopf-link argument at every operation; "
                    "rewrite the expression as iterated attachments");

    const FlowExpr& compound = lleaf ? *e.right : *e.left;
    Selector::Side cside = lleaf ? Selector::Side::Right : Selector::Side::Left;
    FlowModel f = elaborate_node(compound);

    std::vector<Plan> plans;
    auto spell_target = [&](OrbitId k) { return spell_orbit(f, k, Selector::Side::At); };

    switch (e.kind) {
        case FlowExpr::Kind::OpI: {
            if (!sels.removal.empty())
                throw SelectorError("operation I removes nothing; use at: to pick the "
                                    "replaced orbit");
            std::vector<OrbitId> targets =
                sels.at ? std::vector<OrbitId>{resolve_in_flow(f, *sels.at)}
                        : candidate_targets(f, {});
            for (OrbitId t : targets)
                plans.push_back({BasicHandleKind::HDU, {}, t, lleaf, spell_target(t)});
            break;
        }
        case FlowExpr::Kind::OpII: {
            if (sels.removal.size() > 1)
                throw SelectorError("operation II takes a single removal selector");
            bool removal_on_compound;
            if (sels.removal.empty()) {
                removal_on_compound = !rleaf; // defaults to the right argument
            } else {
                bool from_left = removal_is_left(e, *sels.removal[0], false);
                removal_on_compound = (from_left == !lleaf);
            }
            if (!removal_on_compound) {
                // removal in the Hopf argument: a ddu attachment on the flow
                std::vector<OrbitIndex> kidx;
                if (!sels.removal.empty()) {
                    if (sels.removal[0]->role != Selector::Role::Hopf)
                        throw SelectorError("a Hopf link has no separated components");
                    kidx = {sels.removal[0]->index};
                } else {
                    kidx = {OrbitIndex::Repulsive, OrbitIndex::Attractive};
                }
                std::vector<OrbitId> targets =
                    sels.at ? std::vector<OrbitId>{resolve_in_flow(f, *sels.at)}
                            : candidate_targets(f, {});
                for (OrbitIndex i : kidx)
                    for (OrbitId t : targets) {
                        Selector ks;
                        ks.side = lleaf ? Selector::Side::Left : Selector::Side::Right;
                        ks.role = Selector::Role::Hopf;
                        ks.index = i;
                        ks.ordinal = 1;
                        plans.push_back({BasicHandleKind::DDU, opposite(i), t, {},
                                         ks.text() + ", " + spell_target(t)});
                    }
            } else {
                // removal in the iterated argument: an hu attachment
                if (sels.at)
                    throw SelectorError("at: is redundant when the removal names the "
                                        "replaced orbit");
                std::vector<OrbitId> targets =
                    !sels.removal.empty()
                        ? std::vector<OrbitId>{resolve_in_flow(f, *sels.removal[0])}
                        : candidate_targets(f, {});
                for (OrbitId t : targets)
                    plans.push_back({BasicHandleKind::HU, {}, t, {},
                                     spell_orbit(f, t, cside)});
            }
            break;
        }
        default: {
            // operation III: the Hopf argument's removal is forced; the flow-side
            // component decides between the two readings
            const Selector* csel = nullptr;
            bool second = false;
            for (const Selector* s : sels.removal) {
                bool on_left = removal_is_left(e, *s, second);
                if (on_left == !lleaf) csel = s;
                second = true;
            }
            if (sels.at)
                throw SelectorError("operation III names the replaced orbit by its "
                                    "removal selector");
            std::vector<OrbitId> targets;
            if (csel) {
                targets = {resolve_in_flow(f, *csel)};
            } else {
                targets = candidate_targets(f, {});
            }
            for (OrbitId t : targets)
                plans.push_back({BasicHandleKind::DU, {}, t, {}, spell_orbit(f, t, cside)});
            break;
        }
    }
    return run_plans(f, plans);
}

} // namespace

FlowModel elaborate(const FlowExpr& e) { return elaborate_node(e); }

FlowModel elaborate(std::string_view text) { return elaborate_node(parse(text)); }

Selector parse_selector_text(std::string_view text) {
    Cursor c{text};
    Selector s = parse_selector(c);
    if (!c.done()) throw ParseError("trailing input after selector", c.i);
    return s;
}

OrbitId resolve_selector(const flows::FlowModel& flow, const Selector& sel) {
    return resolve_in_flow(flow, sel);
}

// ---- expression reconstruction ---------------------------------------------

std::string expression_of(const FlowModel& flow) {
    const auto& log = flow.log();
    if (log.empty() || !log[0].is_basic)
        throw Error("flow has no construction log");
    FlowModel cur = flows::basic_flow(log[0].basic_op, log[0].separated_index);
    std::map<OrbitId, OrbitId> map;
    for (OrbitId k = 0; k < cur.orbit_slots(); ++k) map[k] = k;

    std::string txt;
    switch (log[0].basic_op) {
        case BasicOp::I: txt = "I(h,h)"; break;
        case BasicOp::II: {
            Selector s;
            s.side = Selector::Side::Right;
            s.role = Selector::Role::Hopf;
            s.index = opposite(*log[0].separated_index);
            s.ordinal = 1;
            txt = "II(h,h; " + s.text() + ")";
            break;
        }
        default: txt = "III(h,h)"; break;
    }

    for (std::size_t t = 1; t < log.size(); ++t) {
        const ConstructionStep& step = log[t];
        auto it = map.find(step.replaced);
        if (it == map.end()) throw Error("broken construction log");
        OrbitId target = it->second;
        switch (step.attached) {
            case BasicHandleKind::HDU:
                txt = "I(" + txt + ",h; " + spell_orbit(cur, target, Selector::Side::At) + ")";
                break;
            case BasicHandleKind::DDU: {
                Selector ks;
                ks.side = Selector::Side::Right;
                ks.role = Selector::Role::Hopf;
                ks.index = opposite(*step.separated_index);
                ks.ordinal = 1;
                txt = "II(" + txt + ",h; " + ks.text() + ", " +
                      spell_orbit(cur, target, Selector::Side::At) + ")";
                break;
            }
            case BasicHandleKind::HU:
                txt = "II(" + txt + ",h; " + spell_orbit(cur, target, Selector::Side::Left) + ")";
                break;
            default:
                txt = "III(" + txt + ",h; " + spell_orbit(cur, target, Selector::Side::Left) + ")";
                break;
        }
        FlowModel next = flows::replace_orbit(cur, target, step.attached, step.separated_index);
        const ConstructionStep& ns = next.log().back();
        if (ns.created.size() != step.created.size())
            throw Error("broken construction log");
        for (std::size_t i = 0; i < step.created.size(); ++i)
            map[step.created[i]] = ns.created[i];
        map[step.new_saddle] = ns.new_saddle;
        cur = std::move(next);
    }
    return txt;
}

} // namespace fathom::dsl
