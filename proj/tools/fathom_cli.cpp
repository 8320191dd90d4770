// Command-line front end: construction, classification, enumeration,
// ordering and diagram export for NMS flows with unknotted saddle orbits.

#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"

#include "fathom/dsl.hpp"
#include "fathom/enumerate.hpp"
#include "fathom/order.hpp"
#include "fathom/render.hpp"

using namespace fathom;
using namespace fathom::flows;

namespace {

std::string link_text(const FlowModel& f) { return links::canonicalize(f.link()).text; }

void write_out(const std::string& path, const std::string& body) {
    if (path.empty() || path == "-") {
        std::cout << body;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file: " + path);
    out << body;
}

std::string sigma_cover_text(const FlowModel& f) {
    auto p = order::saddle_poset(f);
    auto labels = order::sigma_labels(p, f);
    std::map<OrbitId, std::string> name;
    for (const auto& [k, s] : labels) name[k] = s;
    auto covers = p.covers();
    std::sort(covers.begin(), covers.end(), [&](const auto& a, const auto& b) {
        return name[a.first] < name[b.first];
    });
    std::string out;
    for (std::size_t i = 0; i < covers.size(); ++i) {
        if (i) out += ", ";
        out += name[covers[i].first] + "<" + name[covers[i].second];
    }
    if (covers.empty()) out = "(no relations)";
    out += "; total over saddles: ";
    out += p.total() ? "true" : "false";
    return out;
}

void print_construction(const FlowModel& f) {
    const auto& log = f.log();
    for (std::size_t i = 0; i < log.size(); ++i) {
        const auto& s = log[i];
        std::cout << "  M" << i + 1 << ": ";
        if (s.is_basic) {
            std::cout << "basic " << to_string(s.basic_op);
            if (s.separated_index)
                std::cout << " (separated d" << index_digit(*s.separated_index) << ")";
        } else {
            std::cout << "replace " << f.display_name(s.replaced) << " by "
                      << to_string(s.attached) << " " << to_string(s.derived_class) << "+"
                      << to_string(s.attached_class);
            if (s.heteroclinic)
                std::cout << ", heteroclinic " << f.display_name(s.heteroclinic->first) << "<"
                          << f.display_name(s.heteroclinic->second);
        }
        std::cout << "\n";
    }
}

// handle spec: kind[.d0|.d2]@rep|att or "EXPR ! SELECTOR"
FatHandle parse_handle_spec(const std::string& spec) {
    auto bang = spec.find('!');
    if (bang != std::string::npos) {
        FlowModel f = dsl::elaborate(spec.substr(0, bang));
        dsl::Selector sel = dsl::parse_selector_text(spec.substr(bang + 1));
        return remove_orbit(f, dsl::resolve_selector(f, sel));
    }
    auto at = spec.find('@');
    if (at == std::string::npos)
        throw SelectorError("handle spec needs kind@polarity or 'expr ! selector'");
    std::string kind_part = spec.substr(0, at);
    std::string pol_part = spec.substr(at + 1);
    Polarity pol;
    if (pol_part == "rep" || pol_part == "repulsive") pol = Polarity::Repulsive;
    else if (pol_part == "att" || pol_part == "attractive") pol = Polarity::Attractive;
    else throw SelectorError("polarity must be rep or att");
    std::optional<OrbitIndex> variant;
    auto dotpos = kind_part.find('.');
    if (dotpos != std::string::npos) {
        std::string v = kind_part.substr(dotpos + 1);
        if (v == "d0") variant = OrbitIndex::Repulsive;
        else if (v == "d2") variant = OrbitIndex::Attractive;
        else throw SelectorError("handle variant must be d0 or d2");
        kind_part = kind_part.substr(0, dotpos);
    }
    BasicHandleKind kind;
    if (kind_part == "hdu") kind = BasicHandleKind::HDU;
    else if (kind_part == "ddu") kind = BasicHandleKind::DDU;
    else if (kind_part == "hu") kind = BasicHandleKind::HU;
    else if (kind_part == "du") kind = BasicHandleKind::DU;
    else throw SelectorError("handle kind must be hdu, ddu, hu or du");
    if (kind == BasicHandleKind::DDU && !variant)
        throw SelectorError("ddu needs a .d0 or .d2 variant");
    return basic_handle(kind, pol, variant);
}

// ---- verify suites ----

struct Verdict {
    int checks = 0, failed = 0;
    void check(bool ok, const std::string& what) {
        ++checks;
        if (!ok) {
            ++failed;
            std::cout << "  FAIL " << what << "\n";
        } else {
            std::cout << "  ok   " << what << "\n";
        }
    }
};

void verify_basic_catalog(Verdict& v) {
    auto shape = [](const FlowModel& f) { return links::canonicalize(f.link()).shape; };
    v.check(shape(basic_flow(BasicOp::I)) == "h·h·u", "I(h,h) = h·h·u");
    v.check(shape(basic_flow(BasicOp::II, OrbitIndex::Attractive)) == "h·d·u",
            "II(h,h) = h·d·u");
    v.check(shape(basic_flow(BasicOp::III)) == "d·d·u", "III(h,h) = d·d·u");
    v.check(basic_handle(BasicHandleKind::HDU, Polarity::Repulsive).handle_class() ==
                HandleClass::ClassI,
            "hdu belongs to class [I]");
    v.check(basic_handle(BasicHandleKind::DDU, Polarity::Repulsive, OrbitIndex::Attractive)
                    .handle_class() == HandleClass::ClassI,
            "ddu belongs to class [I]");
    v.check(basic_handle(BasicHandleKind::HU, Polarity::Repulsive).handle_class() ==
                HandleClass::ClassII,
            "hu belongs to class [II]");
    v.check(basic_handle(BasicHandleKind::DU, Polarity::Repulsive).handle_class() ==
                HandleClass::ClassIII,
            "du belongs to class [III]");
}

void verify_bitorus(Verdict& v) {
    auto rejected = [](BasicHandleKind a, std::optional<OrbitIndex> va, BasicHandleKind r,
                       std::optional<OrbitIndex> vr) {
        try {
            identify(basic_handle(a, Polarity::Attractive, va),
                     basic_handle(r, Polarity::Repulsive, vr));
            return false;
        } catch (const BitorusError&) {
            return true;
        }
    };
    v.check(rejected(BasicHandleKind::HDU, {}, BasicHandleKind::HU, {}),
            "hdu + hu is rejected (bitorus)");
    v.check(rejected(BasicHandleKind::HU, {}, BasicHandleKind::HDU, {}),
            "hu + hdu is rejected (bitorus)");
    v.check(rejected(BasicHandleKind::DDU, OrbitIndex::Repulsive, BasicHandleKind::HU, {}),
            "ddu + hu is rejected (bitorus)");
    v.check(!rejected(BasicHandleKind::HU, {}, BasicHandleKind::HU, {}),
            "hu + hu is admissible");
    v.check(!rejected(BasicHandleKind::HDU, {}, BasicHandleKind::DU, {}),
            "hdu + du is admissible");
}

void verify_class_closure(Verdict& v, int n) {
    std::size_t removals = 0;
    bool closed = true;
    for (int depth = 1; depth <= n; ++depth) {
        auto census = census::enumerate_flows(
            depth, {.dualize = false, .bound = n, .with_class_table = false});
        for (const auto& cf : census.flows)
            for (OrbitId k : cf.flow.removable_orbits()) {
                auto cls = classify(remove_orbit(cf.flow, k));
                ++removals;
                closed &= cls == HandleClass::ClassI || cls == HandleClass::ClassII ||
                          cls == HandleClass::ClassIII;
            }
    }
    v.check(closed, "every derivable handle (n <= " + std::to_string(n) + ", " +
                        std::to_string(removals) + " removals) lands in [I], [II] or [III]");
}

void verify_f3_chain(Verdict& v, int n) {
    FlowModel f = basic_flow(BasicOp::III);
    for (int depth = 1; depth <= n; ++depth) {
        auto chain = order::f3_chain(f);
        auto p = order::f3_poset(f);
        v.check(p.total() && chain.size() == static_cast<std::size_t>(depth) + 2,
                "operation-III flow with " + std::to_string(depth) +
                    " saddles is the chain d_r<u_1<...<u_" + std::to_string(depth) + "<d_a");
        if (depth < n) {
            OrbitId k = 0;
            for (OrbitId cand : f.removable_orbits())
                if (f.index_of(cand) == OrbitIndex::Attractive) k = cand;
            f = replace_orbit(f, k, BasicHandleKind::DU);
        }
    }
}

void verify_collision(Verdict& v) {
    auto census = census::enumerate_flows(2, {.with_class_table = false});
    bool found = false;
    for (const auto& g : census.collisions())
        if (g.link_text == "h·d0·d2·u·u" && g.flow_indices.size() >= 2)
            found = true;
    v.check(found, "n=2 census has non-equal flows sharing h·d0·d2·u·u");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"symbolic calculus of NMS flows on S^3 with unknotted saddle orbits"};
    app.require_subcommand(1);
    std::string format = "text", out_path, expr, selector, spec_a, spec_b, kind_str, suite,
                batch_path, selectors_extra;
    int n = 2;
    bool dualize = false, fat_rep = false, fat_att = false;

    auto* cmd_build = app.add_subcommand("build", "construct a flow from an expression");
    cmd_build->add_option("expr", expr, "flow expression")->required();
    cmd_build->add_option("--format", format, "text or json");
    cmd_build->add_option("--out", out_path, "output path (default: stdout)");
    cmd_build->add_option("--selectors", selectors_extra,
                          "comma-separated selectors appended to the outermost operation");

    auto* cmd_classify =
        app.add_subcommand("classify", "derive a fat handle and print its class");
    cmd_classify->add_option("expr", expr, "flow expression")->required();
    cmd_classify->add_option("selector", selector, "orbit selector, e.g. sep.d2#1")->required();

    auto* cmd_identify =
        app.add_subcommand("identify", "identify two fat handles along their boundaries");
    cmd_identify->add_option("attractive", spec_a, "handle spec, e.g. hu@att or 'expr ! sel'")
        ->required();
    cmd_identify->add_option("repulsive", spec_b, "handle spec, e.g. du@rep")->required();
    cmd_identify->add_option("--format", format, "text or json");

    auto* cmd_order = app.add_subcommand("order", "saddle order of a flow");
    cmd_order->add_option("expr", expr, "flow expression")->required();
    cmd_order->add_option("--format", format, "text, json or dot");

    auto* cmd_enum = app.add_subcommand("enumerate", "census of flows with n saddles");
    cmd_enum->add_option("--n", n, "saddle count")->required();
    cmd_enum->add_flag("--dualize", dualize, "quotient by the 0<->2 index reversal");
    cmd_enum->add_flag("--fat-rep", fat_rep, "list repulsive fat handles instead");
    cmd_enum->add_flag("--fat-att", fat_att, "list attractive fat handles instead");
    cmd_enum->add_option("--format", format, "text or json");
    cmd_enum->add_option("--out", out_path, "output path");

    auto* cmd_render = app.add_subcommand("render", "diagram export");
    cmd_render->add_option("expr", expr, "flow expression")->required();
    cmd_render->add_option("--kind", kind_str, "hasse, filtration or schematic")->required();
    cmd_render->add_option("--out", out_path, "output path (default: stdout)");

    auto* cmd_verify = app.add_subcommand("verify", "run the built-in assertion suites");
    cmd_verify
        ->add_option("suite", suite,
                     "basic-catalog, bitorus, class-closure, f3-chain, collision or all")
        ->required();
    cmd_verify->add_option("--n", n, "bound for the exhaustive suites");

    auto* cmd_batch = app.add_subcommand("batch", "build every expression in a file");
    cmd_batch->add_option("file", batch_path, "one expression per line, # comments")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? 0 : 2;
    }

    auto elaborate_with_extras = [&](const std::string& text) {
        dsl::FlowExpr e = dsl::parse(text);
        if (!selectors_extra.empty()) {
            std::stringstream ss(selectors_extra);
            std::string one;
            while (std::getline(ss, one, ','))
                e.selectors.push_back(dsl::parse_selector_text(one));
        }
        return dsl::elaborate(e);
    };

    try {
        if (*cmd_build) {
            FlowModel f = elaborate_with_extras(expr);
            if (format == "json") {
                write_out(out_path, f.json_string() + "\n");
            } else {
                std::ostringstream os;
                os << "link: " << link_text(f) << "\n";
                os << "canonical: " << f.canonical_form() << "\n";
                std::cout << os.str();
                print_construction(f);
            }
        } else if (*cmd_classify) {
            FlowModel f = dsl::elaborate(expr);
            dsl::Selector sel = dsl::parse_selector_text(selector);
            FatHandle h = remove_orbit(f, dsl::resolve_selector(f, sel));
            std::cout << h.shape() << " " << to_string(h.handle_class()) << " "
                      << (h.polarity() == Polarity::Repulsive ? "repulsive" : "attractive");
            if (h.lacks_side()) std::cout << " (lacks one side)";
            std::cout << "\n";
        } else if (*cmd_identify) {
            FatHandle a = parse_handle_spec(spec_a);
            FatHandle r = parse_handle_spec(spec_b);
            if (a.polarity() == Polarity::Repulsive && r.polarity() == Polarity::Attractive)
                std::swap(a, r);
            FlowModel f = identify(a, r);
            if (format == "json") {
                std::cout << f.json_string() << "\n";
            } else {
                std::cout << "link: " << link_text(f) << "\n";
                std::cout << "heteroclinic edges: " << f.heteroclinic_edges().size() << "\n";
            }
        } else if (*cmd_order) {
            FlowModel f = dsl::elaborate(expr);
            if (format == "dot") {
                auto p = order::saddle_poset(f);
                write_out(out_path, render::hasse_dot(p, f).body);
            } else if (format == "json") {
                auto p = order::saddle_poset(f);
                std::cout << order::poset_json(p, f) << "\n";
            } else {
                std::cout << sigma_cover_text(f) << "\n";
                if (order::is_f3(f)) {
                    auto chain = order::f3_chain(f);
                    std::cout << "chain: d_r";
                    for (std::size_t i = 1; i + 1 < chain.size(); ++i)
                        std::cout << "<" << f.display_name(chain[i]);
                    std::cout << "<d_a\n";
                }
            }
        } else if (*cmd_enum) {
            census::Options opts{.dualize = dualize, .bound = 0, .with_class_table = true};
            if (fat_rep || fat_att) {
                auto handles = census::enumerate_fat_handles(
                    n, fat_rep ? Polarity::Repulsive : Polarity::Attractive, opts);
                std::ostringstream os;
                for (const auto& h : handles)
                    os << h.handle.shape() << "\t" << to_string(h.handle.handle_class())
                       << "\t" << h.key << "\n";
                os << "total: " << handles.size() << "\n";
                write_out(out_path, os.str());
            } else {
                auto c = census::enumerate_flows(n, opts);
                std::ostringstream os;
                if (format == "json") {
                    os << "[\n";
                    for (std::size_t i = 0; i < c.flows.size(); ++i)
                        os << (i ? ",\n" : "") << c.flows[i].flow.json_string();
                    os << "\n]\n";
                } else {
                    for (const auto& cf : c.flows) {
                        std::size_t classes[3] = {0, 0, 0};
                        for (OrbitId k : cf.flow.removable_orbits())
                            ++classes[static_cast<std::size_t>(
                                classify(remove_orbit(cf.flow, k)))];
                        os << cf.key << "\t" << link_text(cf.flow) << "\tI:" << classes[0]
                           << ",II:" << classes[1] << ",III:" << classes[2] << "\n";
                    }
                    os << "flows: " << c.flows.size() << ", links: " << c.by_link.size()
                       << ", handle classes [I]/[II]/[III]: " << c.class_table[0] << "/"
                       << c.class_table[1] << "/" << c.class_table[2]
                       << ", collisions: " << c.collisions().size() << "\n";
                }
                write_out(out_path, os.str());
            }
        } else if (*cmd_render) {
            FlowModel f = dsl::elaborate(expr);
            render::DiagramDoc doc;
            if (kind_str == "hasse") {
                auto p = order::is_f3(f) ? order::f3_poset(f) : order::saddle_poset(f);
                doc = render::hasse_dot(p, f);
            } else if (kind_str == "filtration") {
                doc = render::filtration_dot(f);
            } else if (kind_str == "schematic") {
                doc = render::schematic_svg(f);
            } else {
                throw SelectorError("render kind must be hasse, filtration or schematic");
            }
            write_out(out_path, doc.body);
        } else if (*cmd_verify) {
            Verdict v;
            bool all = suite == "all";
            if (all || suite == "basic-catalog") verify_basic_catalog(v);
            if (all || suite == "bitorus") verify_bitorus(v);
            if (all || suite == "class-closure") verify_class_closure(v, n);
            if (all || suite == "f3-chain") verify_f3_chain(v, std::max(n, 3));
            if (all || suite == "collision") verify_collision(v);
            if (v.checks == 0) throw SelectorError("unknown suite: " + suite);
            std::cout << (v.failed == 0 ? "verify: all " : "verify: FAILED ")
                      << (v.failed == 0 ? std::to_string(v.checks) + " assertions passed"
                                        : std::to_string(v.failed) + " of " +
                                              std::to_string(v.checks))
                      << "\n";
            return v.failed == 0 ? 0 : 1;
        } else if (*cmd_batch) {
            std::ifstream in(batch_path);
            if (!in) throw Error("cannot open batch file: " + batch_path);
            std::string line;
            int lineno = 0;
            while (std::getline(in, line)) {
                ++lineno;
                auto first = line.find_first_not_of(" \t\r");
                if (first == std::string::npos) continue;
                if (line[first] == '#') continue; // comment line

                auto last = line.find_last_not_of(" \t\r");
                std::string e = line.substr(first, last - first + 1);
                try {
                    FlowModel f = dsl::elaborate(e);
                    std::cout << e << "\t" << link_text(f) << "\t"
                              << f.heteroclinic_edges().size() << " heteroclinic\n";
                } catch (const Error& err) {
                    std::cout << e << "\tERROR line " << lineno << ": " << err.what() << "\n";
                }
            }
        }
    } catch (const BitorusError& e) {
        std::cerr << "error: Bitorus - " << e.what() << "\n";
        return 1;
    } catch (const AmbiguityError& e) {
        std::cerr << "error: Ambiguity - " << e.what() << "\n";
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "error: Syntax - " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
