#pragma once

#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "fathom/flow.hpp"
#include "fathom/link.hpp"

namespace fathom::dsl {

// Textual selector naming a removable component:
//   [left:|right:|at:] hopf.<0|2>[#n] | sep.<d0|d2>[#n] | #n
// left/right name the argument the removed component is taken from; `at`
// names the orbit of the iterated flow that the attachment replaces.
struct Selector {
    enum class Side : std::uint8_t { Default, Left, Right, At };
    enum class Role : std::uint8_t { Hopf, Sep, Position };
    Side side = Side::Default;
    Role role = Role::Hopf;
    OrbitIndex index = OrbitIndex::Repulsive;
    int ordinal = 0;  // 1-based; 0 when unspecified
    int position = 0; // for Role::Position

    bool operator==(const Selector&) const = default;
    std::string text() const;
};

struct FlowExpr {
    enum class Kind : std::uint8_t { Leaf, OpI, OpII, OpIII };
    Kind kind = Kind::Leaf;
    std::unique_ptr<FlowExpr> left, right;
    std::vector<Selector> selectors;

    FlowExpr() = default;
    FlowExpr(const FlowExpr& o) { *this = o; }
    FlowExpr& operator=(const FlowExpr& o);
    FlowExpr(FlowExpr&&) = default;
    FlowExpr& operator=(FlowExpr&&) = default;

    bool is_leaf() const { return kind == Kind::Leaf; }
    bool equals(const FlowExpr& o) const;
};

// Grammar: expr := 'h' | op '(' expr ',' expr [';' selectors] ')'
//          op   := 'I' | 'II' | 'III'
// Whitespace-insensitive; syntax errors carry the offending offset.
FlowExpr parse(std::string_view text);

// Round-trips: parse(print(e)) structurally equals e.
std::string print(const FlowExpr& e);

// Pure link-algebra evaluation of the expression.
links::IndexedLink link_eval(const FlowExpr& e);

// Builds the flow by basic-handle replacement along the expression. Needs a
// Hopf-link argument at every operation; unresolved choices that lead to
// non-equivalent flows raise AmbiguityError naming the candidates.
flows::FlowModel elaborate(const FlowExpr& e);
flows::FlowModel elaborate(std::string_view text);

// An expression with fully explicit selectors rebuilding the given flow.
std::string expression_of(const flows::FlowModel& flow);

// Stand-alone selector parsing/resolution (command-line use).
Selector parse_selector_text(std::string_view text);
OrbitId resolve_selector(const flows::FlowModel& flow, const Selector& sel);

} // namespace fathom::dsl
