#pragma once

#include <string>

#include "fathom/flow.hpp"
#include "fathom/order.hpp"

namespace fathom::render {

struct DiagramDoc {
    enum class Kind : std::uint8_t { Hasse, Filtration, Schematic };
    Kind kind = Kind::Hasse;
    std::string body;

    const char* extension() const {
        return kind == Kind::Schematic ? "svg" : "dot";
    }
};

// Covering relation only, one node per poset element, deterministic order.
DiagramDoc hasse_dot(const order::SaddlePoset& p, const flows::FlowModel& flow);

// The construction chain M1 -> ... -> MN annotated with the attached handle
// kind and class; commuting step pairs are marked with dashed edges.
DiagramDoc filtration_dot(const flows::FlowModel& flow);

// Cross-section cartoon: nested circles for the region structure, dots for
// non-saddle orbits (hollow repulsive, filled attractive), crossed dots for
// saddles, dashed arcs for heteroclinic connections.
DiagramDoc schematic_svg(const flows::FlowModel& flow, std::size_t max_saddles = 8);

} // namespace fathom::render
