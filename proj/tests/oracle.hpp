#pragma once

#include <cstddef>

#include "fathom/flow.hpp"

// Independent census oracle: generates every construction path depth-first
// with no canonical hashing and groups the results into isomorphism classes
// by pairwise backtracking matching.
namespace oracle {

bool isomorphic(const fathom::flows::FlowModel& a, const fathom::flows::FlowModel& b);

std::size_t census_count(int n, bool dualize);

std::size_t raw_path_count(int n);

} // namespace oracle
