#pragma once

#include <cstdint>

namespace fathom {

// Index of a periodic orbit: 0 repulsive, 1 saddle, 2 attractive.
enum class OrbitIndex : std::uint8_t { Repulsive = 0, Saddle = 1, Attractive = 2 };

using OrbitId = std::uint32_t;

enum class Polarity : std::uint8_t { Repulsive, Attractive };

constexpr OrbitIndex opposite(OrbitIndex i) {
    return i == OrbitIndex::Repulsive ? OrbitIndex::Attractive
         : i == OrbitIndex::Attractive ? OrbitIndex::Repulsive
                                       : OrbitIndex::Saddle;
}

constexpr Polarity opposite(Polarity p) {
    return p == Polarity::Repulsive ? Polarity::Attractive : Polarity::Repulsive;
}

constexpr char index_digit(OrbitIndex i) {
    return i == OrbitIndex::Repulsive ? '0' : i == OrbitIndex::Saddle ? '1' : '2';
}

} // namespace fathom
