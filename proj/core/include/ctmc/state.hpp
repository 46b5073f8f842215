#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <utility>

#include "ctmc/errors.hpp"

namespace ctmc {

/// Opaque handle for a state of a countable chain.  Each model family fixes
/// a bijection between its mathematical state space and a subset of int64
/// codes; all library containers sort by code, which makes every enumeration
/// order deterministic.
struct StateId {
  std::int64_t code = 0;

  friend constexpr bool operator==(StateId a, StateId b) { return a.code == b.code; }
  friend constexpr auto operator<=>(StateId a, StateId b) { return a.code <=> b.code; }
};

// ---------------------------------------------------------------------------
// Line codec: chains on Z or Z+.  The code is the coordinate itself.
// ---------------------------------------------------------------------------

constexpr StateId line_state(std::int64_t x) { return StateId{x}; }
constexpr std::int64_t line_point(StateId s) { return s.code; }

// ---------------------------------------------------------------------------
// Grid codec: chains on Z^2 (quadrant, planar walks).  Packs the pair
// (x1, x2) into hi/lo 32-bit halves; injective for |xi| < 2^31.
// ---------------------------------------------------------------------------

inline StateId grid_state(std::int64_t x1, std::int64_t x2) {
  constexpr std::int64_t kLim = std::int64_t{1} << 31;
  if (x1 < -kLim || x1 >= kLim || x2 < -kLim || x2 >= kLim) {
    throw EncodingError("grid_state: coordinate outside +-2^31 codec range");
  }
  const auto hi = static_cast<std::uint64_t>(static_cast<std::uint32_t>(x1));
  const auto lo = static_cast<std::uint64_t>(static_cast<std::uint32_t>(x2));
  return StateId{static_cast<std::int64_t>((hi << 32) | lo)};
}

inline std::pair<std::int64_t, std::int64_t> grid_point(StateId s) {
  const auto bits = static_cast<std::uint64_t>(s.code);
  const auto x1 = static_cast<std::int32_t>(bits >> 32);
  const auto x2 = static_cast<std::int32_t>(bits & 0xffffffffu);
  return {x1, x2};
}

// ---------------------------------------------------------------------------
// Ray-bundle codec: a root plus countably many rays ("branches"), used by
// the scattering-tree family.  Branch n >= 1, height x1 >= 1; the root is
// (0, 0).  Same packing as the grid codec.
// ---------------------------------------------------------------------------

inline StateId tree_root() { return grid_state(0, 0); }

inline StateId tree_state(std::int64_t branch, std::int64_t height) {
  if (branch < 1 || height < 1) {
    throw EncodingError("tree_state: branch and height must be >= 1");
  }
  return grid_state(branch, height);
}

inline std::pair<std::int64_t, std::int64_t> tree_point(StateId s) { return grid_point(s); }

inline bool is_tree_root(StateId s) { return s == tree_root(); }

}  // namespace ctmc

template <>
struct std::hash<ctmc::StateId> {
  std::size_t operator()(ctmc::StateId s) const noexcept {
    return std::hash<std::int64_t>{}(s.code);
  }
};
