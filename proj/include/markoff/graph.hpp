#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "markoff/surface.hpp"

// The Markoff graph of a level surface in compressed sparse row form.
// With the Dehn generators the graph is 3-regular once generator fixed
// points are counted as single loops (diagonal weight 1), which keeps the
// adjacency spectrum inside [-3, 3] with top eigenvalue exactly 3.

namespace markoff {

enum class GeneratorSet {
  Dehn,             // D1, D2, D3
  MovesPerms,       // M1..M3, T12, T23, T13
  MovesPermsSigns,  // the above plus S12, S13, S23
};

std::span<const Move> generators(GeneratorSet gens);
std::string to_string(GeneratorSet gens);
GeneratorSet generator_set_from_string(const std::string& name);  // dehn | perms | full

struct MarkoffGraph {
  u64 p = 0, k = 0, a = 0;
  GeneratorSet gens = GeneratorSet::Dehn;
  bool origin_excluded = false;

  std::vector<Triple> vertices;      // lexicographic order
  std::vector<u32> offsets;          // size V+1
  std::vector<u32> neighbors;        // CSR; a loop appears as the vertex itself
  std::vector<std::uint8_t> loops;   // per-vertex loop count

  std::size_t vertex_count() const { return vertices.size(); }
  u64 total_loops() const;
  /// Dense index of a triple (binary search).  Throws if absent.
  u32 index_of(Triple t) const;
};

/// Vertices are the enumerated solutions, minus the origin when requested
/// (only meaningful for k = 0; anything else throws).  For the Dehn set each
/// row is the multiset {D1 v, D2 v, D3 v}; for extended sets rows are
/// deduplicated and self-images dropped, since only connectivity matters.
MarkoffGraph build_graph(const LevelSurface& surface, GeneratorSet gens, bool exclude_origin);

/// Component sizes, ascending.  Union-find over all CSR edges.
std::vector<u64> connected_components(const MarkoffGraph& g);

struct ComponentRow {
  u64 p, k, a;
  GeneratorSet gens;
  std::vector<u64> sizes;  // ascending
};

/// One row per (p, k) with p prime in [p_min, p_max] and 0 <= k < p.
std::vector<ComponentRow> component_table(u64 p_min, u64 p_max, u64 a, GeneratorSet gens);

/// Edge list with one "u v" line per undirected edge, loops as "v v".
std::string edge_list(const MarkoffGraph& g);

}  // namespace markoff
