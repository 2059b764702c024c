#include "markoff/graph.hpp"

#include <algorithm>
#include <array>
#include <stdexcept>

#include "markoff/union_find.hpp"

namespace markoff {

namespace {

constexpr std::array<Move, 3> kDehn = {Move::D1, Move::D2, Move::D3};
constexpr std::array<Move, 6> kMovesPerms = {Move::M1, Move::M2,  Move::M3,
                                             Move::T12, Move::T23, Move::T13};
constexpr std::array<Move, 9> kMovesPermsSigns = {Move::M1,  Move::M2,  Move::M3,
                                                  Move::T12, Move::T23, Move::T13,
                                                  Move::S12, Move::S13, Move::S23};

u64 pack(Triple t, u64 p) { return (static_cast<u64>(t.x) * p + t.y) * p + t.z; }

}  // namespace

std::span<const Move> generators(GeneratorSet gens) {
  switch (gens) {
    case GeneratorSet::Dehn: return kDehn;
    case GeneratorSet::MovesPerms: return kMovesPerms;
    case GeneratorSet::MovesPermsSigns: return kMovesPermsSigns;
  }
  throw std::logic_error("unknown generator set");
}

std::string to_string(GeneratorSet gens) {
  switch (gens) {
    case GeneratorSet::Dehn: return "dehn";
    case GeneratorSet::MovesPerms: return "perms";
    case GeneratorSet::MovesPermsSigns: return "full";
  }
  throw std::logic_error("unknown generator set");
}

GeneratorSet generator_set_from_string(const std::string& name) {
  if (name == "dehn") return GeneratorSet::Dehn;
  if (name == "perms") return GeneratorSet::MovesPerms;
  if (name == "full") return GeneratorSet::MovesPermsSigns;
  throw std::invalid_argument("unknown generator set '" + name + "' (expected dehn|perms|full)");
}

u64 MarkoffGraph::total_loops() const {
  u64 total = 0;
  for (auto c : loops) total += c;
  return total;
}

u32 MarkoffGraph::index_of(Triple t) const {
  auto it = std::lower_bound(vertices.begin(), vertices.end(), t);
  if (it == vertices.end() || *it != t) throw std::out_of_range("triple is not a vertex");
  return static_cast<u32>(it - vertices.begin());
}

MarkoffGraph build_graph(const LevelSurface& surface, GeneratorSet gens, bool exclude_origin) {
  if (exclude_origin && surface.k() != 0) {
    throw std::invalid_argument("build_graph: exclude_origin requires k = 0");
  }

  MarkoffGraph g;
  g.p = surface.p();
  g.k = surface.k();
  g.a = surface.a();
  g.gens = gens;
  g.origin_excluded = exclude_origin;
  g.vertices = surface.enumerate_solutions();
  if (exclude_origin) {
    std::erase(g.vertices, Triple{0, 0, 0});
  }
  const std::size_t V = g.vertices.size();
  if (V == 0) throw std::invalid_argument("build_graph: empty surface");

  std::vector<u64> keys(V);
  for (std::size_t i = 0; i < V; ++i) keys[i] = pack(g.vertices[i], g.p);

  auto index_of = [&](Triple t) {
    u64 key = pack(t, g.p);
    auto it = std::lower_bound(keys.begin(), keys.end(), key);
    if (it == keys.end() || *it != key) throw std::logic_error("move image is not a vertex");
    return static_cast<u32>(it - keys.begin());
  };

  auto moves = generators(gens);
  g.offsets.assign(V + 1, 0);
  g.neighbors.reserve(V * moves.size());
  g.loops.assign(V, 0);

  std::vector<u32> row;
  for (std::size_t v = 0; v < V; ++v) {
    row.clear();
    for (Move m : moves) {
      row.push_back(index_of(surface.apply(m, g.vertices[v])));
    }
    if (gens == GeneratorSet::Dehn) {
      for (u32 w : row) {
        if (w == v) ++g.loops[v];
      }
    } else {
      std::sort(row.begin(), row.end());
      row.erase(std::unique(row.begin(), row.end()), row.end());
      std::erase(row, static_cast<u32>(v));
    }
    g.neighbors.insert(g.neighbors.end(), row.begin(), row.end());
    g.offsets[v + 1] = static_cast<u32>(g.neighbors.size());
  }
  return g;
}

std::vector<u64> connected_components(const MarkoffGraph& g) {
  const std::size_t V = g.vertex_count();
  UnionFind uf(V);
  for (std::size_t v = 0; v < V; ++v) {
    for (u32 i = g.offsets[v]; i < g.offsets[v + 1]; ++i) {
      uf.unite(v, g.neighbors[i]);
    }
  }
  auto raw = uf.component_sizes();
  return {raw.begin(), raw.end()};
}

std::vector<ComponentRow> component_table(u64 p_min, u64 p_max, u64 a, GeneratorSet gens) {
  std::vector<ComponentRow> rows;
  for (u64 p : primes_in_range(std::max<u64>(p_min, 5), p_max)) {
    PrimeField field(p);
    for (u64 k = 0; k < p; ++k) {
      LevelSurface s(field, k, a);
      MarkoffGraph g = build_graph(s, gens, false);
      rows.push_back({p, k, a, gens, connected_components(g)});
    }
  }
  return rows;
}

std::string edge_list(const MarkoffGraph& g) {
  std::string out;
  for (std::size_t v = 0; v < g.vertex_count(); ++v) {
    for (u32 i = g.offsets[v]; i < g.offsets[v + 1]; ++i) {
      u32 w = g.neighbors[i];
      if (w >= v) {
        out += std::to_string(v);
        out += ' ';
        out += std::to_string(w);
        out += '\n';
      }
    }
  }
  return out;
}

}  // namespace markoff
