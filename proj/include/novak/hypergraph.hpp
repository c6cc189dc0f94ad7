#pragma once

// Uniform hypergraphs, the auxiliary hypergraph of a cyclic design, and a
// randomized nibble edge colouring.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "novak/design.hpp"

namespace novak {

/// Uniform hypergraph with edges stored flat; each edge is sorted.
class Hypergraph {
 public:
  Hypergraph(std::uint32_t vertices, std::uint32_t uniformity);

  std::uint32_t vertex_count() const noexcept { return vertices_; }
  std::uint32_t uniformity() const noexcept { return r_; }
  std::size_t edge_count() const noexcept { return r_ ? flat_.size() / r_ : 0; }

  /// Throws InputError on wrong size, repeated or out-of-range vertices.
  void add_edge(std::span<const std::uint32_t> vertices);
  std::span<const std::uint32_t> edge(std::size_t e) const noexcept {
    return {flat_.data() + e * r_, r_};
  }

  std::vector<std::uint32_t> degrees() const;
  std::uint32_t max_degree() const;

 private:
  std::uint32_t vertices_;
  std::uint32_t r_;
  std::vector<std::uint32_t> flat_;
};

/// s_i in {s, s+1} summing to w, the first w - sm entries being s+1.
/// DomainError when sm > w or (s+1)m < w.
std::vector<std::uint32_t> assign_slots(std::size_t m, std::uint32_t w, std::uint32_t s);

/// Vertices 0..v-1 are Z_v, vertices v..v+w-1 are the slots u_{i,j}.
/// Edge e = slot * v + t is (base_i + t) ∪ {u_{i,j}}, with slots numbered
/// orbit-major. Only full orbits take part.
struct AuxiliaryHypergraph {
  Hypergraph graph{1, 1};
  std::uint32_t v = 0;
  std::uint32_t w = 0;  ///< floor((v-1)/k)
  std::uint32_t s = 0;
  std::vector<std::size_t> full_orbits;      ///< design orbit index per position
  std::vector<std::uint32_t> slots;          ///< s_i per position
  std::vector<std::uint32_t> slot_offset;    ///< first slot of each position
  std::vector<std::size_t> slot_position;    ///< position owning each slot

  // Verified on construction.
  std::uint32_t v_degree = 0;           ///< k w, shared by every point
  std::uint32_t w_degree = 0;           ///< v, shared by every slot
  std::uint32_t max_v_codegree = 0;
  std::uint32_t max_w_codegree = 0;     ///< 0
  std::uint32_t max_vw_codegree = 0;

  struct EdgeInfo {
    std::size_t position;  ///< index into full_orbits
    std::size_t orbit;     ///< design orbit index
    std::uint32_t slot;    ///< global slot, W vertex v + slot
    std::uint32_t j;       ///< slot index within the orbit
    Residue translate;
  };
  EdgeInfo edge_info(std::size_t e) const noexcept;
};

/// DomainError if there are no full orbits or the slot assignment is
/// infeasible; InconsistencyError if a verified field disagrees.
AuxiliaryHypergraph build_auxiliary_hypergraph(const CyclicDesign& design);

struct NibbleParams {
  double batch_fraction = 0.1;
  std::uint32_t max_rounds = 400;
};

struct Colouring {
  std::uint32_t colours = 0;
  std::vector<std::uint32_t> colour_of;  ///< per edge, in [0, colours)
  std::uint32_t rounds = 0;
  std::size_t nibble_coloured = 0;
  std::size_t greedy_coloured = 0;
};

enum class Execution { serial, parallel };

/// Nibble rounds colour a random batch of uncoloured edges with uniformly
/// random available colours; edges sharing a vertex and a colour inside a
/// batch are all dropped. A greedy pass finishes the rest. nullopt if some
/// edge has no colour left. Per-edge randomness is keyed on (seed, round,
/// edge), so the result does not depend on the execution mode or the number
/// of threads. InputError if colours == 0.
std::optional<Colouring> nibble_edge_colouring(const Hypergraph& graph, std::uint32_t colours,
                                               std::uint64_t seed, const NibbleParams& params = {},
                                               Execution exec = Execution::parallel);

/// Independent check: every vertex star carries distinct colours.
bool is_proper_colouring(const Hypergraph& graph, const Colouring& colouring);

}  // namespace novak
