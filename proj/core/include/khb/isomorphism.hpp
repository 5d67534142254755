#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "khb/functor.hpp"
#include "khb/nat_trans.hpp"

namespace khb {

/// A natural isomorphism F => G: a bijection F(v) -> G(v) per vertex and a
/// bijection of edge correspondences per edge, compatible with sources,
/// targets and face matchings.
struct NaturalIsomorphism {
  /// vertex_maps[v.index()][i] is the image of element i of F(v).
  std::vector<std::vector<std::size_t>> vertex_maps;
  /// edge_maps[u.index() * n + (k - 1)] for the edge leaving u along k.
  std::vector<std::vector<std::size_t>> edge_maps;
};

struct IsoSearchOptions {
  /// Cap on backtracking nodes; std::length_error when exceeded.
  std::uint64_t max_nodes = 50'000'000;
};

/// Bounded exhaustive search. Elements are first partitioned by colour
/// refinement on the incidence structure, then vertex bijections and edge
/// fiber bijections are found by backtracking with face checks.
std::optional<NaturalIsomorphism> find_natural_isomorphism(const CubeFunctor& f, const CubeFunctor& g,
                                                           const IsoSearchOptions& options = {});

/// True iff `iso` is a natural isomorphism F => G.
bool is_natural_isomorphism(const CubeFunctor& f, const CubeFunctor& g, const NaturalIsomorphism& iso);

/// The transformation whose components are the graphs of the vertex maps
/// and whose mixed matchings come from the edge maps.
NaturalTransformation isomorphism_transformation(const CubeFunctor& f, const CubeFunctor& g,
                                                 const NaturalIsomorphism& iso);

}  // namespace khb
