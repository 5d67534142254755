#pragma once

#include <map>
#include <string>
#include <vector>

#include "khb/chain_complex.hpp"
#include "khb/functor.hpp"
#include "khb/serialization.hpp"

namespace khb {

/// A finite Δ-complex whose simplices have distinct vertices p_1..p_n.
struct Simplex {
  std::string id;
  /// Ordered vertices, 1-based.
  std::vector<int> verts;
  /// Ids of the codimension-one faces, face k omitting verts[k]. Empty means
  /// "derive from vertex sets", which requires them to be unambiguous.
  std::vector<std::string> faces;
};

struct DeltaComplex {
  int n_vertices = 0;
  std::vector<Simplex> simplices;

  /// Throws std::invalid_argument unless vertices are distinct and in range,
  /// ids are unique and every face is listed.
  void validate() const;
  /// Face k of simplex `index` as an index into `simplices`.
  std::size_t face(std::size_t index, std::size_t k) const;
  int dimension() const;
};

DeltaComplex delta_from_json(const json& j);
json delta_to_json(const DeltaComplex& x);
/// Closes a list of top simplices under taking faces (vertex sets as ids).
DeltaComplex simplicial_closure(int n_vertices, const std::vector<std::vector<int>>& top);

/// Σ^{-1}F_Δ on C(n): F(v) holds the simplices spanned exactly by the
/// vertices set in v; edges are face inclusions; every face matching is the
/// unique one.
StableFunctor delta_functor(const DeltaComplex& x);

/// The simplicial chain complex with alternating-sign boundary.
ChainComplex simplicial_chain_complex(const DeltaComplex& x);
std::map<int, HomologyGroup> simplicial_homology(const DeltaComplex& x);

}  // namespace khb
