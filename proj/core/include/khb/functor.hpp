#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "khb/burnside.hpp"
#include "khb/cube.hpp"

namespace khb {

/// An element of a two-step composite: (element of the second edge, element
/// of the first edge), as indices into the edge correspondences.
using CompositePair = std::pair<std::size_t, std::size_t>;

/// The data of a strictly unitary lax 2-functor C(n) -> B: a finite set per
/// vertex, a correspondence per edge and a 2-morphism per canonically oriented
/// 2-face (from the composite through mid_a to the composite through mid_b).
/// Face matchings may be left unset, in which case the object only carries
/// the vertex and edge data.
class CubeFunctor {
 public:
  CubeFunctor() : CubeFunctor(0) {}
  explicit CubeFunctor(int n);

  int dim() const { return n_; }

  const FiniteSet& set(const CubeVertex& v) const { return *sets_[checked(v)]; }
  const SetPtr& set_ptr(const CubeVertex& v) const { return sets_[checked(v)]; }
  /// Replaces F(v). Edges touching v are reset to empty correspondences and
  /// matchings on faces touching v are cleared.
  void set_set(const CubeVertex& v, SetPtr elements);

  const Correspondence& edge(const CubeVertex& u, const CubeVertex& v) const;
  void set_edge(const CubeVertex& u, const CubeVertex& v, std::vector<SpanElement> elements);
  void set_edge(const CubeVertex& u, const CubeVertex& v, const Correspondence& c);

  /// Elements of the composite through mid_a (via_a) or mid_b, ordered
  /// lexicographically by (second edge element, first edge element).
  std::vector<CompositePair> face_composite(const CubeFace2& f, bool via_a) const;
  Correspondence face_composite_correspondence(const CubeFace2& f, bool via_a) const;

  bool has_face_matching(const CubeFace2& f) const;
  /// Indices into the composite through mid_b, one per element of the
  /// composite through mid_a. Faces whose composites are empty always have
  /// the empty matching.
  const std::vector<std::size_t>& face_matching(const CubeFace2& f) const;
  void set_face_matching(const CubeFace2& f, std::vector<std::size_t> map);
  void clear_face_matching(const CubeFace2& f);
  BijectionOver face_bijection(const CubeFace2& f) const;

  /// Every 2-face carries a matching.
  bool complete() const;
  std::size_t total_elements() const;

 private:
  std::size_t checked(const CubeVertex& v) const;
  std::size_t edge_slot(const CubeVertex& u, const CubeVertex& v) const;
  std::uint64_t face_key(const CubeFace2& f) const;

  int n_ = 0;
  std::vector<SetPtr> sets_;
  std::vector<Correspondence> edges_;
  std::unordered_map<std::uint64_t, std::vector<std::size_t>> faces_;
};

/// A functor together with a formal grading shift, written Σ^r F.
struct StableFunctor {
  CubeFunctor functor;
  int shift = 0;
};

/// Outcome of a validation pass. `violations` lists human-readable findings.
struct ValidationReport {
  std::string condition;
  bool ok = true;
  std::vector<std::string> violations;

  void fail(std::string message) {
    ok = false;
    violations.push_back(std::move(message));
  }
};

/// Both composites of every 2-face have the same cardinality.
ValidationReport validate_c0(const CubeFunctor& f);
/// Every face matching is present and is a 2-morphism; the reverse
/// orientation is its inverse by construction.
ValidationReport validate_c1(const CubeFunctor& f);
/// The six matchings around every 3-face compose to the identity.
ValidationReport validate_c2(const CubeFunctor& f);
/// validate_c1 followed by validate_c2.
ValidationReport validate_coherence(const CubeFunctor& f);

std::string describe_face(const CubeFace2& f);

/// Transports composite elements along maximal chains using the stored face
/// matchings. Caches per-face lookup tables; not safe for concurrent use.
class ChainTransport {
 public:
  explicit ChainTransport(const CubeFunctor& f) : f_(f) {}

  /// Elements of the iterated fiber product along `c` as tuples of edge
  /// element indices, first edge first, sorted with the last edge most
  /// significant.
  std::vector<std::vector<std::size_t>> chain_elements(const MaximalChain& c) const;

  /// Image of `tuple` (along `c`) under the swap replacing vertex z_i.
  /// Returns the new chain in `out_chain`.
  std::vector<std::size_t> swap(const MaximalChain& c, std::size_t i, const std::vector<std::size_t>& tuple,
                                MaximalChain* out_chain = nullptr);

 private:
  struct FaceTables {
    std::vector<CompositePair> via_a;
    std::vector<CompositePair> via_b;
    std::unordered_map<std::uint64_t, std::size_t> index_a;
    std::unordered_map<std::uint64_t, std::size_t> index_b;
    std::vector<std::size_t> inverse;
  };
  FaceTables& tables(const CubeFace2& face);

  const CubeFunctor& f_;
  std::unordered_map<std::uint64_t, FaceTables> cache_;
};

/// The iterated fiber product along the chain. Elements are named
/// "e_k∘...∘e_1" and ordered as in ChainTransport::chain_elements. A chain of
/// length 0 gives the identity correspondence.
Correspondence composite_along_chain(const CubeFunctor& f, const MaximalChain& c);

/// The 2-morphism between the composites along c1 and c2 obtained by
/// composing face matchings along chain_swap_path(c1, c2). Unless
/// `assume_coherent` is set, the functor is validated first and
/// std::invalid_argument is thrown if it is not coherent.
BijectionOver reconstruct_two_morphism(const CubeFunctor& f, const MaximalChain& c1, const MaximalChain& c2,
                                       bool assume_coherent = false);

/// Transport along an explicit sequence of swap positions; returns the chain
/// reached and the index map from composite(c) to composite(result).
std::pair<MaximalChain, std::vector<std::size_t>> transport_along_swaps(const CubeFunctor& f,
                                                                        const MaximalChain& c,
                                                                        const std::vector<std::size_t>& positions);

/// The coherence 2-morphism F_{u,v,w}: composite along canonical(v,w) ∪
/// canonical(u,v) -> composite along canonical(u,w), as an index map. The
/// canonical chain clears coordinates in increasing order.
std::vector<std::size_t> lax_composition_map(const CubeFunctor& f, const CubeVertex& u, const CubeVertex& v,
                                             const CubeVertex& w);
MaximalChain canonical_chain(const CubeVertex& u, const CubeVertex& v);

struct MatchingSearchOptions {
  /// Cap on the number of candidate bijections of a single face.
  std::uint64_t max_face_bijections = 3628800;  // 10!
  /// Cap on the number of faces without a preset matching.
  std::size_t max_faces = 64;
  /// Stop after this many coherent assignments.
  std::size_t max_solutions = static_cast<std::size_t>(-1);
};

/// All completions of the preset face matchings of `partial` to data on every
/// 2-face satisfying (C-1) and (C-2). Throws std::invalid_argument if (C-0)
/// fails and std::length_error if a search cap is exceeded.
std::vector<CubeFunctor> enumerate_matchings(const CubeFunctor& partial, const MatchingSearchOptions& options = {});

}  // namespace khb
