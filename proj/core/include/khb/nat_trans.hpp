#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "khb/functor.hpp"
#include "khb/functor_ops.hpp"

namespace khb {

/// A natural transformation F -> F' packaged as a functor on C(n+1).
/// Coordinate 1 of the ambient cube selects the source (1) or target (0).
struct NaturalTransformation {
  CubeFunctor ambient;

  int dim() const { return ambient.dim() - 1; }
  CubeFunctor source() const;
  CubeFunctor target() const;
  /// The component correspondence F(v) -> F'(v).
  const Correspondence& component(const CubeVertex& v) const;
};

/// The face inclusion {bit}×C(n) -> C(n+1).
FaceInclusion slice_inclusion(int n, int bit);

/// Supplies the matching of a mixed face of the ambient functor, or nullopt to
/// request the unique matching.
using MixedMatchingFn = std::function<std::optional<std::vector<std::size_t>>(const CubeFunctor&, const CubeFace2&)>;

/// Assembles and validates η. `components[v.index()]` is the correspondence
/// F(v) -> F'(v) (elements given by index into F(v), F'(v)). Throws
/// std::invalid_argument if a mixed face has no determined matching or if
/// the ambient functor fails (C-0)-(C-2).
NaturalTransformation build_nat_trans(const CubeFunctor& f, const CubeFunctor& g,
                                      const std::vector<std::vector<SpanElement>>& components,
                                      const MixedMatchingFn& mixed = {});

NaturalTransformation identity_transformation(const CubeFunctor& f);

/// Translates an edge element id of the smaller functor to the id of the
/// matching edge element of the larger one.
using IdMap = std::function<std::string(const std::string&)>;

/// A -> B for injective set maps embed[v]: A(v) -> B(v) under which every
/// edge element of B leaving the image of A corresponds to an edge element of
/// A (ids translated by `edge_id`). Components have s = identity, t = embed.
NaturalTransformation inclusion_transformation(const CubeFunctor& a, const CubeFunctor& b,
                                               const std::vector<std::vector<std::size_t>>& embed,
                                               const IdMap& edge_id = {});

/// B -> Q for Q a quotient of B, with embed[v]: Q(v) -> B(v). Components have
/// s = embed, t = identity.
NaturalTransformation projection_transformation(const CubeFunctor& b, const CubeFunctor& q,
                                                const std::vector<std::vector<std::size_t>>& embed,
                                                const IdMap& edge_id = {});

/// Inclusion F^S -> F for S spanning a subcomplex.
NaturalTransformation sub_inclusion(const CubeFunctor& f, const ElementSubset& s);

/// The quotient F^S and the projection F -> F^S (complement of S a
/// subcomplex).
struct QuotientResult {
  CubeFunctor quotient;
  NaturalTransformation projection;
};
QuotientResult quotient_functor(const CubeFunctor& f, const ElementSubset& s);

/// Gluing of η: G -> F and η': G -> F' along their common source. H lives on
/// C(n+1) with H|{1} = G and H|{0} = F ⊔ F'; theta and theta_prime are the
/// inclusions F_ι -> H and F'_ι -> H, ι = slice_inclusion(n, 0).
struct GluedZigZag {
  CubeFunctor h;
  NaturalTransformation theta;
  NaturalTransformation theta_prime;
};
GluedZigZag glue_along_top(const NaturalTransformation& eta, const NaturalTransformation& eta_prime);

}  // namespace khb
