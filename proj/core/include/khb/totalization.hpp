#pragma once

#include <vector>

#include "khb/chain_complex.hpp"
#include "khb/functor.hpp"
#include "khb/nat_trans.hpp"

namespace khb {

/// Σ^r Tot(F). The summand of F(v) sits in degree |v|+r; within a degree the
/// summands are ordered by vertex, descending (111 before 110), and elements
/// keep their order in F(v). Basis labels are "vertex/element". The
/// differential component of an edge u -> v is (-1)^{s_{u,v}} times the
/// linearized correspondence. Throws std::invalid_argument if (C-0) fails.
ChainComplex tot(const StableFunctor& f);
ChainComplex tot(const CubeFunctor& f, int shift = 0);

/// The chain map Tot(F) -> Tot(F') of η, built from the unsigned linearized
/// components, so that Tot of the ambient functor is its mapping cone.
ChainMap tot_nat_trans(const NaturalTransformation& eta);

/// t_v in Z/2 for each vertex of C(n) (indexed by vertex index).
struct SignTwist {
  std::vector<int> t;
};

/// The twist solving t_u + t_v = |ι| + s_{u,v} + s_{ι(u),ι(v)} with t = 0 at
/// 0...0, and the chain isomorphism Tot(F_ι) -> Σ^{|ι|}Tot(F) given by
/// (-1)^{t_v} on the summand of v. The target carries the suspension sign
/// (see suspend), which is what makes |ι| appear in the equation. Throws std::logic_error if the equation
/// system is inconsistent.
struct FaceShiftIso {
  SignTwist twist;
  ChainMap map;
};
FaceShiftIso face_shift_iso(const CubeFunctor& f, const FaceInclusion& iota);

/// True iff the twist satisfies its defining equation on every edge of C(n).
bool twist_satisfies_closure(const SignTwist& twist, const FaceInclusion& iota);

}  // namespace khb
