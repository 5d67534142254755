#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "khb/matrix.hpp"

namespace khb {

/// A bounded chain complex of finitely generated free abelian groups with
/// homological grading: d(deg) maps degree deg to degree deg-1.
class ChainComplex {
 public:
  /// Basis labels of C_deg (empty if the group is zero).
  const std::vector<std::string>& basis(int deg) const;
  std::size_t rank(int deg) const { return basis(deg).size(); }
  void set_basis(int deg, std::vector<std::string> labels);

  /// The matrix of C_deg -> C_{deg-1}; a zero matrix of the right shape if unset.
  IntegerMatrix d(int deg) const;
  /// Stores the differential out of degree `deg`. Shapes must match the bases.
  void set_d(int deg, IntegerMatrix m);

  /// Degrees carrying a nonzero group, ascending.
  std::vector<int> degrees() const;
  bool empty() const { return degrees().empty(); }
  std::size_t total_rank() const;

  /// True iff d(deg-1)·d(deg) = 0 for every degree.
  bool d_squared_zero() const;
  /// Throws std::logic_error unless d_squared_zero().
  void check() const;

 private:
  std::map<int, std::vector<std::string>> basis_;
  std::map<int, IntegerMatrix> d_;
};

/// A degree-preserving homomorphism between complexes.
struct ChainMap {
  ChainComplex source;
  ChainComplex target;
  std::map<int, IntegerMatrix> maps;

  /// The matrix source_deg -> target_deg; zero of the right shape if unset.
  IntegerMatrix at(int deg) const;
  /// True iff f·d = d·f in every degree.
  bool commutes() const;
};

ChainMap identity_map(const ChainComplex& c);
/// g∘f.
ChainMap compose(const ChainMap& g, const ChainMap& f);

/// H_deg = Z^rank ⊕ ⊕ Z/torsion[i], torsion ascending with each entry
/// dividing the next.
struct HomologyGroup {
  int degree = 0;
  std::size_t rank = 0;
  std::vector<std::int64_t> torsion;

  bool is_zero() const { return rank == 0 && torsion.empty(); }
  friend bool operator==(const HomologyGroup&, const HomologyGroup&) = default;
};

/// U·M·V = D with U, V unimodular and D diagonal, d_1 | d_2 | ... and
/// nonnegative diagonal.
struct SmithForm {
  IntegerMatrix u;
  IntegerMatrix d;
  IntegerMatrix v;
  std::vector<std::int64_t> invariant_factors() const;
};
SmithForm smith_normal_form(const IntegerMatrix& m);

/// Nonzero invariant factors of m, ascending, without transformation
/// matrices. Uses sparse unit-pivot elimination, then a dense reduction.
std::vector<std::int64_t> invariant_factors(const IntegerMatrix& m);

/// Integral homology in every degree where the complex is nonzero.
std::map<int, HomologyGroup> homology(const ChainComplex& c);
std::string to_string(const HomologyGroup& h);

/// The mapping cone: Cone_d = C_{d-1} ⊕ D_d with d(a,b) = (-∂a, f(a)+∂b).
/// Source labels get the prefix "1", target labels "0".
ChainComplex cone(const ChainMap& f);

/// True iff f induces an isomorphism on integral homology in every degree,
/// decided by acyclicity of the mapping cone.
bool is_quasi_iso(const ChainMap& f);

/// Cochain complex of c in homological convention: degree d becomes -d and
/// the differentials are transposed.
ChainComplex dualize(const ChainComplex& c);

/// Σ^r: every degree shifted up by r, differentials unchanged.
ChainComplex shift(const ChainComplex& c, int r);

/// Σ^r with the suspension sign: degrees shifted up by r and every
/// differential multiplied by (-1)^r.
ChainComplex suspend(const ChainComplex& c, int r);

/// a ⊕ b with labels prefixed "0:" and "1:" (in that block order).
ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b);

/// a ⊗ b with the Koszul sign ∂(x⊗y) = ∂x⊗y + (-1)^|x| x⊗∂y. Labels are
/// "x⊗y", ordered with x major.
ChainComplex tensor(const ChainComplex& a, const ChainComplex& b);

/// True iff relabel maps the basis of a onto the basis of b degreewise and
/// the differentials agree entrywise under that identification.
bool isomorphic_by_labels(const ChainComplex& a, const ChainComplex& b,
                          const std::function<std::string(const std::string&)>& relabel);

}  // namespace khb
