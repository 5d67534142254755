#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "khb/chain_complex.hpp"
#include "khb/functor.hpp"
#include "khb/serialization.hpp"

namespace khb {

/// A planar diagram code. Each crossing lists its four arc labels
/// counterclockwise starting from the incoming under-strand. Crossingless
/// components are counted separately.
struct PDCode {
  std::vector<std::array<int, 4>> crossings;
  int free_loops = 0;

  int crossing_count() const { return static_cast<int>(crossings.size()); }
  /// Largest arc label used by a crossing (0 if none).
  int max_label() const;
  /// Label given to free loop k so it can carry a basepoint.
  int free_loop_label(int k) const { return max_label() + 1 + k; }
  /// Every arc label, free loops included, ascending.
  std::vector<int> arc_labels() const;

  friend bool operator==(const PDCode&, const PDCode&) = default;
};

/// Accepts "PD[X(1,4,2,5),X[3,6,4,1],…]" (optionally with "Loop[k]" entries
/// for free loops) or the JSON form {"crossings":[[a,b,c,d],…],"free_loops":k}.
/// Validates the diagram; throws std::invalid_argument on any problem.
PDCode parse_pd(std::string_view text);
PDCode pd_from_json(const json& j);
json pd_to_json(const PDCode& pd);
std::string to_string(const PDCode& pd);

/// Throws std::invalid_argument unless every label occurs exactly twice, the
/// under-strand orientations are consistent and labels run consecutively
/// along every component.
void validate_pd(const PDCode& pd);

/// Orientation data traced from the under-passages.
struct PDOrientation {
  /// +1 or -1 per crossing.
  std::vector<int> sign;
  int n_plus = 0;
  int n_minus = 0;
  /// Arc labels of each component in the direction of travel.
  std::vector<std::vector<int>> components;
};
PDOrientation orient(const PDCode& pd);

struct CrossingSigns {
  int n_plus = 0;
  int n_minus = 0;
};
CrossingSigns crossing_signs(const PDCode& pd);

/// One end of a crossing: slot 0..3 stands for a, b, c, d.
struct CrossingEnd {
  int crossing = 0;
  int slot = 0;
  friend bool operator==(const CrossingEnd&, const CrossingEnd&) = default;
};

/// A resolution circle. `ends` lists the crossing ends met in order of
/// travel, starting with an arc; ends 2k+1 and 2k+2 (cyclically) form one
/// passage through a smoothing strand. Free loops have no ends.
struct Circle {
  std::vector<CrossingEnd> ends;
  std::vector<int> arcs;
  bool free_loop = false;
};

struct ResolvedDiagram {
  CubeVertex vertex;
  std::vector<Circle> circles;
  /// Circle index of every arc label.
  std::map<int, int> circle_of_arc;

  int circle_of(int arc) const { return circle_of_arc.at(arc); }
};

/// Smooths every crossing: the 0-resolution of (a,b,c,d) joins a–b and c–d,
/// the 1-resolution joins a–d and b–c. Circles are ordered by their first
/// crossing end; free loops come last.
ResolvedDiagram resolve(const PDCode& pd, const CubeVertex& v);

/// A labeling of the circles of a resolution; character k is '+' or '-'.
struct KhGenerator {
  CubeVertex vertex;
  std::string labels;
};
/// The canonical element id "bits:labels".
std::string generator_id(const KhGenerator& g);
/// All labelings at v in the order used for F_Kh(v) ("+" before "-",
/// circle 0 most significant).
std::vector<KhGenerator> generators(const PDCode& pd, const CubeVertex& v);

int quantum_grading(const PDCode& pd, const KhGenerator& g);

/// F_Kh(u -> v) for an edge u >=_1 v: elements "(y,x)" with x in F_Kh(u),
/// y in F_Kh(v) and x occurring in the Khovanov differential of y.
Correspondence edge_correspondence(const PDCode& pd, const CubeVertex& u, const CubeVertex& v);

/// A ladybug configuration on a face together with its right pair.
struct LadybugData {
  CubeFace2 face;
  int circle_w = 0;  // in the resolution at face.bottom
  int circle_u = 0;  // in the resolution at face.top
  /// Surgery points in travel order around C_w, as (crossing, strand) with
  /// strand 0 the a–b smoothing arc and strand 1 the c–d one.
  std::array<std::pair<int, int>, 4> surgery_points{};
  /// Arc labels starting the two right-pair segments of C_w.
  std::array<int, 2> right_pair{};
  /// Circles containing right-pair arc 1 and 2 at face.mid_a and face.mid_b.
  std::array<int, 2> circles_mid_a{};
  std::array<int, 2> circles_mid_b{};
};

/// Present iff C_w splits into two circles at both middle vertices that
/// merge again at the top, x labels C_u by x_- and z labels C_w by x_+.
std::optional<LadybugData> detect_ladybug(const PDCode& pd, const CubeFace2& face, const KhGenerator& x,
                                          const KhGenerator& z);

/// The matching on the fiber A_{x,z}: the element whose middle generator
/// labels the circle through right-pair arc 1 by x_- goes to its counterpart
/// on the other side, and likewise for x_+. `swap_numbering` exchanges the
/// roles of the two right-pair arcs.
BijectionOver ladybug_matching(const PDCode& pd, const LadybugData& data, const Correspondence& via_a,
                               const Correspondence& via_b, bool swap_numbering = false);

/// Matching on the composites of `face`, built fiber by fiber.
BijectionOver face_matching(const PDCode& pd, const CubeFace2& face);

/// Σ^{-n₋}F_Kh with per-element quantum gradings.
struct KhovanovFunctor {
  StableFunctor stable;
  /// quantum[v.index()][k] is the grading of element k of F(v).
  std::vector<std::vector<int>> quantum;
  int n_plus = 0;
  int n_minus = 0;
};

struct KhovanovOptions {
  /// Skip the coherence check done after construction.
  bool skip_validation = false;
  /// Worker threads for edges and faces (1 = serial).
  int jobs = 1;
};

/// Builds the functor; throws std::logic_error if it fails (C-0)–(C-2).
KhovanovFunctor build_khovanov_functor(const PDCode& pd, const KhovanovOptions& options = {});

/// Restriction to each quantum grading that occurs.
std::map<int, StableFunctor> split_by_quantum(const KhovanovFunctor& f);

/// The reduced functor at a basepoint arc: generators labeling the marked
/// circle x_-, with quantum gradings raised by one.
KhovanovFunctor reduced_functor(const PDCode& pd, int basepoint, const KhovanovOptions& options = {});
KhovanovFunctor reduced_functor(const PDCode& pd, const KhovanovFunctor& full, int basepoint);

/// True iff every edge element joins generators of equal quantum grading.
bool preserves_quantum_grading(const KhovanovFunctor& f);

/// One entry of a bigraded homology table.
struct KhRow {
  int i = 0;
  int j = 0;
  std::size_t rank = 0;
  std::vector<std::int64_t> torsion;
  friend bool operator==(const KhRow&, const KhRow&) = default;
};

/// Kh^{i,j} computed as homology of the dual of Σ^{-n₋}Tot(F^j), rows
/// sorted by (j, i), zero groups omitted. `jobs` > 1 processes quantum
/// gradings concurrently.
std::vector<KhRow> khovanov_homology(const KhovanovFunctor& f, int jobs = 1);
std::vector<KhRow> homology_table(const std::map<int, StableFunctor>& parts, int jobs = 1);
json kh_table_to_json(const std::vector<KhRow>& rows);
std::vector<KhRow> kh_table_from_json(const json& j);
std::string format_kh_table(const std::vector<KhRow>& rows);

/// Arcs of pd2 are relabeled past those of pd1; free loops are added.
PDCode disjoint_union_pd(const PDCode& pd1, const PDCode& pd2);

struct ConnectSum {
  PDCode pd;
  /// Label of the arc running from the cut of pd1 into pd2.
  int basepoint = 0;
};
/// Splices arc p1 of pd1 with arc p2 of pd2 and renumbers arcs so labels
/// run consecutively along every component.
ConnectSum connect_sum_pd(const PDCode& pd1, int p1, const PDCode& pd2, int p2);

}  // namespace khb
