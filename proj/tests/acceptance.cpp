// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. All comparisons are exact.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "khb/certificate.hpp"
#include "khb/functor_ops.hpp"
#include "khb/isomorphism.hpp"
#include "khb/khovanov.hpp"
#include "khb/simplicial.hpp"
#include "khb/totalization.hpp"
#include "support.hpp"

using namespace khb;
using namespace khb::test;

namespace {

struct Verdict {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      if (!ok) detail << "; ";
      ok = false;
      detail << what;
    }
  }
};

std::map<int, HomologyGroup> nonzero(const std::map<int, HomologyGroup>& h) {
  std::map<int, HomologyGroup> out;
  for (const auto& [d, g] : h)
    if (!g.is_zero()) out[d] = g;
  return out;
}

std::string describe(const std::map<int, HomologyGroup>& h) {
  std::string s;
  for (const auto& [d, g] : h) s += (s.empty() ? "" : ", ") + std::string("H") + std::to_string(d) + "=" + to_string(g);
  return s.empty() ? "0" : s;
}

std::vector<KhRow> kh_of(const PDCode& pd) { return khovanov_homology(build_khovanov_functor(pd)); }

// Corpus functors: every abstract fixture, every Khovanov functor and every
// Δ-complex functor, by display name.
std::vector<std::pair<std::string, StableFunctor>> all_corpus_functors(int max_dim) {
  std::vector<std::pair<std::string, StableFunctor>> out;
  for (const auto& name : corpus_functors()) {
    auto f = load_functor(name);
    if (f.functor.dim() <= max_dim) out.emplace_back("functors/" + name, f);
  }
  for (const auto& c : enumerate_matchings(load_functor("multiple_extend").functor))
    if (c.dim() <= max_dim) out.emplace_back("multiple_extend completion", StableFunctor{c, 0});
  for (const auto& name : corpus_diagrams()) {
    auto pd = load_pd(name);
    if (pd.crossing_count() <= max_dim) out.emplace_back("kh/" + name, build_khovanov_functor(pd).stable);
  }
  for (const char* name : {"point", "boundary_tetrahedron", "rp2_6", "torus_7"}) {
    auto f = delta_functor(load_delta(name));
    if (f.functor.dim() <= max_dim) out.emplace_back(std::string("delta/") + name, f);
  }
  return out;
}

Verdict coherence_over_corpus() {
  Verdict v;
  std::size_t count = 0;
  for (const auto& name : corpus_diagrams()) {
    auto pd = load_pd(name);
    auto f = build_khovanov_functor(pd, {.skip_validation = true});
    v.require(validate_c0(f.stable.functor).ok, name + " fails C-0");
    v.require(validate_coherence(f.stable.functor).ok, name + " fails C-1/C-2");
    ++count;
  }
  v.detail << count << " diagrams";
  return v;
}

Verdict d_squared() {
  Verdict v;
  std::size_t count = 0, skipped = 0;
  for (const auto& [name, f] : all_corpus_functors(64)) {
    if (!validate_c0(f.functor).ok) {
      ++skipped;  // no totalization without equal composites
      continue;
    }
    v.require(tot(f).d_squared_zero(), name);
    ++count;
  }
  v.detail << count << " functors" << (skipped ? ", " + std::to_string(skipped) + " without C-0 data" : "");
  return v;
}

Verdict multiple_extend() {
  Verdict v;
  auto all = enumerate_matchings(load_functor("multiple_extend").functor);
  auto face = CubeFace2::at(CubeVertex::parse("11"), 1, 2);
  std::size_t fixed = 0;
  for (const auto& f : all) {
    auto a = f.face_composite_correspondence(face, true);
    auto b = f.face_composite_correspondence(face, false);
    fixed += f.face_matching(face)[*a.find("d1∘c1")] == *b.find("b1∘a1");
  }
  v.require(all.size() == 24, "expected 24 completions");
  v.require(fixed == 6, "expected 6 with a1b1 -> c1d1");
  v.detail << all.size() << " completions, " << fixed << " with a1b1 -> c1d1";
  return v;
}

Verdict zero_extend() {
  Verdict v;
  auto all = enumerate_matchings(load_functor("zero_extend").functor);
  v.require(all.empty(), "found a completion");
  v.detail << all.size() << " completions";
  return v;
}

Verdict rp2_smash() {
  Verdict v;
  auto p = load_functor("P").functor;
  auto pp = product(p, p);
  auto f1 = load_functor("rp2_smash_F1").functor;
  auto iso = find_natural_isomorphism(f1, pp);
  v.require(iso && is_natural_isomorphism(f1, pp, *iso), "no natural isomorphism F1 -> P x P");
  auto h = nonzero(homology(tot(pp)));
  std::map<int, HomologyGroup> expected{{0, {0, 0, {2}}}, {1, {1, 0, {2}}}};
  v.require(h == expected, "unexpected homology");
  v.detail << "isomorphism " << (iso ? "found" : "missing") << "; " << describe(h);
  return v;
}

Verdict rp2_wedge() {
  Verdict v;
  auto cert = read_certificate(corpus_path("certificates/rp2_wedge.json"));
  auto report = verify_certificate(cert);
  v.require(report.ok, "certificate rejected");
  std::size_t inclusions = 0, qi = 0;
  for (const auto& s : cert.steps)
    if (s.kind == CertificateStep::Kind::nat_trans) {
      ++inclusions;
      qi += is_quasi_iso(tot_nat_trans(s.eta));
    }
  v.require(inclusions == 2 && qi == 2, "both inclusions must be quasi-isomorphisms");
  auto corrupted = verify_certificate(read_certificate(corpus_path("certificates/rp2_wedge_corrupted.json")));
  v.require(!corrupted.ok, "corrupted certificate accepted");
  v.detail << cert.steps.size() << " steps verified, " << qi << "/" << inclusions << " inclusions quasi-iso";
  return v;
}

Verdict golden_tables() {
  Verdict v;
  std::vector<KhRow> unknot{{0, -1, 1, {}}, {0, 1, 1, {}}};
  for (const char* name : {"unknot_loop", "unknot_kink_positive", "unknot_kink_negative", "unknot_two_kinks", "unlink_r2"}) {
    auto rows = kh_of(load_pd(name));
    if (std::string(name) == "unlink_r2") {
      v.require(rows == load_golden(name), std::string(name) + " differs from golden");
    } else {
      v.require(rows == unknot, std::string(name) + " is not Z at (0,+-1)");
    }
  }
  for (const char* name : {"trefoil_left", "trefoil_right", "figure_eight"})
    v.require(kh_of(load_pd(name)) == load_golden(name), std::string(name) + " differs from golden");
  for (const char* name : {"trefoil_left", "trefoil_right"}) {
    std::size_t twos = 0, other = 0;
    for (const auto& r : kh_of(load_pd(name)))
      for (auto t : r.torsion) (t == 2 ? twos : other) += 1;
    v.require(twos == 1 && other == 0, std::string(name) + " torsion is not a single Z/2");
  }
  v.detail << "unknot x4 presentations, trefoils, figure-eight";
  return v;
}

Verdict reduced() {
  Verdict v;
  auto u = khovanov_homology(reduced_functor(load_pd("unknot_loop"), 1));
  v.require(u == std::vector<KhRow>{{0, 0, 1, {}}}, "reduced unknot is not Z at (0,0)");
  auto t = khovanov_homology(reduced_functor(load_pd("trefoil_left"), 1));
  std::size_t rank = 0, torsion = 0;
  for (const auto& r : t) {
    rank += r.rank;
    torsion += r.torsion.size();
  }
  v.require(rank == 3 && torsion == 0, "reduced trefoil is not free of rank 3");
  v.require(t == load_golden("trefoil_left_reduced"), "reduced trefoil differs from golden");
  v.detail << "unknot Z(0,0); trefoil rank " << rank << ", " << torsion << " torsion";
  return v;
}

Verdict disjoint_and_connected_sums() {
  Verdict v;
  auto kink = load_pd("unknot_kink_positive");
  auto loop = load_pd("unknot_loop");
  auto kink_parts = split_by_quantum(build_khovanov_functor(kink));
  auto kink_reduced = split_by_quantum(reduced_functor(kink, 1));

  auto u = disjoint_union_pd(kink, kink);
  v.require(quantum_parts_isomorphic(split_by_quantum(build_khovanov_functor(u)), kink_parts, kink_parts),
            "kink union kink");
  auto ul = disjoint_union_pd(kink, loop);
  v.require(quantum_parts_isomorphic(split_by_quantum(reduced_functor(ul, 1)), kink_reduced,
                                     split_by_quantum(build_khovanov_functor(loop))),
            "reduced kink union unknot");
  auto sum = connect_sum_pd(kink, 1, kink, 1);
  v.require(quantum_parts_isomorphic(split_by_quantum(reduced_functor(sum.pd, sum.basepoint)), kink_reduced,
                                     kink_reduced),
            "reduced kink # kink");
  v.detail << "union, based union and connected sum isomorphic in every quantum grading";
  return v;
}

Verdict cone_identity() {
  Verdict v;
  std::vector<std::pair<std::string, NaturalTransformation>> etas;
  auto cert = read_certificate(corpus_path("certificates/rp2_wedge.json"));
  for (std::size_t i = 0; i < cert.steps.size(); ++i)
    if (cert.steps[i].kind == CertificateStep::Kind::nat_trans)
      etas.emplace_back("certificate step " + std::to_string(i), cert.steps[i].eta);
  auto f1 = load_functor("rp2_smash_F1").functor;
  auto pp = product(load_functor("P").functor, load_functor("P").functor);
  if (auto iso = find_natural_isomorphism(f1, pp)) etas.emplace_back("F1 -> P x P", isomorphism_transformation(f1, pp, *iso));
  auto p = load_functor("P").functor;
  etas.emplace_back("sub P", sub_inclusion(p, make_subset(p, {{CubeVertex::parse("0"), "y"}})));
  for (const auto& [name, eta] : etas) {
    auto lhs = tot(eta.ambient);
    auto rhs = cone(tot_nat_trans(eta));
    bool same = lhs.degrees() == rhs.degrees();
    for (int d : lhs.degrees()) same = same && lhs.basis(d) == rhs.basis(d) && lhs.d(d) == rhs.d(d);
    v.require(same, name);
  }
  v.require(etas.size() >= 3, "fewer than three transformations");
  v.detail << etas.size() << " transformations, bases and differentials identical";
  return v;
}

// Every simple path in the swap graph of maximal chains from c1 to c2, as
// lists of swap positions.
void simple_paths(const MaximalChain& at, const MaximalChain& goal, std::set<std::vector<int>>& seen,
                  std::vector<std::size_t>& path, std::vector<std::vector<std::size_t>>& out) {
  if (at == goal) {
    out.push_back(path);
    return;
  }
  auto order = at.coordinate_order();
  for (std::size_t i = 1; i < order.size(); ++i) {
    auto next = order;
    std::swap(next[i - 1], next[i]);
    if (!seen.insert(next).second) continue;
    path.push_back(i);
    simple_paths(MaximalChain::from_order(at.top(), next), goal, seen, path, out);
    path.pop_back();
    seen.erase(next);
  }
}

Verdict path_independence() {
  Verdict v;
  std::size_t functors = 0, paths = 0;
  for (const auto& [name, sf] : all_corpus_functors(3)) {
    const auto& f = sf.functor;
    if (!f.complete() || !validate_coherence(f).ok) continue;
    ++functors;
    const int n = f.dim();
    for (const auto& top : all_vertices(n))
      for (const auto& bottom : all_vertices(n)) {
        if (!geq(top, bottom) || top.grading() - bottom.grading() < 2) continue;
        auto chains = maximal_chains(top, bottom);
        for (const auto& c1 : chains)
          for (const auto& c2 : chains) {
            auto reference = reconstruct_two_morphism(f, c1, c2, true).map;
            std::set<std::vector<int>> seen{c1.coordinate_order()};
            std::vector<std::size_t> path;
            std::vector<std::vector<std::size_t>> all;
            simple_paths(c1, c2, seen, path, all);
            for (const auto& p : all) {
              auto [end, map] = transport_along_swaps(f, c1, p);
              v.require(end == c2 && map == reference, name);
              ++paths;
            }
          }
      }
  }
  v.detail << functors << " functors, " << paths << " swap paths";
  return v;
}

Verdict delta_cross_check() {
  Verdict v;
  using H = std::map<int, HomologyGroup>;
  const std::vector<std::pair<std::string, H>> cases{
      {"boundary_tetrahedron", {{0, {0, 1, {}}}, {2, {2, 1, {}}}}},
      {"rp2_6", {{0, {0, 1, {}}}, {1, {1, 0, {2}}}}},
      {"torus_7", {{0, {0, 1, {}}}, {1, {1, 2, {}}}, {2, {2, 1, {}}}}},
  };
  for (const auto& [name, expected] : cases) {
    auto x = load_delta(name);
    auto a = nonzero(homology(tot(delta_functor(x))));
    auto b = nonzero(simplicial_homology(x));
    v.require(a == b && a == expected, name + ": " + describe(a) + " vs " + describe(b));
    v.detail << (v.detail.tellp() > 0 ? "; " : "") << name << " " << describe(a);
  }
  return v;
}

bool signed_permutation(const IntegerMatrix& m) {
  if (m.rows() != m.cols()) return false;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::size_t row = 0, col = 0;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) < -1 || m(i, j) > 1) return false;
      row += m(i, j) != 0;
      col += m(j, i) != 0;
    }
    if (row != 1 || col != 1) return false;
  }
  return true;
}

Verdict face_shift() {
  Verdict v;
  std::mt19937 rng(20261019);
  int trials = 0;
  for (; trials < 100; ++trials) {
    int n = std::uniform_int_distribution<int>(0, 3)(rng);
    int big = std::uniform_int_distribution<int>(n, 5)(rng);
    auto f = random_functor(n, rng);
    auto iota = random_face_inclusion(n, big, rng);
    auto fs = face_shift_iso(f, iota);
    bool ok = twist_satisfies_closure(fs.twist, iota) && fs.map.commutes();
    for (int d : fs.map.source.degrees()) ok = ok && signed_permutation(fs.map.at(d));
    v.require(ok, "trial " + std::to_string(trials));
  }
  v.detail << trials << " random (F, iota) pairs";
  return v;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
      {"Khovanov functor coherence over the diagram corpus", coherence_over_corpus},
      {"d^2 = 0 for every corpus functor", d_squared},
      {"multiple-extend: 24 matchings, 6 after fixing one", multiple_extend},
      {"zero-extend: no coherent matching", zero_extend},
      {"F1 isomorphic to P x P with homology (Z/2, Z/2, 0)", rp2_smash},
      {"wedge certificate verifies with quasi-isomorphic inclusions", rp2_wedge},
      {"Khovanov golden tables and Reidemeister invariance", golden_tables},
      {"reduced unknot and trefoil", reduced},
      {"disjoint union, based union and connected sum isomorphisms", disjoint_and_connected_sums},
      {"mapping cone identity", cone_identity},
      {"path independence over every simple swap path", path_independence},
      {"Delta-complex cross-validation", delta_cross_check},
      {"face-shift sign twist", face_shift},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& [title, check] = criteria[i];
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = check();
    } catch (const std::exception& e) {
      v.ok = false;
      v.detail << "exception: " << e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !v.ok;
    std::printf("%s %2zu %s (%s) [%.2fs]\n", v.ok ? "PASS" : "FAIL", i + 1, title, v.detail.str().c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
