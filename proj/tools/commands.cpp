#include "commands.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <stdexcept>

#include "khb/certificate.hpp"
#include "khb/functor_ops.hpp"
#include "khb/isomorphism.hpp"
#include "khb/khovanov.hpp"
#include "khb/serialization.hpp"
#include "khb/simplicial.hpp"
#include "khb/totalization.hpp"

#ifndef KHB_DEFAULT_CORPUS_DIR
#define KHB_DEFAULT_CORPUS_DIR "corpus"
#endif

namespace khb::cli {

namespace fs = std::filesystem;

namespace {

// Raised for user-facing input problems detected by the CLI itself.
struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

json envelope(const std::string& command) { return {{"schema_version", 1}, {"command", command}}; }

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

PDCode load_pd(const std::string& input) {
  std::string path = resolve_input(input);
  if (fs::is_regular_file(path)) return parse_pd(read_text(path));
  if (input.rfind("PD", 0) == 0 || input.rfind("{", 0) == 0) return parse_pd(input);
  std::string named = resolve_input("pd/" + input + ".pd");
  if (fs::is_regular_file(named)) return parse_pd(read_text(named));
  throw InputError("no such file or PD code: '" + input + "'");
}

StableFunctor load_functor(const std::string& input) { return functor_from_json(read_json_file(resolve_input(input))); }

std::string format_homology(const std::map<int, HomologyGroup>& h) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [deg, g] : h) {
    os << (first ? "" : ", ") << "H_" << deg << " = " << to_string(g);
    first = false;
  }
  return first ? "0" : os.str();
}

std::map<int, HomologyGroup> nonzero(const std::map<int, HomologyGroup>& h) {
  std::map<int, HomologyGroup> out;
  for (const auto& [deg, g] : h)
    if (!g.is_zero()) out[deg] = g;
  return out;
}

struct Condition {
  std::string name;
  ValidationReport report;
};

void print_conditions(const std::vector<Condition>& conds, std::ostream& out) {
  for (const auto& c : conds) {
    out << (c.report.ok ? "PASS " : "FAIL ") << c.name << "\n";
    std::size_t shown = 0;
    for (const auto& v : c.report.violations) {
      if (++shown > 10) {
        out << "  ... " << c.report.violations.size() - 10 << " more\n";
        break;
      }
      out << "  " << v << "\n";
    }
  }
}

json conditions_json(const std::vector<Condition>& conds) {
  json arr = json::array();
  for (const auto& c : conds) arr.push_back({{"condition", c.name}, {"ok", c.report.ok}, {"violations", c.report.violations}});
  return arr;
}

bool all_ok(const std::vector<Condition>& conds) {
  for (const auto& c : conds)
    if (!c.report.ok) return false;
  return true;
}

ValidationReport d_squared_report(const StableFunctor& f) {
  ValidationReport r;
  r.condition = "d^2 = 0";
  if (!tot(f).d_squared_zero()) r.fail("the totalization differential does not square to zero");
  return r;
}

MatchingSearchOptions search_options(const RunConfig& c) {
  MatchingSearchOptions o;
  if (c.max_search) o.max_face_bijections = *c.max_search;
  return o;
}

// A constraint "FACE:A=B" on completions.
struct FaceFix {
  CubeFace2 face;
  bool reversed = false;
  std::string from, to;
  std::string text;
};

FaceFix parse_fix(const std::string& text, int n) {
  auto colon = text.find(':');
  auto eq = text.find('=', colon == std::string::npos ? 0 : colon);
  if (colon == std::string::npos || eq == std::string::npos) throw InputError("--fix expects FACE:A=B, got '" + text + "'");
  auto [face, rev] = face_from_key(text.substr(0, colon), n);
  return {face, rev, text.substr(colon + 1, eq - colon - 1), text.substr(eq + 1), text};
}

bool satisfies(const CubeFunctor& f, const FaceFix& fix) {
  Correspondence a = f.face_composite_correspondence(fix.face, true);
  Correspondence b = f.face_composite_correspondence(fix.face, false);
  // In the reversed orientation the constraint reads B(via_a) <- A(via_b).
  const std::string& ida = fix.reversed ? fix.to : fix.from;
  const std::string& idb = fix.reversed ? fix.from : fix.to;
  auto ia = a.find(ida);
  auto ib = b.find(idb);
  if (!ia || !ib) throw InputError("--fix names an unknown composite in '" + fix.text + "'");
  return f.face_matching(fix.face)[*ia] == *ib;
}

struct SearchResult {
  std::size_t total = 0;
  std::size_t fixed = 0;
  std::vector<CubeFunctor> kept;
};

SearchResult search(const CubeFunctor& partial, const RunConfig& c) {
  auto all = enumerate_matchings(partial, search_options(c));
  std::vector<FaceFix> fixes;
  for (const auto& t : c.fixes) fixes.push_back(parse_fix(t, partial.dim()));
  SearchResult r;
  r.total = all.size();
  for (auto& f : all) {
    bool ok = true;
    for (const auto& fix : fixes) ok = ok && satisfies(f, fix);
    if (ok) r.kept.push_back(std::move(f));
  }
  r.fixed = r.kept.size();
  return r;
}

std::string search_summary(const SearchResult& r, const RunConfig& c) {
  if (r.total == 0) return "no coherent matching exists";
  std::string s = std::to_string(r.total) + " coherent matching" + (r.total == 1 ? "" : "s");
  if (!c.fixes.empty()) {
    s += " (" + std::to_string(r.fixed) + " satisfying";
    for (std::size_t i = 0; i < c.fixes.size(); ++i) s += (i ? ", " : " ") + c.fixes[i];
    s += ")";
  }
  return s;
}

// ---------------------------------------------------------------------------

int cmd_kh_homology(const RunConfig& c, std::ostream& out) {
  if (c.reduced && !c.basepoint) throw InputError("--reduced requires --basepoint");
  if (!c.reduced && c.basepoint) throw InputError("--basepoint only applies together with --reduced");
  PDCode pd = load_pd(c.inputs.at(0));
  KhovanovOptions opts;
  opts.jobs = c.jobs;
  KhovanovFunctor f = c.reduced ? reduced_functor(pd, *c.basepoint, opts) : build_khovanov_functor(pd, opts);
  auto rows = khovanov_homology(f, c.jobs);
  if (c.json) {
    json j = envelope(c.command);
    j["pd"] = to_string(pd);
    j["reduced"] = c.reduced;
    j["basepoint"] = c.basepoint ? json(*c.basepoint) : json(nullptr);
    j["n_plus"] = f.n_plus;
    j["n_minus"] = f.n_minus;
    j["homology"] = kh_table_to_json(rows);
    out << j.dump(2) << "\n";
  } else {
    out << to_string(pd) << "\n";
    out << "n+ = " << f.n_plus << ", n- = " << f.n_minus << (c.reduced ? ", reduced at arc " + std::to_string(*c.basepoint) : "")
        << "\n";
    out << format_kh_table(rows);
  }
  return kSuccess;
}

int cmd_functor_check(const RunConfig& c, std::ostream& out);

bool looks_like_functor_json(const std::string& input) {
  std::string path = resolve_input(input);
  if (!fs::is_regular_file(path) || fs::path(path).extension() != ".json") return false;
  json j = read_json_file(path);
  return j.is_object() && j.contains("n") && !j.contains("crossings");
}

int cmd_kh_verify(const RunConfig& c, std::ostream& out) {
  if (looks_like_functor_json(c.inputs.at(0))) return cmd_functor_check(c, out);
  PDCode pd = load_pd(c.inputs.at(0));
  KhovanovOptions opts;
  opts.skip_validation = true;
  opts.jobs = c.jobs;
  KhovanovFunctor f = build_khovanov_functor(pd, opts);
  std::vector<Condition> conds;
  conds.push_back({"C-0", validate_c0(f.stable.functor)});
  conds.push_back({"C-1", validate_c1(f.stable.functor)});
  conds.push_back({"C-2", conds[1].report.ok ? validate_c2(f.stable.functor) : ValidationReport{"C-2", false, {"skipped: C-1 failed"}}});
  conds.push_back({"d^2 = 0", d_squared_report(f.stable)});
  ValidationReport q;
  if (!preserves_quantum_grading(f)) q.fail("an edge element joins generators of different quantum gradings");
  conds.push_back({"quantum grading", q});
  bool ok = all_ok(conds);
  if (c.json) {
    json j = envelope(c.command);
    j["pd"] = to_string(pd);
    j["conditions"] = conditions_json(conds);
    j["ok"] = ok;
    out << j.dump(2) << "\n";
  } else {
    out << to_string(pd) << "\n";
    print_conditions(conds, out);
  }
  return ok ? kSuccess : kVerificationFailed;
}

int cmd_functor_check(const RunConfig& c, std::ostream& out) {
  StableFunctor f = load_functor(c.inputs.at(0));
  json j = envelope(c.command);
  std::ostringstream text;
  std::vector<Condition> conds;
  conds.push_back({"C-0", validate_c0(f.functor)});
  bool ok = conds[0].report.ok;
  if (ok && c.search && !f.functor.complete()) {
    SearchResult r = search(f.functor, c);
    std::string summary = search_summary(r, c);
    text << "search: " << summary << "\n";
    j["search"] = {{"total", r.total}, {"summary", summary}};
    if (r.total == 0) ok = false;
    if (!r.kept.empty()) f.functor = r.kept.front();
  }
  if (conds[0].report.ok && (!c.search || f.functor.complete())) {
    conds.push_back({"C-1", validate_c1(f.functor)});
    conds.push_back({"C-2", conds.back().report.ok ? validate_c2(f.functor) : ValidationReport{"C-2", false, {"skipped: C-1 failed"}}});
    conds.push_back({"d^2 = 0", d_squared_report(f)});
  }
  ok = ok && all_ok(conds);
  j["conditions"] = conditions_json(conds);
  if (conds[0].report.ok) {
    auto h = homology(tot(f));
    j["homology"] = homology_to_json(h);
    text << "homology of Tot: " << format_homology(h) << "\n";
  }
  j["ok"] = ok;
  if (c.json) {
    out << j.dump(2) << "\n";
  } else {
    print_conditions(conds, out);
    out << text.str();
  }
  return ok ? kSuccess : kVerificationFailed;
}

int cmd_search_matchings(const RunConfig& c, std::ostream& out) {
  StableFunctor f = load_functor(c.inputs.at(0));
  auto c0 = validate_c0(f.functor);
  if (!c0.ok) throw InputError("functor fails C-0: " + c0.violations.front());
  SearchResult r = search(f.functor, c);
  std::string summary = search_summary(r, c);
  if (!c.output.empty()) {
    if (r.kept.empty()) throw InputError("no completion to write");
    std::ofstream o(c.output);
    if (!o) throw InputError("cannot write '" + c.output + "'");
    o << functor_to_json({r.kept.front(), f.shift}).dump(2) << "\n";
  }
  if (c.json) {
    json j = envelope(c.command);
    j["total"] = r.total;
    if (!c.fixes.empty()) {
      j["fixes"] = c.fixes;
      j["satisfying"] = r.fixed;
    }
    j["summary"] = summary;
    out << j.dump(2) << "\n";
  } else {
    out << summary << "\n";
  }
  return kSuccess;
}

int cmd_certificate(const RunConfig& c, std::ostream& out) {
  EquivalenceCertificate cert = read_certificate(resolve_input(c.inputs.at(0)));
  CertificateReport report = verify_certificate(cert);
  if (c.json) {
    json j = envelope(c.command);
    j["functors"] = cert.sequence.size();
    j.update(certificate_report_to_json(report));
    out << j.dump(2) << "\n";
  } else {
    out << cert.sequence.size() << " functor" << (cert.sequence.size() == 1 ? "" : "s") << ", " << cert.steps.size()
        << " step" << (cert.steps.size() == 1 ? "" : "s") << "\n";
    for (const auto& s : report.steps) {
      out << (s.ok ? "PASS" : "FAIL") << " step " << s.index << " (" << s.kind << ", " << s.direction << ")";
      if (!s.label.empty()) out << " " << s.label;
      out << "\n";
      for (const auto& m : s.messages) out << "  " << m << "\n";
    }
    out << (report.ok ? "certificate verified" : "certificate rejected") << "\n";
  }
  return report.ok ? kSuccess : kVerificationFailed;
}

int cmd_delta(const RunConfig& c, std::ostream& out) {
  DeltaComplex x = delta_from_json(read_json_file(resolve_input(c.inputs.at(0))));
  StableFunctor f = delta_functor(x);
  auto via_functor = homology(tot(f));
  auto via_simplices = simplicial_homology(x);
  bool agree = nonzero(via_functor) == nonzero(via_simplices);
  if (c.json) {
    json j = envelope(c.command);
    j["cube_dimension"] = f.functor.dim();
    j["via_functor"] = homology_to_json(via_functor);
    j["via_simplices"] = homology_to_json(via_simplices);
    j["agree"] = agree;
    out << j.dump(2) << "\n";
  } else {
    out << "cube dimension " << f.functor.dim() << "\n";
    out << "via functor:   " << format_homology(via_functor) << "\n";
    out << "via simplices: " << format_homology(via_simplices) << "\n";
    out << "agreement: " << (agree ? "yes" : "no") << "\n";
  }
  return agree ? kSuccess : kVerificationFailed;
}

// ---------------------------------------------------------------------------

struct ExampleResult {
  bool ok = false;
  std::string detail;
};

std::string corpus(const std::string& rel) { return (fs::path(corpus_dir()) / rel).string(); }

ExampleResult example_multiple_extend(const RunConfig&) {
  StableFunctor f = functor_from_json(read_json_file(corpus("functors/multiple_extend.json")));
  RunConfig c;
  c.fixes = {"11>00 via 10|01:b1∘a1=d1∘c1"};
  SearchResult r = search(f.functor, c);
  return {r.total == 24 && r.fixed == 6, search_summary(r, c)};
}

ExampleResult example_zero_extend(const RunConfig&) {
  StableFunctor f = functor_from_json(read_json_file(corpus("functors/zero_extend.json")));
  SearchResult r = search(f.functor, RunConfig{});
  return {r.total == 0, search_summary(r, RunConfig{})};
}

ExampleResult example_rp2_smash(const RunConfig&) {
  CubeFunctor p = functor_from_json(read_json_file(corpus("functors/P.json"))).functor;
  CubeFunctor f1 = functor_from_json(read_json_file(corpus("functors/rp2_smash_F1.json"))).functor;
  CubeFunctor pp = product(p, p);
  auto iso = find_natural_isomorphism(f1, pp);
  auto h = homology(tot(pp));
  std::map<int, HomologyGroup> expected{{0, {0, 0, {2}}}, {1, {1, 0, {2}}}, {2, {2, 0, {}}}};
  bool ok = iso.has_value() && h == expected;
  return {ok, std::string(iso ? "F^(1) is naturally isomorphic to P x P" : "no natural isomorphism found") +
                  "; Tot(P x P): " + format_homology(h)};
}

ExampleResult example_rp2_wedge(const RunConfig&) {
  EquivalenceCertificate cert = read_certificate(corpus("certificates/rp2_wedge.json"));
  CertificateReport report = verify_certificate(cert);
  std::size_t nat = 0;
  for (const auto& s : cert.steps) nat += s.kind == CertificateStep::Kind::nat_trans;
  return {report.ok, std::to_string(cert.steps.size()) + " steps (" + std::to_string(nat) +
                         " quasi-isomorphic transformations) " + (report.ok ? "verified" : "rejected")};
}

ExampleResult example_delta(const RunConfig&) {
  std::ostringstream os;
  bool ok = true;
  for (const char* name : {"point", "boundary_tetrahedron", "rp2_6", "torus_7"}) {
    DeltaComplex x = delta_from_json(read_json_file(corpus(std::string("delta/") + name + ".json")));
    auto a = nonzero(homology(tot(delta_functor(x))));
    auto b = nonzero(simplicial_homology(x));
    ok = ok && a == b;
    os << (os.tellp() > 0 ? "; " : "") << name << ": " << format_homology(a);
  }
  return {ok, os.str()};
}

ExampleResult example_khovanov(const RunConfig& c) {
  KhovanovOptions opts;
  opts.jobs = c.jobs;
  PDCode pd = parse_pd(read_text(corpus("pd/trefoil_left.pd")));
  auto rows = khovanov_homology(build_khovanov_functor(pd, opts), c.jobs);
  std::size_t torsion = 0, rank = 0;
  for (const auto& r : rows) {
    torsion += r.torsion.size();
    rank += r.rank;
  }
  return {torsion == 1 && rank == 4,
          "trefoil: coherent functor, total rank " + std::to_string(rank) + ", " + std::to_string(torsion) +
              " torsion summand" + (torsion == 1 ? "" : "s")};
}

const std::vector<std::pair<std::string, std::function<ExampleResult(const RunConfig&)>>>& examples() {
  static const std::vector<std::pair<std::string, std::function<ExampleResult(const RunConfig&)>>> list = {
      {"multiple-extend", example_multiple_extend}, {"zero-extend", example_zero_extend},
      {"rp2-smash", example_rp2_smash},             {"rp2-wedge", example_rp2_wedge},
      {"delta", example_delta},                     {"khovanov", example_khovanov},
  };
  return list;
}

int cmd_examples(const RunConfig& c, std::ostream& out) {
  for (const auto& name : c.inputs) {
    bool known = false;
    for (const auto& [n, fn] : examples()) known = known || n == name;
    if (!known) throw InputError("unknown example '" + name + "'");
  }
  bool ok = true;
  json arr = json::array();
  for (const auto& [name, fn] : examples()) {
    if (!c.inputs.empty() && std::find(c.inputs.begin(), c.inputs.end(), name) == c.inputs.end()) continue;
    ExampleResult r = fn(c);
    ok = ok && r.ok;
    arr.push_back({{"name", name}, {"ok", r.ok}, {"detail", r.detail}});
    if (!c.json) out << (r.ok ? "PASS " : "FAIL ") << name << ": " << r.detail << "\n";
  }
  if (c.json) {
    json j = envelope(c.command);
    j["examples"] = arr;
    j["ok"] = ok;
    out << j.dump(2) << "\n";
  }
  return ok ? kSuccess : kVerificationFailed;
}

}  // namespace

std::string corpus_dir() {
  if (const char* env = std::getenv("KH_CORPUS_DIR"); env && *env) return env;
  return KHB_DEFAULT_CORPUS_DIR;
}

std::string resolve_input(const std::string& path) {
  if (fs::exists(path)) return path;
  fs::path alt = fs::path(corpus_dir()) / path;
  if (fs::exists(alt)) return alt.string();
  return path;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, std::function<int(const RunConfig&, std::ostream&)>> commands = {
      {"kh homology", cmd_kh_homology},
      {"kh verify", cmd_kh_verify},
      {"functor check", cmd_functor_check},
      {"functor search-matchings", cmd_search_matchings},
      {"functor certificate", cmd_certificate},
      {"delta homology", cmd_delta},
      {"examples run", cmd_examples},
  };
  auto it = commands.find(config.command);
  if (it == commands.end()) {
    err << "error: unknown command '" << config.command << "'\n";
    return kInputError;
  }
  if (config.jobs < 1) {
    err << "error: --jobs must be positive\n";
    return kInputError;
  }
  if (config.max_search && *config.max_search == 0) {
    err << "error: --max-search must be positive\n";
    return kInputError;
  }
  try {
    return it->second(config, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::length_error& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace khb::cli
