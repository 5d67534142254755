#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv) {
  using khb::cli::RunConfig;
  CLI::App app{"Cube functors into the Burnside category, Khovanov and simplicial instances"};
  app.require_subcommand(1);
  RunConfig config;

  auto add_common = [&](CLI::App* sub) {
    sub->add_flag("--json", config.json, "Emit JSON instead of text");
    sub->add_option("--jobs", config.jobs, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto add_search = [&](CLI::App* sub) {
    sub->add_option("--max-search", config.max_search, "Search cap (bijections per face, or isomorphism nodes)")
        ->check(CLI::PositiveNumber);
  };

  auto* kh = app.add_subcommand("kh", "Khovanov homology of a link diagram");
  kh->require_subcommand(1);
  auto* kh_hom = kh->add_subcommand("homology", "Bigraded homology table of a PD code");
  kh_hom->add_option("input", config.inputs, "PD file, corpus name or literal PD[...] code")->required();
  kh_hom->add_flag("--reduced", config.reduced, "Use the reduced functor (needs --basepoint)");
  kh_hom->add_option("--basepoint", config.basepoint, "Arc label carrying the basepoint");
  add_common(kh_hom);
  auto* kh_ver = kh->add_subcommand("verify", "Check the coherence conditions of a Khovanov or JSON functor");
  kh_ver->add_option("input", config.inputs, "PD code or functor JSON")->required();
  kh_ver->add_flag("--search", config.search, "For functor JSON without faces, search for coherent matchings");
  add_search(kh_ver);
  add_common(kh_ver);

  auto* fn = app.add_subcommand("functor", "Functors given as JSON");
  fn->require_subcommand(1);
  auto* fn_check = fn->add_subcommand("check", "Validate a functor and report the homology of its totalization");
  fn_check->add_option("input", config.inputs, "Functor JSON")->required();
  fn_check->add_flag("--search", config.search, "Search for coherent matchings if faces are missing");
  add_search(fn_check);
  add_common(fn_check);
  auto* fn_search = fn->add_subcommand("search-matchings", "Enumerate coherent completions of the face data");
  fn_search->add_option("input", config.inputs, "Functor JSON")->required();
  fn_search->add_option("--fix", config.fixes, "Count only completions sending composite A to B on FACE (FACE:A=B)");
  fn_search->add_option("--output", config.output, "Write the first completion here");
  add_search(fn_search);
  add_common(fn_search);
  auto* fn_cert = fn->add_subcommand("certificate", "Verify a stable-equivalence certificate");
  fn_cert->add_option("input", config.inputs, "Certificate JSON")->required();
  add_search(fn_cert);
  add_common(fn_cert);

  auto* delta = app.add_subcommand("delta", "Delta-complexes");
  delta->require_subcommand(1);
  auto* delta_hom = delta->add_subcommand("homology", "Homology via the cube functor and via simplicial chains");
  delta_hom->add_option("input", config.inputs, "Delta-complex JSON")->required();
  add_common(delta_hom);

  auto* ex = app.add_subcommand("examples", "Worked examples from the fixture corpus");
  ex->require_subcommand(1);
  auto* ex_run = ex->add_subcommand("run", "Run the worked examples");
  ex_run->add_option("names", config.inputs, "Subset of examples to run");
  add_common(ex_run);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : khb::cli::kInputError;
  }
  for (auto* group : {kh, fn, delta, ex})
    if (group->parsed())
      for (auto* sub : group->get_subcommands())
        if (sub->parsed()) config.command = group->get_name() + " " + sub->get_name();
  return khb::cli::run(config, std::cout, std::cerr);
}
