// Batch front end: subcommands over the text formats, JSON reports, exit
// codes 0 ok / 1 property fails / 2 out of budget / 3 input error.

#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"
#include "hdfol/io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"hybrid-dynamic first-order logic toolbox"};
  app.require_subcommand(1);

  hdfolcli::RunConfig cfg;
  std::string out_path;

  auto add_common = [&](CLI::App* c, bool with_budget) {
    c->add_option("--sig", cfg.sig_path, "signature file")->required();
    c->add_option("--out", out_path, "write the JSON report here (default stdout)");
    if (with_budget) {
      c->add_option("--max-worlds", cfg.budget.max_worlds, "world counts tried");
      c->add_option("--max-carrier", cfg.budget.max_carrier, "carrier size per sort");
      c->add_option("--max-constants", cfg.budget.max_constants, "added constants");
      c->add_option("--star-bound", cfg.budget.star_bound, "iteration unfoldings");
      c->add_option("--term-depth", cfg.term_depth, "ground instantiation depth");
      c->add_option("--seed", cfg.seed, "seed recorded in the report");
    }
  };

  auto* validate = app.add_subcommand("validate", "structural checks on inputs");
  add_common(validate, false);
  validate->add_option("--theory", cfg.theory_path, "theory file");
  validate->add_option("--model", cfg.model_path, "model file");

  auto* check = app.add_subcommand("check", "satisfaction in a given model");
  add_common(check, false);
  check->add_option("--model", cfg.model_path, "model file")->required();
  check->add_option("--theory", cfg.theory_path, "sentences to check");
  check->add_option("--sentence", cfg.sentence, "inline sentence to check");

  auto* translate = app.add_subcommand("translate", "apply a substitution to a theory");
  add_common(translate, false);
  translate->add_option("--theory", cfg.theory_path, "theory over the domain constants");
  translate->add_option("--subst", cfg.subst_path, "substitution file")->required();
  translate->add_option("--theory-out", cfg.theory_out, "write the translated theory");

  auto* rigidify = app.add_subcommand("rigidify", "pin a theory at a nominal");
  add_common(rigidify, false);
  rigidify->add_option("--theory", cfg.theory_path, "theory file")->required();
  rigidify->add_option("--at", cfg.at, "nominal to pin at")->required();
  rigidify->add_option("--theory-out", cfg.theory_out, "write the pinned theory");

  auto* encode = app.add_subcommand("encode", "flatten to world-argument form");
  add_common(encode, false);
  encode->add_option("--theory", cfg.theory_path, "theory to translate");
  encode->add_option("--sig-out", cfg.sig_out, "write the flattened signature");
  encode->add_option("--theory-out", cfg.theory_out, "write the translated theory");

  auto* decode = app.add_subcommand("decode", "extract a model from a flattened one");
  add_common(decode, false);
  decode->add_option("--model", cfg.model_path, "flattened model file")->required();
  decode->add_option("--world", cfg.world, "world to extract at (default 0)");
  decode->add_option("--model-out", cfg.model_out, "write the extracted model");

  auto* sat = app.add_subcommand("sat", "bounded model search");
  add_common(sat, true);
  sat->add_option("--theory", cfg.theory_path, "theory file")->required();
  sat->add_option("--model-out", cfg.model_out, "write the found model");

  auto* force = app.add_subcommand("force", "forcing-property axioms and queries");
  add_common(force, true);
  force->add_option("--forcing", cfg.forcing_path, "forcing property file")->required();
  force->add_option("--sentence", cfg.sentence, "query sentence");
  force->add_option("--at", cfg.at, "query nominal");
  force->add_option("--condition", cfg.condition, "condition (default: least)");

  auto* generic = app.add_subcommand("generic", "generic chain and its model");
  add_common(generic, true);
  generic->add_option("--forcing", cfg.forcing_path, "forcing property file")->required();
  generic->add_option("--condition", cfg.condition, "start condition (default: least)");
  generic->add_option("--model-depth", cfg.model_depth, "term-model carrier depth");
  generic->add_option("--model-out", cfg.model_out, "write the generic model");

  auto* omit = app.add_subcommand("omit", "model of a theory omitting type families");
  add_common(omit, true);
  omit->add_option("--theory", cfg.theory_path, "theory file")->required();
  omit->add_option("--types", cfg.types_path, "type family file")->required();
  omit->add_option("--model-out", cfg.model_out, "write the omitting model");

  auto* entail = app.add_subcommand("entail", "constructor-based entailment");
  add_common(entail, true);
  entail->add_option("--theory", cfg.theory_path, "premise theory")->required();
  entail->add_option("--sentence", cfg.sentence, "goal sentence")->required();
  entail->add_option("--constructor", cfg.constructors, "constructor op (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }
  cfg.command = app.get_subcommands().front()->get_name();

  hdfolcli::CliResult res = hdfolcli::run(cfg);
  std::string text = res.report.dump(2) + "\n";
  if (out_path.empty())
    std::cout << text;
  else
    hdfol::write_file(out_path, text);
  return res.exit_code;
}
