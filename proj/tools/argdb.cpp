#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "argdb/cli.hpp"

namespace {

int finish(const argdb::CliOutput& result) {
  std::fputs(result.out.c_str(), stdout);
  std::fputs(result.err.c_str(), stderr);
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"repairs of constrained databases via argumentation frameworks"};
  app.require_subcommand(1);

  std::string file;
  std::string label;
  std::string dir;

  argdb::RepairsOptions repairs_opt;
  CLI::App* repairs = app.add_subcommand("repairs", "enumerate subset-maximal repairs");
  repairs->add_option("file", file, "constrained database (.cdb)")->required();
  repairs->add_option("--format", repairs_opt.format, "pretty or json")
      ->check(CLI::IsMember({"pretty", "json"}));
  repairs->add_option("--route", repairs_opt.route, "oracle, argumentation or both")
      ->check(CLI::IsMember({"oracle", "argumentation", "both"}));
  repairs->add_flag("--exists", repairs_opt.exists_only, "only decide non-empty repair existence");
  repairs->add_option("--max-facts", repairs_opt.max_facts, "fact budget for the oracle route");
  repairs->add_option("--max-args", repairs_opt.max_args, "argument budget for enumeration");

  argdb::TranslateOptions translate_opt;
  CLI::App* translate = app.add_subcommand("translate", "build the argumentation framework");
  translate->add_option("file", file, "constrained database (.cdb)")->required();
  translate->add_option("--format", translate_opt.format, "pretty (apx) or json")
      ->check(CLI::IsMember({"pretty", "json"}));
  translate->add_flag("--force-setaf", translate_opt.force_setaf,
                      "use the collective-attack build regardless of profile");
  translate->add_flag("--preprocess", translate_opt.do_preprocess,
                      "drop facts whose support argument is never counter-attacked");
  translate->add_option("-o,--output", translate_opt.output_path, "write to file");

  argdb::AcceptOptions accept_opt;
  CLI::App* accept = app.add_subcommand("accept", "decide membership questions for one fact");
  accept->add_option("file", file, "constrained database (.cdb) or framework (.apx)")->required();
  accept->add_option("label", label, "fact label or argument name")->required();
  accept->add_option("--task", accept_opt.task, "sr, ar, cred or skep")
      ->check(CLI::IsMember({"sr", "ar", "cred", "skep"}));
  accept->add_option("--semantics", accept_opt.semantics, "semantics for cred/skep")
      ->check(CLI::IsMember({"conflict-free", "naive", "admissible", "preferred", "stable"}));
  accept->add_option("--route", accept_opt.route, "oracle, argumentation or both")
      ->check(CLI::IsMember({"oracle", "argumentation", "both"}));
  accept->add_option("--format", accept_opt.format, "pretty or json")
      ->check(CLI::IsMember({"pretty", "json"}));
  accept->add_option("--max-facts", accept_opt.max_facts, "fact budget for the oracle route");
  accept->add_option("--max-args", accept_opt.max_args, "argument budget for enumeration");

  argdb::GenerateOptions generate_opt;
  CLI::App* generate = app.add_subcommand("generate", "emit constrained databases");
  generate->add_option("kind", generate_opt.kind, "sat, qbf or random")
      ->required()
      ->check(CLI::IsMember({"sat", "qbf", "random"}));
  generate->add_option("--cnf", generate_opt.input_path, "DIMACS (sat) or QDIMACS (qbf) input");
  generate->add_option("--mode", generate_opt.mode, "sat: sr (membership) or rep (existence)")
      ->check(CLI::IsMember({"sr", "rep"}));
  generate->add_option("--seed", generate_opt.seed, "random: generator seed");
  generate->add_option("--profile", generate_opt.profile,
                       "random: comma-joined classes from fd,id,dc,ltgd");
  generate->add_option("--size", generate_opt.size_budget, "random: target fact count");
  generate->add_option("-o,--output", generate_opt.output_path, "write to file");

  argdb::VerifyOptions verify_opt;
  CLI::App* verify = app.add_subcommand("verify", "cross-check repairs against extensions");
  verify->add_option("dir", dir, "directory of .cdb files")->required();
  verify->add_option("--format", verify_opt.format, "pretty or json")
      ->check(CLI::IsMember({"pretty", "json"}));
  verify->add_option("--max-facts", verify_opt.max_facts, "fact budget per instance");
  verify->add_option("--max-args", verify_opt.max_args, "argument budget per instance");

  CLI11_PARSE(app, argc, argv);

  if (repairs->parsed()) return finish(argdb::cmd_repairs(file, repairs_opt));
  if (translate->parsed()) return finish(argdb::cmd_translate(file, translate_opt));
  if (accept->parsed()) return finish(argdb::cmd_accept(file, label, accept_opt));
  if (generate->parsed()) return finish(argdb::cmd_generate(generate_opt));
  if (verify->parsed()) return finish(argdb::cmd_verify(dir, verify_opt));
  return 1;
}
