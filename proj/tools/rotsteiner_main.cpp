// rotsteiner: enumerate and classify 1-rotational difference families and
// the Steiner systems they develop into.
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rotsteiner/io.hpp"
#include "rotsteiner/pipeline.hpp"

using namespace rotsteiner;

int main(int argc, char** argv) {
  CLI::App app{"1-rotational difference families over finite groups: exhaustive enumeration, "
               "equivalence filtering, Steiner-system development and isomorphism classification"};
  app.require_subcommand(1);

  // enumerate
  auto* cmd_enum = app.add_subcommand("enumerate", "search one group for difference families");
  EnumerateArgs eargs;
  double e_timeout = 0.0;
  long long e_max = 0;
  cmd_enum->add_option("--group", eargs.group, "group name or spec (C15, Q8, SL(2,3), perm:..., file:...)")
      ->required();
  cmd_enum->add_option("--k", eargs.k, "block size")->required();
  std::string e_mult_text;
  auto* e_mult = cmd_enum->add_option("--multiplier", e_mult_text,
                                      "restrict to families fixed by this automorphism "
                                      "(integer power map or cycle notation)");
  cmd_enum->add_option("--threads", eargs.threads, "worker threads (default: OpenMP default)");
  auto* e_to = cmd_enum->add_option("--timeout", e_timeout, "wall-clock budget in seconds");
  auto* e_ms = cmd_enum->add_option("--max-solutions", e_max, "stop after this many raw solutions");
  cmd_enum->add_option("--out", eargs.out_dir, "output directory for families file + manifest.jsonl");
  bool no_classify = false;
  cmd_enum->add_flag("--no-classify", no_classify, "skip design development and isomorphism classification");

  // verify
  auto* cmd_verify = app.add_subcommand("verify", "check a family (or @file of families) for validity");
  std::string v_group, v_family;
  int v_k = 0;
  cmd_verify->add_option("--group", v_group, "group name or spec")->required();
  cmd_verify->add_option("--k", v_k, "block size")->required();
  cmd_verify->add_option("--family", v_family, "family text like [[0,1,3],[0,4,8]] or @path")->required();

  // develop
  auto* cmd_dev = app.add_subcommand("develop", "expand families into full Steiner-system files");
  std::string d_group, d_family, d_out;
  cmd_dev->add_option("--group", d_group, "group name or spec")->required();
  cmd_dev->add_option("--family", d_family, "family text or @path")->required();
  cmd_dev->add_option("--out", d_out, "output design file (suffix .<i> added when several)")->required();

  // classify
  auto* cmd_cls = app.add_subcommand("classify", "partition design files in a directory by isomorphism");
  std::string c_dir;
  int c_threads = 0;
  cmd_cls->add_option("--designs", c_dir, "directory of design files")->required();
  cmd_cls->add_option("--threads", c_threads, "worker threads");

  // sweep
  auto* cmd_sweep = app.add_subcommand("sweep", "enumerate every group listed in a file");
  std::string s_list, s_out;
  int s_k = 0, s_threads = 0;
  double s_timeout = 0.0;
  cmd_sweep->add_option("--list", s_list, "file with one group spec per line")->required();
  cmd_sweep->add_option("--k", s_k, "block size")->required();
  cmd_sweep->add_option("--out", s_out, "output directory for families files + manifest.jsonl");
  cmd_sweep->add_option("--threads", s_threads, "worker threads");
  auto* s_to = cmd_sweep->add_option("--timeout", s_timeout, "per-group wall-clock budget in seconds");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalidInput;
  }

  try {
    if (cmd_enum->parsed()) {
      if (e_mult->count()) eargs.multiplier = e_mult_text;
      if (e_to->count()) eargs.timeout_seconds = e_timeout;
      if (e_ms->count()) eargs.max_solutions = e_max;
      eargs.classify_designs = !no_classify;
      return run_enumerate(eargs, std::cout, std::cerr).exit_code;
    }
    if (cmd_verify->parsed()) return run_verify(v_group, v_k, v_family, std::cout, std::cerr);
    if (cmd_dev->parsed()) return run_develop(d_group, d_family, d_out, std::cout, std::cerr);
    if (cmd_cls->parsed()) return run_classify(c_dir, c_threads, std::cout, std::cerr);
    if (cmd_sweep->parsed()) {
      std::optional<double> to;
      if (s_to->count()) to = s_timeout;
      return run_sweep(s_list, s_k, s_out, s_threads, to, std::cout, std::cerr);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  return kExitInvalidInput;
}
