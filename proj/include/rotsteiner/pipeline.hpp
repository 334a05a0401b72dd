#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rotsteiner/design.hpp"
#include "rotsteiner/family.hpp"
#include "rotsteiner/registry.hpp"
#include "rotsteiner/search.hpp"

namespace rotsteiner {

// Process exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidInput = 1;
inline constexpr int kExitVerificationFailed = 2;
inline constexpr int kExitIncomplete = 3;

// One row of the machine-readable run manifest (serialized as JSON lines).
struct RunManifest {
  std::string group;       // group text as given
  std::string structure;   // resolved display structure
  int k = 0;
  int v = 0;
  int threads = 1;
  std::optional<std::string> multiplier;
  std::optional<long long> max_solutions;
  std::optional<double> timeout_seconds;
  long long raw_solutions = 0;
  long long equivalence_classes = 0;
  std::optional<long long> isomorphism_classes;
  bool complete = true;
  double elapsed_ms = 0.0;

  std::string to_json() const;  // one line, no trailing newline
};

struct EnumerateArgs {
  std::string group;
  int k = 0;
  std::optional<std::string> multiplier;  // power map "m" or cycles "(..)(..)"
  int threads = 0;                        // <1: library default
  std::optional<double> timeout_seconds;
  std::optional<long long> max_solutions;
  std::string out_dir;                    // empty: no files written
  bool classify_designs = true;           // also develop + isomorphism-classify
};

struct EnumerateOutcome {
  int exit_code = kExitOk;
  RunManifest manifest;
  std::vector<BaseFamily> representatives;  // equivalence class reps
  std::vector<BaseFamily> raw_families;
};

// enumerate: search, classify, write <out>/families_<slug>_k<k>.txt and
// append to <out>/manifest.jsonl, print one table row.
EnumerateOutcome run_enumerate(const EnumerateArgs& args, std::ostream& out,
                               std::ostream& err);

// verify: check families (inline text or @file) against a group; prints one
// verdict line per family. Exit 0 if all valid, 2 if any invalid.
int run_verify(const std::string& group, int k, const std::string& family_arg,
               std::ostream& out, std::ostream& err);

// develop: expand families into design files. With one family the output
// path is used as-is; with several, ".<index>" is appended.
int run_develop(const std::string& group, const std::string& family_arg,
                const std::string& out_path, std::ostream& out, std::ostream& err);

// classify: read every parseable design file in a directory and print the
// isomorphism partition with per-class automorphism order.
int run_classify(const std::string& designs_dir, int threads, std::ostream& out,
                 std::ostream& err);

// sweep: run enumerate for every group listed in a file (one spec per
// line), printing one table row per group and appending manifest rows in
// list order. Exit 3 if any run was incomplete, else 0.
int run_sweep(const std::string& list_path, int k, const std::string& out_dir,
              int threads, std::optional<double> timeout_seconds,
              std::ostream& out, std::ostream& err);

// Reads "--family" style arguments: literal text, or "@path" for a file
// with one family per line.
std::vector<BaseFamily> load_family_arg(const std::string& family_arg,
                                        const CayleyTable& g);

std::string group_slug(const std::string& group_text);  // filesystem-safe name

}  // namespace rotsteiner
