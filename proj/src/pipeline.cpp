#include "rotsteiner/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "rotsteiner/io.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rotsteiner {

namespace {

namespace fs = std::filesystem;

int effective_threads(int requested) {
  if (requested >= 1) return requested;
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

// --multiplier accepts either an integer m (the power map x -> x^m, which
// must be an automorphism, e.g. any unit mod n on a cyclic group) or explicit
// cycle notation on element indices.
Automorphism parse_multiplier(const CayleyTable& g, const std::string& text) {
  const int n = g.order();
  Automorphism a;
  a.perm.resize(n);
  std::string t;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) t.push_back(c);
  if (t.empty()) throw std::invalid_argument("empty multiplier");
  const bool numeric =
      std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
      (t[0] == '-' && t.size() > 1 &&
       std::all_of(t.begin() + 1, t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }));
  if (numeric) {
    const long long m = std::stoll(t);
    for (int x = 0; x < n; ++x) {
      const int ord = g.elem_order(x);
      long long e = ((m % ord) + ord) % ord;
      int y = 0;
      for (long long i = 0; i < e; ++i) y = g.mul(y, x);
      a.perm[x] = static_cast<std::uint16_t>(y);
    }
  } else {
    const std::vector<int> p = parse_permutation_cycles(n, text);
    for (int x = 0; x < n; ++x) a.perm[x] = static_cast<std::uint16_t>(p[x]);
  }
  if (!is_automorphism(g, a))
    throw std::invalid_argument("multiplier '" + text + "' is not an automorphism of the group");
  return a;
}

void print_table_header(std::ostream& out) {
  out << std::left << std::setw(14) << "GROUP" << std::setw(26) << "STRUCTURE" << std::right
      << std::setw(3) << "K" << std::setw(5) << "V" << std::setw(8) << "RAW" << std::setw(9)
      << "CLASSES" << std::setw(6) << "ISO" << std::setw(10) << "COMPLETE" << std::setw(12)
      << "TIME(MS)" << "\n";
}

void print_table_row(std::ostream& out, const RunManifest& m) {
  out << std::left << std::setw(14) << m.group << std::setw(26) << m.structure << std::right
      << std::setw(3) << m.k << std::setw(5) << m.v << std::setw(8) << m.raw_solutions
      << std::setw(9) << m.equivalence_classes << std::setw(6)
      << (m.isomorphism_classes ? std::to_string(*m.isomorphism_classes) : std::string("-"))
      << std::setw(10) << (m.complete ? "yes" : "NO") << std::setw(12) << std::fixed
      << std::setprecision(1) << m.elapsed_ms << "\n";
}

EnumerateOutcome enumerate_impl(const EnumerateArgs& args, std::ostream& out, std::ostream& err,
                                bool print_header) {
  EnumerateOutcome oc;
  RunManifest& m = oc.manifest;
  m.group = args.group;
  m.k = args.k;
  m.multiplier = args.multiplier;
  m.max_solutions = args.max_solutions;
  m.timeout_seconds = args.timeout_seconds;
  m.threads = effective_threads(args.threads);

  const auto t0 = std::chrono::steady_clock::now();
  ResolvedGroup rg = [&] {
    try {
      return resolve_group(args.group);
    } catch (const std::exception& e) {
      throw std::invalid_argument(std::string("cannot resolve group '") + args.group +
                                  "': " + e.what());
    }
  }();
  m.group = rg.name;
  m.structure = rg.structure;
  m.v = rg.table.order() + 1;

  SearchOptions sopts;
  sopts.thread_count = args.threads;
  sopts.max_solutions = args.max_solutions;
  sopts.timeout_seconds = args.timeout_seconds;
  if (args.multiplier) sopts.prescribed_multiplier = parse_multiplier(rg.table, *args.multiplier);

  EnumerateResult res = enumerate_families(rg.table, args.k, sopts);
  EquivalenceClasses eq = equivalence_classes(rg.table, res.families);

  m.raw_solutions = static_cast<long long>(res.families.size());
  m.equivalence_classes = static_cast<long long>(eq.representatives.size());
  m.complete = res.complete;

  if (args.classify_designs) {
    if (eq.representatives.empty()) {
      m.isomorphism_classes = 0;
    } else if (m.v <= kMaxDesignPoints) {
      // Equivalent families develop isomorphic designs, so classifying one
      // representative per class gives the full partition.
      std::vector<Design> designs;
      designs.reserve(eq.representatives.size());
      for (const BaseFamily& f : eq.representatives) designs.push_back(develop(rg.table, f));
      IsoClasses iso = isomorphism_classes(designs, m.threads);
      m.isomorphism_classes = static_cast<long long>(iso.classes.size());
    }
  }

  const auto t1 = std::chrono::steady_clock::now();
  m.elapsed_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();

  if (!args.out_dir.empty()) {
    fs::create_directories(args.out_dir);
    const fs::path fam_path =
        fs::path(args.out_dir) / ("families_" + group_slug(m.group) + "_k" + std::to_string(m.k) + ".txt");
    std::ostringstream body;
    body << "# group: " << m.group << "  structure: " << m.structure << "  k: " << m.k
         << "  v: " << m.v << "\n";
    body << "# raw solutions: " << m.raw_solutions
         << "  equivalence classes: " << m.equivalence_classes
         << (m.complete ? "" : "  (INCOMPLETE)") << "\n";
    body << "# one equivalence-class representative per line\n";
    for (const BaseFamily& f : eq.representatives) body << serialize_family(rg.table, f) << "\n";
    write_text_file(fam_path.string(), body.str());

    const fs::path man_path = fs::path(args.out_dir) / "manifest.jsonl";
    std::ofstream man(man_path, std::ios::app);
    if (!man) throw std::runtime_error("cannot append to " + man_path.string());
    man << m.to_json() << "\n";
  }

  if (print_header) print_table_header(out);
  print_table_row(out, m);
  if (!m.complete)
    err << "warning: search for " << m.group << " k=" << m.k << " is incomplete ("
        << (res.status == SearchStatus::TimedOut ? "timed out" : "solution cap reached") << ")\n";

  oc.representatives = std::move(eq.representatives);
  oc.raw_families = std::move(res.families);
  oc.exit_code = m.complete ? kExitOk : kExitIncomplete;
  return oc;
}

}  // namespace

std::string RunManifest::to_json() const {
  nlohmann::ordered_json j;
  j["group"] = group;
  j["structure"] = structure;
  j["k"] = k;
  j["v"] = v;
  j["threads"] = threads;
  j["multiplier"] = multiplier ? nlohmann::ordered_json(*multiplier) : nlohmann::ordered_json(nullptr);
  j["max_solutions"] =
      max_solutions ? nlohmann::ordered_json(*max_solutions) : nlohmann::ordered_json(nullptr);
  j["timeout_seconds"] =
      timeout_seconds ? nlohmann::ordered_json(*timeout_seconds) : nlohmann::ordered_json(nullptr);
  j["raw_solutions"] = raw_solutions;
  j["equivalence_classes"] = equivalence_classes;
  j["isomorphism_classes"] = isomorphism_classes ? nlohmann::ordered_json(*isomorphism_classes)
                                                 : nlohmann::ordered_json(nullptr);
  j["complete"] = complete;
  j["elapsed_ms"] = elapsed_ms;
  return j.dump();
}

EnumerateOutcome run_enumerate(const EnumerateArgs& args, std::ostream& out, std::ostream& err) {
  try {
    return enumerate_impl(args, out, err, /*print_header=*/true);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    EnumerateOutcome oc;
    oc.exit_code = kExitInvalidInput;
    return oc;
  }
}

std::vector<BaseFamily> load_family_arg(const std::string& family_arg, const CayleyTable& g) {
  if (!family_arg.empty() && family_arg[0] == '@')
    return parse_family_lines(read_text_file(family_arg.substr(1)), g);
  return {parse_family(family_arg, g)};
}

int run_verify(const std::string& group, int k, const std::string& family_arg, std::ostream& out,
               std::ostream& err) {
  ResolvedGroup rg;
  std::vector<BaseFamily> families;
  try {
    rg = resolve_group(group);
    families = load_family_arg(family_arg, rg.table);
    if (families.empty()) throw std::invalid_argument("no families given");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  bool all_valid = true;
  for (std::size_t i = 0; i < families.size(); ++i) {
    const FamilyVerification rep = verify_family(rg.table, k, families[i]);
    out << "family " << (i + 1) << ": ";
    if (rep.valid) {
      out << "valid difference family for S(2," << k << "," << rg.table.order() + 1 << ") over "
          << rg.name << "\n";
    } else {
      out << "INVALID: " << rep.detail << "\n";
      all_valid = false;
    }
  }
  return all_valid ? kExitOk : kExitVerificationFailed;
}

int run_develop(const std::string& group, const std::string& family_arg,
                const std::string& out_path, std::ostream& out, std::ostream& err) {
  ResolvedGroup rg;
  std::vector<BaseFamily> families;
  try {
    rg = resolve_group(group);
    families = load_family_arg(family_arg, rg.table);
    if (families.empty()) throw std::invalid_argument("no families given");
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }
  for (std::size_t i = 0; i < families.size(); ++i) {
    const FamilyVerification rep = verify_family(rg.table, families[i].k, families[i]);
    if (!rep.valid) {
      err << "error: family " << (i + 1) << " is not a valid difference family: " << rep.detail
          << "\n";
      return kExitVerificationFailed;
    }
    const Design d = develop(rg.table, families[i]);
    std::string path = out_path;
    if (families.size() > 1) path += "." + std::to_string(i + 1);
    write_text_file(path, serialize_design(d));
    out << "wrote " << path << " (v=" << d.v << " k=" << d.k << " blocks=" << d.blocks.size()
        << ")\n";
  }
  return kExitOk;
}

int run_classify(const std::string& designs_dir, int threads, std::ostream& out,
                 std::ostream& err) {
  std::vector<std::pair<std::string, Design>> loaded;
  try {
    if (!fs::is_directory(designs_dir))
      throw std::invalid_argument("not a directory: " + designs_dir);
    std::vector<fs::path> paths;
    for (const auto& entry : fs::directory_iterator(designs_dir))
      if (entry.is_regular_file()) paths.push_back(entry.path());
    std::sort(paths.begin(), paths.end());
    for (const fs::path& p : paths) {
      try {
        loaded.emplace_back(p.filename().string(), load_design_file(p.string()));
      } catch (const std::exception& e) {
        err << "note: skipping " << p.filename().string() << ": " << e.what() << "\n";
      }
    }
    if (loaded.empty()) throw std::invalid_argument("no parseable design files in " + designs_dir);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }

  std::vector<Design> designs;
  designs.reserve(loaded.size());
  for (auto& [name, d] : loaded) designs.push_back(std::move(d));
  IsoClasses iso;
  try {
    iso = isomorphism_classes(designs, effective_threads(threads));
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }

  out << loaded.size() << " designs, " << iso.classes.size() << " isomorphism class"
      << (iso.classes.size() == 1 ? "" : "es") << "\n";
  for (std::size_t c = 0; c < iso.classes.size(); ++c) {
    out << "class " << (c + 1) << ": aut_order=" << iso.aut_orders[c] << " members:";
    for (int idx : iso.classes[c]) out << " " << loaded[static_cast<std::size_t>(idx)].first;
    out << "\n";
  }
  return kExitOk;
}

int run_sweep(const std::string& list_path, int k, const std::string& out_dir, int threads,
              std::optional<double> timeout_seconds, std::ostream& out, std::ostream& err) {
  std::vector<std::string> specs;
  try {
    std::istringstream in(read_text_file(list_path));
    std::string line;
    while (std::getline(in, line)) {
      const std::size_t first = line.find_first_not_of(" \t\r");
      if (first == std::string::npos || line[first] == '#') continue;
      const std::size_t last = line.find_last_not_of(" \t\r");
      specs.push_back(line.substr(first, last - first + 1));
    }
    if (specs.empty()) throw std::invalid_argument("no group specs in " + list_path);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  }

  int worst = kExitOk;
  bool first_row = true;
  for (const std::string& spec : specs) {
    EnumerateArgs args;
    args.group = spec;
    args.k = k;
    args.threads = threads;
    args.timeout_seconds = timeout_seconds;
    args.out_dir = out_dir;
    try {
      const EnumerateOutcome oc = enumerate_impl(args, out, err, first_row);
      first_row = false;
      if (oc.exit_code == kExitIncomplete && worst != kExitInvalidInput) worst = kExitIncomplete;
    } catch (const std::invalid_argument& e) {
      err << "error: " << e.what() << "\n";
      worst = kExitInvalidInput;
    }
  }
  return worst;
}

std::string group_slug(const std::string& group_text) {
  std::string slug;
  for (char c : group_text) {
    const unsigned char u = static_cast<unsigned char>(c);
    if (std::isalnum(u)) {
      slug.push_back(static_cast<char>(std::tolower(u)));
    } else if (!slug.empty() && slug.back() != '_') {
      slug.push_back('_');
    }
  }
  while (!slug.empty() && slug.back() == '_') slug.pop_back();
  return slug.empty() ? "group" : slug;
}

}  // namespace rotsteiner
