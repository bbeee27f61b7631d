#pragma once

// Command implementations behind the argdb tool. Each command is a plain
// function from options to a CliOutput so tests can drive them in-process;
// the binary in tools/ only does flag parsing and stream plumbing.
//
// Exit codes: 0 success, 2 unreadable or malformed input, 3 enumeration
// budget exceeded, 4 route disagreement or equivalence violation, 5 unknown
// fact label or argument name.

#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "framework.hpp"
#include "model.hpp"
#include "parser.hpp"
#include "reductions.hpp"
#include "repairs.hpp"
#include "semantics.hpp"

namespace argdb {

struct CliOutput {
  int exit_code = 0;
  std::string out;
  std::string err;
};

namespace cli_detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::invalid_argument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot write '" + path + "'");
  out << content;
}

inline Route parse_route(const std::string& s) {
  if (s == "oracle") return Route::Oracle;
  if (s == "argumentation") return Route::Argumentation;
  if (s == "both") return Route::Both;
  throw std::invalid_argument("unknown route '" + s + "'");
}

inline SemanticsKind parse_semantics(const std::string& s) {
  if (s == "conflict-free") return SemanticsKind::ConflictFree;
  if (s == "naive") return SemanticsKind::Naive;
  if (s == "admissible") return SemanticsKind::Admissible;
  if (s == "preferred") return SemanticsKind::Preferred;
  if (s == "stable") return SemanticsKind::Stable;
  throw std::invalid_argument("unknown semantics '" + s + "'");
}

inline std::string fact_name(const Fact& f, const std::map<std::string, Fact>& labels) {
  for (const auto& [name, fact] : labels) {
    if (fact == f) return name;
  }
  return to_string(f);
}

inline std::string render_fact_set(const std::set<Fact>& facts,
                                   const std::map<std::string, Fact>& labels) {
  std::string out = "{";
  bool first = true;
  for (const auto& f : facts) {
    if (!first) out += ", ";
    first = false;
    out += fact_name(f, labels);
  }
  return out + "}";
}

template <typename Body>
inline CliOutput guarded(Body&& body) {
  CliOutput result;
  try {
    body(result);
  } catch (const SourceError& e) {
    result.exit_code = 2;
    result.err = std::string("error: ") + e.what() + "\n";
  } catch (const BudgetExceeded& e) {
    result.exit_code = 3;
    result.err = std::string("error: ") + e.what() + "\n";
  } catch (const RouteMismatch& e) {
    result.exit_code = 4;
    result.err = std::string("error: ") + e.what() + "\n";
  } catch (const std::invalid_argument& e) {
    result.exit_code = 2;
    result.err = std::string("error: ") + e.what() + "\n";
  }
  return result;
}

}  // namespace cli_detail

// -- repairs ------------------------------------------------------------------

struct RepairsOptions {
  std::string format = "pretty";  // pretty | json
  std::string route = "oracle";
  bool exists_only = false;
  int max_facts = kDefaultMaxFacts;
  int max_args = kDefaultMaxArguments;
};

inline CliOutput cmd_repairs(const std::string& path, const RepairsOptions& opt = {}) {
  return cli_detail::guarded([&](CliOutput& result) {
    ParsedInstance pi = parse_instance(cli_detail::read_file(path));
    Route route = cli_detail::parse_route(opt.route);
    Budgets budgets{opt.max_facts, opt.max_args};

    if (opt.exists_only) {
      bool answer = rep_nonempty(pi.cdb, route, budgets);
      if (opt.format == "json") {
        nlohmann::json j;
        j["command"] = "repairs";
        j["exists_nonempty"] = answer;
        result.out = j.dump(2) + "\n";
      } else {
        result.out = std::string("nonempty repair: ") + (answer ? "yes" : "no") + "\n";
      }
      return;
    }

    RepairSet repairs;
    switch (route) {
      case Route::Oracle:
        repairs = all_repairs(pi.cdb, opt.max_facts);
        break;
      case Route::Argumentation:
        repairs = repairs_via_argumentation(pi.cdb, opt.max_args);
        break;
      case Route::Both: {
        repairs = all_repairs(pi.cdb, opt.max_facts);
        RepairSet argued = repairs_via_argumentation(pi.cdb, opt.max_args);
        if (!(repairs == argued)) {
          throw RouteMismatch("repair enumeration differs between routes: oracle found " +
                              std::to_string(repairs.repairs.size()) + ", argumentation found " +
                              std::to_string(argued.repairs.size()));
        }
        break;
      }
    }
    if (opt.format == "json") {
      nlohmann::json j;
      j["command"] = "repairs";
      j["count"] = repairs.repairs.size();
      j["repairs"] = nlohmann::json::array();
      for (const auto& r : repairs.repairs) {
        nlohmann::json one = nlohmann::json::array();
        for (const auto& f : r) one.push_back(cli_detail::fact_name(f, pi.labels));
        j["repairs"].push_back(one);
      }
      result.out = j.dump(2) + "\n";
    } else {
      for (const auto& r : repairs.repairs) {
        result.out += cli_detail::render_fact_set(r, pi.labels) + "\n";
      }
      result.out += std::to_string(repairs.repairs.size()) + " repair(s)\n";
    }
  });
}

// -- translate ----------------------------------------------------------------

struct TranslateOptions {
  std::string format = "pretty";  // pretty = apx text
  bool force_setaf = false;
  bool do_preprocess = false;
  std::string output_path;  // empty = stdout
};

inline CliOutput cmd_translate(const std::string& path, const TranslateOptions& opt = {}) {
  return cli_detail::guarded([&](CliOutput& result) {
    ParsedInstance pi = parse_instance(cli_detail::read_file(path));
    Setaf setaf = build_for_profile(pi.cdb, opt.force_setaf);
    std::set<Fact> removed;
    if (opt.do_preprocess) {
      PreprocessResult pre = preprocess(setaf);
      setaf = pre.reduced;
      removed = pre.removed_facts;
    }
    std::string rendered;
    if (opt.format == "json") {
      nlohmann::json j;
      j["command"] = "translate";
      j["plain"] = is_plain(setaf);
      j["arguments"] = nlohmann::json::array();
      for (const auto& a : setaf.arguments) j["arguments"].push_back(argument_name(a, pi.labels));
      j["attacks"] = nlohmann::json::array();
      for (const auto& atk : setaf.attacks) {
        nlohmann::json one;
        one["sources"] = nlohmann::json::array();
        for (const auto& src : atk.sources) one["sources"].push_back(argument_name(src, pi.labels));
        one["target"] = argument_name(atk.target, pi.labels);
        auto origin = setaf.provenance.find(atk);
        one["origin"] = origin == setaf.provenance.end() ? "" : origin->second;
        j["attacks"].push_back(one);
      }
      j["removed"] = nlohmann::json::array();
      for (const auto& f : removed) j["removed"].push_back(cli_detail::fact_name(f, pi.labels));
      rendered = j.dump(2) + "\n";
    } else {
      for (const auto& f : removed) {
        rendered += "% removed: " + cli_detail::fact_name(f, pi.labels) + "\n";
      }
      rendered += export_apx(setaf, pi.labels);
    }
    if (opt.output_path.empty()) {
      result.out = rendered;
    } else {
      cli_detail::write_file(opt.output_path, rendered);
    }
  });
}

// -- accept -------------------------------------------------------------------

struct AcceptOptions {
  std::string task = "sr";  // sr | ar | cred | skep
  std::string semantics = "preferred";
  std::string route = "argumentation";
  std::string format = "pretty";
  int max_facts = kDefaultMaxFacts;
  int max_args = kDefaultMaxArguments;
};

inline CliOutput cmd_accept(const std::string& path, const std::string& label,
                            const AcceptOptions& opt = {}) {
  return cli_detail::guarded([&](CliOutput& result) {
    bool is_apx = std::filesystem::path(path).extension() == ".apx";
    bool answer = false;

    if (is_apx) {
      if (opt.task != "cred" && opt.task != "skep") {
        throw std::invalid_argument("task '" + opt.task +
                                    "' needs a constrained database, not a framework");
      }
      ImportedFramework imported = import_apx(cli_detail::read_file(path));
      auto it = imported.names.find(label);
      if (it == imported.names.end()) {
        result.exit_code = 5;
        result.err = "error: unknown argument '" + label + "'\n";
        return;
      }
      SemanticsKind kind = cli_detail::parse_semantics(opt.semantics);
      answer = opt.task == "cred" ? credulous(imported.setaf, kind, it->second, opt.max_args)
                                  : skeptical(imported.setaf, kind, it->second, opt.max_args);
    } else {
      ParsedInstance pi = parse_instance(cli_detail::read_file(path));
      auto it = pi.labels.find(label);
      if (it == pi.labels.end()) {
        result.exit_code = 5;
        result.err = "error: unknown label '" + label + "'\n";
        return;
      }
      Budgets budgets{opt.max_facts, opt.max_args};
      if (opt.task == "sr") {
        answer = in_some_repair(pi.cdb, it->second, cli_detail::parse_route(opt.route), budgets);
      } else if (opt.task == "ar") {
        answer = in_all_repairs(pi.cdb, it->second, cli_detail::parse_route(opt.route), budgets);
      } else if (opt.task == "cred" || opt.task == "skep") {
        SemanticsKind kind = cli_detail::parse_semantics(opt.semantics);
        Setaf setaf = build_for_profile(pi.cdb);
        Argument arg = Argument::for_fact(it->second);
        answer = opt.task == "cred" ? credulous(setaf, kind, arg, opt.max_args)
                                    : skeptical(setaf, kind, arg, opt.max_args);
      } else {
        throw std::invalid_argument("unknown task '" + opt.task + "'");
      }
    }

    if (opt.format == "json") {
      nlohmann::json j;
      j["command"] = "accept";
      j["task"] = opt.task;
      j["label"] = label;
      j["answer"] = answer;
      result.out = j.dump(2) + "\n";
    } else {
      result.out = std::string(answer ? "yes" : "no") + "\n";
    }
  });
}

// -- generate -----------------------------------------------------------------

struct GenerateOptions {
  std::string kind = "random";  // sat | qbf | random
  std::string mode = "sr";      // sat only: sr | rep
  std::string input_path;       // sat/qbf: DIMACS / QDIMACS file
  uint64_t seed = 1;
  std::string profile = "fd";  // random only: comma-joined classes
  int size_budget = 8;
  std::string output_path;  // empty = stdout
};

inline CliOutput cmd_generate(const GenerateOptions& opt) {
  return cli_detail::guarded([&](CliOutput& result) {
    std::string cdb_text;
    std::string distinguished;

    if (opt.kind == "sat" || opt.kind == "qbf") {
      if (opt.input_path.empty()) {
        throw std::invalid_argument("generate " + opt.kind + " needs --cnf <file>");
      }
    }
    if (opt.kind == "sat") {
      if (opt.mode != "sr" && opt.mode != "rep") {
        throw std::invalid_argument("unknown mode '" + opt.mode + "'");
      }
      CnfFormula cnf = parse_dimacs(cli_detail::read_file(opt.input_path));
      SatInstance inst = sat_to_instance(
          cnf, opt.mode == "rep" ? SatMode::RepairExistence : SatMode::SomeRepair);
      distinguished = cli_detail::fact_name(inst.distinguished, inst.labels);
      cdb_text = serialize_instance(inst.cdb, inst.labels);
      cdb_text += "% distinguished: " + distinguished + "\n";
    } else if (opt.kind == "qbf") {
      QbfFormula qbf = parse_qdimacs(cli_detail::read_file(opt.input_path));
      QbfInstance inst = qbf_to_instance(qbf);
      distinguished = cli_detail::fact_name(inst.distinguished, inst.labels);
      cdb_text = serialize_instance(inst.cdb, inst.labels);
      cdb_text += "% distinguished: " + distinguished + "\n";
    } else if (opt.kind == "random") {
      ConstraintProfile profile;
      std::stringstream ss(opt.profile);
      std::string item;
      while (std::getline(ss, item, ',')) {
        if (item == "fd") profile.has_fd = true;
        else if (item == "id") profile.has_id = true;
        else if (item == "dc") profile.has_dc = true;
        else if (item == "ltgd") profile.has_ltgd = true;
        else throw std::invalid_argument("unknown constraint class '" + item + "'");
      }
      if (!profile.has_fd && !profile.has_id && !profile.has_dc && !profile.has_ltgd) {
        throw std::invalid_argument("empty profile");
      }
      cdb_text = serialize_instance(random_instance(opt.seed, profile, opt.size_budget));
    } else {
      throw std::invalid_argument("unknown kind '" + opt.kind + "'");
    }

    if (opt.output_path.empty()) {
      result.out = cdb_text;
    } else {
      cli_detail::write_file(opt.output_path, cdb_text);
      if (!distinguished.empty()) result.out = "distinguished: " + distinguished + "\n";
    }
  });
}

// -- verify -------------------------------------------------------------------

struct VerifyOptions {
  std::string format = "pretty";
  int max_facts = kDefaultMaxFacts;
  int max_args = kDefaultMaxArguments;
};

inline CliOutput cmd_verify(const std::string& dir, const VerifyOptions& opt = {}) {
  return cli_detail::guarded([&](CliOutput& result) {
    std::vector<std::filesystem::path> files;
    std::error_code ec;
    for (const auto& entry : std::filesystem::directory_iterator(dir, ec)) {
      if (entry.path().extension() == ".cdb") files.push_back(entry.path());
    }
    if (ec) throw std::invalid_argument("cannot read directory '" + dir + "'");
    if (files.empty()) throw std::invalid_argument("no .cdb files under '" + dir + "'");
    std::sort(files.begin(), files.end());

    bool all_ok = true;
    nlohmann::json jreports = nlohmann::json::array();
    for (const auto& file : files) {
      ParsedInstance pi = parse_instance(cli_detail::read_file(file.string()));
      EquivalenceReport report = check_equivalence(pi.cdb, {opt.max_facts, opt.max_args});
      all_ok = all_ok && report.ok;
      if (opt.format == "json") {
        nlohmann::json j;
        j["file"] = file.filename().string();
        j["ok"] = report.ok;
        j["regime"] = report.regime;
        j["repairs"] = report.repairs.repairs.size();
        j["detail"] = report.detail;
        jreports.push_back(j);
      } else {
        result.out += file.filename().string() + ": " + report.detail +
                      (report.ok ? " ok" : " VIOLATION") + "\n";
      }
    }
    if (opt.format == "json") {
      nlohmann::json j;
      j["command"] = "verify";
      j["ok"] = all_ok;
      j["reports"] = jreports;
      result.out = j.dump(2) + "\n";
    }
    if (!all_ok) {
      result.exit_code = 4;
      result.err = "error: repairs and extensions disagree\n";
    }
  });
}

}  // namespace argdb
