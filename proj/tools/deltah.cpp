// deltah: command-line front end for the contract calculus.
//
// Subcommands: check, run, trace, essence, fuzz.  Exit codes follow sysexits
// where the outcome is not a language result: 64 usage, 65 parse error,
// 66 missing file, 70 internal error; language results use 0 (all paths
// value), 1 (some path blames), 2 (type error / refuted), 3 (stuck state),
// 4 (fuel or state budget exhausted / unknown).

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "deltah/essence.hpp"
#include "deltah/eval.hpp"
#include "deltah/gen.hpp"
#include "deltah/parser.hpp"
#include "deltah/prelude.hpp"
#include "deltah/printer.hpp"
#include "deltah/properties.hpp"
#include "deltah/typecheck.hpp"
#include "json.hpp"

namespace {

constexpr int kExitValue = 0;
constexpr int kExitBlame = 1;
constexpr int kExitTypeError = 2;
constexpr int kExitStuck = 3;
constexpr int kExitFuel = 4;
constexpr int kExitUsage = 64;
constexpr int kExitParse = 65;
constexpr int kExitNoInput = 66;
constexpr int kExitInternal = 70;

struct Common {
  std::string file;
  bool no_prelude = false;
  bool numerals = false;
  bool json = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "deltah: cannot open '" << path << "'\n";
    std::exit(kExitNoInput);
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Loaded {
  deltah::Command command;
  deltah::PrintOptions print_opts;
};

Loaded load(const Common& c) {
  using namespace deltah;
  ParseOptions popts;
  PrintOptions printo;
  printo.numerals = c.numerals;
  if (!c.no_prelude) {
    const Prelude& p = prelude();
    if (auto err = verify_prelude(p)) {
      std::cerr << "deltah: internal: " << *err << "\n";
      std::exit(kExitInternal);
    }
    popts.abbrevs = &p.type_abbrevs;
    printo.abbrevs = &p.type_abbrevs;
  }
  std::string text = read_file(c.file);
  try {
    Command cmd = parse_command(text, popts);
    if (!c.no_prelude) cmd = resolve(cmd, prelude());
    return Loaded{cmd, printo};
  } catch (const ParseError& e) {
    std::cerr << c.file << ": " << e.what() << "\n";
    std::exit(kExitParse);
  }
}

int exit_code_for(const deltah::EvalResult& r) {
  if (r.blame) return kExitBlame;
  if (!r.stuck.empty()) return kExitStuck;
  if (!r.fuel_exhausted.empty()) return kExitFuel;
  return kExitValue;
}

nlohmann::json eval_json(const deltah::EvalResult& r,
                         const deltah::PrintOptions& po) {
  nlohmann::json j;
  j["values"] = nlohmann::json::array();
  for (const auto& v : r.values) j["values"].push_back(deltah::print(v, po));
  j["blame"] = r.blame;
  j["stuck"] = nlohmann::json::array();
  for (const auto& s : r.stuck) j["stuck"].push_back(deltah::print(s, po));
  j["fuel_exhausted"] = nlohmann::json::array();
  for (const auto& s : r.fuel_exhausted) {
    j["fuel_exhausted"].push_back(deltah::print(s, po));
  }
  j["steps_used"] = r.steps_used;
  j["states_explored"] = r.states_explored;
  j["exit_code"] = exit_code_for(r);
  return j;
}

deltah::Strategy make_strategy(const std::string& name, std::uint64_t seed,
                               int max_states) {
  using deltah::Strategy;
  if (name == "first") return Strategy::first();
  if (name == "all") return Strategy::exhaustive(max_states);
  if (name == "random") return Strategy::random(seed);
  std::cerr << "deltah: unknown strategy '" << name << "'\n";
  std::exit(kExitUsage);
}

int run_pcf(const Loaded& loaded, const Common& common, bool show_trace,
            int fuel) {
  using namespace deltah;
  if (loaded.command.is_blame()) {
    std::cerr << "deltah: 'blame' is not a plain PCF program\n";
    return kExitParse;
  }
  ExprPtr resolved = common.no_prelude
                         ? loaded.command.expr()
                         : resolve_for_pcf(loaded.command.expr(), prelude());
  auto p = to_pcf(resolved);
  if (!p) {
    std::cerr << "deltah: program uses contract-calculus forms; not plain "
                 "PCF\n";
    return kExitParse;
  }
  if (show_trace) {
    pcf::ExprPtr cur = *p;
    int k = 0;
    while (k < fuel) {
      auto s = pcf::pcf_step_labeled(cur);
      if (!s) break;
      ++k;
      std::cout << "step " << k << " [" << s->first << "] "
                << print(embed(s->second), loaded.print_opts) << "\n";
      cur = s->second;
    }
  }
  pcf::EvalOutcome out = pcf::pcf_eval(*p, fuel);
  switch (out.kind) {
    case pcf::EvalOutcome::Kind::Value:
      std::cout << print(embed(out.term), loaded.print_opts) << "\n";
      return kExitValue;
    case pcf::EvalOutcome::Kind::Stuck:
      std::cout << "stuck: " << print(embed(out.term), loaded.print_opts)
                << "\n";
      return kExitStuck;
    case pcf::EvalOutcome::Kind::FuelExhausted:
      std::cout << "fuel exhausted after " << out.steps << " steps\n";
      return kExitFuel;
  }
  return kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  using namespace deltah;

  CLI::App app{"deltah: a contract calculus with refinement intersection "
               "types"};
  app.set_version_flag("--version", "deltah 0.1.0");
  app.require_subcommand(1);

  // ---- check -------------------------------------------------------------
  Common check_c;
  bool check_runtime_flag = false;
  int check_fuel = kDefaultFuel;
  std::string check_goal;
  auto* check_cmd = app.add_subcommand("check", "typecheck a program");
  check_cmd->add_option("file", check_c.file, "source file")->required();
  check_cmd->add_flag("--runtime", check_runtime_flag,
                      "use the run-time rules (three-valued)");
  check_cmd->add_option("--fuel", check_fuel, "budget for reduction premises");
  check_cmd->add_option("--type", check_goal,
                        "goal type for --runtime (defaults to the "
                        "compile-time type)");
  check_cmd->add_flag("--no-prelude", check_c.no_prelude, "");
  check_cmd->add_flag("--json", check_c.json, "");

  // ---- run / trace ---------------------------------------------------------
  Common run_c;
  std::string run_lang = "deltah";
  std::string run_strategy = "first";
  std::uint64_t run_seed = 0;
  int run_fuel = kDefaultFuel;
  int run_max_states = kDefaultMaxStates;
  int run_jobs = 1;
  bool run_trace_flag = false;
  bool run_check_flag = false;
  auto* run_cmd = app.add_subcommand("run", "evaluate a program");
  run_cmd->add_option("file", run_c.file, "source file")->required();
  run_cmd->add_option("--lang", run_lang, "pcfv|deltah (default deltah)");
  run_cmd->add_option("--strategy", run_strategy, "first|all|random");
  run_cmd->add_option("--seed", run_seed, "random strategy seed");
  run_cmd->add_option("--fuel", run_fuel, "steps per path");
  run_cmd->add_option("--max-states", run_max_states,
                      "state budget for --strategy all");
  run_cmd->add_option("--jobs", run_jobs, "worker threads for exploration");
  run_cmd->add_flag("--trace", run_trace_flag, "print the labeled path");
  run_cmd->add_flag("--check", run_check_flag, "typecheck before running");
  run_cmd->add_flag("--no-prelude", run_c.no_prelude, "");
  run_cmd->add_flag("--numerals", run_c.numerals, "print numerals as decimals");
  run_cmd->add_flag("--json", run_c.json, "");

  Common trace_c;
  std::string trace_lang = "deltah";
  std::string trace_strategy = "first";
  std::uint64_t trace_seed = 0;
  int trace_fuel = kDefaultFuel;
  auto* trace_cmd = app.add_subcommand("trace", "print one labeled path");
  trace_cmd->add_option("file", trace_c.file, "source file")->required();
  trace_cmd->add_option("--lang", trace_lang, "pcfv|deltah");
  trace_cmd->add_option("--strategy", trace_strategy, "first|random");
  trace_cmd->add_option("--seed", trace_seed, "random strategy seed");
  trace_cmd->add_option("--fuel", trace_fuel, "maximum steps");
  trace_cmd->add_flag("--no-prelude", trace_c.no_prelude, "");
  trace_cmd->add_flag("--numerals", trace_c.numerals, "");

  // ---- essence -------------------------------------------------------------
  Common ess_c;
  auto* ess_cmd = app.add_subcommand("essence", "print the plain skeleton");
  ess_cmd->add_option("file", ess_c.file, "source file")->required();
  ess_cmd->add_flag("--no-prelude", ess_c.no_prelude, "");
  ess_cmd->add_flag("--numerals", ess_c.numerals, "");

  // ---- fuzz ----------------------------------------------------------------
  std::string fuzz_prop;
  int fuzz_cases = 500;
  int fuzz_fuel = 2000;
  int fuzz_jobs = 1;
  bool fuzz_json = false;
  GenConfig fuzz_cfg;
  auto* fuzz_cmd = app.add_subcommand("fuzz", "run a metatheory property");
  fuzz_cmd->add_option("--prop", fuzz_prop, "property name")->required();
  fuzz_cmd->add_option("--cases", fuzz_cases, "generated cases");
  fuzz_cmd->add_option("--seed", fuzz_cfg.seed, "generator seed");
  fuzz_cmd->add_option("--fuel", fuzz_fuel, "per-case budget");
  fuzz_cmd->add_option("--jobs", fuzz_jobs, "worker threads");
  fuzz_cmd->add_option("--max-depth", fuzz_cfg.max_depth, "");
  fuzz_cmd->add_option("--max-numeral", fuzz_cfg.max_numeral, "");
  fuzz_cmd->add_option("--pool", fuzz_cfg.predicate_pool, "");
  fuzz_cmd->add_option("--wedge-prob", fuzz_cfg.wedge_prob, "");
  fuzz_cmd->add_option("--cast-prob", fuzz_cfg.cast_prob, "");
  fuzz_cmd->add_flag("--json", fuzz_json, "");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (check_cmd->parsed()) {
      Loaded loaded = load(check_c);
      if (loaded.command.is_blame()) {
        std::cerr << "deltah: 'blame' has no type\n";
        return kExitTypeError;
      }
      InferResult r = infer_compile(TypingContext{}, loaded.command.expr());
      if (!check_runtime_flag) {
        if (inferred(r)) {
          std::cout << print(inferred_type(r), loaded.print_opts) << "\n";
          return kExitValue;
        }
        const TypeError& e = infer_error(r);
        if (check_c.json) {
          nlohmann::json j = {{"verdict", "no"},
                              {"rule", e.rule},
                              {"kind", to_string(e.kind)},
                              {"message", e.message},
                              {"location", e.location}};
          std::cout << j.dump(2) << "\n";
        } else {
          std::cerr << "type error [" << e.rule << "/" << to_string(e.kind)
                    << "] " << e.message << "\n  at: " << e.location << "\n";
        }
        return kExitTypeError;
      }
      TypePtr goal;
      if (!check_goal.empty()) {
        ParseOptions popts;
        if (!check_c.no_prelude) popts.abbrevs = &prelude().type_abbrevs;
        goal = parse_type(check_goal, popts);
        if (!check_c.no_prelude) {
          // Type predicates may mention prelude functions.
          for (const PreludeDef& def : prelude().defs) {
            goal = subst(goal, def.name, def.term);
          }
        }
      } else if (inferred(r)) {
        goal = inferred_type(r);
      } else {
        std::cerr << "deltah: --runtime needs --type when the program has no "
                     "compile-time type\n";
        return kExitUsage;
      }
      TriVerdict v = check_runtime(TypingContext{}, loaded.command.expr(),
                                   goal, check_fuel);
      const char* verdict = v.is_yes() ? "yes" : v.is_no() ? "no" : "unknown";
      if (check_c.json) {
        nlohmann::json j = {{"verdict", verdict},
                            {"type", print(goal, loaded.print_opts)}};
        if (v.is_no()) {
          j["rule"] = v.error->rule;
          j["message"] = v.error->message;
        }
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << verdict << ": " << print(goal, loaded.print_opts) << "\n";
        if (v.is_no()) {
          std::cerr << "  [" << v.error->rule << "] " << v.error->message
                    << "\n";
        }
      }
      return v.is_yes() ? kExitValue : v.is_no() ? kExitTypeError : kExitFuel;
    }

    if (run_cmd->parsed()) {
      Loaded loaded = load(run_c);
      if (run_lang == "pcfv") {
        return run_pcf(loaded, run_c, run_trace_flag, run_fuel);
      }
      if (run_lang != "deltah") {
        std::cerr << "deltah: unknown language '" << run_lang << "'\n";
        return kExitUsage;
      }
      if (run_check_flag && !loaded.command.is_blame()) {
        InferResult r = infer_compile(TypingContext{}, loaded.command.expr());
        if (!inferred(r)) {
          const TypeError& e = infer_error(r);
          std::cerr << "type error [" << e.rule << "/" << to_string(e.kind)
                    << "] " << e.message << "\n";
          return kExitTypeError;
        }
      }
      Strategy strategy =
          make_strategy(run_strategy, run_seed, run_max_states);
      if (run_trace_flag && strategy.kind != Strategy::Kind::Exhaustive &&
          !loaded.command.is_blame()) {
        int k = 0;
        for (auto& [label, cmd] :
             trace(loaded.command.expr(), strategy, run_fuel)) {
          std::cout << "step " << ++k << " [" << label.rule << "] "
                    << print(cmd, loaded.print_opts) << "\n";
        }
      }
      EvalResult r = eval(loaded.command, strategy, run_fuel, run_jobs);
      if (run_c.json) {
        std::cout << eval_json(r, loaded.print_opts).dump(2) << "\n";
        return exit_code_for(r);
      }
      for (const auto& v : r.values) {
        std::cout << (strategy.kind == Strategy::Kind::Exhaustive ? "value: "
                                                                  : "")
                  << print(v, loaded.print_opts) << "\n";
      }
      if (r.blame) std::cout << "blame\n";
      for (const auto& s : r.stuck) {
        std::cout << "stuck: " << print(s, loaded.print_opts) << "\n";
      }
      if (!r.fuel_exhausted.empty()) {
        std::cout << "budget exhausted on " << r.fuel_exhausted.size()
                  << " path(s)\n";
      }
      return exit_code_for(r);
    }

    if (trace_cmd->parsed()) {
      Loaded loaded = load(trace_c);
      if (trace_lang == "pcfv") {
        return run_pcf(loaded, trace_c, true, trace_fuel);
      }
      if (loaded.command.is_blame()) {
        std::cout << "blame\n";
        return kExitBlame;
      }
      Strategy strategy = make_strategy(trace_strategy, trace_seed, 0);
      if (strategy.kind == Strategy::Kind::Exhaustive) {
        std::cerr << "deltah: trace needs --strategy first|random\n";
        return kExitUsage;
      }
      auto steps = trace(loaded.command.expr(), strategy, trace_fuel);
      int k = 0;
      for (auto& [label, cmd] : steps) {
        std::cout << "step " << ++k << " [" << label.rule << "] "
                  << print(cmd, loaded.print_opts) << "\n";
      }
      Command last = steps.empty() ? loaded.command : steps.back().second;
      if (last.is_blame()) return kExitBlame;
      if (is_value(last.expr())) return kExitValue;
      if (step_all(last).empty()) return kExitStuck;
      return kExitFuel;
    }

    if (ess_cmd->parsed()) {
      Loaded loaded = load(ess_c);
      if (loaded.command.is_blame()) {
        std::cerr << "deltah: 'blame' has no essence\n";
        return kExitUsage;
      }
      std::cout << print(embed(essence_expr(loaded.command.expr())),
                         loaded.print_opts)
                << "\n";
      return kExitValue;
    }

    if (fuzz_cmd->parsed()) {
      if (!is_property_name(fuzz_prop)) {
        std::cerr << "deltah: unknown property '" << fuzz_prop
                  << "'; known:";
        for (const auto& n : property_names()) std::cerr << " " << n;
        std::cerr << "\n";
        return kExitUsage;
      }
      Corpus corpus = build_corpus(fuzz_prop, fuzz_cfg, fuzz_cases);
      PropertyReport report =
          check_property(fuzz_prop, corpus, fuzz_fuel, fuzz_jobs);
      if (fuzz_json) {
        std::cout << report.to_json() << "\n";
      } else {
        std::cout << report.property << ": " << report.passed << "/"
                  << report.cases << " passed, " << report.unknown
                  << " unknown, " << report.failed << " failed ("
                  << report.states_explored << " states explored)\n";
        if (report.counterexample) {
          std::cout << "counterexample: " << print(report.counterexample->term)
                    << "\n";
          for (const auto& s : report.counterexample->trace) {
            std::cout << "  [" << s.rule << "] " << s.command << "\n";
          }
        }
      }
      return report.failed == 0 ? 0 : 1;
    }
  } catch (const ParseError& e) {
    std::cerr << "deltah: " << e.what() << "\n";
    return kExitParse;
  } catch (const std::exception& e) {
    std::cerr << "deltah: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
