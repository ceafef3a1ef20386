#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mvrobust/checker.hpp"
#include "mvrobust/dsl.hpp"
#include "mvrobust/optimizer.hpp"
#include "mvrobust/oracle.hpp"
#include "mvrobust/promotion.hpp"
#include "mvrobust/report.hpp"

namespace {

using namespace mvrobust;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitNotRobust = 1;
constexpr int kExitInputError = 2;

struct Options {
  bool as_json = false;
  bool serial = false;
  RunMode mode() const { return serial ? RunMode::Serial : RunMode::Parallel; }
};

void emit(const json& report, const Model& m, const Options& opt) {
  if (opt.as_json)
    std::cout << report.dump(2) << "\n";
  else
    std::cout << render_text(report, m);
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(0, "cannot open " + path);
  json j;
  in >> j;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robustness analysis of transaction templates against mixed "
               "RC/SI/SSI isolation-level allocations"};
  app.require_subcommand(1);

  Options opt;
  app.add_flag("--json", opt.as_json, "emit machine-readable JSON reports");
  app.add_flag("--text", [&](std::int64_t) { opt.as_json = false; },
               "emit human-readable text (default)");
  app.add_flag("--serial", opt.serial,
               "run the serial reference implementation instead of the "
               "OpenMP kernels");

  std::string templates_path, alloc_spec, witness_path, witness_out;
  int bound = 3;

  auto* check = app.add_subcommand("check", "decide template robustness");
  check->add_option("--templates", templates_path, "template DSL file")
      ->required();
  check->add_option("--alloc", alloc_spec,
                    "allocation, e.g. 'Balance=RC,WriteCheck=SI' (templates "
                    "not mentioned default to SSI)");
  check->add_option("--witness-out", witness_out,
                    "write the witness as a standalone JSON file");

  auto* lowest = app.add_subcommand(
      "lowest", "compute the unique lowest robust allocation");
  lowest->add_option("--templates", templates_path, "template DSL file")
      ->required();

  auto* promotions = app.add_subcommand(
      "promotions",
      "lowest robust allocation for every read-promotion choice");
  promotions->add_option("--templates", templates_path, "template DSL file")
      ->required();
  bool group_only = false;
  promotions->add_flag("--group", group_only,
                       "print only the allocation classes");

  auto* oracle = app.add_subcommand("oracle", "multiversion schedule oracle");
  oracle->require_subcommand(1);
  auto* verify = oracle->add_subcommand(
      "verify", "re-validate a witness file against the schedule semantics");
  verify->add_option("--witness", witness_path, "witness JSON file")
      ->required();
  verify->add_option("--alloc", alloc_spec, "allocation specification");
  auto* search = oracle->add_subcommand(
      "search", "exhaustive counterexample search up to a sequence bound");
  search->add_option("--templates", templates_path, "template DSL file")
      ->required();
  search->add_option("--alloc", alloc_spec, "allocation specification");
  search->add_option("--bound", bound, "maximum quadruple-sequence length")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (check->parsed()) {
      Model m = load_model_file(templates_path);
      Allocation alloc = parse_allocation(m, alloc_spec);
      Verdict verdict = is_robust(m, alloc, opt.mode());
      json report = check_report(m, alloc, verdict);
      if (!verdict.robust && !witness_out.empty()) {
        std::ofstream out(witness_out);
        out << witness_to_json(m, *verdict.witness).dump(2) << "\n";
      }
      emit(report, m, opt);
      return verdict.robust ? kExitOk : kExitNotRobust;
    }
    if (lowest->parsed()) {
      Model m = load_model_file(templates_path);
      Allocation result = lowest_allocation(m, opt.mode());
      emit(lowest_report(m, result), m, opt);
      return kExitOk;
    }
    if (promotions->parsed()) {
      Model m = load_model_file(templates_path);
      auto rows = explore(m, opt.mode());
      json report = promotions_report(m, rows);
      if (group_only && !opt.as_json) {
        for (const auto& g : report.at("groups")) {
          std::cout << "(" << g.at("id").get<std::string>() << ")";
          for (const auto& label : g.at("choices"))
            std::cout << " [" << label.get<std::string>() << "]";
          std::cout << "\n";
        }
      } else {
        emit(report, m, opt);
      }
      return kExitOk;
    }
    if (verify->parsed()) {
      LoadedWitness loaded = witness_from_json(load_json_file(witness_path));
      Allocation alloc = parse_allocation(loaded.model, alloc_spec);
      json report = oracle_verify_report(loaded.model, alloc, loaded.witness);
      emit(report, loaded.model, opt);
      return report.at("valid").get<bool>() ? kExitOk : kExitNotRobust;
    }
    if (search->parsed()) {
      Model m = load_model_file(templates_path);
      Allocation alloc = parse_allocation(m, alloc_spec);
      auto hit = bounded_counterexample_search(m, alloc, bound, opt.mode());
      emit(oracle_search_report(m, alloc, bound, hit), m, opt);
      return hit ? kExitNotRobust : kExitOk;
    }
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitInputError;
  } catch (const ModelError& e) {
    std::cerr << "invalid input [" << e.code << "]: " << e.what() << "\n";
    return kExitInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
