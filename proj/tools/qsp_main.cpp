// Command-line front end: solve, verify, evaluate, simulate, validate.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "qsp/io.hpp"

namespace {

struct Options {
  std::string model;
  std::string query;
  std::string strategy;
  std::string out;
  std::string format = "json";
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> runs;
};

void write_file(const std::string& path, const qsp::Json& document) {
  std::ofstream file(path);
  if (!file) throw qsp::IoError(path + ": cannot write file");
  file << document.dump(2) << "\n";
}

void emit(const Options& opt, qsp::Json document) {
  if (!opt.out.empty()) {
    if (document.contains("strategy")) {
      auto path = opt.out;
      if (path.size() > 5 && path.ends_with(".json")) path.resize(path.size() - 5);
      path += ".strategy.json";
      write_file(path, document["strategy"]);
      document.erase("strategy");
      document["strategy_file"] = path;
    }
    write_file(opt.out, document);
  }
  if (opt.format == "table")
    std::cout << qsp::render_table(document);
  else
    std::cout << document.dump(2) << "\n";
}

int run(const std::string& command, const Options& opt) {
  const auto model = qsp::load_model(opt.model);
  std::optional<qsp::MooreStrategy> strategy;
  if (!opt.strategy.empty()) strategy = qsp::load_strategy(opt.strategy);

  if (command == "validate") {
    qsp::Json doc = qsp::model_to_json(model);
    qsp::Json summary{{"model", opt.model}, {"valid", true}, {"type", doc["type"]}, {"states", doc["states"].size()}};
    if (strategy) {
      auto issues = std::visit([&](const auto& m) { return qsp::check_compatible(*strategy, m); }, model);
      summary["strategy"] = opt.strategy;
      summary["strategy_issues"] = issues;
      summary["valid"] = issues.empty();
    }
    const bool valid = summary["valid"];
    emit(opt, std::move(summary));
    return valid ? qsp::exit_yes : qsp::exit_error;
  }

  auto query = qsp::read_json_file(opt.query);
  if (command == "simulate") {
    if (opt.seed) query["seed"] = *opt.seed;
    if (opt.runs) query["runs"] = *opt.runs;
  }
  const auto* chosen = strategy ? &*strategy : nullptr;
  auto result = command == "evaluate" ? qsp::evaluate_strategy(model, *chosen, query, opt.query)
                                      : qsp::run_query(model, query, opt.query, chosen);
  emit(opt, std::move(result.document));
  return result.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantitative strategy synthesis and verification for weighted MDPs and games"};
  app.require_subcommand(1);
  Options opt;

  auto add_common = [&](CLI::App* sub, bool needs_query, bool needs_strategy) {
    sub->add_option("--model", opt.model, "model file (JSON)")->required()->check(CLI::ExistingFile);
    auto* q = sub->add_option("--query", opt.query, "query file (JSON)")->check(CLI::ExistingFile);
    if (needs_query) q->required();
    auto* s = sub->add_option("--strategy", opt.strategy, "strategy file (JSON)")->check(CLI::ExistingFile);
    if (needs_strategy) s->required();
    sub->add_option("--out", opt.out, "write the result document (and any strategy) here");
    sub->add_option("--format", opt.format, "stdout rendering")->check(CLI::IsMember({"json", "table"}));
  };
  add_common(app.add_subcommand("solve", "run an S1..S5 query"), true, false);
  add_common(app.add_subcommand("verify", "verify a strategy on a game"), true, true);
  add_common(app.add_subcommand("evaluate", "evaluate a strategy exactly"), true, true);
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates for a strategy");
  add_common(simulate, true, true);
  simulate->add_option("--seed", opt.seed, "overrides the query's seed");
  simulate->add_option("--runs", opt.runs, "overrides the query's run count")->check(CLI::PositiveNumber);
  add_common(app.add_subcommand("validate", "check a model (and optionally a strategy)"), false, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : qsp::exit_error;
  }

  const auto command = app.get_subcommands().front()->get_name();
  try {
    return run(command, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    if (opt.format == "json") std::cout << qsp::Json{{"error", e.what()}}.dump(2) << "\n";
    return qsp::exit_error;
  }
}
