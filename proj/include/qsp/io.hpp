#pragma once

// JSON file formats (models, strategies, queries) and query execution with
// the 0/1/2 exit-code contract used by the command-line tool.

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include <json.hpp>

#include "qsp/model.hpp"

namespace qsp {

using Json = nlohmann::json;
using Model = std::variant<WeightedMdp, WeightedGame>;

/// Malformed or invalid input; the message names the file and the line or key.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int { exit_yes = 0, exit_no = 1, exit_error = 2 };

Json parse_json(const std::string& text, const std::string& source);
Json read_json_file(const std::filesystem::path& path);

Model model_from_json(const Json& document, const std::string& source);
Json model_to_json(const WeightedMdp& mdp);
Json model_to_json(const WeightedGame& game);
Json model_to_json(const Model& model);
Model load_model(const std::filesystem::path& path);

MooreStrategy strategy_from_json(const Json& document, const std::string& source);
Json strategy_to_json(const MooreStrategy& strategy);
MooreStrategy load_strategy(const std::filesystem::path& path);

struct QueryResult {
  int exit_code = exit_error;
  Json document;
  std::optional<MooreStrategy> strategy;  // synthesized strategy, also embedded in `document`
};

/// Runs a query document ("problem": S1..S5, verify, simulate, evaluate).
/// verify, simulate and evaluate need `strategy`. Input errors throw IoError
/// (or the solver's own exception types).
QueryResult run_query(const Model& model, const Json& query, const std::string& source,
                      const MooreStrategy* strategy = nullptr);

/// Exact evaluation of a user strategy; `spec` holds "measures" for MDPs or
/// "objectives" for games.
QueryResult evaluate_strategy(const Model& model, const MooreStrategy& strategy, const Json& spec,
                              const std::string& source);

/// Two-column "key  value" rendering of a result document.
std::string render_table(const Json& document);

}  // namespace qsp
