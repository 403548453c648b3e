#pragma once

// Workflow definition files. The format is JSON (// and /* */ comments are
// tolerated) with top-level keys:
//
//   agents      list of agent specs, discriminated by "kind": "llm"|"non_llm"
//   workflow    recursive node tree referencing agent ids
//   pricing     c_tok and c_comp (number, or object deriving it from FLOPs)
//   budgets     optional latency_budget / cost_budget pair
//   allocation  optional explicit output-token allocation
//   defaults    optional shared rate_think / rate_gen for LLM agents
//
// Unknown fields are rejected. Parsing collects *all* violations, each mapped
// back to a line/column in the source text, rather than stopping at the
// first.

#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "agentflow/allocation.hpp"
#include "agentflow/workflow.hpp"

namespace agentflow {

struct Diagnostic {
  int line = 0;    // 1-based; 0 when the position could not be resolved
  int column = 0;  // 1-based
  std::string pointer;  // JSON-pointer-style path, for machine consumers
  std::string message;
};

struct WorkflowConfig {
  std::vector<AgentSpec> agents;
  WorkflowNode workflow;
  PricingModel pricing;
  std::optional<BudgetSpec> budgets;
  std::optional<Allocation> allocation;
};

struct ParseOutcome {
  std::optional<WorkflowConfig> config;  // set only when diagnostics is empty
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return config.has_value(); }
};

namespace detail {

// ---------------------------------------------------------------------------
// Source-position lookup
// ---------------------------------------------------------------------------
// nlohmann::json discards positions once parsed, so diagnostics re-scan the
// raw text: a tiny tolerant tokenizer walks to the value a path points at and
// reports the line/column of its key (object members) or of the value itself.

class JsonLocator {
 public:
  explicit JsonLocator(std::string_view text) : text_(text) {}

  struct Position {
    int line = 0;
    int column = 0;
  };

  std::optional<Position> locate(const std::vector<std::string>& path) {
    pos_ = 0;
    line_ = 1;
    column_ = 1;
    skip_trivia();
    return locate_value(path, 0);
  }

  Position position_of_offset(std::size_t offset) {
    pos_ = 0;
    line_ = 1;
    column_ = 1;
    while (pos_ < text_.size() && pos_ < offset) advance();
    return {line_, column_};
  }

 private:
  std::optional<Position> locate_value(const std::vector<std::string>& path,
                                       std::size_t depth) {
    if (depth == path.size()) return Position{line_, column_};
    if (pos_ >= text_.size()) return std::nullopt;
    const char c = text_[pos_];
    if (c == '{') return locate_in_object(path, depth);
    if (c == '[') return locate_in_array(path, depth);
    return std::nullopt;
  }

  std::optional<Position> locate_in_object(const std::vector<std::string>& path,
                                           std::size_t depth) {
    advance();  // '{'
    skip_trivia();
    while (pos_ < text_.size() && text_[pos_] != '}') {
      const Position key_pos{line_, column_};
      std::string key;
      if (!parse_string(key)) return std::nullopt;
      skip_trivia();
      if (pos_ >= text_.size() || text_[pos_] != ':') return std::nullopt;
      advance();  // ':'
      skip_trivia();
      if (key == path[depth]) {
        if (depth + 1 == path.size()) return key_pos;
        return locate_value(path, depth + 1);
      }
      if (!skip_value()) return std::nullopt;
      skip_trivia();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        advance();
        skip_trivia();
      }
    }
    return std::nullopt;
  }

  std::optional<Position> locate_in_array(const std::vector<std::string>& path,
                                          std::size_t depth) {
    std::size_t want = 0;
    try {
      want = std::stoul(path[depth]);
    } catch (...) {
      return std::nullopt;
    }
    advance();  // '['
    skip_trivia();
    std::size_t index = 0;
    while (pos_ < text_.size() && text_[pos_] != ']') {
      if (index == want) return locate_value(path, depth + 1);
      if (!skip_value()) return std::nullopt;
      skip_trivia();
      if (pos_ < text_.size() && text_[pos_] == ',') {
        advance();
        skip_trivia();
      }
      ++index;
    }
    return std::nullopt;
  }

  bool skip_value() {
    if (pos_ >= text_.size()) return false;
    const char c = text_[pos_];
    if (c == '"') {
      std::string ignored;
      return parse_string(ignored);
    }
    if (c == '{' || c == '[') {
      const char open = c;
      const char close = (c == '{') ? '}' : ']';
      int depth = 0;
      while (pos_ < text_.size()) {
        const char cur = text_[pos_];
        if (cur == '"') {
          std::string ignored;
          if (!parse_string(ignored)) return false;
          continue;
        }
        if (cur == '/') {
          const std::size_t before = pos_;
          skip_trivia();
          if (pos_ == before) advance();
          continue;
        }
        if (cur == open) ++depth;
        if (cur == close) {
          --depth;
          advance();
          if (depth == 0) return true;
          continue;
        }
        advance();
      }
      return false;
    }
    // number / true / false / null
    while (pos_ < text_.size()) {
      const char cur = text_[pos_];
      if (cur == ',' || cur == '}' || cur == ']' || cur == ' ' || cur == '\t' ||
          cur == '\n' || cur == '\r' || cur == '/') {
        break;
      }
      advance();
    }
    return true;
  }

  bool parse_string(std::string& out) {
    if (pos_ >= text_.size() || text_[pos_] != '"') return false;
    advance();  // opening quote
    out.clear();
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '"') {
        advance();
        return true;
      }
      if (c == '\\') {
        advance();
        if (pos_ >= text_.size()) return false;
        const char e = text_[pos_];
        switch (e) {
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          case '/': out.push_back('/'); break;
          case 'b': out.push_back('\b'); break;
          case 'f': out.push_back('\f'); break;
          case 'n': out.push_back('\n'); break;
          case 'r': out.push_back('\r'); break;
          case 't': out.push_back('\t'); break;
          case 'u':
            // Positions only need key comparison for ASCII ids; non-ASCII
            // escapes are matched loosely.
            for (int i = 0; i < 4 && pos_ + 1 < text_.size(); ++i) advance();
            out.push_back('?');
            break;
          default: return false;
        }
        advance();
      } else {
        out.push_back(c);
        advance();
      }
    }
    return false;
  }

  void skip_trivia() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (c == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        advance();
        advance();
        while (pos_ + 1 < text_.size() &&
               !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) {
          advance();
        }
        if (pos_ + 1 < text_.size()) {
          advance();
          advance();
        }
      } else {
        break;
      }
    }
  }

  void advance() {
    if (pos_ >= text_.size()) return;
    if (text_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int column_ = 1;
};

// ---------------------------------------------------------------------------
// Diagnostic-collecting reader
// ---------------------------------------------------------------------------

class ConfigReader {
 public:
  using json = nlohmann::json;

  explicit ConfigReader(std::string_view text) : text_(text), locator_(text) {}

  ParseOutcome read() {
    ParseOutcome outcome;
    json root;
    try {
      root = json::parse(text_, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
      const auto pos = locator_.position_of_offset(e.byte > 0 ? e.byte - 1 : 0);
      outcome.diagnostics.push_back({pos.line, pos.column, "", e.what()});
      return outcome;
    }

    WorkflowConfig config;
    Path root_path;
    if (!root.is_object()) {
      diag(root_path, "config root must be an object");
    } else {
      check_known_fields(root, root_path,
                         {"agents", "workflow", "pricing", "budgets", "allocation",
                          "defaults"});
      read_defaults(root, root_path);
      read_agents(root, root_path, config);
      read_pricing(root, root_path, config);
      read_budgets(root, root_path, config);
      read_workflow(root, root_path, config);
      read_allocation(root, root_path, config);
    }

    outcome.diagnostics = std::move(diagnostics_);
    if (outcome.diagnostics.empty()) outcome.config = std::move(config);
    return outcome;
  }

 private:
  struct Path {
    std::vector<std::string> tokens;

    Path child(std::string token) const {
      Path p = *this;
      p.tokens.push_back(std::move(token));
      return p;
    }
    Path child(std::size_t index) const { return child(std::to_string(index)); }

    std::string display() const {
      if (tokens.empty()) return "/";
      std::string out;
      for (const std::string& t : tokens) {
        out += '/';
        out += t;
      }
      return out;
    }
  };

  void diag(const Path& path, std::string message) {
    Diagnostic d;
    d.pointer = path.display();
    d.message = std::move(message);
    if (const auto pos = locator_.locate(path.tokens)) {
      d.line = pos->line;
      d.column = pos->column;
    }
    diagnostics_.push_back(std::move(d));
  }

  int line_of(const Path& path) {
    const auto pos = locator_.locate(path.tokens);
    return pos ? pos->line : 0;
  }

  void check_known_fields(const json& obj, const Path& path,
                          std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
      bool known = false;
      for (const char* a : allowed) {
        if (key == a) {
          known = true;
          break;
        }
      }
      if (!known) diag(path.child(key), "unknown field \"" + key + "\"");
    }
  }

  const json* require(const json& obj, const Path& path, const char* key) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      diag(path, std::string("missing required field \"") + key + "\"");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> read_number(const json& obj, const Path& path, const char* key,
                                    bool required) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) diag(path, std::string("missing required field \"") + key + "\"");
      return std::nullopt;
    }
    if (!it->is_number()) {
      diag(path.child(key), std::string("field \"") + key + "\" must be a number");
      return std::nullopt;
    }
    return it->get<double>();
  }

  std::optional<std::int64_t> read_integer(const json& obj, const Path& path,
                                           const char* key, bool required) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) diag(path, std::string("missing required field \"") + key + "\"");
      return std::nullopt;
    }
    if (it->is_number_integer()) return it->get<std::int64_t>();
    if (it->is_number_float()) {
      const double v = it->get<double>();
      if (v == static_cast<double>(static_cast<std::int64_t>(v))) {
        return static_cast<std::int64_t>(v);
      }
    }
    diag(path.child(key), std::string("field \"") + key + "\" must be an integer");
    return std::nullopt;
  }

  std::optional<std::string> read_string(const json& obj, const Path& path,
                                         const char* key, bool required) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) diag(path, std::string("missing required field \"") + key + "\"");
      return std::nullopt;
    }
    if (!it->is_string()) {
      diag(path.child(key), std::string("field \"") + key + "\" must be a string");
      return std::nullopt;
    }
    return it->get<std::string>();
  }

  void read_defaults(const json& root, const Path& root_path) {
    const auto it = root.find("defaults");
    if (it == root.end()) return;
    const Path path = root_path.child("defaults");
    if (!it->is_object()) {
      diag(path, "defaults must be an object");
      return;
    }
    check_known_fields(*it, path, {"rate_think", "rate_gen"});
    default_rate_think_ = read_number(*it, path, "rate_think", false);
    default_rate_gen_ = read_number(*it, path, "rate_gen", false);
  }

  void read_agents(const json& root, const Path& root_path, WorkflowConfig& config) {
    const json* agents = require(root, root_path, "agents");
    if (!agents) return;
    const Path agents_path = root_path.child("agents");
    if (!agents->is_array()) {
      diag(agents_path, "agents must be an array");
      return;
    }
    for (std::size_t i = 0; i < agents->size(); ++i) {
      const json& entry = (*agents)[i];
      const Path path = agents_path.child(i);
      if (!entry.is_object()) {
        diag(path, "agent entry must be an object");
        continue;
      }
      const auto kind = read_string(entry, path, "kind", true);
      if (!kind) continue;
      if (*kind == "llm") {
        read_llm_agent(entry, path, config);
      } else if (*kind == "non_llm") {
        read_non_llm_agent(entry, path, config);
      } else {
        diag(path.child("kind"), "kind must be \"llm\" or \"non_llm\"");
      }
    }

    // Distinct ids across the agent list; cite both occurrences.
    for (std::size_t i = 0; i < config.agents.size(); ++i) {
      const std::string& id = agent_id(config.agents[i]);
      for (std::size_t j = 0; j < i; ++j) {
        if (agent_id(config.agents[j]) == id && !id.empty()) {
          const Path first = agents_path.child(agent_index_[j]).child("id");
          const Path second = agents_path.child(agent_index_[i]).child("id");
          diag(second, "duplicate agent id \"" + id + "\" (also defined at line " +
                           std::to_string(line_of(first)) + ")");
        }
      }
    }
  }

  void read_llm_agent(const json& entry, const Path& path, WorkflowConfig& config) {
    check_known_fields(entry, path,
                       {"kind", "id", "alpha", "beta", "reasoning_tokens",
                        "mean_infra_delay", "infra_delay_dist", "rate_think", "rate_gen"});
    LlmAgentSpec spec;
    spec.id = read_string(entry, path, "id", true).value_or("");
    spec.alpha = read_number(entry, path, "alpha", true).value_or(-1.0);
    spec.beta = read_number(entry, path, "beta", true).value_or(-1.0);
    spec.reasoning_tokens = read_number(entry, path, "reasoning_tokens", false).value_or(0.0);
    spec.mean_infra_delay = read_number(entry, path, "mean_infra_delay", false).value_or(0.0);

    auto rate_think = read_number(entry, path, "rate_think", false);
    if (!rate_think) rate_think = default_rate_think_;
    if (!rate_think) {
      diag(path, "missing required field \"rate_think\" (no config default given)");
      rate_think = -1.0;
    }
    spec.rate_think = *rate_think;

    auto rate_gen = read_number(entry, path, "rate_gen", false);
    if (!rate_gen) rate_gen = default_rate_gen_;
    if (!rate_gen) {
      diag(path, "missing required field \"rate_gen\" (no config default given)");
      rate_gen = -1.0;
    }
    spec.rate_gen = *rate_gen;

    if (const auto it = entry.find("infra_delay_dist"); it != entry.end()) {
      const Path dist_path = path.child("infra_delay_dist");
      if (!it->is_object()) {
        diag(dist_path, "infra_delay_dist must be an object");
      } else {
        check_known_fields(*it, dist_path, {"family", "mean", "sigma"});
        InfraDelayDist dist;
        const auto family = read_string(*it, dist_path, "family", true);
        bool family_ok = true;
        if (family == "constant") {
          dist.family = DelayFamily::constant;
        } else if (family == "exponential") {
          dist.family = DelayFamily::exponential;
        } else if (family == "lognormal") {
          dist.family = DelayFamily::lognormal;
        } else {
          if (family) {
            diag(dist_path.child("family"),
                 "family must be \"constant\", \"exponential\", or \"lognormal\"");
          }
          family_ok = false;
        }
        dist.mean = read_number(*it, dist_path, "mean", false).value_or(spec.mean_infra_delay);
        if (dist.family == DelayFamily::lognormal) {
          dist.sigma = read_number(*it, dist_path, "sigma", true).value_or(-1.0);
        }
        if (family_ok) spec.infra_delay_dist = dist;
      }
    }

    report_agent_issues(spec.issues(), spec.id, path);
    agent_index_.push_back(last_agent_array_index(path));
    config.agents.emplace_back(std::move(spec));
  }

  void read_non_llm_agent(const json& entry, const Path& path, WorkflowConfig& config) {
    check_known_fields(entry, path, {"kind", "id", "latency_model", "reliability"});
    NonLlmAgentSpec spec;
    spec.id = read_string(entry, path, "id", true).value_or("");
    spec.reliability = read_number(entry, path, "reliability", true).value_or(-1.0);

    if (const json* model = require(entry, path, "latency_model")) {
      const Path model_path = path.child("latency_model");
      if (!model->is_object()) {
        diag(model_path, "latency_model must be an object");
      } else {
        check_known_fields(*model, model_path, {"mean_latency", "service_rate"});
        if (const auto v = read_number(*model, model_path, "mean_latency", false)) {
          spec.mean_latency = *v;
        }
        if (const auto v = read_number(*model, model_path, "service_rate", false)) {
          spec.service_rate = *v;
        }
      }
    }

    report_agent_issues(spec.issues(), spec.id, path);
    agent_index_.push_back(last_agent_array_index(path));
    config.agents.emplace_back(std::move(spec));
  }

  void report_agent_issues(const std::vector<FieldIssue>& issues, const std::string& id,
                           const Path& agent_path) {
    for (const FieldIssue& issue : issues) {
      diag(agent_path.child(issue.field), "agent \"" + id + "\": " + issue.message);
    }
  }

  static std::size_t last_agent_array_index(const Path& path) {
    return std::stoul(path.tokens.back());
  }

  void read_pricing(const json& root, const Path& root_path, WorkflowConfig& config) {
    const json* pricing = require(root, root_path, "pricing");
    if (!pricing) return;
    const Path path = root_path.child("pricing");
    if (!pricing->is_object()) {
      diag(path, "pricing must be an object");
      return;
    }
    check_known_fields(*pricing, path, {"c_tok", "c_comp"});
    const auto c_tok = read_number(*pricing, path, "c_tok", true);
    if (c_tok) {
      config.pricing.c_tok = *c_tok;
      if (!(*c_tok > 0.0)) diag(path.child("c_tok"), "c_tok must be > 0");
    }

    const auto it = pricing->find("c_comp");
    if (it == pricing->end()) {
      diag(path, "missing required field \"c_comp\"");
      return;
    }
    const Path comp_path = path.child("c_comp");
    if (it->is_number()) {
      config.pricing.c_comp = it->get<double>();
      if (!(config.pricing.c_comp > 0.0)) diag(comp_path, "c_comp must be > 0");
    } else if (it->is_object()) {
      check_known_fields(*it, comp_path, {"c_e", "n_params", "n_layer", "n_ctx", "n_attn"});
      const auto c_e = read_number(*it, comp_path, "c_e", true);
      const auto n_params = read_integer(*it, comp_path, "n_params", true);
      const auto n_layer = read_integer(*it, comp_path, "n_layer", true);
      const auto n_ctx = read_integer(*it, comp_path, "n_ctx", true);
      const auto n_attn = read_integer(*it, comp_path, "n_attn", true);
      if (c_e && n_params && n_layer && n_ctx && n_attn) {
        try {
          config.pricing.c_comp = derive_c_comp(*c_e, *n_params, *n_layer, *n_ctx, *n_attn);
        } catch (const DomainError& e) {
          diag(comp_path, e.what());
        }
      }
    } else {
      diag(comp_path, "c_comp must be a number or a FLOPs-derivation object");
    }
  }

  void read_budgets(const json& root, const Path& root_path, WorkflowConfig& config) {
    const auto it = root.find("budgets");
    if (it == root.end()) return;
    const Path path = root_path.child("budgets");
    if (!it->is_object()) {
      diag(path, "budgets must be an object");
      return;
    }
    check_known_fields(*it, path, {"latency_budget", "cost_budget"});
    BudgetSpec budgets;
    const auto latency = read_number(*it, path, "latency_budget", true);
    const auto cost = read_number(*it, path, "cost_budget", true);
    if (latency) {
      budgets.latency_budget = *latency;
      if (!(*latency > 0.0)) diag(path.child("latency_budget"), "latency_budget must be > 0");
    }
    if (cost) {
      budgets.cost_budget = *cost;
      if (!(*cost > 0.0)) diag(path.child("cost_budget"), "cost_budget must be > 0");
    }
    if (latency && cost) config.budgets = budgets;
  }

  void read_workflow(const json& root, const Path& root_path, WorkflowConfig& config) {
    const json* node = require(root, root_path, "workflow");
    if (!node) return;
    used_agent_ids_.clear();
    auto parsed = read_node(*node, root_path.child("workflow"), config);
    if (parsed) config.workflow = std::move(*parsed);
  }

  std::optional<WorkflowNode> read_node(const json& node, const Path& path,
                                        WorkflowConfig& config) {
    if (node.is_string()) return read_leaf(node.get<std::string>(), path, config);
    if (!node.is_object()) {
      diag(path, "workflow node must be a string (agent id) or an object");
      return std::nullopt;
    }
    if (node.size() != 1) {
      diag(path,
           "workflow node must have exactly one of \"agent\", \"sequential\", "
           "\"parallel\", \"feedback\"");
      return std::nullopt;
    }
    const auto& [key, value] = *node.items().begin();
    const Path inner = path.child(key);

    if (key == "agent") {
      if (!value.is_string()) {
        diag(inner, "agent reference must be a string id");
        return std::nullopt;
      }
      return read_leaf(value.get<std::string>(), inner, config);
    }
    if (key == "sequential") {
      return read_children(value, inner, config, [](std::vector<WorkflowNode> children) {
        return make_sequential(std::move(children));
      });
    }
    if (key == "parallel") {
      if (!value.is_object()) {
        diag(inner, "parallel must be an object with \"mode\" and \"children\"");
        return std::nullopt;
      }
      check_known_fields(value, inner, {"mode", "children"});
      const auto mode_str = read_string(value, inner, "mode", true);
      std::optional<ParallelMode> mode;
      if (mode_str == "conjunctive") {
        mode = ParallelMode::conjunctive;
      } else if (mode_str == "redundant") {
        mode = ParallelMode::redundant;
      } else if (mode_str) {
        diag(inner.child("mode"), "mode must be \"conjunctive\" or \"redundant\"");
      }
      const auto it = value.find("children");
      if (it == value.end()) {
        diag(inner, "missing required field \"children\"");
        return std::nullopt;
      }
      auto children = read_children(*it, inner.child("children"), config,
                                    [&](std::vector<WorkflowNode> c) {
                                      return make_parallel(std::move(c),
                                                           mode.value_or(ParallelMode::conjunctive));
                                    });
      if (!mode) return std::nullopt;
      return children;
    }
    if (key == "feedback") {
      if (!value.is_object()) {
        diag(inner, "feedback must be an object with \"body\" and \"iterations\"");
        return std::nullopt;
      }
      check_known_fields(value, inner, {"body", "iterations"});
      const auto iterations = read_integer(value, inner, "iterations", true);
      if (iterations && *iterations < 1) {
        diag(inner.child("iterations"), "feedback iterations must be >= 1");
      }
      const auto it = value.find("body");
      if (it == value.end()) {
        diag(inner, "missing required field \"body\"");
        return std::nullopt;
      }
      auto body = read_node(*it, inner.child("body"), config);
      if (!body || !iterations || *iterations < 1) return std::nullopt;
      return make_feedback(std::move(*body), static_cast<int>(*iterations));
    }
    diag(path, "unknown workflow node type \"" + key + "\"");
    return std::nullopt;
  }

  template <typename MakeFn>
  std::optional<WorkflowNode> read_children(const nlohmann::json& value, const Path& path,
                                            WorkflowConfig& config, MakeFn&& make) {
    if (!value.is_array()) {
      diag(path, "children must be an array of workflow nodes");
      return std::nullopt;
    }
    if (value.empty()) {
      diag(path, "children must be nonempty");
      return std::nullopt;
    }
    std::vector<WorkflowNode> children;
    bool all_ok = true;
    for (std::size_t i = 0; i < value.size(); ++i) {
      auto child = read_node(value[i], path.child(i), config);
      if (child) {
        children.push_back(std::move(*child));
      } else {
        all_ok = false;
      }
    }
    if (!all_ok) return std::nullopt;
    return make(std::move(children));
  }

  std::optional<WorkflowNode> read_leaf(const std::string& id, const Path& path,
                                        WorkflowConfig& config) {
    const AgentSpec* found = nullptr;
    for (const AgentSpec& agent : config.agents) {
      if (agent_id(agent) == id) {
        found = &agent;
        break;
      }
    }
    if (!found) {
      diag(path, "workflow references unknown agent \"" + id + "\"");
      return std::nullopt;
    }
    if (!used_agent_ids_.insert(id).second) {
      diag(path, "agent \"" + id + "\" is used more than once in the workflow");
      return std::nullopt;
    }
    return make_leaf(*found);
  }

  void read_allocation(const json& root, const Path& root_path, WorkflowConfig& config) {
    const auto it = root.find("allocation");
    if (it == root.end()) return;
    const Path path = root_path.child("allocation");
    if (!it->is_object()) {
      diag(path, "allocation must be an object mapping agent ids to token counts");
      return;
    }
    Allocation allocation;
    for (const auto& [id, value] : it->items()) {
      const Path entry = path.child(id);
      if (!value.is_number()) {
        diag(entry, "allocation for \"" + id + "\" must be a number");
        continue;
      }
      const double tokens = value.get<double>();
      if (!(tokens >= 0.0)) {
        diag(entry, "allocation for \"" + id + "\" must be >= 0");
        continue;
      }
      bool is_llm = false;
      for (const AgentSpec& agent : config.agents) {
        if (agent_id(agent) == id) is_llm = std::holds_alternative<LlmAgentSpec>(agent);
      }
      if (!is_llm) {
        diag(entry, "allocation key \"" + id + "\" is not an LLM agent id");
        continue;
      }
      allocation[id] = tokens;
    }
    config.allocation = std::move(allocation);
  }

  std::string_view text_;
  JsonLocator locator_;
  std::vector<Diagnostic> diagnostics_;
  std::vector<std::size_t> agent_index_;  // agents[] array index per parsed agent
  std::optional<double> default_rate_think_;
  std::optional<double> default_rate_gen_;
  std::set<std::string> used_agent_ids_;
};

}  // namespace detail

inline ParseOutcome parse_config(std::string_view text) {
  return detail::ConfigReader(text).read();
}

inline ParseOutcome load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    ParseOutcome outcome;
    outcome.diagnostics.push_back({0, 0, "", "cannot open config file: " + path});
    return outcome;
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace agentflow
