#include "culprit/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "culprit/errors.hpp"

namespace culprit::config {

using nlohmann::ordered_json;

namespace {

std::string trim(std::string_view s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& what) {
  throw ConfigError(origin + ":" + std::to_string(line) + ": " + what);
}

}  // namespace

Toml Toml::parse(const std::string& text, const std::string& origin) {
  Toml toml;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;

    if (stripped.front() == '[') {
      if (stripped.back() != ']')
        fail(origin, lineno, "unterminated section header");
      section = trim(stripped.substr(1, stripped.size() - 2));
      if (section.empty()) fail(origin, lineno, "empty section name");
      continue;
    }

    size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      fail(origin, lineno, "expected key = value");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) fail(origin, lineno, "empty key");
    if (!section.empty()) key = section + "." + key;
    if (toml.values_.count(key)) fail(origin, lineno, "duplicate key " + key);

    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      std::string parsed;
      for (size_t i = 1; i + 1 < value.size(); ++i) {
        if (value[i] == '\\' && i + 2 < value.size()) {
          ++i;
          switch (value[i]) {
            case 'n': parsed += '\n'; break;
            case 't': parsed += '\t'; break;
            case '"': parsed += '"'; break;
            case '\\': parsed += '\\'; break;
            default: fail(origin, lineno, "unsupported escape in string");
          }
        } else {
          parsed += value[i];
        }
      }
      toml.values_[key] = parsed;
    } else if (value == "true" || value == "false") {
      toml.values_[key] = (value == "true");
    } else if (!value.empty()) {
      // Strip a trailing comment from bare scalars.
      size_t hash = value.find('#');
      if (hash != std::string::npos) value = trim(value.substr(0, hash));
      try {
        if (value.find('.') != std::string::npos ||
            value.find('e') != std::string::npos ||
            value.find('E') != std::string::npos) {
          size_t used = 0;
          double d = std::stod(value, &used);
          if (used != value.size()) throw std::invalid_argument(value);
          toml.values_[key] = d;
        } else {
          size_t used = 0;
          std::int64_t n = std::stoll(value, &used, 10);
          if (used != value.size()) throw std::invalid_argument(value);
          toml.values_[key] = n;
        }
      } catch (const std::exception&) {
        fail(origin, lineno, "cannot parse value '" + value + "'");
      }
    } else {
      fail(origin, lineno, "empty value for key " + key);
    }
  }
  return toml;
}

Toml Toml::parse_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path.string());
}

std::vector<std::string> Toml::keys() const {
  std::vector<std::string> out;
  out.reserve(values_.size());
  for (const auto& [key, value] : values_) out.push_back(key);
  return out;
}

std::optional<std::string> Toml::get_string(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (const std::string* s = std::get_if<std::string>(&it->second)) return *s;
  throw ConfigError("key " + key + " must be a string");
}

std::optional<std::int64_t> Toml::get_int(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (const std::int64_t* n = std::get_if<std::int64_t>(&it->second))
    return *n;
  throw ConfigError("key " + key + " must be an integer");
}

std::optional<double> Toml::get_double(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (const double* d = std::get_if<double>(&it->second)) return *d;
  if (const std::int64_t* n = std::get_if<std::int64_t>(&it->second))
    return static_cast<double>(*n);
  throw ConfigError("key " + key + " must be a number");
}

std::optional<bool> Toml::get_bool(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  if (const bool* b = std::get_if<bool>(&it->second)) return *b;
  throw ConfigError("key " + key + " must be true or false");
}

namespace {

sbfl::TieBreak parse_tau(const std::string& text) {
  if (text == "max") return sbfl::TieBreak::Max;
  if (text == "dense") return sbfl::TieBreak::Dense;
  throw ConfigError("tau must be 'max' or 'dense', got '" + text + "'");
}

scoring::Mode parse_mode(const std::string& text) {
  if (text == "vote") return scoring::Mode::Vote;
  if (text == "equal") return scoring::Mode::Equal;
  if (text == "score-only") return scoring::Mode::ScoreOnly;
  if (text == "max-aggr") return scoring::Mode::MaxAggr;
  throw ConfigError("mode must be vote/equal/score-only/max-aggr, got '" +
                    text + "'");
}

coverage::Format parse_format(const std::string& text) {
  if (text == "matrix-json") return coverage::Format::MatrixJson;
  if (text == "lcov-per-test") return coverage::Format::LcovPerTest;
  throw ConfigError("coverage_format must be matrix-json or lcov-per-test");
}

}  // namespace

void apply_toml(RunConfig& config, const Toml& toml) {
  static const std::set<std::string> known = {
      "repo",          "coverage",       "coverage_format",
      "history",       "until",          "output",
      "workers",       "seed",           "skip_stage2",
      "relevant_test_selection",         "explain",
      "voting.alpha",  "voting.tau",     "voting.lambda",
      "voting.mode",   "bisect.scores",  "bisect.oracle_cmd",
      "bisect.table",  "bisect.interactive",
      "bisect.uniform", "bisect.standard",
      "bisect.confirm_single",           "eval.dataset",
      "normalizer.c_family_extensions",
  };
  // Reject unknown keys so a typo cannot silently change a run.
  for (const std::string& key : toml.keys())
    if (!known.count(key)) throw ConfigError("unknown config key: " + key);

  if (auto v = toml.get_string("repo")) config.repo = *v;
  if (auto v = toml.get_string("coverage")) config.coverage_path = *v;
  if (auto v = toml.get_string("coverage_format"))
    config.coverage_format = parse_format(*v);
  if (auto v = toml.get_string("history")) config.history_path = *v;
  if (auto v = toml.get_string("until")) config.until = *v;
  if (auto v = toml.get_string("output")) config.output_dir = *v;
  if (auto v = toml.get_int("workers"))
    config.workers = static_cast<unsigned>(*v);
  if (auto v = toml.get_int("seed"))
    config.seed = static_cast<std::uint64_t>(*v);
  if (auto v = toml.get_bool("skip_stage2")) config.skip_stage2 = *v;
  if (auto v = toml.get_bool("relevant_test_selection"))
    config.relevant_test_selection = *v;
  if (auto v = toml.get_bool("explain")) config.explain = *v;

  if (auto v = toml.get_int("voting.alpha"))
    config.voting.alpha = static_cast<int>(*v);
  if (auto v = toml.get_string("voting.tau"))
    config.voting.tau = parse_tau(*v);
  if (auto v = toml.get_double("voting.lambda")) config.voting.lambda = *v;
  if (auto v = toml.get_string("voting.mode"))
    config.voting.mode = parse_mode(*v);

  if (auto v = toml.get_string("bisect.scores")) config.scores_path = *v;
  if (auto v = toml.get_string("bisect.oracle_cmd")) config.oracle_cmd = *v;
  if (auto v = toml.get_string("bisect.table")) config.table_path = *v;
  if (auto v = toml.get_bool("bisect.interactive")) config.interactive = *v;
  if (auto v = toml.get_bool("bisect.uniform")) config.uniform = *v;
  if (auto v = toml.get_bool("bisect.standard")) config.standard = *v;
  if (auto v = toml.get_bool("bisect.confirm_single"))
    config.confirm_single = *v;

  if (auto v = toml.get_string("eval.dataset")) config.dataset_dir = *v;
  if (auto v = toml.get_string("normalizer.c_family_extensions"))
    config.c_family_extensions = *v;

  config.voting.validate();
}

RunConfig load_run_config(const std::filesystem::path& toml_path) {
  RunConfig config;
  apply_toml(config, Toml::parse_file(toml_path));
  return config;
}

std::string run_config_to_json(const RunConfig& config) {
  ordered_json doc = {
      {"repo", config.repo},
      {"coverage", config.coverage_path},
      {"coverage_format", config.coverage_format == coverage::Format::MatrixJson
                              ? "matrix-json"
                              : "lcov-per-test"},
      {"history", config.history_path},
      {"until", config.until},
      {"output", config.output_dir},
      {"workers", config.workers},
      {"seed", config.seed},
      {"skip_stage2", config.skip_stage2},
      {"relevant_test_selection", config.relevant_test_selection},
      {"explain", config.explain},
      {"voting",
       {{"alpha", config.voting.alpha},
        {"tau", scoring::tie_break_name(config.voting.tau)},
        {"lambda", config.voting.lambda},
        {"mode", scoring::mode_name(config.voting.mode)}}},
      {"bisect",
       {{"scores", config.scores_path},
        {"oracle_cmd", config.oracle_cmd},
        {"table", config.table_path},
        {"interactive", config.interactive},
        {"uniform", config.uniform},
        {"standard", config.standard},
        {"confirm_single", config.confirm_single}}},
      {"eval", {{"dataset", config.dataset_dir}}},
      {"normalizer",
       {{"c_family_extensions", config.c_family_extensions}}},
  };
  return doc.dump(2);
}

}  // namespace culprit::config
