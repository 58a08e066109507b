#pragma once

/*
    Run configuration. Loaded from a TOML file ([section] tables with
    string/int/float/bool scalars — the subset this tool needs), then
    overridden by CLI flags. Every run serializes its effective config into
    the output manifest.
*/

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>

#include "culprit/coverage.hpp"
#include "culprit/scorer.hpp"

namespace culprit::config {

class Toml {
 public:
  static Toml parse(const std::string& text, const std::string& origin);
  static Toml parse_file(const std::filesystem::path& path);

  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::vector<std::string> keys() const;

  // Typed getters; nullopt when the key is absent, ConfigError when it
  // holds a different type. Keys are "section.name" (or bare "name").
  std::optional<std::string> get_string(const std::string& key) const;
  std::optional<std::int64_t> get_int(const std::string& key) const;
  std::optional<double> get_double(const std::string& key) const;
  std::optional<bool> get_bool(const std::string& key) const;

 private:
  using Value = std::variant<std::string, std::int64_t, double, bool>;
  std::map<std::string, Value> values_;
};

struct RunConfig {
  // inputs
  std::string repo;
  std::string coverage_path;
  coverage::Format coverage_format = coverage::Format::MatrixJson;
  std::string history_path;  // serialized history; used instead of the repo
  std::string until = "HEAD";

  // pipeline
  scoring::VotingConfig voting;
  bool skip_stage2 = false;
  bool relevant_test_selection = true;
  unsigned workers = 0;
  std::uint64_t seed = 42;

  // output
  std::string output_dir = "culprit-out";
  bool explain = false;

  // bisection
  std::string scores_path;
  std::string oracle_cmd;
  std::string table_path;
  bool interactive = false;
  bool uniform = false;
  bool standard = false;
  bool confirm_single = true;

  // evaluation
  std::string dataset_dir;

  // style normalizer overrides: extra extensions handled by the C-family
  // tokenizer, comma separated in the config file
  std::string c_family_extensions;

  void validate_voting() const { voting.validate(); }
};

// Merges file values into the defaults; unknown keys are rejected so a
// typo cannot silently change a run. Throws ConfigError.
void apply_toml(RunConfig& config, const Toml& toml);
RunConfig load_run_config(const std::filesystem::path& toml_path);

std::string run_config_to_json(const RunConfig& config);

}  // namespace culprit::config
