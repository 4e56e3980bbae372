#ifndef LVBMT_CONFIG_HPP
#define LVBMT_CONFIG_HPP

#include <map>
#include <string>

#include <json.hpp>

#include "lvbmt/recipe.hpp"

namespace lvbmt {

// Declarative run definition: datasets, backend registry, recipes, seeds.
// The loaded JSON document is kept verbatim so save() round-trips the file
// byte-for-byte (modulo a trailing newline).
struct PipelineConfig {
  nlohmann::ordered_json doc;
  uint64_t seed = 1;
  BtOptions bt;
  std::map<std::string, DatasetRef> datasets;
  std::map<std::string, BackendConfig> backends;
  std::map<std::string, Recipe> recipes;

  static PipelineConfig load(const std::string& path);
  static PipelineConfig parse(const std::string& text, const std::string& name);
  void save(const std::string& path) const;
  std::string serialize() const;

  // Checks referenced files exist and recipe refs resolve; throws Error
  // listing the first problem. Run before long jobs.
  void validate() const;

  Registry registry() const;
  const Recipe& recipe(const std::string& name) const;
};

// Trainer settings card recorded into manifests when a recipe does not
// override it. Documentation only; nothing in this toolkit trains the
// downstream model.
nlohmann::ordered_json default_trainer_card();

}  // namespace lvbmt

#endif
