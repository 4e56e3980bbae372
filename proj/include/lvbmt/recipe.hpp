#ifndef LVBMT_RECIPE_HPP
#define LVBMT_RECIPE_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "lvbmt/backend.hpp"
#include "lvbmt/bt.hpp"
#include "lvbmt/corpus.hpp"

namespace lvbmt {

struct DatasetRef {
  std::string path;
  std::string format;  // "parallel" (src<TAB>tgt), "mono", "records"
  // parallel: direction of the pair columns; mono: language of the lines.
  std::optional<Direction> direction;
  std::string lang;  // mono only: "lvb" | "ita"
};

// `direction` is always the record (training) direction. Synthetic
// components run their backend in that direction (forward) or its reverse
// (back-translation).
struct RecipeComponent {
  std::string dataset;
  Origin origin = Origin::Authentic;
  std::optional<Direction> direction;
  std::string backend;  // required for synthetic components
};

struct Recipe {
  std::string name;
  std::vector<RecipeComponent> components;
  nlohmann::ordered_json trainer;  // documentation card, copied to manifest
};

class Registry {
 public:
  std::map<std::string, DatasetRef> datasets;
  std::map<std::string, BackendConfig> backend_configs;

  // Cached instantiation; tests may pre-seed instances directly.
  BackendPtr backend(const std::string& id);
  void add_instance(BackendPtr backend);

 private:
  std::map<std::string, BackendPtr> instances_;
};

struct AssembleResult {
  std::vector<CorpusRecord> records;  // deterministically shuffled
  nlohmann::ordered_json manifest;
  size_t quarantined_sentences = 0;
};

// Concatenates the recipe's components (running backends for synthetic
// ones), stamps provenance, shuffles with the recorded seed, and builds the
// audit manifest. Throws on unknown datasets/backends and on direction
// mismatches between components and datasets.
AssembleResult assemble(const Recipe& recipe, Registry& registry, uint64_t seed,
                        const BtOptions& bt_defaults = {},
                        const ProgressFn& progress = nullptr);

}  // namespace lvbmt

#endif
