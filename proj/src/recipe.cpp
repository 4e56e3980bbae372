#include "lvbmt/recipe.hpp"

#include <algorithm>
#include <map>
#include <tuple>

#include "lvbmt/rng.hpp"

namespace lvbmt {

using ordered_json = nlohmann::ordered_json;

BackendPtr Registry::backend(const std::string& id) {
  auto it = instances_.find(id);
  if (it != instances_.end()) return it->second;
  auto cfg = backend_configs.find(id);
  if (cfg == backend_configs.end()) throw Error("unknown backend '" + id + "'");
  BackendPtr b = make_backend(cfg->second);
  instances_[id] = b;
  return b;
}

void Registry::add_instance(BackendPtr backend) {
  instances_[backend->id()] = std::move(backend);
}

namespace {

const DatasetRef& find_dataset(const Registry& registry, const Recipe& recipe,
                               const std::string& name) {
  auto it = registry.datasets.find(name);
  if (it == registry.datasets.end())
    throw Error("recipe '" + recipe.name + "': unknown dataset '" + name + "'");
  return it->second;
}

std::vector<CorpusRecord> load_authentic(const DatasetRef& ds,
                                         const RecipeComponent& comp,
                                         const Recipe& recipe) {
  Direction ds_dir = ds.direction.value_or(Direction::LvbToIta);
  if (comp.direction && *comp.direction != ds_dir)
    throw Error("recipe '" + recipe.name + "': component wants " +
                direction_name(*comp.direction) + " but dataset '" +
                comp.dataset + "' is " + direction_name(ds_dir));
  if (ds.format == "parallel") return read_parallel_tsv(ds.path, ds_dir);
  if (ds.format == "records") {
    auto records = read_records_tsv(ds.path);
    for (const auto& r : records)
      if (r.origin != Origin::Authentic)
        throw Error("recipe '" + recipe.name + "': dataset '" + comp.dataset +
                    "' contains non-authentic records in an authentic component");
    return records;
  }
  throw Error("recipe '" + recipe.name + "': authentic component needs a "
              "parallel or records dataset, got format '" + ds.format + "'");
}

}  // namespace

AssembleResult assemble(const Recipe& recipe, Registry& registry, uint64_t seed,
                        const BtOptions& bt_defaults, const ProgressFn& progress) {
  AssembleResult result;
  ordered_json component_rows = ordered_json::array();

  for (const auto& comp : recipe.components) {
    const DatasetRef& ds = find_dataset(registry, recipe, comp.dataset);
    std::vector<CorpusRecord> records;
    std::string generator = "human";

    if (comp.origin == Origin::Authentic) {
      records = load_authentic(ds, comp, recipe);
    } else {
      if (comp.backend.empty())
        throw Error("recipe '" + recipe.name + "': synthetic component '" +
                    comp.dataset + "' names no backend");
      if (!comp.direction)
        throw Error("recipe '" + recipe.name + "': synthetic component '" +
                    comp.dataset + "' names no direction");
      if (ds.format != "mono")
        throw Error("recipe '" + recipe.name + "': synthetic component '" +
                    comp.dataset + "' needs a mono dataset");
      Direction record_dir = *comp.direction;
      // BT input is the record's target language; FT input its source.
      std::string need_lang = comp.origin == Origin::BackTranslated
                                  ? direction_tgt(record_dir)
                                  : direction_src(record_dir);
      if (!ds.lang.empty() && ds.lang != need_lang)
        throw Error("recipe '" + recipe.name + "': component direction " +
                    direction_name(record_dir) + " needs " + need_lang +
                    " monolingual text but dataset '" + comp.dataset + "' is " +
                    ds.lang);
      auto mono = read_mono_lines(ds.path);
      BackendPtr backend = registry.backend(comp.backend);
      generator = backend->id();
      BtOptions opts = bt_defaults;
      if (!opts.checkpoint_path.empty())
        opts.checkpoint_path += "." + recipe.name + "." +
                                std::to_string(component_rows.size());
      BtResult bt = comp.origin == Origin::BackTranslated
                        ? backtranslate(*backend, mono, reverse(record_dir),
                                        opts, progress)
                        : forwardtranslate(*backend, mono, record_dir, opts,
                                           progress);
      result.quarantined_sentences += bt.quarantined_sentences;
      records = std::move(bt.records);
    }

    for (const auto& r : records) validate_record(r);

    ordered_json row;
    row["dataset"] = comp.dataset;
    row["origin"] = origin_name(comp.origin);
    row["direction"] = records.empty()
                           ? (comp.direction ? direction_name(*comp.direction)
                                             : std::string("lvb-ita"))
                           : direction_name(records.front().direction);
    row["generator"] = generator;
    row["records"] = records.size();
    component_rows.push_back(std::move(row));

    result.records.insert(result.records.end(),
                          std::make_move_iterator(records.begin()),
                          std::make_move_iterator(records.end()));
  }

  std::mt19937_64 rng(seed);
  deterministic_shuffle(result.records, rng);

  // (origin, direction, generator) -> count, in deterministic key order.
  std::map<std::tuple<std::string, std::string, std::string>, size_t> counts;
  for (const auto& r : result.records)
    ++counts[{origin_name(r.origin), direction_name(r.direction), r.generator}];

  ordered_json manifest;
  manifest["recipe"] = recipe.name;
  manifest["seed"] = seed;
  manifest["total"] = result.records.size();
  manifest["components"] = std::move(component_rows);
  ordered_json count_rows = ordered_json::array();
  for (const auto& [key, n] : counts) {
    ordered_json row;
    row["origin"] = std::get<0>(key);
    row["direction"] = std::get<1>(key);
    row["generator"] = std::get<2>(key);
    row["records"] = n;
    count_rows.push_back(std::move(row));
  }
  manifest["counts"] = std::move(count_rows);
  manifest["quarantined_sentences"] = result.quarantined_sentences;
  if (!recipe.trainer.is_null()) manifest["trainer"] = recipe.trainer;
  result.manifest = std::move(manifest);
  return result;
}

}  // namespace lvbmt
