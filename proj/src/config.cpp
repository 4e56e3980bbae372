#include "lvbmt/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "lvbmt/dictionary.hpp"

namespace lvbmt {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void bad(const std::string& name, const std::string& what) {
  throw Error(name + ": " + what);
}

std::string require_string(const ordered_json& j, const std::string& key,
                           const std::string& name, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string())
    bad(name, where + ": missing string field '" + key + "'");
  return it->get<std::string>();
}

Direction parse_direction(const std::string& s, const std::string& name,
                          const std::string& where) {
  auto d = direction_from_string(s);
  if (!d) bad(name, where + ": unknown direction '" + s + "'");
  return *d;
}

Origin parse_origin(const std::string& s, const std::string& name,
                    const std::string& where) {
  auto o = origin_from_string(s);
  if (!o) bad(name, where + ": unknown origin '" + s + "'");
  return *o;
}

DatasetRef parse_dataset(const ordered_json& j, const std::string& name,
                         const std::string& id) {
  if (!j.is_object()) bad(name, "dataset '" + id + "' must be an object");
  DatasetRef ds;
  ds.path = require_string(j, "path", name, "dataset '" + id + "'");
  ds.format = require_string(j, "format", name, "dataset '" + id + "'");
  if (ds.format != "parallel" && ds.format != "mono" && ds.format != "records")
    bad(name, "dataset '" + id + "': unknown format '" + ds.format + "'");
  if (auto it = j.find("direction"); it != j.end())
    ds.direction = parse_direction(it->get<std::string>(), name,
                                   "dataset '" + id + "'");
  if (auto it = j.find("lang"); it != j.end()) ds.lang = it->get<std::string>();
  if (ds.format == "mono") {
    if (ds.lang != "lvb" && ds.lang != "ita")
      bad(name, "dataset '" + id + "': mono dataset needs lang lvb or ita");
  }
  return ds;
}

BackendConfig parse_backend(const ordered_json& j, const std::string& name,
                            const std::string& id) {
  if (!j.is_object()) bad(name, "backend '" + id + "' must be an object");
  BackendConfig cfg;
  cfg.id = id;
  cfg.kind = require_string(j, "kind", name, "backend '" + id + "'");
  if (auto it = j.find("batch_size"); it != j.end())
    cfg.batch_size = it->get<size_t>();
  if (auto it = j.find("retries"); it != j.end()) cfg.retries = it->get<int>();
  if (auto it = j.find("backoff_ms"); it != j.end())
    cfg.backoff_ms = it->get<int>();
  cfg.options = j;  // factories read their own keys from the full object
  return cfg;
}

RecipeComponent parse_component(const ordered_json& j, const std::string& name,
                                const std::string& recipe, size_t idx) {
  const std::string where = "recipe '" + recipe + "' component " +
                            std::to_string(idx);
  if (!j.is_object()) bad(name, where + " must be an object");
  RecipeComponent c;
  c.dataset = require_string(j, "dataset", name, where);
  c.origin = parse_origin(require_string(j, "origin", name, where), name, where);
  if (auto it = j.find("direction"); it != j.end())
    c.direction = parse_direction(it->get<std::string>(), name, where);
  if (auto it = j.find("backend"); it != j.end())
    c.backend = it->get<std::string>();
  if (c.origin != Origin::Authentic) {
    if (c.backend.empty()) bad(name, where + ": synthetic component needs a backend");
    if (!c.direction) bad(name, where + ": synthetic component needs a direction");
  }
  return c;
}

}  // namespace

ordered_json default_trainer_card() {
  ordered_json t;
  t["batch_size"] = 16;
  t["max_tokens"] = 128;
  t["eval_interval_steps"] = 16000;
  t["early_stop"] = "3 evals with chrF gain below 0.2";
  return t;
}

PipelineConfig PipelineConfig::parse(const std::string& text,
                                     const std::string& name) {
  PipelineConfig cfg;
  try {
    cfg.doc = ordered_json::parse(text);
  } catch (const ordered_json::exception& e) {
    bad(name, std::string("invalid JSON: ") + e.what());
  }
  if (!cfg.doc.is_object()) bad(name, "top level must be an object");

  if (auto it = cfg.doc.find("seed"); it != cfg.doc.end())
    cfg.seed = it->get<uint64_t>();

  if (auto it = cfg.doc.find("bt"); it != cfg.doc.end()) {
    const auto& b = *it;
    if (!b.is_object()) bad(name, "'bt' must be an object");
    if (auto f = b.find("batch_size"); f != b.end())
      cfg.bt.batch_size = f->get<size_t>();
    if (auto f = b.find("retries"); f != b.end()) cfg.bt.retries = f->get<int>();
    if (auto f = b.find("backoff_ms"); f != b.end())
      cfg.bt.backoff_ms = f->get<int>();
    if (auto f = b.find("probe"); f != b.end()) cfg.bt.probe = f->get<bool>();
    // assemble() appends ".<recipe>.<component>" to the checkpoint prefix;
    // the quarantine file is opened in append mode and may be shared.
    if (auto f = b.find("checkpoint_prefix"); f != b.end())
      cfg.bt.checkpoint_path = f->get<std::string>();
    if (auto f = b.find("quarantine_path"); f != b.end())
      cfg.bt.quarantine_path = f->get<std::string>();
  }

  if (auto it = cfg.doc.find("datasets"); it != cfg.doc.end()) {
    if (!it->is_object()) bad(name, "'datasets' must be an object");
    for (auto& [id, body] : it->items())
      cfg.datasets.emplace(id, parse_dataset(body, name, id));
  }

  if (auto it = cfg.doc.find("backends"); it != cfg.doc.end()) {
    if (!it->is_object()) bad(name, "'backends' must be an object");
    for (auto& [id, body] : it->items())
      cfg.backends.emplace(id, parse_backend(body, name, id));
  }

  if (auto it = cfg.doc.find("recipes"); it != cfg.doc.end()) {
    if (!it->is_object()) bad(name, "'recipes' must be an object");
    for (auto& [id, body] : it->items()) {
      if (!body.is_object()) bad(name, "recipe '" + id + "' must be an object");
      Recipe r;
      r.name = id;
      auto comps = body.find("components");
      if (comps == body.end() || !comps->is_array() || comps->empty())
        bad(name, "recipe '" + id + "' needs a non-empty components array");
      for (size_t i = 0; i < comps->size(); ++i)
        r.components.push_back(parse_component((*comps)[i], name, id, i));
      if (auto tr = body.find("trainer"); tr != body.end())
        r.trainer = *tr;
      else
        r.trainer = default_trainer_card();
      cfg.recipes.emplace(id, std::move(r));
    }
  }

  // Cross-reference checks are cheap; do them at parse time.
  for (const auto& [id, r] : cfg.recipes) {
    for (const auto& c : r.components) {
      if (!cfg.datasets.count(c.dataset))
        bad(name, "recipe '" + id + "' references unknown dataset '" +
                      c.dataset + "'");
      if (!c.backend.empty() && !cfg.backends.count(c.backend))
        bad(name, "recipe '" + id + "' references unknown backend '" +
                      c.backend + "'");
    }
  }
  return cfg;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

std::string PipelineConfig::serialize() const { return doc.dump(4) + "\n"; }

void PipelineConfig::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write config file: " + path);
  out << serialize();
}

void PipelineConfig::validate() const {
  for (const auto& [id, ds] : datasets) {
    if (!fs::exists(ds.path))
      throw Error("dataset '" + id + "': file not found: " + ds.path);
  }
  for (const auto& [id, b] : backends) {
    if (b.kind == "internal-rbmt") {
      auto dirs = b.options.find("directions");
      if (dirs == b.options.end() || !dirs->is_object() || dirs->empty())
        throw Error("backend '" + id + "': internal-rbmt needs directions");
      for (auto& [dname, body] : dirs->items()) {
        if (!direction_from_string(dname))
          throw Error("backend '" + id + "': unknown direction '" + dname + "'");
        if (!body.is_object() || !body.contains("dict"))
          throw Error("backend '" + id + "': direction " + dname +
                      " needs a dict path");
        std::string dict = body["dict"].get<std::string>();
        if (!fs::exists(dict))
          throw Error("backend '" + id + "': dictionary not found: " + dict);
        if (body.contains("rules")) {
          std::string rules = body["rules"].get<std::string>();
          if (!fs::exists(rules))
            throw Error("backend '" + id + "': rules not found: " + rules);
        }
      }
    } else if (b.kind == "llm-json") {
      if (b.options.contains("exemplar_corpus")) {
        std::string ex = b.options["exemplar_corpus"].get<std::string>();
        if (!fs::exists(ex))
          throw Error("backend '" + id + "': exemplar corpus not found: " + ex);
      }
    }
  }
}

Registry PipelineConfig::registry() const {
  Registry reg;
  reg.datasets = datasets;
  reg.backend_configs = backends;
  return reg;
}

const Recipe& PipelineConfig::recipe(const std::string& name) const {
  auto it = recipes.find(name);
  if (it == recipes.end()) throw Error("unknown recipe: " + name);
  return it->second;
}

}  // namespace lvbmt
