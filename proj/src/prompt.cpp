#include "lvbmt/prompt.hpp"

#include <json.hpp>

#include "lvbmt/rng.hpp"

namespace lvbmt {

using ordered_json = nlohmann::ordered_json;

namespace {

std::string render_block(
    const std::vector<std::pair<std::string, std::string>>& pairs) {
  ordered_json root;
  root["translations"] = ordered_json::array();
  for (const auto& [lvb, ita] : pairs) {
    ordered_json entry;
    entry["Ladin"] = lvb;
    entry["Italian"] = ita;
    root["translations"].push_back(std::move(entry));
  }
  return root.dump(4);
}

}  // namespace

PromptBatch build_prompt(const std::vector<CorpusRecord>& authentic,
                         const std::vector<std::string>& targets,
                         uint64_t seed, const PromptOptions& opts) {
  if (authentic.size() < opts.exemplars)
    throw Error("need at least " + std::to_string(opts.exemplars) +
                " authentic pairs for exemplars, have " +
                std::to_string(authentic.size()));
  if (targets.empty()) throw Error("no target sentences to translate");

  PromptBatch batch;
  batch.seed = seed;
  for (size_t i : sample_indices(authentic.size(), opts.exemplars, seed)) {
    const auto& r = authentic[i];
    // lvb side regardless of how the pair is stored.
    if (direction_src(r.direction) == "lvb")
      batch.exemplars.emplace_back(r.src, r.tgt);
    else
      batch.exemplars.emplace_back(r.tgt, r.src);
  }
  batch.targets = targets;

  std::vector<std::pair<std::string, std::string>> empty_pairs;
  empty_pairs.reserve(targets.size());
  for (const auto& t : targets) empty_pairs.emplace_back(t, "");

  std::string text;
  text += "I'll give you samples for the translation from Ladin to Italian:\n\n";
  text += render_block(batch.exemplars);
  text += "\n\nPlease generate the translation of each of the " +
          std::to_string(targets.size()) +
          " entries in the given dictionary, where the translations are "
          "empty. Return the same JSON dictionary where the values for "
          "Italian are filled:\n\n";
  text += render_block(empty_pairs);
  text += "\n";
  batch.text = std::move(text);
  return batch;
}

std::string response_error_name(ResponseError e) {
  switch (e) {
    case ResponseError::None:
      return "none";
    case ResponseError::Malformed:
      return "malformed";
    case ResponseError::CountMismatch:
      return "count-mismatch";
    case ResponseError::SourceMutated:
      return "source-mutated";
    case ResponseError::EmptyTranslation:
      return "empty-translation";
  }
  return "";
}

ParsedResponse parse_response(const std::string& response,
                              const std::vector<std::string>& expected_sources) {
  ParsedResponse out;
  auto fail = [&out](ResponseError e, std::string msg) -> ParsedResponse& {
    out.error = e;
    out.message = std::move(msg);
    out.pairs.clear();
    return out;
  };

  ordered_json doc = ordered_json::parse(response, nullptr, false);
  if (doc.is_discarded()) {
    // Models often wrap the JSON in prose; retry on the outermost braces.
    size_t first = response.find('{');
    size_t last = response.rfind('}');
    if (first == std::string::npos || last == std::string::npos || last <= first)
      return fail(ResponseError::Malformed, "no JSON object found");
    doc = ordered_json::parse(response.substr(first, last - first + 1), nullptr,
                              false);
    if (doc.is_discarded())
      return fail(ResponseError::Malformed, "invalid JSON");
  }
  if (!doc.is_object() || !doc.contains("translations") ||
      !doc["translations"].is_array())
    return fail(ResponseError::Malformed, "missing \"translations\" array");

  const auto& arr = doc["translations"];
  if (arr.size() != expected_sources.size())
    return fail(ResponseError::CountMismatch,
                "expected " + std::to_string(expected_sources.size()) +
                    " entries, got " + std::to_string(arr.size()));

  for (size_t i = 0; i < arr.size(); ++i) {
    const auto& entry = arr[i];
    if (!entry.is_object() || !entry.contains("Ladin") ||
        !entry.contains("Italian") || !entry["Ladin"].is_string() ||
        !entry["Italian"].is_string())
      return fail(ResponseError::Malformed,
                  "entry " + std::to_string(i) + " lacks Ladin/Italian strings");
    std::string lvb = entry["Ladin"].get<std::string>();
    std::string ita = entry["Italian"].get<std::string>();
    if (lvb != expected_sources[i])
      return fail(ResponseError::SourceMutated,
                  "entry " + std::to_string(i) + " source was altered");
    if (ita.empty())
      return fail(ResponseError::EmptyTranslation,
                  "entry " + std::to_string(i) + " translation is empty");
    out.pairs.emplace_back(std::move(lvb), std::move(ita));
  }
  return out;
}

}  // namespace lvbmt
