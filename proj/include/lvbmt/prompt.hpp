#ifndef LVBMT_PROMPT_HPP
#define LVBMT_PROMPT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "lvbmt/corpus.hpp"

namespace lvbmt {

struct PromptOptions {
  size_t exemplars = 8;
  size_t targets = 16;  // batch size the instruction text announces
};

struct PromptBatch {
  std::vector<std::pair<std::string, std::string>> exemplars;  // (lvb, ita)
  std::vector<std::string> targets;
  uint64_t seed = 0;
  std::string text;  // rendered prompt
};

// Two-block prompt: instruction + filled example JSON, instruction +
// empty-translation JSON. Exemplars are a seeded uniform sample without
// replacement from `authentic` (lvb side = src of lvb-ita records).
// Throws when fewer than `exemplars` pairs exist or `targets` is empty.
PromptBatch build_prompt(const std::vector<CorpusRecord>& authentic,
                         const std::vector<std::string>& targets,
                         uint64_t seed, const PromptOptions& opts = {});

enum class ResponseError {
  None,
  Malformed,         // not the expected JSON shape
  CountMismatch,     // wrong number of entries
  SourceMutated,     // a "Ladin" value differs from the request
  EmptyTranslation,  // an "Italian" value is empty
};

std::string response_error_name(ResponseError e);

struct ParsedResponse {
  ResponseError error = ResponseError::None;
  std::string message;
  std::vector<std::pair<std::string, std::string>> pairs;  // (lvb, ita)
  bool ok() const { return error == ResponseError::None; }
};

// Accepts iff the response carries the Listing-shaped JSON with exactly the
// expected sources, byte-identical and in order, each with a non-empty
// translation. Tolerates prose around the JSON object.
ParsedResponse parse_response(const std::string& response,
                              const std::vector<std::string>& expected_sources);

}  // namespace lvbmt

#endif
