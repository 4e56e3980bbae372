#include "lvbmt/backend.hpp"

#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>

namespace lvbmt {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

std::vector<std::string> IdentityBackend::translate_batch(
    const std::vector<std::string>& sources, Direction) {
  return sources;
}

void InternalRbmtBackend::add_direction(Direction d, DictionaryPtr dict,
                                        std::vector<TransferRule> rules) {
  engines_[d] = Engine{std::move(dict), std::move(rules)};
}

std::vector<std::string> InternalRbmtBackend::translate_batch(
    const std::vector<std::string>& sources, Direction direction) {
  auto it = engines_.find(direction);
  if (it == engines_.end())
    throw BackendError("backend '" + id_ + "' has no " +
                           direction_name(direction) + " engine",
                       /*retryable=*/false);
  std::vector<std::string> out;
  out.reserve(sources.size());
  for (const auto& s : sources)
    out.push_back(translate(*it->second.dict, it->second.rules, s, direction)
                      .target_text);
  return out;
}

// ---------------------------------------------------------------------------
// external-command

namespace {

fs::path fresh_temp_path(const std::string& suffix) {
  static std::atomic<uint64_t> counter{0};
  std::ostringstream name;
  name << "lvbmt-" << ::getpid() << "-" << counter++ << suffix;
  return fs::temp_directory_path() / name.str();
}

std::string substitute_direction(const std::string& command, Direction d) {
  std::string out = command;
  const std::string placeholder = "{direction}";
  size_t pos = out.find(placeholder);
  if (pos == std::string::npos) return out + " " + direction_name(d);
  while (pos != std::string::npos) {
    out.replace(pos, placeholder.size(), direction_name(d));
    pos = out.find(placeholder, pos);
  }
  return out;
}

}  // namespace

std::vector<std::string> ExternalCommandBackend::translate_batch(
    const std::vector<std::string>& sources, Direction direction) {
  fs::path in_path = fresh_temp_path(".in");
  fs::path out_path = fresh_temp_path(".out");
  {
    std::ofstream in(in_path, std::ios::binary);
    if (!in) throw BackendError("cannot create temp file", /*retryable=*/true);
    for (const auto& s : sources) in << s << "\n";
  }
  std::string cmd = substitute_direction(command_, direction) + " < '" +
                    in_path.string() + "' > '" + out_path.string() + "'";
  int status = std::system(cmd.c_str());
  std::vector<std::string> out;
  if (status == 0) {
    std::ifstream result(out_path, std::ios::binary);
    std::string line;
    while (std::getline(result, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      out.push_back(line);
    }
  }
  std::error_code ec;
  fs::remove(in_path, ec);
  fs::remove(out_path, ec);
  if (status != 0)
    throw BackendError("backend '" + id_ + "' command exited with status " +
                           std::to_string(status),
                       /*retryable=*/true);
  if (out.size() != sources.size())
    throw BackendError("backend '" + id_ + "' returned " +
                           std::to_string(out.size()) + " lines for " +
                           std::to_string(sources.size()) + " sources",
                       /*retryable=*/false);
  return out;
}

// ---------------------------------------------------------------------------
// HTTP transport

ordered_json http_post_json(const std::string& url, const ordered_json& body,
                            int timeout_s, const std::string& auth_env,
                            const std::string& auth_header) {
  // Split "scheme://host[:port]" and "/path".
  size_t scheme_end = url.find("://");
  if (scheme_end == std::string::npos)
    throw BackendError("malformed endpoint URL '" + url + "'", false);
  size_t path_begin = url.find('/', scheme_end + 3);
  std::string base = path_begin == std::string::npos ? url : url.substr(0, path_begin);
  std::string path = path_begin == std::string::npos ? "/" : url.substr(path_begin);

  httplib::Client client(base);
  client.set_connection_timeout(timeout_s, 0);
  client.set_read_timeout(timeout_s, 0);
  client.set_write_timeout(timeout_s, 0);
  httplib::Headers headers;
  if (!auth_env.empty()) {
    const char* token = std::getenv(auth_env.c_str());
    if (token == nullptr || *token == '\0')
      throw BackendError("environment variable '" + auth_env +
                             "' is empty; cannot authenticate",
                         /*retryable=*/false);
    headers.emplace(auth_header, token);
  }
  auto res = client.Post(path, headers, body.dump(), "application/json");
  if (!res)
    throw BackendError("no response from '" + url + "' (" +
                           httplib::to_string(res.error()) + ")",
                       /*retryable=*/true);
  if (res->status != 200)
    throw BackendError("endpoint '" + url + "' returned HTTP " +
                           std::to_string(res->status),
                       /*retryable=*/true);
  ordered_json doc = ordered_json::parse(res->body, nullptr, false);
  if (doc.is_discarded())
    throw BackendError("endpoint '" + url + "' returned invalid JSON",
                       /*retryable=*/true);
  return doc;
}

HttpEndpointBackend::HttpEndpointBackend(std::string id, std::string url,
                                         int timeout_s, std::string auth_env,
                                         std::string auth_header)
    : id_(std::move(id)),
      url_(std::move(url)),
      timeout_s_(timeout_s),
      auth_env_(std::move(auth_env)),
      auth_header_(std::move(auth_header)) {}

std::vector<std::string> HttpEndpointBackend::translate_batch(
    const std::vector<std::string>& sources, Direction direction) {
  ordered_json body;
  body["direction"] = direction_name(direction);
  body["sentences"] = sources;
  ordered_json doc =
      http_post_json(url_, body, timeout_s_, auth_env_, auth_header_);
  if (!doc.is_object() || !doc.contains("translations") ||
      !doc["translations"].is_array())
    throw BackendError("backend '" + id_ + "' response lacks translations array",
                       /*retryable=*/true);
  std::vector<std::string> out;
  for (const auto& t : doc["translations"]) {
    if (!t.is_string())
      throw BackendError("backend '" + id_ + "' returned a non-string entry",
                         /*retryable=*/true);
    out.push_back(t.get<std::string>());
  }
  if (out.size() != sources.size())
    throw BackendError("backend '" + id_ + "' returned " +
                           std::to_string(out.size()) + " translations for " +
                           std::to_string(sources.size()) + " sources",
                       /*retryable=*/false);
  return out;
}

// ---------------------------------------------------------------------------
// llm-json

LlmJsonBackend::LlmJsonBackend(std::string id, std::string url,
                               std::vector<CorpusRecord> exemplar_pool,
                               uint64_t seed, PromptOptions opts, int timeout_s,
                               std::string auth_env, std::string auth_header)
    : id_(std::move(id)),
      url_(std::move(url)),
      exemplar_pool_(std::move(exemplar_pool)),
      seed_(seed),
      opts_(opts),
      timeout_s_(timeout_s),
      auth_env_(std::move(auth_env)),
      auth_header_(std::move(auth_header)) {}

std::vector<std::string> LlmJsonBackend::translate_batch(
    const std::vector<std::string>& sources, Direction direction) {
  if (direction != Direction::LvbToIta)
    throw BackendError("backend '" + id_ + "' only translates lvb-ita",
                       /*retryable=*/false);
  // Deterministic per-batch exemplar sampling.
  PromptBatch prompt =
      build_prompt(exemplar_pool_, sources, seed_ + batch_counter_++, opts_);
  ordered_json body;
  body["prompt"] = prompt.text;
  ordered_json doc =
      http_post_json(url_, body, timeout_s_, auth_env_, auth_header_);
  if (!doc.is_object() || !doc.contains("completion") ||
      !doc["completion"].is_string())
    throw BackendError("backend '" + id_ + "' response lacks completion string",
                       /*retryable=*/true);
  ParsedResponse parsed =
      parse_response(doc["completion"].get<std::string>(), sources);
  if (!parsed.ok())
    throw BackendError("backend '" + id_ + "' completion rejected: " +
                           response_error_name(parsed.error) + " (" +
                           parsed.message + ")",
                       /*retryable=*/true);
  std::vector<std::string> out;
  out.reserve(parsed.pairs.size());
  for (auto& [lvb, ita] : parsed.pairs) out.push_back(std::move(ita));
  return out;
}

// ---------------------------------------------------------------------------
// factory

namespace {

std::string get_string(const ordered_json& j, const std::string& key,
                       const std::string& backend_id) {
  if (!j.contains(key) || !j[key].is_string())
    throw Error("backend '" + backend_id + "' needs string option '" + key + "'");
  return j[key].get<std::string>();
}

std::string get_string_or(const ordered_json& j, const std::string& key,
                          const std::string& fallback) {
  if (j.contains(key) && j[key].is_string()) return j[key].get<std::string>();
  return fallback;
}

}  // namespace

BackendPtr make_backend(const BackendConfig& config) {
  const auto& opt = config.options;
  if (config.kind == "identity") {
    return std::make_shared<IdentityBackend>(config.id);
  }
  if (config.kind == "internal-rbmt") {
    auto backend = std::make_shared<InternalRbmtBackend>(config.id);
    if (!opt.contains("directions") || !opt["directions"].is_object() ||
        opt["directions"].empty())
      throw Error("backend '" + config.id + "' needs a directions table");
    for (const auto& [key, entry] : opt["directions"].items()) {
      auto dir = direction_from_string(key);
      if (!dir)
        throw Error("backend '" + config.id + "': unknown direction '" + key + "'");
      DictionaryPtr dict = load_dictionary(get_string(entry, "dict", config.id));
      std::vector<TransferRule> rules;
      if (entry.contains("rules"))
        rules = parse_rules_file(get_string(entry, "rules", config.id));
      backend->add_direction(*dir, std::move(dict), std::move(rules));
    }
    return backend;
  }
  if (config.kind == "external-command") {
    return std::make_shared<ExternalCommandBackend>(
        config.id, get_string(opt, "command", config.id));
  }
  if (config.kind == "http-endpoint") {
    return std::make_shared<HttpEndpointBackend>(
        config.id, get_string(opt, "url", config.id),
        opt.value("timeout_s", 30), get_string_or(opt, "auth_env", ""),
        get_string_or(opt, "auth_header", "Authorization"));
  }
  if (config.kind == "llm-json") {
    PromptOptions popts;
    popts.exemplars = opt.value("exemplars", popts.exemplars);
    popts.targets = config.batch_size;
    auto pool = read_parallel_tsv(get_string(opt, "exemplar_corpus", config.id),
                                  Direction::LvbToIta);
    return std::make_shared<LlmJsonBackend>(
        config.id, get_string(opt, "url", config.id), std::move(pool),
        opt.value("seed", uint64_t{0}), popts, opt.value("timeout_s", 120),
        get_string_or(opt, "auth_env", ""),
        get_string_or(opt, "auth_header", "Authorization"));
  }
  throw Error("unknown backend kind '" + config.kind + "'");
}

}  // namespace lvbmt
