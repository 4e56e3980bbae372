#ifndef LVBMT_BACKEND_HPP
#define LVBMT_BACKEND_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "lvbmt/corpus.hpp"
#include "lvbmt/prompt.hpp"
#include "lvbmt/transfer.hpp"

namespace lvbmt {

// retryable=false means the batch is broken, not the transport: the
// orchestrator quarantines it without further attempts.
class BackendError : public Error {
 public:
  BackendError(const std::string& msg, bool retryable)
      : Error(msg), retryable_(retryable) {}
  bool retryable() const { return retryable_; }

 private:
  bool retryable_;
};

// Order-preserving batch translator; must return exactly one target per
// source or throw BackendError.
class Backend {
 public:
  virtual ~Backend() = default;
  virtual const std::string& id() const = 0;
  virtual std::vector<std::string> translate_batch(
      const std::vector<std::string>& sources, Direction direction) = 0;
};

using BackendPtr = std::shared_ptr<Backend>;

// Echoes its input; the fixed point for round-trip and provenance tests.
class IdentityBackend : public Backend {
 public:
  explicit IdentityBackend(std::string id = "identity") : id_(std::move(id)) {}
  const std::string& id() const override { return id_; }
  std::vector<std::string> translate_batch(const std::vector<std::string>& sources,
                                           Direction direction) override;

 private:
  std::string id_;
};

class InternalRbmtBackend : public Backend {
 public:
  explicit InternalRbmtBackend(std::string id) : id_(std::move(id)) {}
  void add_direction(Direction d, DictionaryPtr dict,
                     std::vector<TransferRule> rules);
  const std::string& id() const override { return id_; }
  std::vector<std::string> translate_batch(const std::vector<std::string>& sources,
                                           Direction direction) override;

 private:
  struct Engine {
    DictionaryPtr dict;
    std::vector<TransferRule> rules;
  };
  std::string id_;
  std::map<Direction, Engine> engines_;
};

// Line protocol over a spawned process: one source per stdin line, one
// translation per stdout line. `{direction}` in the command is substituted;
// otherwise the direction is appended as a final argument.
class ExternalCommandBackend : public Backend {
 public:
  ExternalCommandBackend(std::string id, std::string command)
      : id_(std::move(id)), command_(std::move(command)) {}
  const std::string& id() const override { return id_; }
  std::vector<std::string> translate_batch(const std::vector<std::string>& sources,
                                           Direction direction) override;

 private:
  std::string id_;
  std::string command_;
};

// POST {"direction": ..., "sentences": [...]} -> {"translations": [...]}.
// Auth header value read from the named environment variable.
class HttpEndpointBackend : public Backend {
 public:
  HttpEndpointBackend(std::string id, std::string url, int timeout_s = 30,
                      std::string auth_env = "", std::string auth_header = "Authorization");
  const std::string& id() const override { return id_; }
  std::vector<std::string> translate_batch(const std::vector<std::string>& sources,
                                           Direction direction) override;

 private:
  std::string id_;
  std::string url_;
  int timeout_s_;
  std::string auth_env_;
  std::string auth_header_;
};

// Wraps build_prompt/parse_response around a text-completion endpoint:
// POST {"prompt": ...} -> {"completion": ...}. lvb->ita only.
class LlmJsonBackend : public Backend {
 public:
  LlmJsonBackend(std::string id, std::string url,
                 std::vector<CorpusRecord> exemplar_pool, uint64_t seed,
                 PromptOptions opts = {}, int timeout_s = 120,
                 std::string auth_env = "", std::string auth_header = "Authorization");
  const std::string& id() const override { return id_; }
  std::vector<std::string> translate_batch(const std::vector<std::string>& sources,
                                           Direction direction) override;

 private:
  std::string id_;
  std::string url_;
  std::vector<CorpusRecord> exemplar_pool_;
  uint64_t seed_;
  PromptOptions opts_;
  int timeout_s_;
  std::string auth_env_;
  std::string auth_header_;
  uint64_t batch_counter_ = 0;
};

struct BackendConfig {
  std::string id;
  std::string kind;  // identity | internal-rbmt | external-command |
                     // http-endpoint | llm-json
  size_t batch_size = 16;
  int retries = 3;
  int backoff_ms = 100;
  nlohmann::ordered_json options;  // kind-specific settings
};

// Instantiates a backend from its config (loading dictionaries, rules,
// exemplar corpora as needed). Throws Error on unknown kinds or missing
// options.
BackendPtr make_backend(const BackendConfig& config);

// POST a JSON body, return the parsed JSON response; shared by the HTTP
// backends. Throws retryable BackendError on transport/status failures.
nlohmann::ordered_json http_post_json(const std::string& url,
                                      const nlohmann::ordered_json& body,
                                      int timeout_s, const std::string& auth_env,
                                      const std::string& auth_header);

}  // namespace lvbmt

#endif
