#ifndef LVBMT_BT_HPP
#define LVBMT_BT_HPP

#include <functional>
#include <string>
#include <vector>

#include "lvbmt/backend.hpp"
#include "lvbmt/corpus.hpp"

namespace lvbmt {

struct BtOptions {
  size_t batch_size = 16;
  int retries = 3;        // attempts per batch
  int backoff_ms = 100;   // doubled after each failed attempt; 0 = no wait
  bool probe = true;      // first batch carries a single sentence
  std::string checkpoint_path;  // resume store; "" disables
  std::string quarantine_path;  // failed batches; "" disables
};

struct BtResult {
  std::vector<CorpusRecord> records;  // input order, quarantined gaps removed
  size_t quarantined_batches = 0;
  size_t quarantined_sentences = 0;
  size_t resumed_batches = 0;  // served from the checkpoint
  size_t requested_batches = 0;
};

using ProgressFn = std::function<void(const std::string&)>;

// Translates `monolingual` with the backend (its sentences are in the
// backend direction's source language) and emits back-translated records:
// tgt = input verbatim (authentic), src = backend output, record direction
// reversed relative to the backend run.
BtResult backtranslate(Backend& backend,
                       const std::vector<std::string>& monolingual,
                       Direction backend_direction, const BtOptions& opts = {},
                       const ProgressFn& progress = nullptr);

// Same orchestration, forward provenance: src = input (authentic),
// tgt = backend output, record direction = backend direction.
BtResult forwardtranslate(Backend& backend,
                          const std::vector<std::string>& monolingual,
                          Direction backend_direction,
                          const BtOptions& opts = {},
                          const ProgressFn& progress = nullptr);

}  // namespace lvbmt

#endif
