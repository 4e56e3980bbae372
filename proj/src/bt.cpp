#include "lvbmt/bt.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

namespace lvbmt {

namespace {

struct Batch {
  size_t id;
  size_t first;  // global index of the first sentence
  size_t count;
};

std::vector<Batch> plan_batches(size_t n, const BtOptions& opts) {
  std::vector<Batch> batches;
  size_t pos = 0, id = 0;
  if (opts.probe && n > 1) {
    batches.push_back(Batch{id++, 0, 1});
    pos = 1;
  }
  while (pos < n) {
    size_t count = std::min(opts.batch_size, n - pos);
    batches.push_back(Batch{id++, pos, count});
    pos += count;
  }
  return batches;
}

std::string checkpoint_header(const Backend& backend, Direction dir, size_t n,
                              const BtOptions& opts) {
  std::ostringstream os;
  os << "lvbmt-bt-checkpoint 1 " << backend.id() << " " << direction_name(dir)
     << " " << n << " " << opts.batch_size << " " << (opts.probe ? 1 : 0);
  return os.str();
}

// Checkpoint lines: header, then `o <batch> <index> <output…>` for completed
// outputs and `q <batch>` for quarantined batches.
struct Checkpoint {
  std::map<size_t, std::map<size_t, std::string>> outputs;  // batch -> idx -> out
  std::map<size_t, size_t> expected;                        // batch -> count
  std::vector<size_t> quarantined;
};

Checkpoint load_checkpoint(const std::string& path, const std::string& header) {
  Checkpoint cp;
  std::ifstream is(path, std::ios::binary);
  if (!is) return cp;
  std::string line;
  if (!std::getline(is, line)) return cp;
  if (line != header)
    throw Error("checkpoint '" + path + "' belongs to a different run (header mismatch)");
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream iss(line);
    std::string kind;
    iss >> kind;
    if (kind == "o") {
      size_t batch, index;
      if (!(iss >> batch >> index))
        throw ParseError(path, lineno, "malformed checkpoint output line");
      std::string rest;
      std::getline(iss, rest);
      if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
      cp.outputs[batch][index] = rest;
    } else if (kind == "n") {
      size_t batch, count;
      if (!(iss >> batch >> count))
        throw ParseError(path, lineno, "malformed checkpoint batch line");
      cp.expected[batch] = count;
    } else if (kind == "q") {
      size_t batch;
      if (!(iss >> batch))
        throw ParseError(path, lineno, "malformed checkpoint quarantine line");
      cp.quarantined.push_back(batch);
    } else {
      throw ParseError(path, lineno, "unknown checkpoint record '" + kind + "'");
    }
  }
  return cp;
}

BtResult run_batches(Backend& backend,
                     const std::vector<std::string>& monolingual,
                     Direction backend_direction, const BtOptions& opts,
                     const ProgressFn& progress,
                     const std::function<CorpusRecord(const std::string& input,
                                                      const std::string& output)>&
                         make_record) {
  BtResult result;
  auto batches = plan_batches(monolingual.size(), opts);
  result.requested_batches = batches.size();

  const std::string header =
      checkpoint_header(backend, backend_direction, monolingual.size(), opts);
  Checkpoint cp;
  std::ofstream cp_out;
  if (!opts.checkpoint_path.empty()) {
    cp = load_checkpoint(opts.checkpoint_path, header);
    bool fresh = cp.outputs.empty() && cp.quarantined.empty();
    cp_out.open(opts.checkpoint_path,
                fresh ? std::ios::binary | std::ios::trunc
                      : std::ios::binary | std::ios::app);
    if (!cp_out)
      throw Error("cannot write checkpoint '" + opts.checkpoint_path + "'");
    if (fresh) cp_out << header << "\n";
  }
  std::ofstream quarantine;
  auto quarantine_batch = [&](const Batch& b, const std::string& why) {
    ++result.quarantined_batches;
    result.quarantined_sentences += b.count;
    if (!opts.quarantine_path.empty()) {
      if (!quarantine.is_open()) {
        quarantine.open(opts.quarantine_path, std::ios::binary | std::ios::app);
        if (!quarantine)
          throw Error("cannot write quarantine file '" + opts.quarantine_path + "'");
      }
      quarantine << "# batch " << b.id << ": " << why << "\n";
      for (size_t k = 0; k < b.count; ++k)
        quarantine << monolingual[b.first + k] << "\n";
    }
    if (cp_out.is_open()) cp_out << "q " << b.id << "\n" << std::flush;
  };

  for (const auto& b : batches) {
    std::vector<std::string> sources(
        monolingual.begin() + static_cast<long>(b.first),
        monolingual.begin() + static_cast<long>(b.first + b.count));

    if (auto it = cp.outputs.find(b.id); it != cp.outputs.end()) {
      auto expected_it = cp.expected.find(b.id);
      if (it->second.size() == b.count && expected_it != cp.expected.end() &&
          expected_it->second == b.count) {
        for (size_t k = 0; k < b.count; ++k)
          result.records.push_back(make_record(sources[k], it->second.at(k)));
        ++result.resumed_batches;
        continue;
      }
      // Partial batch in the checkpoint: redo it.
    }
    if (std::find(cp.quarantined.begin(), cp.quarantined.end(), b.id) !=
        cp.quarantined.end()) {
      ++result.quarantined_batches;
      result.quarantined_sentences += b.count;
      ++result.resumed_batches;
      continue;
    }

    std::vector<std::string> outputs;
    bool done = false;
    std::string last_error;
    for (int attempt = 1; attempt <= opts.retries; ++attempt) {
      try {
        outputs = backend.translate_batch(sources, backend_direction);
        if (outputs.size() != sources.size())
          throw BackendError("backend returned " + std::to_string(outputs.size()) +
                                 " outputs for " + std::to_string(sources.size()) +
                                 " sources",
                             /*retryable=*/false);
        done = true;
        break;
      } catch (const BackendError& e) {
        last_error = e.what();
        if (!e.retryable()) break;
        if (attempt < opts.retries && opts.backoff_ms > 0)
          std::this_thread::sleep_for(std::chrono::milliseconds(
              opts.backoff_ms << (attempt - 1)));
      }
    }
    if (!done) {
      quarantine_batch(b, last_error);
      if (progress)
        progress("bt batch=" + std::to_string(b.id + 1) + "/" +
                 std::to_string(batches.size()) + " quarantined (" + last_error + ")");
      continue;
    }
    if (cp_out.is_open()) {
      cp_out << "n " << b.id << " " << b.count << "\n";
      for (size_t k = 0; k < b.count; ++k)
        cp_out << "o " << b.id << " " << k << " " << outputs[k] << "\n";
      cp_out << std::flush;
    }
    for (size_t k = 0; k < b.count; ++k)
      result.records.push_back(make_record(sources[k], outputs[k]));
    if (progress)
      progress("bt batch=" + std::to_string(b.id + 1) + "/" +
               std::to_string(batches.size()) + " sentences=" +
               std::to_string(b.first + b.count) + "/" +
               std::to_string(monolingual.size()));
  }
  return result;
}

}  // namespace

BtResult backtranslate(Backend& backend,
                       const std::vector<std::string>& monolingual,
                       Direction backend_direction, const BtOptions& opts,
                       const ProgressFn& progress) {
  Direction record_direction = reverse(backend_direction);
  return run_batches(
      backend, monolingual, backend_direction, opts, progress,
      [&](const std::string& input, const std::string& output) {
        CorpusRecord r;
        r.src = output;
        r.tgt = input;
        r.direction = record_direction;
        r.origin = Origin::BackTranslated;
        r.generator = backend.id();
        return r;
      });
}

BtResult forwardtranslate(Backend& backend,
                          const std::vector<std::string>& monolingual,
                          Direction backend_direction, const BtOptions& opts,
                          const ProgressFn& progress) {
  return run_batches(
      backend, monolingual, backend_direction, opts, progress,
      [&](const std::string& input, const std::string& output) {
        CorpusRecord r;
        r.src = input;
        r.tgt = output;
        r.direction = backend_direction;
        r.origin = Origin::ForwardTranslated;
        r.generator = backend.id();
        return r;
      });
}

}  // namespace lvbmt
