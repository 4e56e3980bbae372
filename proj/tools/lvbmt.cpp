// lvbmt — command-line front end.
//
// One executable, nested subcommands. Data flows through stdout; progress,
// warnings and timings go to stderr. Every command that uses randomness
// takes it from --seed, so identical invocations produce identical bytes.

#include <atomic>
#include <chrono>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "lvbmt/bt.hpp"
#include "lvbmt/classifier.hpp"
#include "lvbmt/config.hpp"
#include "lvbmt/corpus.hpp"
#include "lvbmt/dictionary.hpp"
#include "lvbmt/metrics.hpp"
#include "lvbmt/normalize.hpp"
#include "lvbmt/prompt.hpp"
#include "lvbmt/recipe.hpp"
#include "lvbmt/transfer.hpp"

namespace {

using namespace lvbmt;

constexpr const char* kVersion = "lvbmt 0.1.0";

// ---------------------------------------------------------------- plumbing

std::vector<std::string> read_lines(const std::string& path) {
  std::vector<std::string> lines;
  auto drain = [&](std::istream& is) {
    std::string line;
    while (std::getline(is, line)) {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      lines.push_back(line);
    }
  };
  if (path == "-" || path.empty()) {
    drain(std::cin);
  } else {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open '" + path + "'");
    drain(is);
  }
  return lines;
}

std::string read_all(const std::string& path) {
  std::ostringstream buf;
  if (path == "-" || path.empty()) {
    buf << std::cin.rdbuf();
  } else {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open '" + path + "'");
    buf << is.rdbuf();
  }
  return buf.str();
}

// stdout for "-", otherwise a binary ofstream that must open.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (path != "-" && !path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error("cannot write '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& os() { return *os_; }

 private:
  std::ofstream file_;
  std::ostream* os_ = &std::cout;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

std::string fmt(double v, int digits = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

Direction direction_arg(const std::string& s) {
  auto d = direction_from_string(s);
  if (!d) throw Error("unknown direction '" + s + "'");
  return *d;
}

// Ordered parallel map: fn(i) must write only to slot i of its result
// vector. Output order is index order regardless of --jobs.
template <typename Fn>
void for_each_index(size_t n, int jobs, Fn&& fn) {
  if (jobs <= 1 || n < 2) {
    for (size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mu;
  size_t workers = std::min<size_t>(static_cast<size_t>(jobs), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mu);
          if (!first_error) first_error = std::current_exception();
          next.store(n);  // drain remaining work
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

ProgressFn stderr_progress() {
  return [](const std::string& line) { std::cerr << line << "\n"; };
}

struct GlobalArgs {
  uint64_t seed = 1;
  std::string config_path;
  int jobs = 1;
  bool seed_given = false;

  PipelineConfig config() const {
    if (config_path.empty()) throw Error("this command needs --config");
    PipelineConfig cfg = PipelineConfig::load(config_path);
    cfg.validate();
    return cfg;
  }

  // Seed precedence: explicit --seed beats the config seed.
  uint64_t effective_seed(const PipelineConfig& cfg) const {
    return seed_given ? seed : cfg.seed;
  }
};

// Registry with a fallback identity backend so smoke runs and round-trip
// baselines need no config entry for it.
Registry make_registry(const PipelineConfig* cfg) {
  Registry reg;
  if (cfg) {
    reg.datasets = cfg->datasets;
    reg.backend_configs = cfg->backends;
  }
  if (!reg.backend_configs.count("identity"))
    reg.add_instance(std::make_shared<IdentityBackend>());
  return reg;
}

// ------------------------------------------------------------ subcommands

void cmd_dict_compile(const std::string& paradigms, const std::string& lemmas,
                      const std::string& bilingual, const std::string& src,
                      const std::string& tgt, const std::string& out) {
  Timer timer;
  DictionaryPtr dict = compile_dictionary(paradigms, lemmas, bilingual, src, tgt);
  const CompileReport& r = dict->report();
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  if (!out.empty()) dict->save(out);
  std::cout << "paradigms=" << r.paradigms << " lemmas=" << r.lemmas
            << " forms=" << r.forms
            << " bilingual_entries=" << r.bilingual_entries << "\n";
  std::cerr << "done dict-compile seconds=" << fmt(timer.seconds()) << "\n";
}

void cmd_dict_coverage(const std::string& dict_path, const std::string& input,
                       size_t top) {
  DictionaryPtr dict = load_dictionary(dict_path);
  CoverageReport r = coverage(*dict, read_lines(input));
  std::cout << "tokens\t" << r.tokens << "\n";
  std::cout << "known\t" << r.known << "\n";
  std::cout << "fraction\t" << fmt(r.fraction, 6) << "\n";
  size_t shown = 0;
  for (const auto& [type, count] : r.unknown_types) {
    if (shown++ >= top) break;
    std::cout << "unknown\t" << type << "\t" << count << "\n";
  }
}

void cmd_translate(const GlobalArgs& g, const std::string& direction,
                   const std::string& dict_path, const std::string& rules_path,
                   const std::string& input, const std::string& output,
                   bool trace) {
  Timer timer;
  Direction dir = direction_arg(direction);
  DictionaryPtr dict = load_dictionary(dict_path);
  std::vector<TransferRule> rules;
  if (!rules_path.empty()) rules = parse_rules_file(rules_path);

  std::vector<std::string> lines = read_lines(input);
  std::vector<TranslationResult> results(lines.size());
  for_each_index(lines.size(), g.jobs, [&](size_t i) {
    results[i] = translate(*dict, rules, lines[i], dir);
  });

  Output out(output);
  size_t unknown = 0;
  for (const auto& r : results) {
    out.os() << r.target_text << "\n";
    unknown += r.unknown_count;
    if (trace)
      for (const auto& t : r.trace)
        std::cerr << "trace\t" << t.src_surface << "\t" << t.analysis << "\t"
                  << t.bilingual << "\t" << t.rules << "\t" << t.output << "\n";
  }
  std::cerr << "done translate sentences=" << lines.size()
            << " unknown_tokens=" << unknown
            << " seconds=" << fmt(timer.seconds()) << "\n";
}

void cmd_segment(const std::string& input, const std::string& output) {
  std::vector<std::string> sentences = segment(read_all(input));
  Output out(output);
  for (const auto& s : sentences) out.os() << s << "\n";
  std::cerr << "done segment sentences=" << sentences.size() << "\n";
}

void cmd_normalize(const std::string& dict_path, const std::string& rules_path,
                   const std::string& input, const std::string& output,
                   const std::string& report_path) {
  Timer timer;
  DictionaryPtr dict = load_dictionary(dict_path);
  std::vector<RespellRule> rules;
  if (!rules_path.empty()) rules = parse_respell_rules_file(rules_path);

  std::vector<std::string> sentences = read_lines(input);
  std::vector<std::string> kept;
  FilterReport report = filter_corpus(*dict, rules, sentences, kept);

  Output out(output);
  for (const auto& s : kept) out.os() << s << "\n";
  if (!report_path.empty()) {
    Output rep(report_path);
    write_filter_report(rep.os(), report);
  }
  std::cerr << "done normalize total=" << report.total << " kept=" << report.kept
            << " dropped=" << report.dropped
            << " respelled_tokens=" << report.respelled_tokens
            << " seconds=" << fmt(timer.seconds()) << "\n";
}

void cmd_classify_train(const GlobalArgs& g, const std::string& input,
                        const std::string& out, const ClassifierParams& base) {
  Timer timer;
  ClassifierParams params = base;
  params.seed = g.seed;
  TrainResult result = train_classifier(read_labeled_tsv(input), params);
  result.model.save(out);
  std::cout << "train_sentences=" << result.train_size
            << " heldout_sentences=" << result.heldout_size
            << " labels=" << result.model.labels.size()
            << " heldout_accuracy=" << fmt(result.heldout_accuracy, 4) << "\n";
  std::cerr << "done classify-train rounds=" << params.rounds
            << " seconds=" << fmt(timer.seconds()) << "\n";
}

void cmd_classify_predict(const GlobalArgs& g, const std::string& model_path,
                          const std::string& input, const std::string& output,
                          bool scores) {
  VariantModel model = load_variant_model(model_path);
  std::vector<std::string> lines = read_lines(input);
  std::vector<Prediction> preds(lines.size());
  for_each_index(lines.size(), g.jobs, [&](size_t i) {
    preds[i] = predict_one(model, lines[i]);
  });
  Output out(output);
  for (const auto& p : preds) {
    out.os() << p.label;
    if (scores)
      for (double s : p.scores) out.os() << "\t" << fmt(s, 6);
    out.os() << "\n";
  }
  std::cerr << "done classify-predict sentences=" << lines.size() << "\n";
}

void cmd_classify_partition(const std::string& model_path,
                            const std::string& input,
                            const std::string& outdir,
                            const std::string& counts_path) {
  Timer timer;
  VariantModel model = load_variant_model(model_path);
  PartitionCounts counts;
  if (input == "-" || input.empty()) {
    counts = partition(model, std::cin, outdir);
  } else {
    std::ifstream is(input, std::ios::binary);
    if (!is) throw Error("cannot open '" + input + "'");
    counts = partition(model, is, outdir);
  }
  Output out(counts_path.empty() ? std::string("-") : counts_path);
  write_partition_counts(out.os(), model, counts);
  std::cerr << "done classify-partition seconds=" << fmt(timer.seconds())
            << "\n";
}

struct BtFlagSet {
  bool batch_size = false;
  bool retries = false;
  bool backoff_ms = false;
};

void cmd_bt_run(const GlobalArgs& g, const std::string& backend_id,
                const std::string& mono_path, const std::string& direction,
                bool forward, const std::string& out_path, BtOptions opts,
                const BtFlagSet& given, bool no_probe,
                const std::string& checkpoint, const std::string& quarantine) {
  Timer timer;
  std::optional<PipelineConfig> cfg;
  if (!g.config_path.empty()) {
    cfg = PipelineConfig::load(g.config_path);
    cfg->validate();
    // Config supplies defaults; explicitly passed flags override them.
    if (!given.batch_size) opts.batch_size = cfg->bt.batch_size;
    if (!given.retries) opts.retries = cfg->bt.retries;
    if (!given.backoff_ms) opts.backoff_ms = cfg->bt.backoff_ms;
  }
  if (no_probe) opts.probe = false;
  opts.checkpoint_path = checkpoint;
  opts.quarantine_path = quarantine;

  Registry reg = make_registry(cfg ? &*cfg : nullptr);
  BackendPtr backend = reg.backend(backend_id);
  std::vector<std::string> mono = read_mono_lines(mono_path);
  Direction dir = direction_arg(direction);

  BtResult result = forward
                        ? forwardtranslate(*backend, mono, dir, opts,
                                           stderr_progress())
                        : backtranslate(*backend, mono, dir, opts,
                                        stderr_progress());
  Output out(out_path);
  write_records_tsv(out.os(), result.records);
  std::cerr << "done bt-run records=" << result.records.size()
            << " quarantined_batches=" << result.quarantined_batches
            << " quarantined_sentences=" << result.quarantined_sentences
            << " resumed_batches=" << result.resumed_batches
            << " seconds=" << fmt(timer.seconds()) << "\n";
}

void cmd_prompt_build(const GlobalArgs& g, const std::string& corpus_path,
                      const std::string& targets_path, size_t exemplars,
                      const std::string& output) {
  std::vector<CorpusRecord> authentic =
      read_parallel_tsv(corpus_path, Direction::LvbToIta);
  std::vector<std::string> targets = read_mono_lines(targets_path);
  PromptOptions opts;
  opts.exemplars = exemplars;
  PromptBatch batch = build_prompt(authentic, targets, g.seed, opts);
  Output out(output);
  out.os() << batch.text;
  std::cerr << "done prompt-build exemplars=" << batch.exemplars.size()
            << " targets=" << batch.targets.size() << " seed=" << batch.seed
            << "\n";
}

void cmd_prompt_parse(const std::string& targets_path,
                      const std::string& response_path,
                      const std::string& output) {
  std::vector<std::string> targets = read_mono_lines(targets_path);
  ParsedResponse parsed = parse_response(read_all(response_path), targets);
  if (!parsed.ok())
    throw Error(response_error_name(parsed.error) + ": " + parsed.message);
  Output out(output);
  for (const auto& [lvb, ita] : parsed.pairs)
    out.os() << lvb << "\t" << ita << "\n";
  std::cerr << "done prompt-parse pairs=" << parsed.pairs.size() << "\n";
}

void cmd_recipe_assemble(const GlobalArgs& g, const std::string& name,
                         const std::string& records_path,
                         const std::string& manifest_path) {
  Timer timer;
  PipelineConfig cfg = g.config();
  Registry reg = make_registry(&cfg);
  const Recipe& recipe = cfg.recipe(name);
  AssembleResult result =
      assemble(recipe, reg, g.effective_seed(cfg), cfg.bt, stderr_progress());

  if (!records_path.empty())
    write_records_tsv_file(records_path, result.records);
  if (!manifest_path.empty()) {
    Output m(manifest_path);
    m.os() << result.manifest.dump(4) << "\n";
  } else {
    std::cout << result.manifest.dump(4) << "\n";
  }
  std::cerr << "done recipe-assemble recipe=" << name
            << " records=" << result.records.size()
            << " quarantined_sentences=" << result.quarantined_sentences
            << " seconds=" << fmt(timer.seconds()) << "\n";
}

void cmd_recipe_manifest(const std::string& records_path,
                         const std::string& output) {
  std::vector<CorpusRecord> records = read_records_tsv(records_path);
  Output out(output);
  TrainingEmitCounts counts = emit_training_manifest(records, out.os());
  std::cerr << "done recipe-manifest to_ita=" << counts.to_ita
            << " to_lvb=" << counts.to_lvb << "\n";
}

void cmd_eval_corpus(bool use_chrf, const std::string& hyp_path,
                     const std::string& ref_path, bool pretokenized,
                     int smooth_k, const std::string& report_path,
                     const std::string& json_report_path) {
  std::vector<std::string> hyp = read_lines(hyp_path);
  std::vector<std::string> ref = read_lines(ref_path);
  MetricReport report;
  if (use_chrf) {
    ChrfOptions opts;
    opts.pretokenized = pretokenized;
    report = chrfpp(hyp, ref, opts);
  } else {
    BleuOptions opts;
    opts.pretokenized = pretokenized;
    opts.smooth_k = smooth_k;
    report = bleu(hyp, ref, opts);
  }
  Output out(report_path.empty() ? std::string("-") : report_path);
  write_metric_report(out.os(), report);
  if (!json_report_path.empty()) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["metric"] = use_chrf ? "chrfpp" : "bleu";
    j["score"] = use_chrf ? report.chrfpp : report.bleu;
    j["bleu"] = report.bleu;
    j["chrfpp"] = report.chrfpp;
    j["brevity_penalty"] = report.brevity_penalty;
    j["hyp_length"] = report.hyp_length;
    j["ref_length"] = report.ref_length;
    j["precisions"] = report.precisions;
    auto& rows = j["sentences"] = ordered_json::array();
    for (size_t i = 0; i < hyp.size(); ++i) {
      ordered_json row;
      row["index"] = i;
      row["hyp"] = hyp[i];
      row["ref"] = ref[i];
      ChrfOptions sopts;
      sopts.pretokenized = pretokenized;
      row["chrfpp"] = sentence_chrfpp(hyp[i], ref[i], sopts);
      rows.push_back(std::move(row));
    }
    Output jout(json_report_path);
    jout.os() << j.dump(4) << "\n";
  }
}

void cmd_eval_rtt(const GlobalArgs& g, const std::string& forward_id,
                  const std::string& backward_id, const std::string& input,
                  const std::string& pivot, size_t sample, size_t worst,
                  size_t batch_size, const std::string& outputs_path) {
  Timer timer;
  std::optional<PipelineConfig> cfg;
  if (!g.config_path.empty()) {
    cfg = PipelineConfig::load(g.config_path);
    cfg->validate();
  }
  Registry reg = make_registry(cfg ? &*cfg : nullptr);

  RttConfig rtt;
  rtt.forward = reg.backend(forward_id);
  rtt.backward = reg.backend(backward_id);
  rtt.pivot = direction_arg(pivot);
  rtt.sample = sample;
  rtt.worst = worst;
  rtt.batch_size = batch_size;

  std::vector<std::string> sentences = read_lines(input);
  RttReport report = round_trip(rtt, sentences);
  write_metric_report(std::cout, report.scores);
  for (const auto& [index, score] : report.worst)
    std::cout << "worst\t" << index << "\t" << fmt(score, 2) << "\t"
              << report.outputs[index] << "\n";
  if (!outputs_path.empty()) {
    Output out(outputs_path);
    for (const auto& s : report.outputs) out.os() << s << "\n";
  }
  std::cerr << "done eval-rtt sentences=" << report.outputs.size()
            << " seconds=" << fmt(timer.seconds()) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Val Badia Ladin / Italian low-resource MT toolkit"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  app.fallthrough();

  GlobalArgs g;
  app.add_option("--seed", g.seed, "Seed for every random choice")
      ->default_val(1)
      ->each([&g](const std::string&) { g.seed_given = true; });
  app.add_option("--config", g.config_path,
                 "Pipeline config file (datasets, backends, recipes)");
  app.add_option("--jobs", g.jobs, "Worker threads for per-sentence stages")
      ->default_val(1);

  // dict ------------------------------------------------------------------
  auto* dict = app.add_subcommand("dict", "Compile and inspect dictionaries");
  dict->require_subcommand(1);

  auto* dc = dict->add_subcommand("compile",
                                  "Compile paradigm/lemma/bilingual sources");
  std::string dc_paradigms, dc_lemmas, dc_bilingual, dc_out;
  std::string dc_src = "lvb", dc_tgt = "ita";
  dc->add_option("--paradigms", dc_paradigms, "Paradigm file (P/F lines)")
      ->required();
  dc->add_option("--lemmas", dc_lemmas, "Lemma file (L lines)")->required();
  dc->add_option("--bilingual", dc_bilingual, "Bilingual file (B lines)")
      ->required();
  dc->add_option("--src", dc_src, "Source language code")->default_val("lvb");
  dc->add_option("--tgt", dc_tgt, "Target language code")->default_val("ita");
  dc->add_option("--out", dc_out, "Write the compiled dictionary here");
  dc->callback([&] {
    cmd_dict_compile(dc_paradigms, dc_lemmas, dc_bilingual, dc_src, dc_tgt,
                     dc_out);
  });

  auto* dcov = dict->add_subcommand("coverage",
                                    "Analyzable-token coverage of a corpus");
  std::string dcov_dict, dcov_input = "-";
  size_t dcov_top = 20;
  dcov->add_option("--dict", dcov_dict, "Compiled dictionary")->required();
  dcov->add_option("--input", dcov_input, "Corpus, one sentence per line")
      ->default_val("-");
  dcov->add_option("--top", dcov_top, "Unknown types to list")
      ->default_val(20);
  dcov->callback([&] { cmd_dict_coverage(dcov_dict, dcov_input, dcov_top); });

  // translate -------------------------------------------------------------
  auto* tr = app.add_subcommand("translate", "Shallow-transfer translation");
  std::string tr_direction, tr_dict, tr_rules, tr_input = "-", tr_output = "-";
  bool tr_trace = false;
  tr->add_option("--direction", tr_direction, "lvb-ita or ita-lvb")
      ->required()
      ->check(CLI::IsMember({"lvb-ita", "ita-lvb"}));
  tr->add_option("--dict", tr_dict, "Compiled dictionary")->required();
  tr->add_option("--rules", tr_rules, "Structural transfer rules");
  tr->add_option("--input", tr_input, "Input, one sentence per line")
      ->default_val("-");
  tr->add_option("--output", tr_output, "Output file")->default_val("-");
  tr->add_flag("--trace", tr_trace, "Per-unit pipeline trace on stderr");
  tr->callback([&] {
    cmd_translate(g, tr_direction, tr_dict, tr_rules, tr_input, tr_output,
                  tr_trace);
  });

  // segment ---------------------------------------------------------------
  auto* seg = app.add_subcommand("segment", "Split text into sentences");
  std::string seg_input = "-", seg_output = "-";
  seg->add_option("--input", seg_input, "Raw text")->default_val("-");
  seg->add_option("--output", seg_output, "One sentence per line")
      ->default_val("-");
  seg->callback([&] { cmd_segment(seg_input, seg_output); });

  // normalize -------------------------------------------------------------
  auto* norm = app.add_subcommand(
      "normalize", "Respell and filter a corpus against a dictionary");
  std::string norm_dict, norm_rules, norm_input = "-", norm_output = "-",
              norm_report;
  norm->add_option("--dict", norm_dict, "Compiled dictionary")->required();
  norm->add_option("--rules", norm_rules, "Respelling rules");
  norm->add_option("--input", norm_input, "Corpus, one sentence per line")
      ->default_val("-");
  norm->add_option("--output", norm_output, "Kept sentences")->default_val("-");
  norm->add_option("--report", norm_report, "Write the filter report here");
  norm->callback([&] {
    cmd_normalize(norm_dict, norm_rules, norm_input, norm_output, norm_report);
  });

  // classify --------------------------------------------------------------
  auto* cls = app.add_subcommand("classify", "Variant identification");
  cls->require_subcommand(1);

  auto* ct = cls->add_subcommand("train", "Train a variant classifier");
  std::string ct_input, ct_out;
  ClassifierParams ct_params;
  ct->add_option("--input", ct_input, "Labeled TSV: label<TAB>sentence")
      ->required();
  ct->add_option("--out", ct_out, "Model file to write")->required();
  ct->add_option("--ngram", ct_params.ngram, "Character n-gram order")
      ->default_val(3);
  ct->add_option("--top-k", ct_params.top_k, "Vocabulary size")
      ->default_val(2500);
  ct->add_option("--rounds", ct_params.rounds, "Boosting rounds")
      ->default_val(200);
  ct->add_option("--depth", ct_params.max_depth, "Tree depth")->default_val(4);
  ct->add_option("--learning-rate", ct_params.learning_rate, "Shrinkage")
      ->default_val(0.1);
  ct->add_option("--min-leaf", ct_params.min_leaf, "Minimum samples per leaf")
      ->default_val(5);
  ct->add_option("--l2", ct_params.lambda, "L2 regularization")
      ->default_val(1.0);
  ct->add_option("--split", ct_params.split, "Training fraction")
      ->default_val(0.75);
  ct->callback([&] { cmd_classify_train(g, ct_input, ct_out, ct_params); });

  auto* cp = cls->add_subcommand("predict", "Label sentences");
  std::string cp_model, cp_input = "-", cp_output = "-";
  bool cp_scores = false;
  cp->add_option("--model", cp_model, "Trained model")->required();
  cp->add_option("--input", cp_input, "Sentences, one per line")
      ->default_val("-");
  cp->add_option("--output", cp_output, "Label per line")->default_val("-");
  cp->add_flag("--scores", cp_scores, "Append per-label scores");
  cp->callback(
      [&] { cmd_classify_predict(g, cp_model, cp_input, cp_output, cp_scores); });

  auto* cpart = cls->add_subcommand("partition",
                                    "Route sentences into per-label files");
  std::string cpart_model, cpart_input = "-", cpart_outdir, cpart_counts;
  cpart->add_option("--model", cpart_model, "Trained model")->required();
  cpart->add_option("--input", cpart_input, "Sentences, one per line")
      ->default_val("-");
  cpart->add_option("--outdir", cpart_outdir, "Directory for <label>.txt files")
      ->required();
  cpart->add_option("--counts", cpart_counts, "Write the count table here");
  cpart->callback([&] {
    cmd_classify_partition(cpart_model, cpart_input, cpart_outdir, cpart_counts);
  });

  // bt ---------------------------------------------------------------------
  auto* bt = app.add_subcommand("bt", "Batch translation with provenance");
  bt->require_subcommand(1);

  auto* btr = bt->add_subcommand("run", "Translate a monolingual file");
  std::string btr_backend, btr_mono, btr_direction, btr_out = "-";
  std::string btr_checkpoint, btr_quarantine;
  bool btr_forward = false, btr_no_probe = false;
  BtOptions btr_opts;
  btr->add_option("--backend", btr_backend, "Backend id (config or 'identity')")
      ->required();
  btr->add_option("--mono", btr_mono, "Monolingual input, one sentence per line")
      ->required();
  btr->add_option("--direction", btr_direction,
                  "Direction the backend translates")
      ->required()
      ->check(CLI::IsMember({"lvb-ita", "ita-lvb"}));
  btr->add_flag("--forward", btr_forward,
                "Emit forward-translation records instead of back-translation");
  btr->add_option("--out", btr_out, "Records TSV")->default_val("-");
  btr->add_option("--batch-size", btr_opts.batch_size, "Sentences per batch")
      ->default_val(16);
  btr->add_option("--retries", btr_opts.retries, "Attempts per batch")
      ->default_val(3);
  btr->add_option("--backoff-ms", btr_opts.backoff_ms,
                  "Base retry backoff, doubled per attempt")
      ->default_val(100);
  btr->add_flag("--no-probe", btr_no_probe, "Skip the single-sentence probe");
  btr->add_option("--checkpoint", btr_checkpoint, "Resumable progress file");
  btr->add_option("--quarantine", btr_quarantine,
                  "Append failed batches here");
  btr->callback([&] {
    BtFlagSet given;
    given.batch_size = btr->count("--batch-size") > 0;
    given.retries = btr->count("--retries") > 0;
    given.backoff_ms = btr->count("--backoff-ms") > 0;
    cmd_bt_run(g, btr_backend, btr_mono, btr_direction, btr_forward, btr_out,
               btr_opts, given, btr_no_probe, btr_checkpoint, btr_quarantine);
  });

  // prompt ------------------------------------------------------------------
  auto* prompt = app.add_subcommand("prompt", "Few-shot translation protocol");
  prompt->require_subcommand(1);

  auto* pb = prompt->add_subcommand("build", "Build a batched prompt");
  std::string pb_corpus, pb_targets, pb_output = "-";
  size_t pb_exemplars = 8;
  pb->add_option("--corpus", pb_corpus, "Authentic parallel TSV for exemplars")
      ->required();
  pb->add_option("--targets", pb_targets, "Sentences to translate")->required();
  pb->add_option("--exemplars", pb_exemplars, "Exemplar pairs")
      ->default_val(8);
  pb->add_option("--output", pb_output, "Prompt text")->default_val("-");
  pb->callback(
      [&] { cmd_prompt_build(g, pb_corpus, pb_targets, pb_exemplars, pb_output); });

  auto* pp = prompt->add_subcommand("parse", "Validate a model response");
  std::string pp_targets, pp_response, pp_output = "-";
  pp->add_option("--targets", pp_targets, "Sentences the prompt asked for")
      ->required();
  pp->add_option("--response", pp_response, "Response text ('-' for stdin)")
      ->required();
  pp->add_option("--output", pp_output, "Accepted pairs TSV")->default_val("-");
  pp->callback([&] { cmd_prompt_parse(pp_targets, pp_response, pp_output); });

  // recipe ------------------------------------------------------------------
  auto* recipe = app.add_subcommand("recipe", "Training-data composition");
  recipe->require_subcommand(1);

  auto* ra = recipe->add_subcommand("assemble",
                                    "Run a recipe from the config file");
  std::string ra_name, ra_records, ra_manifest;
  ra->add_option("--name", ra_name, "Recipe name")->required();
  ra->add_option("--records", ra_records, "Write assembled records TSV here");
  ra->add_option("--manifest", ra_manifest,
                 "Write the audit manifest here (default: stdout)");
  ra->callback([&] { cmd_recipe_assemble(g, ra_name, ra_records, ra_manifest); });

  auto* rm = recipe->add_subcommand(
      "manifest", "Emit the tagged bidirectional training file");
  std::string rm_records, rm_output = "-";
  rm->add_option("--records", rm_records, "Assembled records TSV")->required();
  rm->add_option("--output", rm_output, "Tagged training lines")
      ->default_val("-");
  rm->callback([&] { cmd_recipe_manifest(rm_records, rm_output); });

  // eval --------------------------------------------------------------------
  auto* eval = app.add_subcommand("eval", "Scoring");
  eval->require_subcommand(1);

  auto* eb = eval->add_subcommand("bleu", "Corpus BLEU");
  std::string eb_hyp, eb_ref, eb_report, eb_json;
  bool eb_pretok = false;
  int eb_smooth = 0;
  eb->add_option("--hyp", eb_hyp, "Hypotheses, one per line")->required();
  eb->add_option("--ref", eb_ref, "References, one per line")->required();
  eb->add_flag("--pretokenized", eb_pretok, "Split on whitespace only");
  eb->add_option("--smooth-k", eb_smooth, "Add-k smoothing for n>1")
      ->default_val(0);
  eb->add_option("--report", eb_report, "Write the report here");
  eb->add_option("--json-report", eb_json,
                 "Write a JSON report with per-sentence details");
  eb->callback(
      [&] {
        cmd_eval_corpus(false, eb_hyp, eb_ref, eb_pretok, eb_smooth, eb_report,
                        eb_json);
      });

  auto* ec = eval->add_subcommand("chrf", "Corpus chrF++");
  std::string ec_hyp, ec_ref, ec_report, ec_json;
  bool ec_pretok = false;
  ec->add_option("--hyp", ec_hyp, "Hypotheses, one per line")->required();
  ec->add_option("--ref", ec_ref, "References, one per line")->required();
  ec->add_flag("--pretokenized", ec_pretok, "Split on whitespace only");
  ec->add_option("--report", ec_report, "Write the report here");
  ec->add_option("--json-report", ec_json,
                 "Write a JSON report with per-sentence details");
  ec->callback([&] {
    cmd_eval_corpus(true, ec_hyp, ec_ref, ec_pretok, 0, ec_report, ec_json);
  });

  auto* er = eval->add_subcommand("rtt", "Round-trip translation report");
  std::string er_forward, er_backward, er_input = "-", er_pivot = "lvb-ita";
  std::string er_outputs;
  size_t er_sample = 0, er_worst = 5, er_batch = 16;
  er->add_option("--forward", er_forward, "Backend id for the pivot direction")
      ->required();
  er->add_option("--backward", er_backward, "Backend id for the way back")
      ->required();
  er->add_option("--input", er_input, "Sentences, one per line")
      ->default_val("-");
  er->add_option("--pivot", er_pivot, "Pivot direction")
      ->default_val("lvb-ita")
      ->check(CLI::IsMember({"lvb-ita", "ita-lvb"}));
  er->add_option("--sample", er_sample, "Seeded sample size (0 = all)")
      ->default_val(0);
  er->add_option("--worst", er_worst, "Worst offenders to list")
      ->default_val(5);
  er->add_option("--batch-size", er_batch, "Sentences per backend call")
      ->default_val(16);
  er->add_option("--outputs", er_outputs, "Write round-trip outputs here");
  er->callback([&] {
    cmd_eval_rtt(g, er_forward, er_backward, er_input, er_pivot, er_sample,
                 er_worst, er_batch, er_outputs);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
