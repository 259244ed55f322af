#include "cli.h"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nomarg/embedstore.h"
#include "nomarg/enrichment.h"
#include "nomarg/error.h"
#include "nomarg/evalkit.h"
#include "nomarg/identify.h"
#include "nomarg/label.h"
#include "nomarg/lexicon.h"
#include "nomarg/refbank.h"
#include "nomarg/treebank.h"

namespace nomarg::cli {

namespace {

class Logger {
 public:
  Logger(std::ostream& err, const bool& json) : err_(err), json_(json) {}

  void log(std::string_view level, std::string_view msg, nlohmann::ordered_json fields = {}) {
    std::lock_guard lock(mu_);
    if (json_) {
      nlohmann::ordered_json row;
      row["level"] = level;
      row["msg"] = msg;
      if (fields.is_object())
        for (auto& [k, v] : fields.items()) row[k] = v;
      err_ << row.dump() << '\n';
      return;
    }
    err_ << "nomarg: " << level << ": " << msg;
    if (fields.is_object())
      for (auto& [k, v] : fields.items()) err_ << ' ' << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump());
    err_ << '\n';
  }
  void info(std::string_view msg, nlohmann::ordered_json fields = {}) { log("info", msg, std::move(fields)); }
  void warn(std::string_view msg, nlohmann::ordered_json fields = {}) { log("warning", msg, std::move(fields)); }

 private:
  std::ostream& err_;
  const bool& json_;
  std::mutex mu_;
};

// Output file, or the caller's stream for "" and "-".
class Output {
 public:
  Output(const std::string& path, std::ostream& fallback) {
    if (path.empty() || path == "-") {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
    if (!*file_) throw Error("cannot write '" + path + "'");
    stream_ = file_.get();
  }
  ~Output() {
    if (stream_) stream_->flush();
  }
  std::ostream& operator*() { return *stream_; }
  void close() {
    stream_->flush();
    if (file_) {
      file_->close();
      if (file_->fail()) throw Error("write failed");
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

// Runs f(i) for i in [0, n) on `jobs` threads. The exception of the lowest
// failing index is rethrown, so failures do not depend on scheduling.
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& f) {
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        f(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (jobs == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned j = 0; j < jobs; ++j) pool.emplace_back(work);
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

unsigned default_jobs() { return std::max(1u, std::thread::hardware_concurrency()); }

std::string env_name(const std::string& flag) {
  std::string name = "NOMARG_";
  for (char c : flag) name += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return name;
}

// Every option can also be set through NOMARG_<FLAG>.
void bind_env(CLI::App* app) {
  for (CLI::Option* opt : app->get_options()) {
    const std::string& name = opt->get_single_name();
    if (name.empty() || name == "help") continue;
    opt->envname(env_name(name));
  }
}

ParseOptions parse_options(bool udv2) {
  ParseOptions opts;
  if (udv2) opts.renames = RelationRenames::udv2_to_udv1();
  return opts;
}

bool all_zero(std::span<const float> v) {
  return std::all_of(v.begin(), v.end(), [](float f) { return f == 0.0f; });
}

// Loads contextual vectors, or derives per-token rows from a static table.
EmbeddingStore load_vectors(const std::string& embeddings, const std::string& static_table,
                            std::span<const Sentence> sentences) {
  if (!embeddings.empty()) return load_embeddings(embeddings);
  return embed_with_static_table(load_static_table(static_table), sentences);
}

// ---------------------------------------------------------------------------
// enrich

struct EnrichArgs {
  std::string conllu, lexicon, embeddings, static_table, out, jsonl;
  std::vector<std::string> banks;
  std::string method = "knn";
  std::size_t k = 5;
  double threshold = kNomlexThreshold;
  bool no_amod = false, no_unique = false, udv2 = false;
  unsigned jobs = default_jobs();
};

struct EnrichContext {
  const Lexicon* lexicon = nullptr;
  const RefBank* bank = nullptr;
  const EmbeddingStore* store = nullptr;
  IdentifyConfig identify;
  LabelerConfig labeler;
  std::string method;
};

struct SentenceResult {
  Sentence enriched;
  std::string jsonl;
  std::set<std::string> unknown_verbs;
};

SentenceResult enrich_sentence(const Sentence& s, const EnrichContext& ctx) {
  SentenceResult r;
  std::vector<Enrichment> enrichments;
  const EmbeddingRecord* record = nullptr;
  for (const NounInstance& inst : find_noun_instances(s, *ctx.lexicon)) {
    std::vector<Candidate> candidates = identify_candidates(inst, ctx.identify);
    Enrichment e;
    std::vector<CandidateScore> scores;
    if (ctx.method == "nomlex") {
      e = baseline_label(*ctx.lexicon->find(to_lower_ascii(s.token(inst.noun).lemma)), s, inst.noun);
    } else if (ctx.method == "all-nsubj" || ctx.method == "all-dobj") {
      InstanceCandidates ic{s.sent_id, inst.noun, inst.verb, candidates};
      e = baseline_all(ctx.method == "all-nsubj" ? "nsubj" : "dobj", std::span(&ic, 1)).front();
    } else {
      if (!record) {
        record = &ctx.store->record(s.sent_id);
        if (record->n_tokens() != static_cast<std::size_t>(s.size()))
          throw Error("embeddings for '" + s.sent_id + "' have " + std::to_string(record->n_tokens()) +
                      " rows, sentence has " + std::to_string(s.size()) + " tokens");
      }
      if (!ctx.bank->has_verb(inst.verb)) r.unknown_verbs.insert(inst.verb);
      // Candidates without a vector (out-of-vocabulary) stay unlabeled.
      std::vector<Candidate> kept;
      std::vector<std::span<const float>> vectors;
      for (const Candidate& c : candidates) {
        auto v = record->row(c.head);
        if (all_zero(v)) {
          scores.push_back({c.head, std::nullopt, 0.0});
          continue;
        }
        kept.push_back(c);
        vectors.push_back(v);
      }
      auto labeled = label_instance(inst, kept, vectors, *ctx.bank, ctx.labeler);
      e = to_enrichment(inst, labeled);
      auto more = candidate_scores(labeled);
      scores.insert(scores.end(), more.begin(), more.end());
      std::sort(scores.begin(), scores.end(),
                [](const CandidateScore& a, const CandidateScore& b) { return a.head < b.head; });
    }
    e.sent_id = s.sent_id;
    e.noun = inst.noun;
    e.verb = inst.verb;
    r.jsonl += enrichment_to_jsonl(e, scores);
    r.jsonl += '\n';
    enrichments.push_back(std::move(e));
  }
  r.enriched = enrich(s, enrichments);
  return r;
}

int run_enrich(const EnrichArgs& a, std::ostream& out, Logger& log) {
  const bool vector_method = a.method == "knn" || a.method == "avg";
  if (vector_method && a.banks.empty()) throw Error("--method " + a.method + " needs --bank");
  if (vector_method && a.embeddings.empty() && a.static_table.empty())
    throw Error("--method " + a.method + " needs --embeddings or --static-table");

  EnrichContext ctx;
  ctx.method = a.method;
  ctx.identify.include_amod = !a.no_amod;
  ctx.identify.validate();
  ctx.labeler.method = a.method == "avg" ? LabelMethod::kNearestAvg : LabelMethod::kKNearest;
  ctx.labeler.k = a.k;
  ctx.labeler.threshold = a.threshold;
  ctx.labeler.unique = !a.no_unique;
  ctx.labeler.validate();

  const std::vector<Sentence> sentences = read_conllu_file(a.conllu, parse_options(a.udv2));
  const Lexicon lexicon = load_lexicon(a.lexicon);
  for (const auto& w : lexicon.warnings()) log.warn(w);
  ctx.lexicon = &lexicon;

  RefBank bank;
  EmbeddingStore store;
  if (vector_method) {
    for (const auto& path : a.banks) bank.merge(load_refbank(path));
    store = load_vectors(a.embeddings, a.static_table, sentences);
    if (store.dim() != bank.dim() && bank.size() > 0)
      throw Error("embedding dim " + std::to_string(store.dim()) + " does not match bank dim " +
                  std::to_string(bank.dim()));
    ctx.bank = &bank;
    ctx.store = &store;
  }

  std::vector<SentenceResult> results(sentences.size());
  parallel_for(sentences.size(), a.jobs,
               [&](std::size_t i) { results[i] = enrich_sentence(sentences[i], ctx); });

  std::set<std::string> unknown;
  Output conllu(a.out, out);
  std::unique_ptr<Output> jsonl;
  if (!a.jsonl.empty()) jsonl = std::make_unique<Output>(a.jsonl, out);
  std::size_t instances = 0;
  for (auto& r : results) {
    serialize_conllu(std::span(&r.enriched, 1), *conllu);
    if (jsonl) **jsonl << r.jsonl;
    instances += static_cast<std::size_t>(std::count(r.jsonl.begin(), r.jsonl.end(), '\n'));
    unknown.insert(r.unknown_verbs.begin(), r.unknown_verbs.end());
  }
  conllu.close();
  if (jsonl) jsonl->close();
  for (const auto& v : unknown) log.warn("verb has no reference arguments", {{"verb", v}});
  log.info("enriched", {{"sentences", sentences.size()}, {"instances", instances}});
  return 0;
}

// ---------------------------------------------------------------------------
// build-refbank

struct RefbankArgs {
  std::string conllu, embeddings, static_table, lexicon, out;
  std::vector<std::string> verbs;
  std::uint32_t cap = kDefaultSentenceCap;
  bool udv2 = false;
};

int run_build_refbank(const RefbankArgs& a, Logger& log) {
  if (a.embeddings.empty() && a.static_table.empty())
    throw Error("build-refbank needs --embeddings or --static-table");
  std::set<std::string> verbs;
  for (const auto& v : a.verbs) verbs.insert(to_lower_ascii(v));
  if (!a.lexicon.empty())
    for (const auto& [_, entry] : load_lexicon(a.lexicon).entries()) verbs.insert(entry.verb);
  if (verbs.empty()) throw Error("no verbs given (use --verbs or --lexicon)");
  if (a.cap == 0) throw Error("--cap must be positive");

  const auto sentences = read_conllu_file(a.conllu, parse_options(a.udv2));
  const EmbeddingStore store = load_vectors(a.embeddings, a.static_table, sentences);
  RefBank bank = build_refbank(sentences, verbs, store, a.cap);
  save_refbank(bank, a.out);
  for (const auto& v : bank.verbs()) {
    if (bank.arguments(v).empty()) log.warn("no reference arguments found", {{"verb", v}});
    else
      log.info("verb", {{"verb", v}, {"sentences", bank.sentence_count(v)},
                        {"arguments", bank.arguments(v).size()}});
  }
  log.info("wrote bank", {{"path", a.out}, {"verbs", bank.verbs().size()}, {"arguments", bank.size()}});
  return 0;
}

// ---------------------------------------------------------------------------
// evaluate

struct EvaluateArgs {
  std::string gold, pred, candidates, out;
  std::string format = "table";
};

int run_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const auto gold = read_gold_file(a.gold);
  const auto pred = read_enrichments_file(a.pred);
  EvalReport report = score(gold, pred);
  if (!a.candidates.empty()) {
    const auto identified = read_candidates_file(a.candidates);
    report.per_relation = per_relation_report(gold, pred, identified);
  }
  Output dest(a.out, out);
  *dest << (a.format == "json" ? report_to_json(report) + "\n" : report_to_table(report));
  dest.close();
  return 0;
}

// ---------------------------------------------------------------------------
// build-evalset nomlex / convert-evalset paraphrase

struct NomlexArgs {
  std::string conllu, lexicon, out;
  std::size_t cap = kEvalsetPerVerbCap;
  bool udv2 = false;
};

int run_build_nomlex(const NomlexArgs& a, std::ostream& out, Logger& log) {
  const auto sentences = read_conllu_file(a.conllu, parse_options(a.udv2));
  const Lexicon lexicon = load_lexicon(a.lexicon);
  for (const auto& w : lexicon.warnings()) log.warn(w);
  const auto gold = build_nomlex_evalset(sentences, lexicon, a.cap);
  Output dest(a.out, out);
  write_gold(*dest, gold);
  dest.close();
  log.info("built evaluation set", {{"instances", gold.size()}});
  return 0;
}

struct ParaphraseArgs {
  std::string rows, conllu, out;
  bool udv2 = false;
};

int run_convert_paraphrase(const ParaphraseArgs& a, std::ostream& out, Logger& log) {
  std::ifstream in(a.rows);
  if (!in) throw Error("cannot open '" + a.rows + "'");
  const auto rows = read_paraphrase_rows(in);
  const auto sentences = read_conllu_file(a.conllu, parse_options(a.udv2));
  const ConversionResult result = convert_paraphrase_dataset(rows, sentences);
  for (const auto& d : result.dropped) log.warn("dropped row", {{"reason", d}});
  for (const auto& n : result.notes) log.info("ambiguous head", {{"detail", n}});
  Output dest(a.out, out);
  write_gold(*dest, result.instances);
  dest.close();
  log.info("converted", {{"rows", rows.size()}, {"instances", result.instances.size()},
                         {"dropped", result.dropped.size()}});
  return 0;
}

// ---------------------------------------------------------------------------
// identify

struct IdentifyArgs {
  std::string conllu, lexicon, out;
  std::vector<std::string> relations;
  bool no_amod = false, udv2 = false;
};

int run_identify(const IdentifyArgs& a, std::ostream& out, Logger& log) {
  IdentifyConfig config;
  config.include_amod = !a.no_amod;
  if (!a.relations.empty()) config.relation_set = a.relations;
  config.validate();
  const auto sentences = read_conllu_file(a.conllu, parse_options(a.udv2));
  const Lexicon lexicon = load_lexicon(a.lexicon);
  for (const auto& w : lexicon.warnings()) log.warn(w);
  Output dest(a.out, out);
  std::size_t instances = 0;
  for (const auto& s : sentences) {
    for (const auto& inst : find_noun_instances(s, lexicon)) {
      InstanceCandidates ic{s.sent_id, inst.noun, inst.verb, identify_candidates(inst, config)};
      *dest << candidates_to_jsonl(ic) << '\n';
      ++instances;
    }
  }
  dest.close();
  log.info("identified", {{"instances", instances}});
  return 0;
}

// ---------------------------------------------------------------------------
// export-vectors

struct ExportArgs {
  std::string bank, gold, embeddings, out;
};

int run_export(const ExportArgs& a, std::ostream& out, Logger& log) {
  const RefBank bank = load_refbank(a.bank);
  std::vector<NominalArgumentVector> nominal;
  if (!a.gold.empty()) {
    if (a.embeddings.empty()) throw Error("--gold needs --embeddings");
    const EmbeddingStore store = load_embeddings(a.embeddings);
    for (const auto& g : read_gold_file(a.gold))
      for (const auto& p : g.gold) {
        auto v = store.vector_for(g.sent_id, p.head);
        nominal.push_back({g.verb, p.label, {g.sent_id, p.head}, {v.begin(), v.end()}});
      }
  }
  Output dest(a.out, out);
  std::size_t rows = export_argument_vectors(bank, nominal, *dest);
  dest.close();
  log.info("exported", {{"rows", rows}});
  return 0;
}

// ---------------------------------------------------------------------------
// split / swap

struct SplitArgs {
  std::string gold, tune_out, test_out;
  std::vector<std::string> tune_only, test_only;
  double ratio = kTuneRatio;
  std::uint64_t seed = 0;
};

int run_split(const SplitArgs& a, Logger& log) {
  if (!(a.ratio >= 0.0 && a.ratio <= 1.0)) throw Error("--ratio must be in [0, 1]");
  const auto gold = read_gold_file(a.gold);
  VerbPartition partition;
  for (const auto& v : a.tune_only) partition.tune_only.insert(to_lower_ascii(v));
  for (const auto& v : a.test_only) partition.test_only.insert(to_lower_ascii(v));
  for (const auto& v : partition.tune_only)
    if (partition.test_only.count(v)) throw Error("verb '" + v + "' is both tune-only and test-only");
  const Split split = tune_test_split(gold, a.ratio, a.seed, &partition);
  std::ostringstream sink;
  Output tune(a.tune_out, sink), test(a.test_out, sink);
  write_gold(*tune, split.tune);
  write_gold(*test, split.test);
  tune.close();
  test.close();
  log.info("split", {{"tune", split.tune.size()}, {"test", split.test.size()}, {"seed", a.seed}});
  return 0;
}

struct SwapArgs {
  std::string gold, conllu, out, requests;
  bool udv2 = false;
};

int run_swap(const SwapArgs& a, std::ostream& out, Logger& log) {
  const auto gold = read_gold_file(a.gold);
  const auto sentences = read_conllu_file(a.conllu, parse_options(a.udv2));
  std::map<std::string, const Sentence*> by_id;
  for (const auto& s : sentences) by_id[s.sent_id] = &s;
  Output dest(a.out, out);
  std::unique_ptr<Output> requests;
  if (!a.requests.empty()) requests = std::make_unique<Output>(a.requests, out);
  std::size_t swapped = 0, skipped = 0;
  for (const auto& g : gold) {
    auto it = by_id.find(g.sent_id);
    if (it == by_id.end()) throw LookupError("no parse for gold sentence '" + g.sent_id + "'");
    try {
      PerturbedInstance p = swap_arguments(g, *it->second);
      *dest << gold_to_jsonl(p.instance) << '\n';
      if (requests) **requests << encode_request_jsonl(p.instance) << '\n';
      ++swapped;
    } catch (const UnsupportedInstanceError& e) {
      log.warn("skipped", {{"sent_id", g.sent_id}, {"reason", e.what()}});
      ++skipped;
    }
  }
  dest.close();
  if (requests) requests->close();
  log.info("swapped", {{"instances", swapped}, {"skipped", skipped}});
  return 0;
}

CLI::App* deepest(CLI::App& app) {
  CLI::App* cur = &app;
  for (;;) {
    auto subs = cur->get_subcommands();
    if (subs.empty()) return cur;
    cur = subs.front();
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  bool log_json = false;
  Logger log(err, log_json);

  CLI::App app{"Labels the arguments of deverbal nouns with verbal relations.", "nomarg"};
  app.require_subcommand(1);
  app.add_flag("--log-json", log_json, "Write stderr logs as line-delimited JSON")->envname("NOMARG_LOG_JSON");
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  std::function<int()> action;
  const auto existing = CLI::ExistingFile;

  EnrichArgs ea;
  auto* enrich_cmd = app.add_subcommand("enrich", "Label deverbal-noun arguments and write enriched CoNLL-U");
  enrich_cmd->add_option("--conllu", ea.conllu, "Parsed input sentences")->required()->check(existing);
  enrich_cmd->add_option("--lexicon", ea.lexicon, "Noun-to-verb lexicon (JSON)")->required()->check(existing);
  enrich_cmd->add_option("--bank", ea.banks, "Reference bank; repeat to merge several")->check(existing);
  auto* e_emb = enrich_cmd->add_option("--embeddings", ea.embeddings, "Per-token vectors (NAVF or JSONL)")->check(existing);
  enrich_cmd->add_option("--static-table", ea.static_table, "Static word vectors (text)")->check(existing)->excludes(e_emb);
  enrich_cmd->add_option("--method", ea.method, "knn, avg, nomlex, all-nsubj or all-dobj")
      ->check(CLI::IsMember({"knn", "avg", "nomlex", "all-nsubj", "all-dobj"}))
      ->capture_default_str();
  enrich_cmd->add_option("--k", ea.k, "Neighbours for knn")->capture_default_str();
  enrich_cmd->add_option("--threshold", ea.threshold, "Empty-label threshold")->capture_default_str();
  enrich_cmd->add_flag("--no-amod", ea.no_amod, "Do not consider amod children");
  enrich_cmd->add_flag("--no-unique", ea.no_unique, "Allow a label on several candidates");
  enrich_cmd->add_flag("--udv2", ea.udv2, "Input uses UDv2 relation names");
  enrich_cmd->add_option("--out", ea.out, "Enriched CoNLL-U (default stdout)");
  enrich_cmd->add_option("--jsonl", ea.jsonl, "Enrichment JSONL output");
  enrich_cmd->add_option("--jobs", ea.jobs, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  enrich_cmd->callback([&] { action = [&] { return run_enrich(ea, out, log); }; });

  RefbankArgs ra;
  auto* bank_cmd = app.add_subcommand("build-refbank", "Collect labeled verbal arguments from parsed references");
  bank_cmd->add_option("--conllu", ra.conllu, "Parsed reference sentences")->required()->check(existing);
  auto* r_emb = bank_cmd->add_option("--embeddings", ra.embeddings, "Per-token vectors (NAVF or JSONL)")->check(existing);
  bank_cmd->add_option("--static-table", ra.static_table, "Static word vectors (text)")->check(existing)->excludes(r_emb);
  bank_cmd->add_option("--verbs", ra.verbs, "Verb lemmas")->delimiter(',');
  bank_cmd->add_option("--lexicon", ra.lexicon, "Take the verbs of every lexicon entry")->check(existing);
  bank_cmd->add_option("--cap", ra.cap, "Reference sentences per verb")->capture_default_str();
  bank_cmd->add_flag("--udv2", ra.udv2, "Input uses UDv2 relation names");
  bank_cmd->add_option("--out", ra.out, "Bank file")->required();
  bank_cmd->callback([&] { action = [&] { return run_build_refbank(ra, log); }; });

  EvaluateArgs va;
  auto* eval_cmd = app.add_subcommand("evaluate", "Score predictions against gold");
  eval_cmd->add_option("--gold", va.gold, "Gold JSONL")->required()->check(existing);
  eval_cmd->add_option("--pred", va.pred, "Enrichment JSONL")->required()->check(existing);
  eval_cmd->add_option("--candidates", va.candidates, "Candidates JSONL, adds the empty-label row")->check(existing);
  eval_cmd->add_option("--format", va.format, "table or json")->check(CLI::IsMember({"table", "json"}))->capture_default_str();
  eval_cmd->add_option("--out", va.out, "Report file (default stdout)");
  eval_cmd->callback([&] { action = [&] { return run_evaluate(va, out); }; });

  NomlexArgs na;
  auto* build_cmd = app.add_subcommand("build-evalset", "Derive an evaluation set");
  build_cmd->require_subcommand(1);
  auto* nomlex_cmd = build_cmd->add_subcommand("nomlex", "Gold from lexicon patterns");
  nomlex_cmd->add_option("--conllu", na.conllu, "Parsed sentences")->required()->check(existing);
  nomlex_cmd->add_option("--lexicon", na.lexicon, "Noun-to-verb lexicon (JSON)")->required()->check(existing);
  nomlex_cmd->add_option("--cap", na.cap, "Instances per verb")->capture_default_str();
  nomlex_cmd->add_flag("--udv2", na.udv2, "Input uses UDv2 relation names");
  nomlex_cmd->add_option("--out", na.out, "Gold JSONL (default stdout)");
  nomlex_cmd->callback([&] { action = [&] { return run_build_nomlex(na, out, log); }; });

  ParaphraseArgs pa;
  auto* convert_cmd = app.add_subcommand("convert-evalset", "Convert an annotated dataset to gold");
  convert_cmd->require_subcommand(1);
  auto* para_cmd = convert_cmd->add_subcommand("paraphrase", "Nominal-to-verbal paraphrase rows");
  para_cmd->add_option("--rows", pa.rows, "Paraphrase JSONL")->required()->check(existing);
  para_cmd->add_option("--conllu", pa.conllu, "Parses of the nominal sentences")->required()->check(existing);
  para_cmd->add_flag("--udv2", pa.udv2, "Input uses UDv2 relation names");
  para_cmd->add_option("--out", pa.out, "Gold JSONL (default stdout)");
  para_cmd->callback([&] { action = [&] { return run_convert_paraphrase(pa, out, log); }; });

  IdentifyArgs ia;
  auto* ident_cmd = app.add_subcommand("identify", "List argument candidates of deverbal nouns");
  ident_cmd->add_option("--conllu", ia.conllu, "Parsed sentences")->required()->check(existing);
  ident_cmd->add_option("--lexicon", ia.lexicon, "Noun-to-verb lexicon (JSON)")->required()->check(existing);
  ident_cmd->add_option("--relations", ia.relations, "Candidate relations")->delimiter(',');
  ident_cmd->add_flag("--no-amod", ia.no_amod, "Do not consider amod children");
  ident_cmd->add_flag("--udv2", ia.udv2, "Input uses UDv2 relation names");
  ident_cmd->add_option("--out", ia.out, "Candidates JSONL (default stdout)");
  ident_cmd->callback([&] { action = [&] { return run_identify(ia, out, log); }; });

  ExportArgs xa;
  auto* export_cmd = app.add_subcommand("export-vectors", "Dump reference and nominal argument vectors");
  export_cmd->add_option("--bank", xa.bank, "Reference bank")->required()->check(existing);
  export_cmd->add_option("--gold", xa.gold, "Gold JSONL whose arguments are exported as nominal rows")->check(existing);
  export_cmd->add_option("--embeddings", xa.embeddings, "Vectors for the gold sentences")->check(existing);
  export_cmd->add_option("--out", xa.out, "Vector JSONL (default stdout)");
  export_cmd->callback([&] { action = [&] { return run_export(xa, out, log); }; });

  SplitArgs sa;
  auto* split_cmd = app.add_subcommand("split", "Seeded tune/test split of a gold set");
  split_cmd->add_option("--gold", sa.gold, "Gold JSONL")->required()->check(existing);
  split_cmd->add_option("--ratio", sa.ratio, "Tune share of shared verbs")->capture_default_str();
  split_cmd->add_option("--seed", sa.seed, "Random seed")->capture_default_str();
  split_cmd->add_option("--tune-only", sa.tune_only, "Verbs kept for tuning")->delimiter(',');
  split_cmd->add_option("--test-only", sa.test_only, "Verbs kept for testing")->delimiter(',');
  split_cmd->add_option("--tune-out", sa.tune_out, "Tune JSONL")->required();
  split_cmd->add_option("--test-out", sa.test_out, "Test JSONL")->required();
  split_cmd->callback([&] { action = [&] { return run_split(sa, log); }; });

  SwapArgs wa;
  auto* swap_cmd = app.add_subcommand("swap", "Exchange the two arguments of each gold instance");
  swap_cmd->add_option("--gold", wa.gold, "Gold JSONL")->required()->check(existing);
  swap_cmd->add_option("--conllu", wa.conllu, "Parses of the gold sentences")->required()->check(existing);
  swap_cmd->add_flag("--udv2", wa.udv2, "Input uses UDv2 relation names");
  swap_cmd->add_option("--out", wa.out, "Swapped gold JSONL (default stdout)");
  swap_cmd->add_option("--requests", wa.requests, "Encode requests for the swapped sentences");
  swap_cmd->callback([&] { action = [&] { return run_swap(wa, out, log); }; });

  for (CLI::App* sub : {enrich_cmd, bank_cmd, eval_cmd, nomlex_cmd, para_cmd, ident_cmd, export_cmd,
                        split_cmd, swap_cmd})
    bind_env(sub);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << deepest(app)->help();
    return 1;
  }

  try {
    return action ? action() : 1;
  } catch (const Error& e) {
    log.log("error", e.what());
    return 1;
  } catch (const std::exception& e) {
    log.log("error", std::string("internal: ") + e.what());
    return 2;
  }
}

}  // namespace nomarg::cli
