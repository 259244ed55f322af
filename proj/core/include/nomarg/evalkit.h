#ifndef NOMARG_EVALKIT_H_
#define NOMARG_EVALKIT_H_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nomarg/enrichment.h"
#include "nomarg/identify.h"
#include "nomarg/lexicon.h"
#include "nomarg/refbank.h"
#include "nomarg/treebank.h"

namespace nomarg {

// ---------------------------------------------------------------------------
// Gold data

struct GoldInstance {
  std::string sent_id;
  std::vector<std::string> tokens;
  int noun = 0;
  std::string verb;
  std::vector<LabeledPair> gold;  // sorted by head

  bool operator==(const GoldInstance&) const = default;
};

// {"sent_id","noun","verb","tokens":[...],"gold":[{"label","head"}]} per line.
std::string gold_to_jsonl(const GoldInstance& g);
void write_gold(std::ostream& out, std::span<const GoldInstance> gold);
std::vector<GoldInstance> read_gold(std::istream& in);
std::vector<GoldInstance> read_gold_file(const std::string& path);

// Identified candidates of one noun instance, as produced by `identify`.
struct InstanceCandidates {
  std::string sent_id;
  int noun = 0;
  std::string verb;
  std::vector<Candidate> candidates;

  bool operator==(const InstanceCandidates&) const = default;
};

std::string candidates_to_jsonl(const InstanceCandidates& c);
std::vector<InstanceCandidates> read_candidates(std::istream& in);
std::vector<InstanceCandidates> read_candidates_file(const std::string& path);

// ---------------------------------------------------------------------------
// Metrics

inline constexpr std::string_view kEmptyLabelRow = "∅";

struct RelationRow {
  std::string relation;
  std::size_t support = 0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalReport {
  std::size_t instances = 0;
  std::size_t gold_pairs = 0;
  std::size_t predicted_pairs = 0;
  std::size_t correct_pairs = 0;
  std::size_t exact_instances = 0;
  double precision = 0.0;
  double recall = 0.0;
  double relation_f1 = 0.0;
  double exact_match = 0.0;
  // Labels in fixed label order, then the empty-label row when candidates
  // were supplied.
  std::vector<RelationRow> per_relation;
};

// Micro-pooled precision/recall over (label, head) pairs. A gold instance
// without a prediction counts as an empty prediction; a prediction without a
// gold instance throws AlignmentError. When both pools are empty every score
// is 1.
EvalReport score(std::span<const GoldInstance> gold, std::span<const Enrichment> pred);

// Per-label rows plus the empty-label row: gold-empty = identified candidates
// absent from gold, predicted-empty = identified candidates left unlabeled.
std::vector<RelationRow> per_relation_report(std::span<const GoldInstance> gold,
                                             std::span<const Enrichment> pred,
                                             std::span<const InstanceCandidates> identified);

std::string report_to_json(const EvalReport& report);
std::string report_to_table(const EvalReport& report);

// ---------------------------------------------------------------------------
// Baselines

// Every candidate gets `label`; only the first in token order keeps it.
std::vector<Enrichment> baseline_all(std::string_view label,
                                     std::span<const InstanceCandidates> instances);

// ---------------------------------------------------------------------------
// Dataset builders

inline constexpr std::size_t kEvalsetPerVerbCap = 25;

// Pattern-derived gold: instances whose fulfilled patterns agree and yield
// exactly two labeled arguments, at most `per_verb_cap` per verb.
std::vector<GoldInstance> build_nomlex_evalset(std::span<const Sentence> corpus,
                                               const Lexicon& lexicon,
                                               std::size_t per_verb_cap = kEvalsetPerVerbCap);

// One row of a nominal-to-verbal paraphrase annotation. The nominal phrase
// is "[adj_noun] noun [prep pobj]"; the verbal one "[arg0] verb [arg1] [pp]".
struct ParaphraseRow {
  std::string sent_id;
  std::optional<std::string> adj_noun;
  std::string noun;
  std::optional<std::string> prep;
  std::optional<std::string> pobj;
  std::optional<std::string> arg0;
  std::string verb;
  std::optional<std::string> arg1;
  std::optional<std::string> pp;
};

std::vector<ParaphraseRow> read_paraphrase_rows(std::istream& in);

struct ConversionResult {
  std::vector<GoldInstance> instances;
  std::vector<std::string> dropped;  // one reason per dropped row
  std::vector<std::string> notes;    // ambiguous head choices
};

// Normalized Levenshtein distance over lowercased strings, in [0, 1].
double normalized_edit_distance(std::string_view a, std::string_view b);

ConversionResult convert_paraphrase_dataset(std::span<const ParaphraseRow> rows,
                                            std::span<const Sentence> sentences);

// ---------------------------------------------------------------------------
// Tune/test split

inline constexpr double kTuneRatio = 0.2;

// Verbs listed here go entirely to one side; every other verb is shared and
// its instances are split by `ratio`.
struct VerbPartition {
  std::set<std::string> tune_only;
  std::set<std::string> test_only;
};

struct Split {
  std::vector<GoldInstance> tune;
  std::vector<GoldInstance> test;
};

// Seeded and reproducible; each side keeps the input order.
Split tune_test_split(std::span<const GoldInstance> instances, double ratio, std::uint64_t seed,
                      const VerbPartition* partition = nullptr);

// ---------------------------------------------------------------------------
// Argument-swap perturbation

struct TokenSpan {
  int begin = 0;
  int end = 0;

  bool operator==(const TokenSpan&) const = default;
};

// spans[i] is the token range that moves with gold[i].
struct PerturbedInstance {
  GoldInstance instance;
  std::vector<TokenSpan> spans;

  bool operator==(const PerturbedInstance&) const = default;
};

// Exchanges the positions of the two gold arguments. The moved range is the
// argument's subtree with leading/trailing case, det, punct, cc and mark
// children trimmed, so "Rome 's destruction of the city" becomes
// "city 's destruction of the Rome". Throws UnsupportedInstanceError unless
// there are exactly two gold arguments with disjoint ranges.
PerturbedInstance swap_arguments(const GoldInstance& instance, const Sentence& parse);
PerturbedInstance swap_arguments(const PerturbedInstance& instance);

// {"sent_id","tokens":[...]} request for re-embedding.
std::string encode_request_jsonl(const GoldInstance& instance);

// ---------------------------------------------------------------------------
// Vector export

struct NominalArgumentVector {
  std::string verb;
  std::string label;
  ArgumentSource source;
  std::vector<float> vector;
};

// JSONL rows {"verb","label","kind","source":{"sent_id","token"},"vector"}:
// first every reference argument of the bank, then the nominal arguments.
// Returns the number of rows written.
std::size_t export_argument_vectors(const RefBank& bank,
                                    std::span<const NominalArgumentVector> nominal,
                                    std::ostream& out);

}  // namespace nomarg

#endif  // NOMARG_EVALKIT_H_
