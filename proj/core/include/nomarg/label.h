#ifndef NOMARG_LABEL_H_
#define NOMARG_LABEL_H_

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nomarg/enrichment.h"
#include "nomarg/identify.h"
#include "nomarg/refbank.h"
#include "nomarg/treebank.h"

namespace nomarg {

enum class LabelMethod { kNearestAvg, kKNearest };

// Tuned empty-label thresholds.
inline constexpr double kParaphraseThreshold = 0.56;
inline constexpr double kNomlexThreshold = 0.48;

struct LabelerConfig {
  LabelMethod method = LabelMethod::kKNearest;
  std::size_t k = 5;
  double threshold = kNomlexThreshold;
  bool unique = true;

  void validate() const;
};

// `score` ranks labels (centroid cosine, or summed cosine over the k-set);
// `gate` is compared to the threshold (centroid cosine, or the best single
// member cosine of that label inside the k-set).
struct LabelScore {
  std::string label;
  double score = 0.0;
  double gate = 0.0;

  bool operator==(const LabelScore&) const = default;
};

// Fixed label order for ties: nsubj, dobj, then nmod:X lexicographically.
bool label_order_less(std::string_view a, std::string_view b);

// Whether an argument identified through `relation` may carry `label`.
// nmod:Y admits nsubj, dobj and nmod:Y; bare nmod admits nsubj and dobj;
// nmod:poss, compound and amod admit anything.
bool label_allowed(std::string_view relation, std::string_view label);

// Cosine to each centroid, descending. Zero-norm centroids are skipped.
std::vector<LabelScore> score_nearest_avg(std::span<const float> query,
                                          const std::map<std::string, std::vector<float>>& centroids);

// Per-label sum of cosines over the k nearest references, descending.
std::vector<LabelScore> score_knn(std::span<const float> query, const RefBank& bank,
                                  std::string_view verb, std::size_t k);

struct LabeledArgument {
  Candidate candidate;
  std::optional<std::string> label;  // nullopt = not an argument
  double score = 0.0;
  std::vector<LabelScore> alternatives;
};

// Scores each candidate independently, then (with config.unique) resolves
// label conflicts greedily: claims are granted in descending score order and
// a loser moves to its next unclaimed alternative. The threshold is applied
// to the label each candidate ends up with, so raising it can only turn
// labels into the empty label.
std::vector<LabeledArgument> label_instance(const NounInstance& instance,
                                            std::span<const Candidate> candidates,
                                            std::span<const std::span<const float>> vectors,
                                            const RefBank& bank, const LabelerConfig& config);

// Same resolution over precomputed alternatives; exposed for testing the
// conflict rule on fixed scores.
std::vector<LabeledArgument> resolve_labels(std::span<const Candidate> candidates,
                                            std::vector<std::vector<LabelScore>> alternatives,
                                            const LabelerConfig& config);

Enrichment to_enrichment(const NounInstance& instance, std::span<const LabeledArgument> labeled);
std::vector<CandidateScore> candidate_scores(std::span<const LabeledArgument> labeled);

// Adds `<noun>:<label>` to the DEPS column of each argument head. Existing
// identical arcs are left alone, so applying twice equals applying once.
Sentence enrich(const Sentence& sentence, std::span<const Enrichment> enrichments);

}  // namespace nomarg

#endif  // NOMARG_LABEL_H_
