#include "nomarg/label.h"

#include <algorithm>
#include <set>

#include "nomarg/error.h"

namespace nomarg {

namespace {

int label_rank(std::string_view label) {
  if (label == "nsubj") return 0;
  if (label == "dobj") return 1;
  return 2;
}

void sort_alternatives(std::vector<LabelScore>& alts) {
  std::sort(alts.begin(), alts.end(), [](const LabelScore& a, const LabelScore& b) {
    if (a.score != b.score) return a.score > b.score;
    return label_order_less(a.label, b.label);
  });
}

bool is_zero(std::span<const float> v) {
  return std::all_of(v.begin(), v.end(), [](float f) { return f == 0.0f; });
}

}  // namespace

void LabelerConfig::validate() const {
  if (k < 1) throw Error("k must be at least 1");
  if (!(threshold >= -1.0 && threshold <= 1.0)) throw Error("threshold must lie in [-1, 1]");
}

bool label_order_less(std::string_view a, std::string_view b) {
  int ra = label_rank(a), rb = label_rank(b);
  if (ra != rb) return ra < rb;
  return a < b;
}

bool label_allowed(std::string_view relation, std::string_view label) {
  if (label == "nsubj" || label == "dobj") return true;
  if (relation_base(relation) != "nmod" || relation == "nmod:poss") return true;
  return relation_subtype(relation).size() > 0 && label == relation;
}

std::vector<LabelScore> score_nearest_avg(std::span<const float> query,
                                          const std::map<std::string, std::vector<float>>& centroids) {
  std::vector<LabelScore> out;
  for (const auto& [label, centroid] : centroids) {
    if (is_zero(centroid)) continue;
    double s = cosine(query, centroid);
    out.push_back({label, s, s});
  }
  sort_alternatives(out);
  return out;
}

std::vector<LabelScore> score_knn(std::span<const float> query, const RefBank& bank,
                                  std::string_view verb, std::size_t k) {
  std::map<std::string, LabelScore> by_label;
  for (const auto& n : query_knn(bank, verb, query, k)) {
    auto [it, inserted] = by_label.try_emplace(n.argument->label,
                                               LabelScore{n.argument->label, 0.0, n.score});
    it->second.score += n.score;
    it->second.gate = std::max(it->second.gate, n.score);
  }
  std::vector<LabelScore> out;
  for (auto& [_, s] : by_label) out.push_back(std::move(s));
  sort_alternatives(out);
  return out;
}

std::vector<LabeledArgument> resolve_labels(std::span<const Candidate> candidates,
                                            std::vector<std::vector<LabelScore>> alternatives,
                                            const LabelerConfig& config) {
  const std::size_t n = candidates.size();
  if (alternatives.size() != n) throw Error("alternatives are not aligned with candidates");

  std::vector<LabeledArgument> out(n);
  // Index into each candidate's alternatives of the label it holds, or -1.
  std::vector<long> assigned(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    out[i].candidate = candidates[i];
    out[i].alternatives = std::move(alternatives[i]);
  }

  if (!config.unique) {
    for (std::size_t i = 0; i < n; ++i)
      if (!out[i].alternatives.empty()) assigned[i] = 0;
  } else {
    std::vector<std::size_t> cursor(n, 0);
    std::vector<bool> done(n, false);
    std::set<std::string, std::less<>> claimed;
    for (;;) {
      // The highest-scoring pending claim; ties go to the earlier token.
      long best = -1;
      for (std::size_t i = 0; i < n; ++i) {
        if (done[i]) continue;
        if (cursor[i] >= out[i].alternatives.size()) {
          done[i] = true;
          continue;
        }
        if (best < 0) {
          best = static_cast<long>(i);
          continue;
        }
        const auto& a = out[i].alternatives[cursor[i]];
        const auto& b = out[static_cast<std::size_t>(best)].alternatives[cursor[static_cast<std::size_t>(best)]];
        if (a.score > b.score ||
            (a.score == b.score && out[i].candidate.head < out[static_cast<std::size_t>(best)].candidate.head))
          best = static_cast<long>(i);
      }
      if (best < 0) break;
      const auto b = static_cast<std::size_t>(best);
      const std::string& label = out[b].alternatives[cursor[b]].label;
      if (claimed.count(label)) {
        ++cursor[b];
        continue;
      }
      claimed.insert(label);
      assigned[b] = static_cast<long>(cursor[b]);
      done[b] = true;
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    auto& arg = out[i];
    if (arg.alternatives.empty()) continue;
    arg.score = arg.alternatives.front().score;
    if (assigned[i] < 0) continue;
    const auto& alt = arg.alternatives[static_cast<std::size_t>(assigned[i])];
    // The first choice is gated by the best gate overall; a fallback by its own.
    double gate = alt.gate;
    if (assigned[i] == 0)
      for (const auto& a : arg.alternatives) gate = std::max(gate, a.gate);
    arg.score = alt.score;
    if (gate >= config.threshold) arg.label = alt.label;
  }
  return out;
}

std::vector<LabeledArgument> label_instance(const NounInstance& instance,
                                            std::span<const Candidate> candidates,
                                            std::span<const std::span<const float>> vectors,
                                            const RefBank& bank, const LabelerConfig& config) {
  config.validate();
  if (vectors.size() != candidates.size())
    throw Error("candidate vectors are not aligned with candidates");

  std::map<std::string, std::vector<float>> centroids;
  if (config.method == LabelMethod::kNearestAvg) centroids = label_centroids(bank, instance.verb);

  std::vector<std::vector<LabelScore>> alternatives;
  alternatives.reserve(candidates.size());
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    auto scores = config.method == LabelMethod::kNearestAvg
                      ? score_nearest_avg(vectors[i], centroids)
                      : score_knn(vectors[i], bank, instance.verb, config.k);
    std::erase_if(scores, [&](const LabelScore& s) {
      return !label_allowed(candidates[i].relation, s.label);
    });
    alternatives.push_back(std::move(scores));
  }
  return resolve_labels(candidates, std::move(alternatives), config);
}

Enrichment to_enrichment(const NounInstance& instance, std::span<const LabeledArgument> labeled) {
  Enrichment e;
  e.sent_id = instance.sentence ? instance.sentence->sent_id : std::string();
  e.noun = instance.noun;
  e.verb = instance.verb;
  for (const auto& arg : labeled)
    if (arg.label) e.pairs.push_back({*arg.label, arg.candidate.head});
  std::sort(e.pairs.begin(), e.pairs.end(),
            [](const LabeledPair& a, const LabeledPair& b) { return a.head < b.head; });
  return e;
}

std::vector<CandidateScore> candidate_scores(std::span<const LabeledArgument> labeled) {
  std::vector<CandidateScore> out;
  for (const auto& arg : labeled) out.push_back({arg.candidate.head, arg.label, arg.score});
  return out;
}

Sentence enrich(const Sentence& sentence, std::span<const Enrichment> enrichments) {
  Sentence out = sentence;
  for (const auto& e : enrichments) {
    if (e.noun < 1 || e.noun > out.size())
      throw RangeError("enrichment noun " + std::to_string(e.noun) + " out of range in '" +
                       sentence.sent_id + "'");
    for (const auto& p : e.pairs) {
      if (p.head < 1 || p.head > out.size())
        throw RangeError("enrichment head " + std::to_string(p.head) + " out of range in '" +
                         sentence.sent_id + "'");
      auto& deps = out.token(p.head).deps;
      EnhancedArc arc{e.noun, 0, p.label};
      if (std::find(deps.begin(), deps.end(), arc) != deps.end()) continue;
      deps.insert(std::upper_bound(deps.begin(), deps.end(), arc), std::move(arc));
    }
  }
  return out;
}

}  // namespace nomarg
