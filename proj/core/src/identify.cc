#include "nomarg/identify.h"

#include <algorithm>

#include "nomarg/error.h"

namespace nomarg {

void IdentifyConfig::validate() const {
  if (relation_set.empty()) throw Error("identification relation set is empty");
}

std::vector<NounInstance> find_noun_instances(const Sentence& sentence, const Lexicon& lexicon) {
  std::vector<NounInstance> out;
  for (const Token& t : sentence.tokens) {
    if (t.upos != "NOUN") continue;
    if (const LexiconEntry* entry = lexicon.find(to_lower_ascii(t.lemma)))
      out.push_back({&sentence, t.id, entry->verb});
  }
  return out;
}

std::vector<Candidate> identify_candidates(const NounInstance& instance,
                                           const IdentifyConfig& config) {
  config.validate();
  std::vector<std::string> relations;
  for (const auto& r : config.relation_set)
    if (config.include_amod || r != "amod") relations.push_back(r);

  const Sentence& sentence = *instance.sentence;
  std::vector<Candidate> out;
  for (const Child& child : children_by_relation(sentence, instance.noun, relations)) {
    auto [lo, hi] = subtree_span(sentence, child.index);
    // A non-projective subtree can straddle the noun; keep the head's side.
    if (lo < instance.noun && instance.noun < hi) {
      if (child.index < instance.noun) hi = instance.noun - 1;
      else lo = instance.noun + 1;
    }
    out.push_back({child.index, child.relation, lo, hi});
  }
  return out;
}

}  // namespace nomarg
