#ifndef NOMARG_IDENTIFY_H_
#define NOMARG_IDENTIFY_H_

#include <string>
#include <vector>

#include "nomarg/lexicon.h"
#include "nomarg/treebank.h"

namespace nomarg {

// A deverbal noun occurring in a sentence. The sentence must outlive it.
struct NounInstance {
  const Sentence* sentence = nullptr;
  int noun = 0;
  std::string verb;
};

// A direct child of the noun that may be one of its arguments. The argument
// is represented by its head word; [span_begin, span_end] is the projection
// of the head's subtree.
struct Candidate {
  int head = 0;
  std::string relation;
  int span_begin = 0;
  int span_end = 0;

  bool operator==(const Candidate&) const = default;
};

struct IdentifyConfig {
  bool include_amod = true;
  // "nmod:*" also admits a bare "nmod" arc, which can then only be labeled
  // nsubj or dobj.
  std::vector<std::string> relation_set = {"nmod:poss", "compound", "amod", "nmod:*"};

  // Throws Error when relation_set is empty.
  void validate() const;
};

// One instance per NOUN token whose lemma (lowercased) is a lexicon noun.
std::vector<NounInstance> find_noun_instances(const Sentence& sentence, const Lexicon& lexicon);

// Children of the noun whose relation is in the configured set, in token
// order. Coordinated arguments contribute only their first conjunct.
std::vector<Candidate> identify_candidates(const NounInstance& instance,
                                           const IdentifyConfig& config = {});

}  // namespace nomarg

#endif  // NOMARG_IDENTIFY_H_
