#ifndef NOMARG_REFBANK_H_
#define NOMARG_REFBANK_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nomarg/embedstore.h"
#include "nomarg/treebank.h"

namespace nomarg {

struct ArgumentSource {
  std::string sent_id;
  int token = 0;

  auto operator<=>(const ArgumentSource&) const = default;
};

// A labeled verbal argument from a reference sentence.
struct RefArgument {
  std::string verb;
  std::string label;  // nsubj, dobj or nmod:X
  std::vector<float> vector;
  ArgumentSource source;
  std::uint32_t ordinal = 0;  // dense per verb, in insertion order

  bool operator==(const RefArgument&) const = default;
};

inline constexpr std::uint32_t kDefaultSentenceCap = 1500;

class RefBank {
 public:
  explicit RefBank(std::uint32_t dim = 0, std::uint32_t cap = kDefaultSentenceCap)
      : dim_(dim), cap_(cap) {}

  // Appends with the next ordinal for the verb. Throws DomainError on a dim
  // mismatch or a zero-norm vector.
  const RefArgument& add(std::string verb, std::string label, std::vector<float> vector,
                         ArgumentSource source);

  std::uint32_t dim() const { return dim_; }
  std::uint32_t cap() const { return cap_; }
  std::size_t size() const;
  bool has_verb(std::string_view verb) const { return by_verb_.find(verb) != by_verb_.end(); }
  std::span<const RefArgument> arguments(std::string_view verb) const;
  std::vector<std::string> verbs() const;

  // Number of reference sentences that contributed to each verb.
  std::uint32_t sentence_count(std::string_view verb) const;
  void set_sentence_count(const std::string& verb, std::uint32_t count);

  // Adds every verb of `other`; throws Error if a verb is present in both.
  void merge(const RefBank& other);

  bool operator==(const RefBank&) const = default;

 private:
  std::uint32_t dim_;
  std::uint32_t cap_;
  std::map<std::string, std::vector<RefArgument>, std::less<>> by_verb_;
  std::map<std::string, std::uint32_t, std::less<>> sentences_;
};

struct VerbalArgument {
  std::string label;
  int head = 0;

  bool operator==(const VerbalArgument&) const = default;
};

// Active: nsubj/dobj/nmod:X keep their names. Passive (an nsubjpass or
// auxpass child): nsubjpass->dobj, nmod:by->nsubj, nmod:X->nmod:X. At most
// one argument per label, first in token order; results in token order.
std::vector<VerbalArgument> extract_verbal_arguments(const Sentence& sentence, int verb);

// Scans the corpus in order for VERB tokens whose lemma is in `verbs` and
// stores each extracted argument's head-word vector. A verb stops
// collecting after `cap` contributing sentences. Zero-norm head vectors
// (out-of-vocabulary rows of a static table) are skipped.
RefBank build_refbank(std::span<const Sentence> corpus, const std::set<std::string>& verbs,
                      const EmbeddingStore& store, std::uint32_t cap = kDefaultSentenceCap);

// Bank file: "NARB", u32 version, u32 dim, u32 cap, string table, then per
// verb the sentence count and (label, sent_id, token, ordinal, vector) rows.
void write_refbank(const RefBank& bank, std::ostream& out);
RefBank read_refbank(std::istream& in);
void save_refbank(const RefBank& bank, const std::string& path);
RefBank load_refbank(const std::string& path);

struct Neighbor {
  const RefArgument* argument = nullptr;
  double score = 0.0;
};

// The k highest-cosine arguments of `verb`, descending, ties by ascending
// ordinal. An unknown verb yields an empty list.
std::vector<Neighbor> query_knn(const RefBank& bank, std::string_view verb,
                                std::span<const float> query, std::size_t k);

// Mean vector per label over the verb's arguments.
std::map<std::string, std::vector<float>> label_centroids(const RefBank& bank,
                                                          std::string_view verb);

}  // namespace nomarg

#endif  // NOMARG_REFBANK_H_
