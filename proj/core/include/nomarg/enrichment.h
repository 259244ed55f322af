#ifndef NOMARG_ENRICHMENT_H_
#define NOMARG_ENRICHMENT_H_

#include <compare>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nomarg {

// A (verbal relation, argument head) pair attached to a deverbal noun.
struct LabeledPair {
  std::string label;  // nsubj, dobj or nmod:X
  int head = 0;

  auto operator<=>(const LabeledPair&) const = default;
};

// Output for one deverbal-noun instance. Pairs are kept sorted by head.
// Invariant: no label and no head appears twice.
struct Enrichment {
  std::string sent_id;
  int noun = 0;
  std::string verb;
  std::vector<LabeledPair> pairs;

  bool operator==(const Enrichment&) const = default;
};

// True when no label and no head is repeated.
bool satisfies_uniqueness(std::span<const LabeledPair> pairs);

// Per-candidate scoring detail carried in the JSONL `scores` object.
struct CandidateScore {
  int head = 0;
  std::optional<std::string> label;  // nullopt = not an argument
  double score = 0.0;
};

// One JSONL row: {"sent_id","noun","verb","pairs":[{"label","head"}],"scores":{...}}.
// Reading also accepts gold rows whose pairs live under "gold".
std::string enrichment_to_jsonl(const Enrichment& e, std::span<const CandidateScore> scores = {});
Enrichment enrichment_from_json(std::string_view line, std::size_t line_number = 0);

void write_enrichments(std::ostream& out, std::span<const Enrichment> enrichments);
std::vector<Enrichment> read_enrichments(std::istream& in);
std::vector<Enrichment> read_enrichments_file(const std::string& path);

}  // namespace nomarg

#endif  // NOMARG_ENRICHMENT_H_
