#ifndef NOMARG_LEXICON_H_
#define NOMARG_LEXICON_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nomarg/enrichment.h"
#include "nomarg/treebank.h"

namespace nomarg {

enum class Role { kSubject, kObject, kPp, kUnknown };

std::string_view role_name(Role role);
std::optional<Role> parse_role(std::string_view name);

struct Constraint {
  std::string relation;  // nmod:poss, compound, amod, nmod:X or nmod:*
  Role role = Role::kUnknown;
  bool required = true;

  bool operator==(const Constraint&) const = default;
};

// One realization of a noun's arguments in a dependency tree.
struct DepPattern {
  std::vector<Constraint> constraints;

  bool operator==(const DepPattern&) const = default;
};

struct LexiconEntry {
  std::string noun;
  std::string verb;
  std::vector<DepPattern> patterns;

  bool operator==(const LexiconEntry&) const = default;
};

// Verbal label for a role bound through `matched_relation`:
// SUBJECT->nsubj, OBJECT->dobj, PP->nmod:X with X taken from the arc.
// UNKNOWN, and PP on an arc without a preposition subtype, have no label.
std::optional<std::string> verbal_label(Role role, std::string_view matched_relation);

class Lexicon {
 public:
  // Inserts or replaces. Returns false when an entry for the noun existed.
  bool add(LexiconEntry entry);

  const LexiconEntry* find(std::string_view noun_lemma) const;
  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::map<std::string, LexiconEntry, std::less<>>& entries() const { return entries_; }

  // Duplicate-noun notices collected while loading.
  const std::vector<std::string>& warnings() const { return warnings_; }
  void add_warning(std::string w) { warnings_.push_back(std::move(w)); }

 private:
  std::map<std::string, LexiconEntry, std::less<>> entries_;
  std::vector<std::string> warnings_;
};

// JSON schema:
// {"nouns":[{"noun":s,"verb":s,"patterns":[{"constraints":[{"rel":s,"role":s,"required":b}]}]}]}
Lexicon parse_lexicon(std::string_view json_text);
Lexicon load_lexicon(const std::string& path);
void write_lexicon(const Lexicon& lexicon, std::ostream& out);

struct Binding {
  Role role = Role::kUnknown;
  int head = 0;
  std::string relation;  // the matched arc, e.g. nmod:of

  bool operator==(const Binding&) const = default;
};

struct PatternMatch {
  std::size_t pattern_index = 0;
  std::vector<Binding> bindings;  // in constraint order, unmatched optionals omitted

  bool operator==(const PatternMatch&) const = default;
};

// One match per fulfilled pattern, in lexicon order. Each constraint binds a
// distinct child; among all valid assignments the lexicographically first
// (constraint order, then token order) is returned.
std::vector<PatternMatch> match_patterns(const LexiconEntry& entry, const Sentence& sentence,
                                         int noun);

// The lexicon-only labeler: union of bindings across fulfilled patterns,
// dropping heads that receive more than one role and labels claimed by more
// than one head.
Enrichment baseline_label(const LexiconEntry& entry, const Sentence& sentence, int noun);

}  // namespace nomarg

#endif  // NOMARG_LEXICON_H_
