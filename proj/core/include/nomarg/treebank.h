#ifndef NOMARG_TREEBANK_H_
#define NOMARG_TREEBANK_H_

#include <compare>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nomarg {

// One arc of the enhanced (DEPS) column. `empty_node` is the decimal part of
// an empty-node head such as `5.1`; it is 0 for ordinary heads.
struct EnhancedArc {
  int head = 0;
  int empty_node = 0;
  std::string relation;

  auto operator<=>(const EnhancedArc&) const = default;
};

struct MiscItem {
  std::string key;
  std::optional<std::string> value;  // nullopt for bare flags without '='

  bool operator==(const MiscItem&) const = default;
};

struct Token {
  int id = 0;
  std::string form;
  std::string lemma;
  std::string upos;
  std::string xpos = "_";
  std::string feats = "_";
  int head = 0;
  std::string deprel;
  std::vector<EnhancedArc> deps;  // kept sorted
  std::vector<MiscItem> misc;

  bool operator==(const Token&) const = default;
};

// A multiword-token range or empty-node line, carried verbatim. It is
// printed immediately before the regular token with id `before_token`
// (n + 1 means after the last token).
struct OpaqueLine {
  int before_token = 1;
  std::string text;

  bool operator==(const OpaqueLine&) const = default;
};

struct Sentence {
  std::string sent_id;
  std::vector<std::string> comments;  // verbatim, including the leading '#'
  std::vector<Token> tokens;
  std::vector<OpaqueLine> opaque;

  int size() const { return static_cast<int>(tokens.size()); }
  // 1-based access.
  const Token& token(int id) const { return tokens.at(static_cast<std::size_t>(id - 1)); }
  Token& token(int id) { return tokens.at(static_cast<std::size_t>(id - 1)); }

  bool operator==(const Sentence&) const = default;
};

// Rewrites relation names at parse time. Keys are exact relations ("obj") or
// prefix patterns ending in ":*" ("obl:*" -> "nmod:*" keeps the subtype).
class RelationRenames {
 public:
  RelationRenames() = default;
  explicit RelationRenames(std::map<std::string, std::string> rules);

  // obj->dobj, obl->nmod, obl:*->nmod:*, nsubj:pass->nsubjpass, ...
  static RelationRenames udv2_to_udv1();

  std::string apply(std::string_view relation) const;
  bool empty() const { return rules_.empty(); }

 private:
  std::map<std::string, std::string, std::less<>> rules_;
};

struct ParseOptions {
  RelationRenames renames;
};

// Parses a whole CoNLL-U stream. Sentences without a `# sent_id` comment get
// their 1-based position in the stream as id.
std::vector<Sentence> parse_conllu(std::istream& in, const ParseOptions& options = {});
std::vector<Sentence> parse_conllu(std::string_view text, const ParseOptions& options = {});
std::vector<Sentence> read_conllu_file(const std::string& path, const ParseOptions& options = {});

void serialize_conllu(std::span<const Sentence> sentences, std::ostream& out);
std::string serialize_conllu(std::span<const Sentence> sentences);

// Builds a sentence from tokens, adding the `# sent_id` comment, and
// validates it.
Sentence make_sentence(std::string sent_id, std::vector<Token> tokens);

// Throws StructureError unless ids are 1..n, heads are in range, and the
// primary arcs form a tree with a single root.
void validate_sentence(const Sentence& sentence);

// `pattern` is an exact relation ("compound") or "X:*", which matches X and
// every subtype X:Y.
bool relation_matches(std::string_view pattern, std::string_view relation);

// Subtype of a relation: "nmod:of" -> "of", "nmod" -> "".
std::string_view relation_subtype(std::string_view relation);
std::string_view relation_base(std::string_view relation);

struct Child {
  int index = 0;
  std::string relation;

  bool operator==(const Child&) const = default;
};

std::vector<Child> children_by_relation(const Sentence& sentence, int head,
                                        std::span<const std::string> patterns);
std::vector<int> children_of(const Sentence& sentence, int head);

// Smallest and largest token id in the subtree rooted at `head`.
std::pair<int, int> subtree_span(const Sentence& sentence, int head);

std::string to_lower_ascii(std::string_view s);

}  // namespace nomarg

#endif  // NOMARG_TREEBANK_H_
