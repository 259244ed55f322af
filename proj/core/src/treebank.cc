#include "nomarg/treebank.h"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "nomarg/error.h"

namespace nomarg {

namespace {

constexpr int kColumns = 10;

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (;;) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.push_back(s.substr(start));
      return parts;
    }
    parts.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

std::optional<int> parse_int(std::string_view s) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<EnhancedArc> parse_deps(std::string_view column, std::size_t line,
                                    const RelationRenames& renames) {
  std::vector<EnhancedArc> arcs;
  if (column == "_") return arcs;
  for (std::string_view item : split(column, '|')) {
    std::size_t colon = item.find(':');
    if (colon == std::string_view::npos || colon + 1 == item.size())
      throw FormatError(line, "bad DEPS item '" + std::string(item) + "'");
    std::string_view head_text = item.substr(0, colon);
    EnhancedArc arc;
    std::size_t dot = head_text.find('.');
    auto head = parse_int(head_text.substr(0, dot));
    std::optional<int> empty = 0;
    if (dot != std::string_view::npos) empty = parse_int(head_text.substr(dot + 1));
    if (!head || !empty || *head < 0 || *empty < 0)
      throw FormatError(line, "bad DEPS head '" + std::string(head_text) + "'");
    arc.head = *head;
    arc.empty_node = *empty;
    arc.relation = renames.apply(item.substr(colon + 1));
    arcs.push_back(std::move(arc));
  }
  std::stable_sort(arcs.begin(), arcs.end());
  return arcs;
}

std::vector<MiscItem> parse_misc(std::string_view column) {
  std::vector<MiscItem> items;
  if (column == "_") return items;
  for (std::string_view item : split(column, '|')) {
    std::size_t eq = item.find('=');
    if (eq == std::string_view::npos) {
      items.push_back({std::string(item), std::nullopt});
    } else {
      items.push_back({std::string(item.substr(0, eq)), std::string(item.substr(eq + 1))});
    }
  }
  return items;
}

std::string render_deps(const std::vector<EnhancedArc>& deps) {
  if (deps.empty()) return "_";
  std::vector<EnhancedArc> sorted = deps;
  std::stable_sort(sorted.begin(), sorted.end());
  std::string out;
  for (const auto& arc : sorted) {
    if (!out.empty()) out += '|';
    out += std::to_string(arc.head);
    if (arc.empty_node) out += "." + std::to_string(arc.empty_node);
    out += ':';
    out += arc.relation;
  }
  return out;
}

std::string render_misc(const std::vector<MiscItem>& misc) {
  if (misc.empty()) return "_";
  std::string out;
  for (const auto& item : misc) {
    if (!out.empty()) out += '|';
    out += item.key;
    if (item.value) out += "=" + *item.value;
  }
  return out;
}

std::optional<std::string> sent_id_from_comment(std::string_view line) {
  std::string_view rest = line.substr(1);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  constexpr std::string_view kKey = "sent_id";
  if (rest.substr(0, kKey.size()) != kKey) return std::nullopt;
  rest.remove_prefix(kKey.size());
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  if (rest.empty() || rest.front() != '=') return std::nullopt;
  rest.remove_prefix(1);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  while (!rest.empty() && (rest.back() == ' ' || rest.back() == '\r')) rest.remove_suffix(1);
  return std::string(rest);
}

bool has_sent_id_comment(const Sentence& s) {
  return std::any_of(s.comments.begin(), s.comments.end(),
                     [](const std::string& c) { return sent_id_from_comment(c).has_value(); });
}

class Parser {
 public:
  explicit Parser(const ParseOptions& options) : options_(options) {}

  void line(std::string_view text, std::size_t number) {
    if (!text.empty() && text.back() == '\r') text.remove_suffix(1);
    if (text.empty()) {
      finish();
      return;
    }
    if (!open_) {
      open_ = true;
      current_ = Sentence{};
      first_line_ = number;
    }
    if (text.front() == '#') {
      if (!current_.tokens.empty() || !current_.opaque.empty())
        throw FormatError(number, "comment after token lines");
      current_.comments.emplace_back(text);
      if (auto id = sent_id_from_comment(text)) current_.sent_id = *id;
      return;
    }
    token_line(text, number);
  }

  void finish() {
    if (!open_) return;
    open_ = false;
    ++ordinal_;
    if (current_.sent_id.empty()) current_.sent_id = std::to_string(ordinal_);
    if (current_.tokens.empty())
      throw FormatError(first_line_, "sentence '" + current_.sent_id + "' has no tokens");
    validate_sentence(current_);
    sentences_.push_back(std::move(current_));
  }

  std::vector<Sentence> take() { return std::move(sentences_); }

 private:
  void token_line(std::string_view text, std::size_t number) {
    auto columns = split(text, '\t');
    if (columns.size() != kColumns)
      throw FormatError(number, "expected 10 tab-separated columns, found " +
                                    std::to_string(columns.size()));
    std::string_view id_text = columns[0];
    if (id_text.find_first_of("-.") != std::string_view::npos) {
      current_.opaque.push_back({current_.size() + 1, std::string(text)});
      return;
    }
    auto id = parse_int(id_text);
    if (!id) throw FormatError(number, "bad token id '" + std::string(id_text) + "'");
    if (*id != current_.size() + 1)
      throw FormatError(number, "token id " + std::to_string(*id) + " out of sequence");
    auto head = parse_int(columns[6]);
    if (!head || *head < 0) throw FormatError(number, "bad head '" + std::string(columns[6]) + "'");

    Token token;
    token.id = *id;
    token.form = columns[1];
    token.lemma = columns[2];
    token.upos = columns[3];
    token.xpos = columns[4];
    token.feats = columns[5];
    token.head = *head;
    token.deprel = options_.renames.apply(columns[7]);
    token.deps = parse_deps(columns[8], number, options_.renames);
    token.misc = parse_misc(columns[9]);
    current_.tokens.push_back(std::move(token));
  }

  const ParseOptions& options_;
  std::vector<Sentence> sentences_;
  Sentence current_;
  bool open_ = false;
  std::size_t first_line_ = 0;
  int ordinal_ = 0;
};

}  // namespace

RelationRenames::RelationRenames(std::map<std::string, std::string> rules) {
  for (auto& [from, to] : rules) rules_.emplace(from, to);
}

RelationRenames RelationRenames::udv2_to_udv1() {
  return RelationRenames({
      {"obj", "dobj"},
      {"obl", "nmod"},
      {"obl:*", "nmod:*"},
      {"nsubj:pass", "nsubjpass"},
      {"csubj:pass", "csubjpass"},
      {"aux:pass", "auxpass"},
  });
}

std::string RelationRenames::apply(std::string_view relation) const {
  if (auto it = rules_.find(relation); it != rules_.end()) return it->second;
  std::size_t colon = relation.find(':');
  if (colon != std::string_view::npos) {
    std::string key = std::string(relation.substr(0, colon)) + ":*";
    if (auto it = rules_.find(key); it != rules_.end()) {
      const std::string& target = it->second;
      if (target.size() >= 2 && target.ends_with(":*"))
        return target.substr(0, target.size() - 1) + std::string(relation.substr(colon + 1));
      return target;
    }
  }
  return std::string(relation);
}

std::vector<Sentence> parse_conllu(std::istream& in, const ParseOptions& options) {
  Parser parser(options);
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) parser.line(line, ++number);
  parser.finish();
  return parser.take();
}

std::vector<Sentence> parse_conllu(std::string_view text, const ParseOptions& options) {
  std::istringstream in{std::string(text)};
  return parse_conllu(in, options);
}

std::vector<Sentence> read_conllu_file(const std::string& path, const ParseOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse_conllu(in, options);
}

void serialize_conllu(std::span<const Sentence> sentences, std::ostream& out) {
  for (const Sentence& s : sentences) {
    if (!has_sent_id_comment(s)) out << "# sent_id = " << s.sent_id << '\n';
    for (const auto& c : s.comments) out << c << '\n';
    auto opaque = s.opaque.begin();
    auto flush_opaque = [&](int before) {
      while (opaque != s.opaque.end() && opaque->before_token <= before) {
        out << opaque->text << '\n';
        ++opaque;
      }
    };
    for (const Token& t : s.tokens) {
      flush_opaque(t.id);
      out << t.id << '\t' << t.form << '\t' << t.lemma << '\t' << t.upos << '\t' << t.xpos
          << '\t' << t.feats << '\t' << t.head << '\t' << t.deprel << '\t' << render_deps(t.deps)
          << '\t' << render_misc(t.misc) << '\n';
    }
    flush_opaque(s.size() + 1);
    out << '\n';
  }
}

std::string serialize_conllu(std::span<const Sentence> sentences) {
  std::ostringstream out;
  serialize_conllu(sentences, out);
  return out.str();
}

Sentence make_sentence(std::string sent_id, std::vector<Token> tokens) {
  Sentence s;
  s.comments.push_back("# sent_id = " + sent_id);
  s.sent_id = std::move(sent_id);
  s.tokens = std::move(tokens);
  for (auto& t : s.tokens) std::stable_sort(t.deps.begin(), t.deps.end());
  validate_sentence(s);
  return s;
}

void validate_sentence(const Sentence& sentence) {
  const int n = sentence.size();
  if (n == 0) throw StructureError(sentence.sent_id, "no tokens");
  int roots = 0;
  for (int i = 0; i < n; ++i) {
    const Token& t = sentence.tokens[static_cast<std::size_t>(i)];
    if (t.id != i + 1) throw StructureError(sentence.sent_id, "token ids are not 1..n");
    if (t.head < 0 || t.head > n)
      throw StructureError(sentence.sent_id, "head of token " + std::to_string(t.id) + " out of range");
    if (t.head == t.id)
      throw StructureError(sentence.sent_id, "token " + std::to_string(t.id) + " is its own head");
    if (t.head == 0) ++roots;
    for (const auto& arc : t.deps) {
      if (arc.head < 0 || arc.head > n || arc.relation.empty())
        throw StructureError(sentence.sent_id,
                             "bad enhanced arc on token " + std::to_string(t.id));
    }
  }
  if (roots != 1)
    throw StructureError(sentence.sent_id, std::to_string(roots) + " roots, expected 1");

  // 0 = unvisited, 1 = on current path, 2 = reaches root.
  std::vector<char> state(static_cast<std::size_t>(n + 1), 0);
  state[0] = 2;
  for (int start = 1; start <= n; ++start) {
    std::vector<int> path;
    int cur = start;
    while (state[static_cast<std::size_t>(cur)] == 0) {
      state[static_cast<std::size_t>(cur)] = 1;
      path.push_back(cur);
      cur = sentence.token(cur).head;
    }
    if (state[static_cast<std::size_t>(cur)] == 1)
      throw StructureError(sentence.sent_id,
                           "cycle through token " + std::to_string(cur));
    for (int p : path) state[static_cast<std::size_t>(p)] = 2;
  }
}

bool relation_matches(std::string_view pattern, std::string_view relation) {
  if (pattern.size() >= 2 && pattern.ends_with(":*")) {
    std::string_view base = pattern.substr(0, pattern.size() - 2);
    if (relation == base) return true;
    return relation.size() > base.size() + 1 && relation.starts_with(base) &&
           relation[base.size()] == ':';
  }
  return pattern == relation;
}

std::string_view relation_subtype(std::string_view relation) {
  std::size_t colon = relation.find(':');
  return colon == std::string_view::npos ? std::string_view{} : relation.substr(colon + 1);
}

std::string_view relation_base(std::string_view relation) {
  return relation.substr(0, relation.find(':'));
}

std::vector<Child> children_by_relation(const Sentence& sentence, int head,
                                        std::span<const std::string> patterns) {
  if (head < 0 || head > sentence.size())
    throw RangeError("head " + std::to_string(head) + " out of range for sentence '" +
                     sentence.sent_id + "'");
  std::vector<Child> out;
  for (const Token& t : sentence.tokens) {
    if (t.head != head) continue;
    for (const auto& p : patterns) {
      if (relation_matches(p, t.deprel)) {
        out.push_back({t.id, t.deprel});
        break;
      }
    }
  }
  return out;
}

std::vector<int> children_of(const Sentence& sentence, int head) {
  if (head < 0 || head > sentence.size())
    throw RangeError("head " + std::to_string(head) + " out of range for sentence '" +
                     sentence.sent_id + "'");
  std::vector<int> out;
  for (const Token& t : sentence.tokens)
    if (t.head == head) out.push_back(t.id);
  return out;
}

std::pair<int, int> subtree_span(const Sentence& sentence, int head) {
  if (head < 1 || head > sentence.size())
    throw RangeError("token " + std::to_string(head) + " out of range");
  int lo = head, hi = head;
  for (const Token& t : sentence.tokens) {
    int cur = t.id;
    while (cur != 0 && cur != head) cur = sentence.token(cur).head;
    if (cur == head) {
      lo = std::min(lo, t.id);
      hi = std::max(hi, t.id);
    }
  }
  return {lo, hi};
}

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

}  // namespace nomarg
