#include "nomarg/lexicon.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nomarg/error.h"

namespace nomarg {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

bool valid_constraint_relation(std::string_view rel) {
  if (rel == "nmod:poss" || rel == "compound" || rel == "amod") return true;
  return rel.starts_with("nmod:") && rel.size() > 5;
}

std::string entry_label(std::size_t index, const json& item) {
  std::string label = "entry #" + std::to_string(index);
  if (item.is_object() && item.contains("noun") && item["noun"].is_string())
    label += " ('" + item["noun"].get<std::string>() + "')";
  return label;
}

const json& require(const json& obj, const char* key, const std::string& where) {
  if (!obj.is_object() || !obj.contains(key))
    throw SchemaError(where + ": missing field '" + key + "'");
  return obj.at(key);
}

std::string require_string(const json& obj, const char* key, const std::string& where) {
  const json& v = require(obj, key, where);
  if (!v.is_string() || v.get_ref<const std::string&>().empty())
    throw SchemaError(where + ": field '" + key + "' must be a nonempty string");
  return v.get<std::string>();
}

Constraint parse_constraint(const json& c, const std::string& where) {
  Constraint out;
  out.relation = require_string(c, "rel", where);
  if (!valid_constraint_relation(out.relation))
    throw SchemaError(where + ": unsupported relation '" + out.relation + "'");
  auto role = parse_role(require_string(c, "role", where));
  if (!role) throw SchemaError(where + ": unknown role '" + c["role"].get<std::string>() + "'");
  out.role = *role;
  if (c.contains("required")) {
    if (!c["required"].is_boolean()) throw SchemaError(where + ": 'required' must be boolean");
    out.required = c["required"].get<bool>();
  }
  return out;
}

}  // namespace

std::string_view role_name(Role role) {
  switch (role) {
    case Role::kSubject: return "SUBJECT";
    case Role::kObject: return "OBJECT";
    case Role::kPp: return "PP";
    case Role::kUnknown: return "UNKNOWN";
  }
  return "UNKNOWN";
}

std::optional<Role> parse_role(std::string_view name) {
  if (name == "SUBJECT") return Role::kSubject;
  if (name == "OBJECT") return Role::kObject;
  if (name == "PP") return Role::kPp;
  if (name == "UNKNOWN") return Role::kUnknown;
  return std::nullopt;
}

std::optional<std::string> verbal_label(Role role, std::string_view matched_relation) {
  switch (role) {
    case Role::kSubject: return "nsubj";
    case Role::kObject: return "dobj";
    case Role::kPp: {
      if (relation_base(matched_relation) != "nmod") return std::nullopt;
      std::string_view sub = relation_subtype(matched_relation);
      if (sub.empty() || sub == "poss" || sub == "*") return std::nullopt;
      return "nmod:" + std::string(sub);
    }
    case Role::kUnknown: return std::nullopt;
  }
  return std::nullopt;
}

bool Lexicon::add(LexiconEntry entry) {
  std::string key = entry.noun;
  auto [it, inserted] = entries_.insert_or_assign(std::move(key), std::move(entry));
  return inserted;
}

const LexiconEntry* Lexicon::find(std::string_view noun_lemma) const {
  auto it = entries_.find(noun_lemma);
  return it == entries_.end() ? nullptr : &it->second;
}

Lexicon parse_lexicon(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("lexicon is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaError("lexicon root must be an object");

  Lexicon lexicon;
  if (!doc.contains("nouns")) return lexicon;
  const json& nouns = doc["nouns"];
  if (!nouns.is_array()) throw SchemaError("'nouns' must be an array");

  for (std::size_t i = 0; i < nouns.size(); ++i) {
    const json& item = nouns[i];
    const std::string where = entry_label(i, item);
    LexiconEntry entry;
    entry.noun = to_lower_ascii(require_string(item, "noun", where));
    entry.verb = to_lower_ascii(require_string(item, "verb", where));
    if (item.contains("patterns")) {
      const json& patterns = item["patterns"];
      if (!patterns.is_array()) throw SchemaError(where + ": 'patterns' must be an array");
      for (std::size_t p = 0; p < patterns.size(); ++p) {
        const std::string pwhere = where + " pattern " + std::to_string(p);
        const json& constraints = require(patterns[p], "constraints", pwhere);
        if (!constraints.is_array() || constraints.empty())
          throw SchemaError(pwhere + ": 'constraints' must be a nonempty array");
        DepPattern pattern;
        for (const json& c : constraints) pattern.constraints.push_back(parse_constraint(c, pwhere));
        entry.patterns.push_back(std::move(pattern));
      }
    }
    std::string noun = entry.noun;
    if (!lexicon.add(std::move(entry)))
      lexicon.add_warning("duplicate noun '" + noun + "' at " + where + "; last entry wins");
  }
  return lexicon;
}

Lexicon load_lexicon(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_lexicon(buf.str());
}

void write_lexicon(const Lexicon& lexicon, std::ostream& out) {
  ordered_json nouns = ordered_json::array();
  for (const auto& [_, entry] : lexicon.entries()) {
    ordered_json e;
    e["noun"] = entry.noun;
    e["verb"] = entry.verb;
    ordered_json patterns = ordered_json::array();
    for (const auto& p : entry.patterns) {
      ordered_json constraints = ordered_json::array();
      for (const auto& c : p.constraints) {
        ordered_json cj;
        cj["rel"] = c.relation;
        cj["role"] = std::string(role_name(c.role));
        cj["required"] = c.required;
        constraints.push_back(std::move(cj));
      }
      patterns.push_back({{"constraints", std::move(constraints)}});
    }
    e["patterns"] = std::move(patterns);
    nouns.push_back(std::move(e));
  }
  ordered_json doc;
  doc["nouns"] = std::move(nouns);
  out << doc.dump(2) << '\n';
}

namespace {

class Matcher {
 public:
  Matcher(const DepPattern& pattern, const Sentence& sentence, const std::vector<int>& children)
      : pattern_(pattern), sentence_(sentence), children_(children),
        used_(children.size(), false), chosen_(pattern.constraints.size(), -1) {}

  bool solve(std::size_t ci = 0) {
    if (ci == pattern_.constraints.size()) return true;
    const Constraint& c = pattern_.constraints[ci];
    for (std::size_t k = 0; k < children_.size(); ++k) {
      if (used_[k]) continue;
      if (!relation_matches(c.relation, sentence_.token(children_[k]).deprel)) continue;
      used_[k] = true;
      chosen_[ci] = static_cast<int>(k);
      if (solve(ci + 1)) return true;
      used_[k] = false;
      chosen_[ci] = -1;
    }
    if (!c.required) return solve(ci + 1);
    return false;
  }

  std::vector<Binding> bindings() const {
    std::vector<Binding> out;
    for (std::size_t ci = 0; ci < chosen_.size(); ++ci) {
      if (chosen_[ci] < 0) continue;
      int head = children_[static_cast<std::size_t>(chosen_[ci])];
      out.push_back({pattern_.constraints[ci].role, head, sentence_.token(head).deprel});
    }
    return out;
  }

 private:
  const DepPattern& pattern_;
  const Sentence& sentence_;
  const std::vector<int>& children_;
  std::vector<bool> used_;
  std::vector<int> chosen_;
};

}  // namespace

std::vector<PatternMatch> match_patterns(const LexiconEntry& entry, const Sentence& sentence,
                                         int noun) {
  std::vector<int> children = children_of(sentence, noun);
  std::vector<PatternMatch> matches;
  if (children.empty()) return matches;
  for (std::size_t p = 0; p < entry.patterns.size(); ++p) {
    Matcher matcher(entry.patterns[p], sentence, children);
    if (!matcher.solve()) continue;
    auto bindings = matcher.bindings();
    if (bindings.empty()) continue;
    matches.push_back({p, std::move(bindings)});
  }
  return matches;
}

Enrichment baseline_label(const LexiconEntry& entry, const Sentence& sentence, int noun) {
  Enrichment out;
  out.sent_id = sentence.sent_id;
  out.noun = noun;
  out.verb = entry.verb;

  // head -> (role, arc); heads seen with two roles are marked colliding.
  std::map<int, Binding> by_head;
  std::set<int> colliding;
  for (const auto& m : match_patterns(entry, sentence, noun)) {
    for (const auto& b : m.bindings) {
      auto [it, inserted] = by_head.emplace(b.head, b);
      if (!inserted && it->second.role != b.role) colliding.insert(b.head);
    }
  }

  std::map<std::string, std::vector<int>> by_label;
  for (const auto& [head, b] : by_head) {
    if (colliding.count(head)) continue;
    if (auto label = verbal_label(b.role, b.relation)) by_label[*label].push_back(head);
  }
  for (const auto& [label, heads] : by_label)
    if (heads.size() == 1) out.pairs.push_back({label, heads.front()});
  std::sort(out.pairs.begin(), out.pairs.end(),
            [](const LabeledPair& a, const LabeledPair& b) { return a.head < b.head; });
  return out;
}

}  // namespace nomarg
