#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "nomarg/error.h"
#include "nomarg/evalkit.h"

namespace nomarg {

namespace {

using json = nlohmann::json;

std::vector<std::string> words(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream in{std::string(text)};
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

std::optional<std::string> optional_field(const json& obj, const char* key) {
  if (!obj.is_object() || !obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
  std::string s = obj.at(key).get<std::string>();
  if (words(s).empty()) return std::nullopt;
  return s;
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ' ';
    out += p;
  }
  return out;
}

// Head word of tokens [begin, end]: the token whose parent lies outside the
// range. Returns the first such token and whether it was unique.
std::pair<int, bool> range_head(const Sentence& s, int begin, int end) {
  int found = 0, count = 0;
  for (int i = begin; i <= end; ++i) {
    int h = s.token(i).head;
    if (h < begin || h > end) {
      if (!found) found = i;
      ++count;
    }
  }
  return {found, count == 1};
}

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  // Rejection sampling keeps the draw unbiased and identical across
  // standard libraries, unlike uniform_int_distribution.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

}  // namespace

std::vector<GoldInstance> build_nomlex_evalset(std::span<const Sentence> corpus,
                                               const Lexicon& lexicon,
                                               std::size_t per_verb_cap) {
  std::vector<GoldInstance> out;
  std::map<std::string, std::size_t> per_verb;
  for (const Sentence& s : corpus) {
    for (const NounInstance& inst : find_noun_instances(s, lexicon)) {
      const LexiconEntry* entry = lexicon.find(to_lower_ascii(s.token(inst.noun).lemma));
      auto matches = match_patterns(*entry, s, inst.noun);
      if (matches.empty()) continue;

      std::map<int, Role> role_of;
      std::map<int, std::string> label_of;
      bool conflict = false;
      for (const auto& m : matches) {
        for (const auto& b : m.bindings) {
          auto [it, inserted] = role_of.emplace(b.head, b.role);
          if (!inserted && it->second != b.role) conflict = true;
          if (auto label = verbal_label(b.role, b.relation)) {
            auto [lit, linserted] = label_of.emplace(b.head, *label);
            if (!linserted && lit->second != *label) conflict = true;
          }
        }
      }
      if (conflict) continue;
      std::map<std::string, int> head_of;
      for (const auto& [head, label] : label_of)
        if (!head_of.emplace(label, head).second) conflict = true;
      if (conflict || label_of.size() != 2) continue;

      std::size_t& count = per_verb[entry->verb];
      if (count >= per_verb_cap) continue;
      ++count;

      GoldInstance g;
      g.sent_id = s.sent_id;
      for (const Token& t : s.tokens) g.tokens.push_back(t.form);
      g.noun = inst.noun;
      g.verb = entry->verb;
      for (const auto& [head, label] : label_of) g.gold.push_back({label, head});
      out.push_back(std::move(g));
    }
  }
  return out;
}

std::vector<ParaphraseRow> read_paraphrase_rows(std::istream& in) {
  std::vector<ParaphraseRow> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto row = json::parse(line);
      ParaphraseRow r;
      r.sent_id = row.at("sent_id").get<std::string>();
      const json& nominal = row.at("nominal");
      const json& verbal = row.at("verbal");
      r.adj_noun = optional_field(nominal, "adj_noun");
      r.noun = nominal.at("noun").get<std::string>();
      r.prep = optional_field(nominal, "prep");
      r.pobj = optional_field(nominal, "pobj");
      r.arg0 = optional_field(verbal, "arg0");
      r.verb = verbal.at("verb").get<std::string>();
      r.arg1 = optional_field(verbal, "arg1");
      r.pp = optional_field(verbal, "pp");
      out.push_back(std::move(r));
    } catch (const json::exception& e) {
      throw FormatError(number, std::string("bad paraphrase row: ") + e.what());
    }
  }
  return out;
}

double normalized_edit_distance(std::string_view a_in, std::string_view b_in) {
  const std::string a = to_lower_ascii(a_in), b = to_lower_ascii(b_in);
  if (a.empty() && b.empty()) return 0.0;
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return static_cast<double>(prev[b.size()]) / static_cast<double>(std::max(a.size(), b.size()));
}

ConversionResult convert_paraphrase_dataset(std::span<const ParaphraseRow> rows,
                                            std::span<const Sentence> sentences) {
  std::unordered_map<std::string, const Sentence*> by_id;
  for (const auto& s : sentences) by_id.emplace(s.sent_id, &s);

  ConversionResult result;
  std::set<std::string> seen_phrases;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const ParaphraseRow& row = rows[r];
    auto drop = [&](const std::string& why) {
      result.dropped.push_back("row " + std::to_string(r + 1) + " (" + row.sent_id + "): " + why);
    };

    auto sit = by_id.find(row.sent_id);
    if (sit == by_id.end()) {
      drop("sentence not found in parse");
      continue;
    }
    const Sentence& s = *sit->second;

    const auto adj = row.adj_noun ? words(*row.adj_noun) : std::vector<std::string>{};
    const auto noun = words(row.noun);
    const auto prep = row.prep ? words(*row.prep) : std::vector<std::string>{};
    const auto pobj = row.pobj ? words(*row.pobj) : std::vector<std::string>{};
    if (noun.size() != 1) {
      drop("nominalization must be a single word");
      continue;
    }
    std::vector<std::string> phrase = adj;
    phrase.push_back(noun.front());
    if (!pobj.empty()) {
      phrase.insert(phrase.end(), prep.begin(), prep.end());
      phrase.insert(phrase.end(), pobj.begin(), pobj.end());
    }

    // First occurrence of the phrase in the sentence, case-insensitively.
    int start = 0;
    const int n = s.size(), len = static_cast<int>(phrase.size());
    for (int i = 1; i + len - 1 <= n && !start; ++i) {
      bool ok = true;
      for (int k = 0; k < len && ok; ++k)
        ok = to_lower_ascii(s.token(i + k).form) == to_lower_ascii(phrase[static_cast<std::size_t>(k)]);
      if (ok) start = i;
    }
    if (!start) {
      drop("nominal phrase '" + join(phrase) + "' not found in sentence");
      continue;
    }

    struct Component {
      std::vector<std::string> texts;  // orthographic variants to compare
      int begin, end;
    };
    std::vector<Component> components;
    const int adj_len = static_cast<int>(adj.size());
    if (adj_len) components.push_back({{join(adj)}, start, start + adj_len - 1});
    if (!pobj.empty()) {
      const int pobj_begin = start + adj_len + 1 + static_cast<int>(prep.size());
      std::vector<std::string> variants{join(pobj)};
      if (!prep.empty()) variants.push_back(join(prep) + " " + join(pobj));
      components.push_back({variants, pobj_begin, pobj_begin + static_cast<int>(pobj.size()) - 1});
    }
    if (components.empty()) {
      drop("no nominal argument components");
      continue;
    }

    // Tie order: arg1, arg0, pp.
    std::vector<std::pair<std::string, const std::optional<std::string>*>> verbal = {
        {"arg1", &row.arg1}, {"arg0", &row.arg0}, {"pp", &row.pp}};
    std::vector<std::string> chosen;
    for (const auto& comp : components) {
      std::string best;
      double best_d = 2.0;
      for (const auto& [name, value] : verbal) {
        if (!*value) continue;
        for (const auto& text : comp.texts) {
          double d = normalized_edit_distance(text, **value);
          if (d < best_d) {
            best_d = d;
            best = name;
          }
        }
      }
      chosen.push_back(best);
    }
    if (std::find(chosen.begin(), chosen.end(), std::string()) != chosen.end()) {
      drop("no verbal components to match");
      continue;
    }
    if (chosen.size() == 2 && chosen[0] == chosen[1]) {
      drop("two nominal components match verbal " + chosen[0]);
      continue;
    }

    std::string phrase_key = to_lower_ascii(join(phrase));
    if (seen_phrases.count(phrase_key)) {
      drop("repeated nominal phrase '" + phrase_key + "'");
      continue;
    }

    GoldInstance g;
    g.sent_id = s.sent_id;
    for (const Token& t : s.tokens) g.tokens.push_back(t.form);
    g.noun = start + adj_len;
    g.verb = to_lower_ascii(row.verb);
    for (std::size_t c = 0; c < components.size(); ++c) {
      std::string label;
      if (chosen[c] == "arg0") label = "nsubj";
      else if (chosen[c] == "arg1") label = "dobj";
      else label = "nmod:" + to_lower_ascii(words(*row.pp).front());
      auto [head, unique] = range_head(s, components[c].begin, components[c].end);
      if (!unique)
        result.notes.push_back("row " + std::to_string(r + 1) + " (" + row.sent_id +
                               "): ambiguous head for '" + components[c].texts.front() +
                               "', using token " + std::to_string(head));
      g.gold.push_back({label, head});
    }
    std::sort(g.gold.begin(), g.gold.end(),
              [](const LabeledPair& a, const LabeledPair& b) { return a.head < b.head; });
    if (!satisfies_uniqueness(g.gold)) {
      drop("components resolve to a repeated label or head");
      continue;
    }
    seen_phrases.insert(phrase_key);
    result.instances.push_back(std::move(g));
  }
  return result;
}

Split tune_test_split(std::span<const GoldInstance> instances, double ratio, std::uint64_t seed,
                      const VerbPartition* partition) {
  if (!(ratio >= 0.0 && ratio <= 1.0)) throw Error("split ratio must lie in [0, 1]");
  std::vector<bool> to_tune(instances.size(), false);
  std::vector<std::size_t> shared;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const std::string& verb = instances[i].verb;
    if (partition && partition->tune_only.count(verb)) to_tune[i] = true;
    else if (partition && partition->test_only.count(verb)) to_tune[i] = false;
    else shared.push_back(i);
  }

  std::mt19937_64 rng(seed);
  for (std::size_t i = shared.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(bounded(rng, i));
    std::swap(shared[i - 1], shared[j]);
  }
  const auto n_tune = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(shared.size())));
  for (std::size_t i = 0; i < n_tune; ++i) to_tune[shared[i]] = true;

  Split split;
  for (std::size_t i = 0; i < instances.size(); ++i)
    (to_tune[i] ? split.tune : split.test).push_back(instances[i]);
  return split;
}

}  // namespace nomarg
