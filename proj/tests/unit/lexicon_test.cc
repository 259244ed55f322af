#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "fixtures.h"
#include "nomarg/error.h"
#include "nomarg/lexicon.h"

using namespace nomarg;
using namespace nomarg::testing;

namespace {

Binding bind(Role role, int head, std::string rel) { return {role, head, std::move(rel)}; }

// Exhaustive enumeration over every assignment of constraints to children
// (or to nothing, for optional ones); keeps the lexicographically smallest
// valid one, ordering children by position and "unbound" last.
std::optional<std::vector<Binding>> enumerate_first(const DepPattern& p, const Sentence& s, int noun) {
  std::vector<int> kids = children_of(s, noun);
  const std::size_t n = p.constraints.size();
  const std::size_t options = kids.size() + 1;
  std::size_t total = 1;
  for (std::size_t i = 0; i < n; ++i) total *= options;
  std::optional<std::vector<std::size_t>> best;
  for (std::size_t code = 0; code < total; ++code) {
    std::vector<std::size_t> choice(n);
    std::size_t c = code;
    for (std::size_t i = n; i-- > 0;) {
      choice[i] = c % options;  // kids.size() means unbound
      c /= options;
    }
    bool ok = true;
    std::vector<bool> used(kids.size(), false);
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (choice[i] == kids.size()) {
        ok = !p.constraints[i].required;
        continue;
      }
      if (used[choice[i]]) ok = false;
      else if (!relation_matches(p.constraints[i].relation, s.token(kids[choice[i]]).deprel)) ok = false;
      else used[choice[i]] = true;
    }
    if (ok && (!best || choice < *best)) best = choice;
  }
  if (!best) return std::nullopt;
  std::vector<Binding> out;
  for (std::size_t i = 0; i < n; ++i) {
    if ((*best)[i] == kids.size()) continue;
    int head = kids[(*best)[i]];
    out.push_back({p.constraints[i].role, head, s.token(head).deprel});
  }
  if (out.empty()) return std::nullopt;
  return out;
}

}  // namespace

TEST(Lexicon, LoadsAndRoundTrips) {
  Lexicon lex = parse_lexicon(kDestroyLexiconJson);
  ASSERT_EQ(lex.size(), 1u);
  const LexiconEntry* e = lex.find("destruction");
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->verb, "destroy");
  ASSERT_EQ(e->patterns.size(), 1u);
  EXPECT_EQ(e->patterns[0].constraints[0], (Constraint{"nmod:poss", Role::kSubject, true}));
  EXPECT_EQ(e->patterns[0].constraints[1], (Constraint{"nmod:of", Role::kObject, true}));

  std::ostringstream out;
  write_lexicon(lex, out);
  Lexicon back = parse_lexicon(out.str());
  EXPECT_EQ(back.entries(), lex.entries());
  std::ostringstream again;
  write_lexicon(back, again);
  EXPECT_EQ(again.str(), out.str());
}

TEST(Lexicon, SampleFileLoads) {
  Lexicon lex = load_lexicon(std::string(NOMARG_TEST_DATA_DIR) + "/sample_lexicon.json");
  EXPECT_GE(lex.size(), 10u);
  EXPECT_LE(lex.size(), 20u);
  ASSERT_NE(lex.find("destruction"), nullptr);
  EXPECT_TRUE(lex.warnings().empty());
}

TEST(Lexicon, EmptyObjectIsEmptyLexicon) { EXPECT_TRUE(parse_lexicon("{}").empty()); }

TEST(Lexicon, SchemaViolations) {
  EXPECT_THROW(parse_lexicon("[1,2]"), SchemaError);
  EXPECT_THROW(parse_lexicon("{not json"), Error);
  EXPECT_THROW(parse_lexicon(R"({"nouns":[{"noun":"x","verb":"y","patterns":[{"constraints":[]}]}]})"),
               SchemaError);
  EXPECT_THROW(parse_lexicon(
                   R"({"nouns":[{"noun":"x","verb":"y","patterns":[{"constraints":[{"rel":"dobj","role":"OBJECT"}]}]}]})"),
               SchemaError);
  EXPECT_THROW(parse_lexicon(
                   R"({"nouns":[{"noun":"x","verb":"y","patterns":[{"constraints":[{"rel":"amod","role":"AGENT"}]}]}]})"),
               SchemaError);
  EXPECT_THROW(parse_lexicon(R"({"nouns":[{"verb":"y","patterns":[]}]})"), SchemaError);
}

TEST(Lexicon, DuplicateNounLastWinsWithWarning) {
  Lexicon lex = parse_lexicon(R"({"nouns":[
    {"noun":"Attack","verb":"assault","patterns":[{"constraints":[{"rel":"amod","role":"SUBJECT"}]}]},
    {"noun":"attack","verb":"attack","patterns":[{"constraints":[{"rel":"nmod:on","role":"OBJECT"}]}]}]})");
  ASSERT_EQ(lex.size(), 1u);
  EXPECT_EQ(lex.find("attack")->verb, "attack");
  EXPECT_EQ(lex.warnings().size(), 1u);
}

TEST(Lexicon, VerbalLabels) {
  EXPECT_EQ(verbal_label(Role::kSubject, "nmod:poss"), "nsubj");
  EXPECT_EQ(verbal_label(Role::kObject, "compound"), "dobj");
  EXPECT_EQ(verbal_label(Role::kPp, "nmod:from"), "nmod:from");
  EXPECT_EQ(verbal_label(Role::kPp, "nmod:poss"), std::nullopt);
  EXPECT_EQ(verbal_label(Role::kPp, "amod"), std::nullopt);
  EXPECT_EQ(verbal_label(Role::kUnknown, "nmod:of"), std::nullopt);
}

TEST(Lexicon, MatchesDestructionPattern) {
  Sentence s = parse_one(kDestructionConllu);
  Lexicon lex = parse_lexicon(kDestroyLexiconJson);
  auto matches = match_patterns(*lex.find("destruction"), s, 3);
  ASSERT_EQ(matches.size(), 1u);
  EXPECT_EQ(matches[0].bindings,
            (std::vector<Binding>{bind(Role::kSubject, 1, "nmod:poss"), bind(Role::kObject, 6, "nmod:of")}));
  Enrichment e = baseline_label(*lex.find("destruction"), s, 3);
  EXPECT_EQ(e.pairs, (std::vector<LabeledPair>{{"nsubj", 1}, {"dobj", 6}}));
  EXPECT_EQ(e.verb, "destroy");
}

TEST(Lexicon, UnfulfilledPatternGivesNoMatch) {
  Sentence s = parse_one(kShortDestructionConllu);
  Lexicon lex = parse_lexicon(kDestroyLexiconJson);
  EXPECT_TRUE(match_patterns(*lex.find("destruction"), s, 3).empty());
  EXPECT_TRUE(baseline_label(*lex.find("destruction"), s, 3).pairs.empty());
}

TEST(Lexicon, TwoFulfilledPatternsAndCollisions) {
  Sentence s = parse_one(kDestructionConllu);
  Lexicon lex = parse_lexicon(R"({"nouns":[{"noun":"destruction","verb":"destroy","patterns":[
    {"constraints":[{"rel":"nmod:poss","role":"SUBJECT"},{"rel":"nmod:of","role":"OBJECT"}]},
    {"constraints":[{"rel":"nmod:*","role":"OBJECT"}]},
    {"constraints":[{"rel":"nmod:poss","role":"OBJECT"}]}]}]})");
  const LexiconEntry& entry = *lex.find("destruction");
  auto matches = match_patterns(entry, s, 3);
  ASSERT_EQ(matches.size(), 3u);
  for (const auto& m : matches) EXPECT_EQ(m.bindings, *enumerate_first(entry.patterns[m.pattern_index], s, 3));
  // nmod:* takes the first matching child in token order: nmod:poss at 1.
  EXPECT_EQ(matches[1].bindings, (std::vector<Binding>{bind(Role::kObject, 1, "nmod:poss")}));
  // Head 1 is SUBJECT in one pattern and OBJECT in another: dropped. Head 6
  // keeps dobj.
  EXPECT_EQ(baseline_label(entry, s, 3).pairs, (std::vector<LabeledPair>{{"dobj", 6}}));
}

TEST(Lexicon, OptionalConstraints) {
  Sentence s = parse_one(kShortDestructionConllu);
  Lexicon lex = parse_lexicon(R"({"nouns":[{"noun":"destruction","verb":"destroy","patterns":[
    {"constraints":[{"rel":"nmod:poss","role":"SUBJECT"},{"rel":"nmod:of","role":"OBJECT","required":false}]},
    {"constraints":[{"rel":"compound","role":"OBJECT","required":false}]}]}]})");
  auto matches = match_patterns(*lex.find("destruction"), s, 3);
  ASSERT_EQ(matches.size(), 1u);
  EXPECT_EQ(matches[0].bindings, (std::vector<Binding>{bind(Role::kSubject, 1, "nmod:poss")}));
}

TEST(Lexicon, MatcherAgreesWithExhaustiveEnumeration) {
  std::mt19937_64 rng(7);
  const std::vector<std::string> rels = {"nmod:poss", "nmod:of", "nmod:by", "compound", "amod", "det"};
  const std::vector<std::string> pattern_rels = {"nmod:poss", "nmod:of", "nmod:*", "compound", "amod"};
  const Role roles[] = {Role::kSubject, Role::kObject, Role::kPp};
  for (int trial = 0; trial < 2000; ++trial) {
    const int kids = std::uniform_int_distribution<int>(0, 5)(rng);
    std::vector<Token> tokens;
    Token noun;
    noun.id = 1;
    noun.form = noun.lemma = "destruction";
    noun.upos = "NOUN";
    noun.deprel = "root";
    tokens.push_back(noun);
    for (int k = 0; k < kids; ++k) {
      Token t;
      t.id = k + 2;
      t.form = t.lemma = "w";
      t.upos = "NOUN";
      t.head = 1;
      t.deprel = rels[std::uniform_int_distribution<std::size_t>(0, rels.size() - 1)(rng)];
      tokens.push_back(t);
    }
    Sentence s = make_sentence("t" + std::to_string(trial), tokens);
    LexiconEntry entry{"destruction", "destroy", {}};
    const int patterns = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int p = 0; p < patterns; ++p) {
      DepPattern dp;
      const int n = std::uniform_int_distribution<int>(1, 3)(rng);
      for (int c = 0; c < n; ++c)
        dp.constraints.push_back({pattern_rels[std::uniform_int_distribution<std::size_t>(0, pattern_rels.size() - 1)(rng)],
                                  roles[std::uniform_int_distribution<int>(0, 2)(rng)],
                                  std::uniform_int_distribution<int>(0, 2)(rng) != 0});
      entry.patterns.push_back(dp);
    }
    auto matches = match_patterns(entry, s, 1);
    std::size_t m = 0;
    for (std::size_t p = 0; p < entry.patterns.size(); ++p) {
      auto want = enumerate_first(entry.patterns[p], s, 1);
      if (!want) continue;
      ASSERT_LT(m, matches.size()) << "trial " << trial;
      EXPECT_EQ(matches[m].pattern_index, p);
      EXPECT_EQ(matches[m].bindings, *want) << "trial " << trial << " pattern " << p;
      ++m;
    }
    EXPECT_EQ(m, matches.size()) << "trial " << trial;
  }
}
