#include <algorithm>
#include <ostream>
#include <set>

#include <nlohmann/json.hpp>

#include "nomarg/error.h"
#include "nomarg/evalkit.h"

namespace nomarg {

namespace {

bool is_function_relation(std::string_view rel) {
  std::string_view base = relation_base(rel);
  return base == "case" || base == "det" || base == "punct" || base == "cc" || base == "mark";
}

// Subtree of `head` minus boundary function words, never covering `noun`.
TokenSpan argument_span(const Sentence& s, int head, int noun) {
  auto [lo, hi] = subtree_span(s, head);
  if (lo < noun && noun < hi) {
    if (head < noun) hi = noun - 1;
    else lo = noun + 1;
  }
  while (lo < head && is_function_relation(s.token(lo).deprel)) ++lo;
  while (hi > head && is_function_relation(s.token(hi).deprel)) --hi;
  return {lo, hi};
}

}  // namespace

PerturbedInstance swap_arguments(const GoldInstance& instance, const Sentence& parse) {
  if (instance.gold.size() != 2)
    throw UnsupportedInstanceError("swap needs exactly two gold arguments, '" + instance.sent_id +
                                   "' has " + std::to_string(instance.gold.size()));
  if (parse.size() != static_cast<int>(instance.tokens.size()))
    throw UnsupportedInstanceError("parse of '" + instance.sent_id +
                                   "' does not match the instance tokens");
  PerturbedInstance p;
  p.instance = instance;
  std::sort(p.instance.gold.begin(), p.instance.gold.end(),
            [](const LabeledPair& a, const LabeledPair& b) { return a.head < b.head; });
  for (const auto& pair : p.instance.gold) {
    if (pair.head < 1 || pair.head > parse.size())
      throw UnsupportedInstanceError("gold head out of range in '" + instance.sent_id + "'");
    p.spans.push_back(argument_span(parse, pair.head, instance.noun));
  }
  return swap_arguments(p);
}

PerturbedInstance swap_arguments(const PerturbedInstance& in) {
  const GoldInstance& g = in.instance;
  if (g.gold.size() != 2 || in.spans.size() != 2)
    throw UnsupportedInstanceError("swap needs exactly two gold arguments, '" + g.sent_id +
                                   "' has " + std::to_string(g.gold.size()));
  const int n = static_cast<int>(g.tokens.size());
  std::size_t first = in.spans[0].begin <= in.spans[1].begin ? 0 : 1;
  const TokenSpan a = in.spans[first], b = in.spans[1 - first];
  auto inside = [](const TokenSpan& s, int i) { return s.begin <= i && i <= s.end; };
  if (a.begin < 1 || b.end > n || a.begin > a.end || b.begin > b.end || a.end >= b.begin)
    throw UnsupportedInstanceError("argument spans of '" + g.sent_id + "' overlap or are invalid");
  if (inside(a, g.noun) || inside(b, g.noun))
    throw UnsupportedInstanceError("an argument span of '" + g.sent_id + "' covers the noun");
  for (std::size_t i = 0; i < 2; ++i)
    if (!inside(in.spans[i], g.gold[i].head))
      throw UnsupportedInstanceError("gold head outside its span in '" + g.sent_id + "'");

  // New order: prefix, b, middle, a, suffix (1-based old ids).
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  auto append = [&](int lo, int hi) {
    for (int i = lo; i <= hi; ++i) order.push_back(i);
  };
  append(1, a.begin - 1);
  append(b.begin, b.end);
  append(a.end + 1, b.begin - 1);
  append(a.begin, a.end);
  append(b.end + 1, n);

  std::vector<int> new_id(static_cast<std::size_t>(n + 1), 0);
  for (std::size_t k = 0; k < order.size(); ++k) new_id[static_cast<std::size_t>(order[k])] = static_cast<int>(k) + 1;

  PerturbedInstance out;
  out.instance.sent_id = g.sent_id;
  out.instance.verb = g.verb;
  out.instance.noun = new_id[static_cast<std::size_t>(g.noun)];
  for (int old : order) out.instance.tokens.push_back(g.tokens[static_cast<std::size_t>(old - 1)]);

  std::vector<std::pair<LabeledPair, TokenSpan>> moved;
  for (std::size_t i = 0; i < 2; ++i) {
    const TokenSpan& s = in.spans[i];
    moved.push_back({{g.gold[i].label, new_id[static_cast<std::size_t>(g.gold[i].head)]},
                     {new_id[static_cast<std::size_t>(s.begin)], new_id[static_cast<std::size_t>(s.end)]}});
  }
  std::sort(moved.begin(), moved.end(),
            [](const auto& x, const auto& y) { return x.first.head < y.first.head; });
  for (auto& [pair, span] : moved) {
    out.instance.gold.push_back(pair);
    out.spans.push_back(span);
  }
  return out;
}

std::string encode_request_jsonl(const GoldInstance& instance) {
  nlohmann::ordered_json row;
  row["sent_id"] = instance.sent_id;
  row["tokens"] = instance.tokens;
  return row.dump();
}

std::size_t export_argument_vectors(const RefBank& bank,
                                    std::span<const NominalArgumentVector> nominal,
                                    std::ostream& out) {
  std::size_t rows = 0;
  auto emit = [&](std::string_view verb, std::string_view label, const char* kind,
                  const ArgumentSource& source, std::span<const float> vector) {
    nlohmann::ordered_json row;
    row["verb"] = verb;
    row["label"] = label;
    row["kind"] = kind;
    row["source"] = {{"sent_id", source.sent_id}, {"token", source.token}};
    nlohmann::ordered_json v = nlohmann::ordered_json::array();
    for (float f : vector) v.push_back(static_cast<double>(f));
    row["vector"] = std::move(v);
    out << row.dump() << '\n';
    ++rows;
  };
  for (const auto& verb : bank.verbs())
    for (const auto& a : bank.arguments(verb)) emit(a.verb, a.label, "reference", a.source, a.vector);
  for (const auto& a : nominal) emit(a.verb, a.label, "nominal", a.source, a.vector);
  return rows;
}

}  // namespace nomarg
