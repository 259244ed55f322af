#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "nomarg/error.h"
#include "nomarg/evalkit.h"
#include "nomarg/label.h"

namespace nomarg {

namespace {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;
using InstanceKey = std::pair<std::string, int>;

void sort_by_head(std::vector<LabeledPair>& pairs) {
  std::sort(pairs.begin(), pairs.end(),
            [](const LabeledPair& a, const LabeledPair& b) { return a.head < b.head; });
}

struct Prf {
  double precision, recall, f1;
};

Prf prf(std::size_t tp, std::size_t predicted, std::size_t gold, bool vacuous_is_perfect) {
  if (predicted == 0 && gold == 0) {
    double v = vacuous_is_perfect ? 1.0 : 0.0;
    return {v, v, v};
  }
  double p = predicted ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
  double r = gold ? static_cast<double>(tp) / static_cast<double>(gold) : 0.0;
  double f = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  return {p, r, f};
}

RelationRow make_row(std::string relation, std::size_t support, std::size_t tp, std::size_t fp,
                     std::size_t fn) {
  RelationRow row{std::move(relation), support, tp, fp, fn, 0.0, 0.0, 0.0};
  Prf m = prf(tp, tp + fp, tp + fn, false);
  row.precision = m.precision;
  row.recall = m.recall;
  row.f1 = m.f1;
  return row;
}

// Aligns predictions to gold by (sent_id, noun).
std::vector<const Enrichment*> align(std::span<const GoldInstance> gold,
                                     std::span<const Enrichment> pred) {
  std::map<InstanceKey, std::size_t> gold_index;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!gold_index.emplace(InstanceKey{gold[i].sent_id, gold[i].noun}, i).second)
      throw AlignmentError("duplicate gold instance (" + gold[i].sent_id + ", " +
                           std::to_string(gold[i].noun) + ")");
  }
  std::vector<const Enrichment*> aligned(gold.size(), nullptr);
  for (const auto& p : pred) {
    auto it = gold_index.find({p.sent_id, p.noun});
    if (it == gold_index.end())
      throw AlignmentError("prediction (" + p.sent_id + ", " + std::to_string(p.noun) +
                           ") has no gold instance");
    if (aligned[it->second])
      throw AlignmentError("duplicate prediction (" + p.sent_id + ", " + std::to_string(p.noun) + ")");
    aligned[it->second] = &p;
  }
  return aligned;
}

std::set<LabeledPair> as_set(const std::vector<LabeledPair>& pairs) {
  return {pairs.begin(), pairs.end()};
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v * 100.0);
  return buf;
}

}  // namespace

std::string gold_to_jsonl(const GoldInstance& g) {
  ordered_json row;
  row["sent_id"] = g.sent_id;
  row["noun"] = g.noun;
  row["verb"] = g.verb;
  row["tokens"] = g.tokens;
  ordered_json pairs = ordered_json::array();
  for (const auto& p : g.gold) pairs.push_back({{"label", p.label}, {"head", p.head}});
  row["gold"] = std::move(pairs);
  return row.dump();
}

void write_gold(std::ostream& out, std::span<const GoldInstance> gold) {
  for (const auto& g : gold) out << gold_to_jsonl(g) << '\n';
}

std::vector<GoldInstance> read_gold(std::istream& in) {
  std::vector<GoldInstance> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto row = json::parse(line);
      GoldInstance g;
      g.sent_id = row.at("sent_id").get<std::string>();
      g.noun = row.at("noun").get<int>();
      if (row.contains("verb")) g.verb = row.at("verb").get<std::string>();
      if (row.contains("tokens")) g.tokens = row.at("tokens").get<std::vector<std::string>>();
      const auto& pairs = row.contains("gold") ? row.at("gold") : row.at("pairs");
      for (const auto& p : pairs)
        g.gold.push_back({p.at("label").get<std::string>(), p.at("head").get<int>()});
      sort_by_head(g.gold);
      if (!satisfies_uniqueness(g.gold))
        throw FormatError(number, "gold pairs repeat a label or a head");
      out.push_back(std::move(g));
    } catch (const json::exception& e) {
      throw FormatError(number, std::string("bad gold row: ") + e.what());
    }
  }
  return out;
}

std::vector<GoldInstance> read_gold_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_gold(in);
}

std::string candidates_to_jsonl(const InstanceCandidates& c) {
  ordered_json row;
  row["sent_id"] = c.sent_id;
  row["noun"] = c.noun;
  row["verb"] = c.verb;
  ordered_json cands = ordered_json::array();
  for (const auto& cand : c.candidates) {
    ordered_json cj;
    cj["head"] = cand.head;
    cj["relation"] = cand.relation;
    cj["span"] = {cand.span_begin, cand.span_end};
    cands.push_back(std::move(cj));
  }
  row["candidates"] = std::move(cands);
  row["conj_policy"] = "first_conjunct";
  return row.dump();
}

std::vector<InstanceCandidates> read_candidates(std::istream& in) {
  std::vector<InstanceCandidates> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto row = json::parse(line);
      InstanceCandidates c;
      c.sent_id = row.at("sent_id").get<std::string>();
      c.noun = row.at("noun").get<int>();
      if (row.contains("verb")) c.verb = row.at("verb").get<std::string>();
      for (const auto& cj : row.at("candidates")) {
        Candidate cand;
        cand.head = cj.at("head").get<int>();
        cand.relation = cj.at("relation").get<std::string>();
        cand.span_begin = cj.at("span").at(0).get<int>();
        cand.span_end = cj.at("span").at(1).get<int>();
        c.candidates.push_back(std::move(cand));
      }
      out.push_back(std::move(c));
    } catch (const json::exception& e) {
      throw FormatError(number, std::string("bad candidates row: ") + e.what());
    }
  }
  return out;
}

std::vector<InstanceCandidates> read_candidates_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_candidates(in);
}

EvalReport score(std::span<const GoldInstance> gold, std::span<const Enrichment> pred) {
  auto aligned = align(gold, pred);
  EvalReport report;
  report.instances = gold.size();
  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto g = as_set(gold[i].gold);
    std::set<LabeledPair> p;
    if (aligned[i]) p = as_set(aligned[i]->pairs);
    report.gold_pairs += g.size();
    report.predicted_pairs += p.size();
    for (const auto& pair : p) report.correct_pairs += g.count(pair);
    if (p == g) ++report.exact_instances;
  }
  Prf m = prf(report.correct_pairs, report.predicted_pairs, report.gold_pairs, true);
  report.precision = m.precision;
  report.recall = m.recall;
  report.relation_f1 = m.f1;
  report.exact_match = report.instances
                           ? static_cast<double>(report.exact_instances) /
                                 static_cast<double>(report.instances)
                           : 0.0;
  report.per_relation = per_relation_report(gold, pred, {});
  return report;
}

std::vector<RelationRow> per_relation_report(std::span<const GoldInstance> gold,
                                             std::span<const Enrichment> pred,
                                             std::span<const InstanceCandidates> identified) {
  auto aligned = align(gold, pred);

  std::map<InstanceKey, const InstanceCandidates*> cand_index;
  for (const auto& c : identified) cand_index[{c.sent_id, c.noun}] = &c;

  struct Counts {
    std::size_t support = 0, tp = 0, fp = 0, fn = 0;
  };
  std::map<std::string, Counts> by_label{{"nsubj", {}}, {"dobj", {}}};
  Counts empty;

  for (std::size_t i = 0; i < gold.size(); ++i) {
    auto g = as_set(gold[i].gold);
    std::set<LabeledPair> p;
    if (aligned[i]) p = as_set(aligned[i]->pairs);
    for (const auto& pair : g) {
      auto& c = by_label[pair.label];
      ++c.support;
      if (p.count(pair)) ++c.tp;
      else ++c.fn;
    }
    for (const auto& pair : p)
      if (!g.count(pair)) ++by_label[pair.label].fp;

    auto it = cand_index.find({gold[i].sent_id, gold[i].noun});
    if (it == cand_index.end()) continue;
    std::set<int> gold_heads, pred_heads;
    for (const auto& pair : g) gold_heads.insert(pair.head);
    for (const auto& pair : p) pred_heads.insert(pair.head);
    for (const auto& cand : it->second->candidates) {
      bool gold_empty = !gold_heads.count(cand.head);
      bool pred_empty = !pred_heads.count(cand.head);
      if (gold_empty) ++empty.support;
      if (gold_empty && pred_empty) ++empty.tp;
      else if (pred_empty) ++empty.fp;
      else if (gold_empty) ++empty.fn;
    }
  }

  std::vector<std::string> labels;
  for (const auto& [label, _] : by_label) labels.push_back(label);
  std::sort(labels.begin(), labels.end(),
            [](const std::string& a, const std::string& b) { return label_order_less(a, b); });

  std::vector<RelationRow> rows;
  for (const auto& label : labels) {
    const Counts& c = by_label[label];
    rows.push_back(make_row(label, c.support, c.tp, c.fp, c.fn));
  }
  if (!identified.empty())
    rows.push_back(make_row(std::string(kEmptyLabelRow), empty.support, empty.tp, empty.fp, empty.fn));
  return rows;
}

std::string report_to_json(const EvalReport& report) {
  ordered_json doc;
  doc["instances"] = report.instances;
  doc["gold_pairs"] = report.gold_pairs;
  doc["predicted_pairs"] = report.predicted_pairs;
  doc["correct_pairs"] = report.correct_pairs;
  doc["precision"] = report.precision;
  doc["recall"] = report.recall;
  doc["relation_f1"] = report.relation_f1;
  doc["exact_match"] = report.exact_match;
  ordered_json rows = ordered_json::array();
  for (const auto& r : report.per_relation) {
    ordered_json row;
    row["relation"] = r.relation;
    row["support"] = r.support;
    row["tp"] = r.tp;
    row["fp"] = r.fp;
    row["fn"] = r.fn;
    row["precision"] = r.precision;
    row["recall"] = r.recall;
    row["f1"] = r.f1;
    rows.push_back(std::move(row));
  }
  doc["per_relation"] = std::move(rows);
  return doc.dump(2);
}

std::string report_to_table(const EvalReport& report) {
  std::ostringstream out;
  char line[160];
  std::snprintf(line, sizeof line, "instances %zu  gold %zu  predicted %zu  correct %zu\n",
                report.instances, report.gold_pairs, report.predicted_pairs, report.correct_pairs);
  out << line;
  std::snprintf(line, sizeof line, "%-14s %8s\n", "metric", "value");
  out << line;
  for (auto [name, v] : {std::pair{"precision", report.precision}, {"recall", report.recall},
                         {"relation-f1", report.relation_f1}, {"exact-match", report.exact_match}}) {
    std::snprintf(line, sizeof line, "%-14s %8s\n", name, percent(v).c_str());
    out << line;
  }
  if (!report.per_relation.empty()) {
    out << '\n';
    std::snprintf(line, sizeof line, "%-14s %7s %5s %5s %5s %8s %8s %8s\n", "relation", "support",
                  "tp", "fp", "fn", "P", "R", "F1");
    out << line;
    for (const auto& r : report.per_relation) {
      // "∅" is three bytes but one column wide.
      int width = r.relation == kEmptyLabelRow ? 16 : 14;
      std::snprintf(line, sizeof line, "%-*s %7zu %5zu %5zu %5zu %8s %8s %8s\n", width,
                    r.relation.c_str(), r.support, r.tp, r.fp, r.fn, percent(r.precision).c_str(),
                    percent(r.recall).c_str(), percent(r.f1).c_str());
      out << line;
    }
  }
  return out.str();
}

std::vector<Enrichment> baseline_all(std::string_view label,
                                     std::span<const InstanceCandidates> instances) {
  if (label != "nsubj" && label != "dobj")
    throw Error("baseline label must be nsubj or dobj, got '" + std::string(label) + "'");
  std::vector<Enrichment> out;
  for (const auto& inst : instances) {
    Enrichment e{inst.sent_id, inst.noun, inst.verb, {}};
    if (!inst.candidates.empty()) {
      auto first = std::min_element(inst.candidates.begin(), inst.candidates.end(),
                                    [](const Candidate& a, const Candidate& b) { return a.head < b.head; });
      e.pairs.push_back({std::string(label), first->head});
    }
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace nomarg
