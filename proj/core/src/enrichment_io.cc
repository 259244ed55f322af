#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>

#include <nlohmann/json.hpp>

#include "nomarg/enrichment.h"
#include "nomarg/error.h"

namespace nomarg {

using ordered_json = nlohmann::ordered_json;

bool satisfies_uniqueness(std::span<const LabeledPair> pairs) {
  std::set<std::string_view> labels;
  std::set<int> heads;
  for (const auto& p : pairs) {
    if (!labels.insert(p.label).second) return false;
    if (!heads.insert(p.head).second) return false;
  }
  return true;
}

std::string enrichment_to_jsonl(const Enrichment& e, std::span<const CandidateScore> scores) {
  ordered_json row;
  row["sent_id"] = e.sent_id;
  row["noun"] = e.noun;
  if (!e.verb.empty()) row["verb"] = e.verb;
  ordered_json pairs = ordered_json::array();
  for (const auto& p : e.pairs) pairs.push_back({{"label", p.label}, {"head", p.head}});
  row["pairs"] = std::move(pairs);
  ordered_json score_obj = ordered_json::object();
  for (const auto& s : scores) {
    ordered_json entry;
    entry["label"] = s.label ? ordered_json(*s.label) : ordered_json(nullptr);
    entry["score"] = s.score;
    score_obj[std::to_string(s.head)] = std::move(entry);
  }
  row["scores"] = std::move(score_obj);
  return row.dump();
}

Enrichment enrichment_from_json(std::string_view line, std::size_t line_number) {
  try {
    auto row = nlohmann::json::parse(line);
    Enrichment e;
    e.sent_id = row.at("sent_id").get<std::string>();
    e.noun = row.at("noun").get<int>();
    if (row.contains("verb")) e.verb = row.at("verb").get<std::string>();
    const auto& pairs = row.contains("pairs") ? row.at("pairs") : row.at("gold");
    for (const auto& p : pairs)
      e.pairs.push_back({p.at("label").get<std::string>(), p.at("head").get<int>()});
    std::sort(e.pairs.begin(), e.pairs.end(),
              [](const LabeledPair& a, const LabeledPair& b) { return a.head < b.head; });
    return e;
  } catch (const nlohmann::json::exception& ex) {
    throw FormatError(line_number, std::string("bad enrichment row: ") + ex.what());
  }
}

void write_enrichments(std::ostream& out, std::span<const Enrichment> enrichments) {
  for (const auto& e : enrichments) out << enrichment_to_jsonl(e) << '\n';
}

std::vector<Enrichment> read_enrichments(std::istream& in) {
  std::vector<Enrichment> out;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    out.push_back(enrichment_from_json(line, number));
  }
  return out;
}

std::vector<Enrichment> read_enrichments_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_enrichments(in);
}

}  // namespace nomarg
