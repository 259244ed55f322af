#include "fixtures.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <unistd.h>

namespace nomarg::testing {

Sentence parse_one(std::string_view conllu) {
  auto sentences = parse_conllu(conllu);
  if (sentences.size() != 1) throw std::logic_error("fixture is not one sentence");
  return std::move(sentences.front());
}

RefBank agent_bank() {
  RefBank bank(4);
  bank.add("destroy", "nsubj", {1.0f, 0.1f, 0.0f, 0.0f}, {"r1", 1});
  bank.add("destroy", "dobj", {0.1f, 1.0f, 0.0f, 0.0f}, {"r1", 4});
  bank.add("destroy", "nsubj", {0.9f, 0.2f, 0.1f, 0.0f}, {"r2", 1});
  bank.add("destroy", "dobj", {0.0f, 0.9f, 0.2f, 0.0f}, {"r2", 3});
  bank.add("destroy", "nsubj", {0.95f, 0.0f, 0.1f, 0.05f}, {"r3", 6});
  bank.add("destroy", "dobj", {0.2f, 0.95f, 0.0f, 0.1f}, {"r3", 2});
  bank.set_sentence_count("destroy", 3);
  return bank;
}

RefBank patient_bank() {
  RefBank bank(4);
  bank.add("destroy", "dobj", {0.3f, 0.9f, 0.1f, 0.0f}, {"p1", 2});
  bank.add("destroy", "dobj", {0.25f, 1.0f, 0.0f, 0.1f}, {"p2", 2});
  bank.add("destroy", "nsubj", {1.0f, 0.0f, 0.0f, 0.1f}, {"p2", 6});
  bank.add("destroy", "dobj", {0.35f, 0.85f, 0.05f, 0.05f}, {"p3", 4});
  bank.add("destroy", "dobj", {0.2f, 0.95f, 0.15f, 0.0f}, {"p4", 2});
  bank.add("destroy", "nsubj", {0.9f, 0.1f, 0.2f, 0.0f}, {"p4", 1});
  bank.set_sentence_count("destroy", 4);
  return bank;
}

EmbeddingRecord destruction_embeddings() {
  return {"rome1", 4,
          {
              0.9f, 0.15f, 0.05f, 0.0f,  // Rome
              0.0f, 0.0f, 1.0f, 0.0f,    // 's
              0.1f, 0.1f, 0.1f, 0.9f,    // destruction
              0.0f, 0.1f, 0.9f, 0.1f,    // of
              0.1f, 0.0f, 0.8f, 0.2f,    // the
              0.1f, 0.9f, 0.1f, 0.0f,    // city
          }};
}

EmbeddingRecord short_destruction_embeddings() {
  return {"short", 4,
          {
              0.3f, 0.9f, 0.05f, 0.05f,  // Rome
              0.0f, 0.0f, 1.0f, 0.0f,    // 's
              0.1f, 0.1f, 0.1f, 0.9f,    // destruction
          }};
}

RefBank five_vector_bank() {
  RefBank bank(2);
  bank.add("destroy", "nsubj", {1.0f, 0.0f}, {"s1", 1});
  bank.add("destroy", "nsubj", {0.9f, 0.1f}, {"s2", 1});
  bank.add("destroy", "dobj", {0.0f, 1.0f}, {"s3", 3});
  bank.add("destroy", "dobj", {0.1f, 0.9f}, {"s4", 3});
  bank.add("destroy", "dobj", {0.5f, 0.5f}, {"s5", 3});
  return bank;
}

TempDir::TempDir() {
  static std::atomic<int> counter{0};
  auto base = std::filesystem::temp_directory_path();
  for (;;) {
    path_ = base / ("nomarg-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    if (std::filesystem::create_directory(path_)) break;
  }
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw std::runtime_error("cannot write " + path);
}

std::vector<float> random_vector(std::mt19937_64& rng, std::size_t dim) {
  std::normal_distribution<float> g(0.0f, 1.0f);
  std::vector<float> v(dim);
  do {
    for (auto& x : v) x = g(rng);
  } while (std::all_of(v.begin(), v.end(), [](float f) { return f == 0.0f; }));
  return v;
}

RefBank random_bank(std::mt19937_64& rng, std::uint32_t dim, std::size_t n,
                    const std::vector<std::string>& labels, const std::string& verb) {
  RefBank bank(dim);
  std::vector<std::vector<float>> made;
  std::uniform_int_distribution<std::size_t> pick_label(0, labels.size() - 1);
  std::uniform_int_distribution<int> repeat(0, 7);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<float> v;
    if (!made.empty() && repeat(rng) == 0)
      v = made[std::uniform_int_distribution<std::size_t>(0, made.size() - 1)(rng)];
    else
      v = random_vector(rng, dim);
    made.push_back(v);
    bank.add(verb, labels[pick_label(rng)], std::move(v), {"s" + std::to_string(i), 1});
  }
  return bank;
}

Sentence random_sentence(std::mt19937_64& rng, const std::string& sent_id) {
  static const std::vector<std::string> forms = {"Rome", "city", "the", "of", "'s", "Zürich",
                                                 "naïve", "_", "3.5", "\"quoted\"", "a-b", "東京"};
  static const std::vector<std::string> upos = {"NOUN", "VERB", "ADP", "DET", "PROPN", "PUNCT"};
  static const std::vector<std::string> rels = {"nsubj", "dobj", "nmod:of", "nmod:poss", "case",
                                                "det", "compound", "amod", "punct", "conj"};
  auto pick = [&](const std::vector<std::string>& pool) {
    return pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
  };
  std::uniform_int_distribution<int> coin(0, 1);
  const int n = std::uniform_int_distribution<int>(1, 12)(rng);

  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 1);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<int> head(static_cast<std::size_t>(n + 1), 0);
  for (std::size_t i = 1; i < order.size(); ++i)
    head[static_cast<std::size_t>(order[i])] =
        order[std::uniform_int_distribution<std::size_t>(0, i - 1)(rng)];

  Sentence s;
  s.sent_id = sent_id;
  s.comments.push_back("# sent_id = " + sent_id);
  if (coin(rng)) s.comments.push_back("# text = random sentence " + sent_id);
  if (coin(rng)) s.comments.push_back("# newpar");
  for (int i = 1; i <= n; ++i) {
    Token t;
    t.id = i;
    t.form = pick(forms);
    t.lemma = coin(rng) ? to_lower_ascii(t.form) : "_";
    t.upos = pick(upos);
    t.xpos = coin(rng) ? "NN" : "_";
    t.feats = coin(rng) ? "Number=Sing|Person=3" : "_";
    t.head = head[static_cast<std::size_t>(i)];
    t.deprel = t.head == 0 ? "root" : pick(rels);
    const int arcs = std::uniform_int_distribution<int>(0, 2)(rng);
    for (int a = 0; a < arcs; ++a) {
      EnhancedArc arc{std::uniform_int_distribution<int>(0, n)(rng),
                      std::uniform_int_distribution<int>(0, 3)(rng) == 0 ? 1 : 0, pick(rels)};
      if (std::find(t.deps.begin(), t.deps.end(), arc) == t.deps.end()) t.deps.push_back(arc);
    }
    std::sort(t.deps.begin(), t.deps.end());
    if (coin(rng)) t.misc.push_back({"SpaceAfter", "No"});
    if (coin(rng)) t.misc.push_back({"Flag", std::nullopt});
    if (coin(rng)) t.misc.push_back({"Empty", ""});
    s.tokens.push_back(std::move(t));
  }
  for (int i = 1; i <= n; ++i) {
    if (i < n && std::uniform_int_distribution<int>(0, 5)(rng) == 0)
      s.opaque.push_back({i, std::to_string(i) + "-" + std::to_string(i + 1) + "\tdel\t_\t_\t_\t_\t_\t_\t_\t_"});
    if (std::uniform_int_distribution<int>(0, 7)(rng) == 0)
      s.opaque.push_back({i + 1, std::to_string(i) + ".1\tellipsis\t_\tVERB\t_\t_\t_\t_\t" +
                                     std::to_string(i) + ":conj\t_"});
  }
  return s;
}

long double oracle_cosine(std::span<const float> u, std::span<const float> v) {
  long double dot = 0, uu = 0, vv = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    dot += static_cast<long double>(u[i]) * v[i];
    uu += static_cast<long double>(u[i]) * u[i];
    vv += static_cast<long double>(v[i]) * v[i];
  }
  return dot / std::sqrt(uu * vv);
}

std::vector<OracleNeighbor> brute_force_knn(const RefBank& bank, std::string_view verb,
                                            std::span<const float> query, std::size_t k) {
  std::vector<OracleNeighbor> all;
  for (const auto& a : bank.arguments(verb))
    all.push_back({a.ordinal, a.label, oracle_cosine(query, a.vector)});
  std::sort(all.begin(), all.end(), [](const OracleNeighbor& a, const OracleNeighbor& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.ordinal < b.ordinal;
  });
  if (all.size() > k) all.resize(k);
  return all;
}

}  // namespace nomarg::testing
