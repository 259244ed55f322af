#include "nomarg/refbank.h"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <unordered_map>

#include "binary_io.h"
#include "nomarg/error.h"

namespace nomarg {

namespace {

constexpr char kBankMagic[4] = {'N', 'A', 'R', 'B'};
constexpr std::uint32_t kBankVersion = 1;

bool is_prepositional_nmod(std::string_view rel) {
  if (relation_base(rel) != "nmod") return false;
  std::string_view sub = relation_subtype(rel);
  return !sub.empty() && sub != "poss" && sub != "tmod" && sub != "npmod";
}

class StringTable {
 public:
  std::uint32_t intern(const std::string& s) {
    auto [it, inserted] = index_.emplace(s, static_cast<std::uint32_t>(strings_.size()));
    if (inserted) strings_.push_back(s);
    return it->second;
  }
  const std::vector<std::string>& strings() const { return strings_; }

 private:
  std::unordered_map<std::string, std::uint32_t> index_;
  std::vector<std::string> strings_;
};

}  // namespace

const RefArgument& RefBank::add(std::string verb, std::string label, std::vector<float> vector,
                                ArgumentSource source) {
  if (dim_ == 0) dim_ = static_cast<std::uint32_t>(vector.size());
  if (vector.size() != dim_)
    throw DomainError("reference vector has dim " + std::to_string(vector.size()) +
                      ", bank has " + std::to_string(dim_));
  if (std::all_of(vector.begin(), vector.end(), [](float f) { return f == 0.0f; }))
    throw DomainError("zero-norm reference vector from '" + source.sent_id + "'");
  auto& list = by_verb_[verb];
  RefArgument arg{verb, std::move(label), std::move(vector), std::move(source),
                  static_cast<std::uint32_t>(list.size())};
  list.push_back(std::move(arg));
  return list.back();
}

std::size_t RefBank::size() const {
  std::size_t n = 0;
  for (const auto& [_, list] : by_verb_) n += list.size();
  return n;
}

std::span<const RefArgument> RefBank::arguments(std::string_view verb) const {
  auto it = by_verb_.find(verb);
  if (it == by_verb_.end()) return {};
  return it->second;
}

std::vector<std::string> RefBank::verbs() const {
  std::vector<std::string> out;
  for (const auto& [verb, _] : by_verb_) out.push_back(verb);
  return out;
}

std::uint32_t RefBank::sentence_count(std::string_view verb) const {
  auto it = sentences_.find(verb);
  return it == sentences_.end() ? 0 : it->second;
}

void RefBank::set_sentence_count(const std::string& verb, std::uint32_t count) {
  by_verb_[verb];
  sentences_[verb] = count;
}

void RefBank::merge(const RefBank& other) {
  if (dim_ == 0) dim_ = other.dim_;
  if (other.dim_ != 0 && other.dim_ != dim_)
    throw Error("cannot merge banks with dims " + std::to_string(dim_) + " and " +
                std::to_string(other.dim_));
  for (const auto& [verb, list] : other.by_verb_) {
    if (by_verb_.count(verb)) throw Error("verb '" + verb + "' present in two banks");
    by_verb_[verb] = list;
    sentences_[verb] = other.sentence_count(verb);
  }
}

std::vector<VerbalArgument> extract_verbal_arguments(const Sentence& sentence, int verb) {
  std::vector<int> children = children_of(sentence, verb);
  const bool passive = std::any_of(children.begin(), children.end(), [&](int c) {
    const std::string& rel = sentence.token(c).deprel;
    return rel == "nsubjpass" || rel == "auxpass";
  });

  std::vector<VerbalArgument> out;
  auto take = [&](std::string label, int head) {
    for (const auto& a : out)
      if (a.label == label) return;
    out.push_back({std::move(label), head});
  };
  for (int c : children) {
    const std::string& rel = sentence.token(c).deprel;
    if (passive) {
      if (rel == "nsubjpass") take("dobj", c);
      else if (rel == "nmod:by") take("nsubj", c);
      else if (is_prepositional_nmod(rel)) take(rel, c);
    } else {
      if (rel == "nsubj" || rel == "dobj" || is_prepositional_nmod(rel)) take(rel, c);
    }
  }
  return out;
}

RefBank build_refbank(std::span<const Sentence> corpus, const std::set<std::string>& verbs,
                      const EmbeddingStore& store, std::uint32_t cap) {
  RefBank bank(store.dim(), cap);
  std::map<std::string, std::uint32_t> contributed;
  for (const auto& v : verbs) {
    contributed[v] = 0;
    bank.set_sentence_count(v, 0);
  }

  for (const Sentence& s : corpus) {
    // lemma -> arguments from all occurrences of that verb in the sentence
    std::map<std::string, std::vector<VerbalArgument>> found;
    for (const Token& t : s.tokens) {
      if (t.upos != "VERB") continue;
      std::string lemma = to_lower_ascii(t.lemma);
      auto it = contributed.find(lemma);
      if (it == contributed.end() || it->second >= cap) continue;
      auto args = extract_verbal_arguments(s, t.id);
      auto& acc = found[lemma];
      acc.insert(acc.end(), args.begin(), args.end());
    }
    for (auto& [lemma, args] : found) {
      if (args.empty()) continue;
      std::stable_sort(args.begin(), args.end(),
                       [](const VerbalArgument& a, const VerbalArgument& b) { return a.head < b.head; });
      if (!store.contains(s.sent_id))
        throw BuildError("no embeddings for reference sentence '" + s.sent_id + "'");
      const EmbeddingRecord& rec = store.record(s.sent_id);
      if (rec.n_tokens() != static_cast<std::size_t>(s.size()))
        throw BuildError("embeddings for '" + s.sent_id + "' have " +
                         std::to_string(rec.n_tokens()) + " rows, sentence has " +
                         std::to_string(s.size()) + " tokens");
      std::set<std::string> seen;
      bool stored = false;
      for (const auto& a : args) {
        if (!seen.insert(a.label).second) continue;
        auto row = rec.row(a.head);
        if (std::all_of(row.begin(), row.end(), [](float f) { return f == 0.0f; })) continue;
        bank.add(lemma, a.label, std::vector<float>(row.begin(), row.end()), {s.sent_id, a.head});
        stored = true;
      }
      if (stored) bank.set_sentence_count(lemma, ++contributed[lemma]);
    }
  }
  return bank;
}

void write_refbank(const RefBank& bank, std::ostream& out) {
  StringTable strings;
  const auto verbs = bank.verbs();
  for (const auto& verb : verbs) {
    strings.intern(verb);
    for (const auto& a : bank.arguments(verb)) {
      strings.intern(a.label);
      strings.intern(a.source.sent_id);
    }
  }

  internal::put_bytes(out, std::string_view(kBankMagic, 4));
  internal::put_u32(out, kBankVersion);
  internal::put_u32(out, bank.dim());
  internal::put_u32(out, bank.cap());
  internal::put_u32(out, static_cast<std::uint32_t>(strings.strings().size()));
  for (const auto& s : strings.strings()) internal::put_string(out, s);
  internal::put_u32(out, static_cast<std::uint32_t>(verbs.size()));
  for (const auto& verb : verbs) {
    auto args = bank.arguments(verb);
    internal::put_u32(out, strings.intern(verb));
    internal::put_u32(out, bank.sentence_count(verb));
    internal::put_u32(out, static_cast<std::uint32_t>(args.size()));
    for (const auto& a : args) {
      internal::put_u32(out, strings.intern(a.label));
      internal::put_u32(out, strings.intern(a.source.sent_id));
      internal::put_u32(out, static_cast<std::uint32_t>(a.source.token));
      internal::put_u32(out, a.ordinal);
      internal::put_floats(out, a.vector);
    }
  }
}

RefBank read_refbank(std::istream& in) {
  char magic[4];
  internal::get_exact(in, magic, 4, "bank magic");
  if (std::string_view(magic, 4) != std::string_view(kBankMagic, 4))
    throw FormatError("not a reference bank file (bad magic)");
  std::uint32_t version = internal::get_u32(in, "bank version");
  if (version != kBankVersion)
    throw FormatError("unsupported bank version " + std::to_string(version));
  std::uint32_t dim = internal::get_u32(in, "bank dim");
  std::uint32_t cap = internal::get_u32(in, "bank cap");

  std::uint32_t n_strings = internal::get_u32(in, "string table size");
  std::vector<std::string> strings;
  for (std::uint32_t i = 0; i < n_strings; ++i) {
    strings.push_back(internal::get_string(in, "string table"));
  }
  auto str = [&](std::uint32_t idx) -> const std::string& {
    if (idx >= strings.size()) throw FormatError("string index out of range");
    return strings[idx];
  };

  RefBank bank(dim, cap);
  std::uint32_t n_verbs = internal::get_u32(in, "verb count");
  for (std::uint32_t v = 0; v < n_verbs; ++v) {
    const std::string verb = str(internal::get_u32(in, "verb name"));
    std::uint32_t sentences = internal::get_u32(in, "sentence count");
    std::uint32_t n_args = internal::get_u32(in, "argument count");
    bank.set_sentence_count(verb, sentences);
    for (std::uint32_t i = 0; i < n_args; ++i) {
      std::string label = str(internal::get_u32(in, "argument label"));
      std::string sent_id = str(internal::get_u32(in, "argument source"));
      auto token = static_cast<int>(internal::get_u32(in, "argument token"));
      std::uint32_t ordinal = internal::get_u32(in, "argument ordinal");
      if (ordinal != i) throw FormatError("non-dense ordinal for verb '" + verb + "'");
      std::vector<float> vec(dim);
      internal::get_floats(in, vec, "argument vector");
      try {
        bank.add(verb, std::move(label), std::move(vec), {std::move(sent_id), token});
      } catch (const DomainError& e) {
        throw FormatError(e.what());
      }
    }
  }
  if (!internal::at_eof(in)) throw FormatError("trailing bytes after bank payload");
  return bank;
}

void save_refbank(const RefBank& bank, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  write_refbank(bank, out);
}

RefBank load_refbank(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_refbank(in);
}

std::vector<Neighbor> query_knn(const RefBank& bank, std::string_view verb,
                                std::span<const float> query, std::size_t k) {
  if (k == 0) throw Error("k must be at least 1");
  if (bank.dim() != 0 && query.size() != bank.dim())
    throw DomainError("query has dim " + std::to_string(query.size()) + ", bank has " +
                      std::to_string(bank.dim()));
  if (std::all_of(query.begin(), query.end(), [](float f) { return f == 0.0f; }))
    throw DomainError("zero-norm query vector");

  auto args = bank.arguments(verb);
  std::vector<Neighbor> all;
  all.reserve(args.size());
  for (const auto& a : args) all.push_back({&a, cosine(query, a.vector)});

  auto better = [](const Neighbor& x, const Neighbor& y) {
    if (x.score != y.score) return x.score > y.score;
    return x.argument->ordinal < y.argument->ordinal;
  };
  const std::size_t n = std::min(k, all.size());
  std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n), all.end(), better);
  all.resize(n);
  return all;
}

std::map<std::string, std::vector<float>> label_centroids(const RefBank& bank,
                                                          std::string_view verb) {
  std::map<std::string, std::pair<std::vector<double>, std::size_t>> sums;
  for (const auto& a : bank.arguments(verb)) {
    auto& [acc, count] = sums[a.label];
    if (acc.empty()) acc.assign(a.vector.size(), 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += a.vector[i];
    ++count;
  }
  std::map<std::string, std::vector<float>> out;
  for (const auto& [label, entry] : sums) {
    const auto& [acc, count] = entry;
    std::vector<float> mean(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i)
      mean[i] = static_cast<float>(acc[i] / static_cast<double>(count));
    out.emplace(label, std::move(mean));
  }
  return out;
}

}  // namespace nomarg
