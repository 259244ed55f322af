#include "nomarg/embedstore.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "binary_io.h"
#include "nomarg/error.h"

namespace nomarg {

namespace {

constexpr char kNavfMagic[4] = {'N', 'A', 'V', 'F'};
constexpr std::uint32_t kNavfVersion = 1;

}  // namespace

double cosine(std::span<const float> u, std::span<const float> v) {
  if (u.size() != v.size())
    throw DomainError("cosine of vectors with dims " + std::to_string(u.size()) + " and " +
                      std::to_string(v.size()));
  double dot = 0.0, uu = 0.0, vv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double a = u[i], b = v[i];
    dot += a * b;
    uu += a * a;
    vv += b * b;
  }
  if (uu == 0.0 || vv == 0.0) throw DomainError("cosine of a zero-norm vector");
  double c = dot / (std::sqrt(uu) * std::sqrt(vv));
  return std::clamp(c, -1.0, 1.0);
}

std::span<const float> EmbeddingRecord::row(int token) const {
  if (token < 1 || static_cast<std::size_t>(token) > n_tokens())
    throw LookupError("token " + std::to_string(token) + " out of range for '" + sent_id +
                      "' (" + std::to_string(n_tokens()) + " tokens)");
  return std::span<const float>(values).subspan(static_cast<std::size_t>(token - 1) * dim, dim);
}

void EmbeddingStore::add(EmbeddingRecord record) {
  if (record.dim == 0) throw FormatError("record '" + record.sent_id + "' has dim 0");
  if (record.values.size() % record.dim != 0)
    throw FormatError("record '" + record.sent_id + "' is not a whole number of rows");
  if (dim_ == 0) dim_ = record.dim;
  if (record.dim != dim_)
    throw FormatError("record '" + record.sent_id + "' has dim " + std::to_string(record.dim) +
                      ", store has " + std::to_string(dim_));
  if (index_.count(record.sent_id))
    throw FormatError("duplicate embedding record '" + record.sent_id + "'");
  index_.emplace(record.sent_id, records_.size());
  records_.push_back(std::move(record));
}

bool EmbeddingStore::contains(std::string_view sent_id) const {
  return index_.count(std::string(sent_id)) > 0;
}

const EmbeddingRecord& EmbeddingStore::record(std::string_view sent_id) const {
  auto it = index_.find(std::string(sent_id));
  if (it == index_.end()) throw LookupError("no embeddings for sentence '" + std::string(sent_id) + "'");
  return records_[it->second];
}

std::span<const float> EmbeddingStore::vector_for(std::string_view sent_id, int token) const {
  return record(sent_id).row(token);
}

void write_navf(const EmbeddingStore& store, std::ostream& out) {
  internal::put_bytes(out, std::string_view(kNavfMagic, 4));
  internal::put_u32(out, kNavfVersion);
  internal::put_u32(out, store.dim());
  for (const auto& r : store.records()) {
    internal::put_string(out, r.sent_id);
    internal::put_u32(out, static_cast<std::uint32_t>(r.n_tokens()));
    internal::put_floats(out, r.values);
  }
}

EmbeddingStore read_navf(std::istream& in) {
  char magic[4];
  internal::get_exact(in, magic, 4, "NAVF magic");
  if (std::string_view(magic, 4) != std::string_view(kNavfMagic, 4))
    throw FormatError("not a NAVF file (bad magic)");
  std::uint32_t version = internal::get_u32(in, "NAVF version");
  if (version != kNavfVersion)
    throw FormatError("unsupported NAVF version " + std::to_string(version));
  std::uint32_t dim = internal::get_u32(in, "NAVF dim");
  if (dim == 0) throw FormatError("NAVF dim is 0");

  EmbeddingStore store(dim);
  while (!internal::at_eof(in)) {
    EmbeddingRecord r;
    r.sent_id = internal::get_string(in, "NAVF sent_id");
    r.dim = dim;
    std::uint32_t n = internal::get_u32(in, "NAVF token count");
    if (static_cast<std::uint64_t>(n) * dim > (1ull << 31))
      throw FormatError("implausible NAVF record size for '" + r.sent_id + "'");
    r.values.resize(static_cast<std::size_t>(n) * dim);
    internal::get_floats(in, r.values, "NAVF vectors");
    store.add(std::move(r));
  }
  return store;
}

void write_embeddings_jsonl(const EmbeddingStore& store, std::ostream& out) {
  for (const auto& r : store.records()) {
    nlohmann::ordered_json row;
    row["sent_id"] = r.sent_id;
    row["dim"] = r.dim;
    nlohmann::ordered_json vectors = nlohmann::ordered_json::array();
    for (std::size_t t = 1; t <= r.n_tokens(); ++t) {
      nlohmann::ordered_json v = nlohmann::ordered_json::array();
      for (float f : r.row(static_cast<int>(t))) v.push_back(static_cast<double>(f));
      vectors.push_back(std::move(v));
    }
    row["vectors"] = std::move(vectors);
    out << row.dump() << '\n';
  }
}

EmbeddingStore read_embeddings_jsonl(std::istream& in) {
  EmbeddingStore store;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    EmbeddingRecord r;
    try {
      auto row = nlohmann::json::parse(line);
      r.sent_id = row.at("sent_id").get<std::string>();
      r.dim = row.at("dim").get<std::uint32_t>();
      for (const auto& vec : row.at("vectors")) {
        if (vec.size() != r.dim)
          throw FormatError(number, "row length " + std::to_string(vec.size()) +
                                        " does not match dim " + std::to_string(r.dim));
        for (const auto& x : vec) r.values.push_back(static_cast<float>(x.get<double>()));
      }
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(number, std::string("bad embeddings row: ") + e.what());
    }
    try {
      store.add(std::move(r));
    } catch (const FormatError& e) {
      throw FormatError(number, e.what());
    }
  }
  return store;
}

EmbeddingStore load_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  char head[4] = {};
  in.read(head, 4);
  const bool navf = in.gcount() == 4 && std::string_view(head, 4) == std::string_view(kNavfMagic, 4);
  in.clear();
  in.seekg(0);
  return navf ? read_navf(in) : read_embeddings_jsonl(in);
}

void save_embeddings(const EmbeddingStore& store, const std::string& path, EmbeddingFormat format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  if (format == EmbeddingFormat::kNavf) write_navf(store, out);
  else write_embeddings_jsonl(store, out);
}

void StaticTable::add(std::string word, std::vector<float> vector) {
  if (dim_ == 0) dim_ = static_cast<std::uint32_t>(vector.size());
  if (vector.size() != dim_ || dim_ == 0)
    throw FormatError("static vector for '" + word + "' has dim " +
                      std::to_string(vector.size()) + ", table has " + std::to_string(dim_));
  table_.insert_or_assign(std::move(word), std::move(vector));
}

const std::vector<float>* StaticTable::find(std::string_view word) const {
  auto it = table_.find(std::string(word));
  return it == table_.end() ? nullptr : &it->second;
}

StaticTable read_static_table(std::istream& in) {
  std::string line;
  std::size_t number = 1;
  if (!std::getline(in, line)) throw FormatError(1, "missing '<count> <dim>' header");
  std::istringstream header(line);
  std::size_t count = 0;
  std::uint32_t dim = 0;
  if (!(header >> count >> dim) || dim == 0) throw FormatError(1, "bad '<count> <dim>' header");

  StaticTable table(dim);
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t sp = line.find(' ');
    if (sp == std::string::npos || sp == 0) throw FormatError(number, "expected 'word f1 ... fdim'");
    std::string word = line.substr(0, sp);
    std::vector<float> v;
    v.reserve(dim);
    const char* p = line.data() + sp;
    const char* end = line.data() + line.size();
    while (p < end) {
      while (p < end && *p == ' ') ++p;
      if (p == end) break;
      float f = 0;
      auto [next, ec] = std::from_chars(p, end, f);
      if (ec != std::errc()) throw FormatError(number, "bad float in vector for '" + word + "'");
      v.push_back(f);
      p = next;
    }
    if (v.size() != dim)
      throw FormatError(number, "vector for '" + word + "' has " + std::to_string(v.size()) +
                                    " components, expected " + std::to_string(dim));
    table.add(std::move(word), std::move(v));
  }
  if (table.size() != count)
    throw FormatError("static table header promises " + std::to_string(count) + " rows, found " +
                      std::to_string(table.size()));
  return table;
}

StaticTable load_static_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_static_table(in);
}

std::span<const float> static_vector(const StaticTable& table, const Token& token) {
  if (const auto* v = table.find(token.form)) return *v;
  if (const auto* v = table.find(to_lower_ascii(token.form))) return *v;
  if (const auto* v = table.find(token.lemma)) return *v;
  throw OutOfVocabularyError("'" + token.form + "' (lemma '" + token.lemma +
                             "') is not in the static table");
}

EmbeddingStore embed_with_static_table(const StaticTable& table, std::span<const Sentence> sentences) {
  EmbeddingStore store(table.dim());
  for (const Sentence& s : sentences) {
    EmbeddingRecord r{s.sent_id, table.dim(), {}};
    r.values.reserve(static_cast<std::size_t>(s.size()) * table.dim());
    for (const Token& t : s.tokens) {
      try {
        auto v = static_vector(table, t);
        r.values.insert(r.values.end(), v.begin(), v.end());
      } catch (const OutOfVocabularyError&) {
        r.values.insert(r.values.end(), table.dim(), 0.0f);
      }
    }
    store.add(std::move(r));
  }
  return store;
}

}  // namespace nomarg
