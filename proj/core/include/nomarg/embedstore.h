#ifndef NOMARG_EMBEDSTORE_H_
#define NOMARG_EMBEDSTORE_H_

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nomarg/treebank.h"

namespace nomarg {

// Cosine similarity with 64-bit accumulation. Throws DomainError on a
// zero-norm input or mismatched dimensions.
double cosine(std::span<const float> u, std::span<const float> v);

// Per-token vectors for one sentence, row-major n_tokens x dim.
struct EmbeddingRecord {
  std::string sent_id;
  std::uint32_t dim = 0;
  std::vector<float> values;

  std::size_t n_tokens() const { return dim ? values.size() / dim : 0; }
  // 1-based token row.
  std::span<const float> row(int token) const;

  bool operator==(const EmbeddingRecord&) const = default;
};

enum class EmbeddingFormat { kNavf, kJsonl };

class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(std::uint32_t dim) : dim_(dim) {}

  // Throws FormatError on a dim mismatch or a duplicate sent_id.
  void add(EmbeddingRecord record);

  std::uint32_t dim() const { return dim_; }
  std::size_t size() const { return records_.size(); }
  const std::vector<EmbeddingRecord>& records() const { return records_; }

  bool contains(std::string_view sent_id) const;
  const EmbeddingRecord& record(std::string_view sent_id) const;

  // Row for a 1-based token index; throws LookupError for unknown ids or
  // out-of-range indices.
  std::span<const float> vector_for(std::string_view sent_id, int token) const;

 private:
  std::uint32_t dim_ = 0;
  std::vector<EmbeddingRecord> records_;
  std::unordered_map<std::string, std::size_t> index_;
};

// NAVF: "NAVF", u32 version (1), u32 dim, then per record
// [u32 id_len, id bytes, u32 n_tokens, n_tokens*dim f32], all little-endian.
void write_navf(const EmbeddingStore& store, std::ostream& out);
EmbeddingStore read_navf(std::istream& in);

// One {"sent_id":s,"dim":n,"vectors":[[...],...]} object per line.
void write_embeddings_jsonl(const EmbeddingStore& store, std::ostream& out);
EmbeddingStore read_embeddings_jsonl(std::istream& in);

// Detects the format from the leading magic bytes.
EmbeddingStore load_embeddings(const std::string& path);
void save_embeddings(const EmbeddingStore& store, const std::string& path, EmbeddingFormat format);

// Static (uncontextualized) word vectors.
class StaticTable {
 public:
  explicit StaticTable(std::uint32_t dim = 0) : dim_(dim) {}

  void add(std::string word, std::vector<float> vector);
  std::uint32_t dim() const { return dim_; }
  std::size_t size() const { return table_.size(); }
  const std::vector<float>* find(std::string_view word) const;

 private:
  std::uint32_t dim_;
  std::unordered_map<std::string, std::vector<float>> table_;
};

// Text format: "<count> <dim>" then "word f1 ... fdim" per line.
StaticTable read_static_table(std::istream& in);
StaticTable load_static_table(const std::string& path);

// Looks up the surface form, then its lowercase, then the lemma. Throws
// OutOfVocabularyError when all three miss.
std::span<const float> static_vector(const StaticTable& table, const Token& token);

// Per-token store built from a static table; out-of-vocabulary rows are zero.
EmbeddingStore embed_with_static_table(const StaticTable& table, std::span<const Sentence> sentences);

}  // namespace nomarg

#endif  // NOMARG_EMBEDSTORE_H_
