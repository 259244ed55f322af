#ifndef NOMARG_TESTS_FIXTURES_H_
#define NOMARG_TESTS_FIXTURES_H_

#include <cstdint>
#include <filesystem>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nomarg/embedstore.h"
#include "nomarg/lexicon.h"
#include "nomarg/refbank.h"
#include "nomarg/treebank.h"

namespace nomarg::testing {

// "Rome 's destruction of the city".
inline constexpr std::string_view kDestructionConllu =
    "# sent_id = rome1\n"
    "# text = Rome 's destruction of the city\n"
    "1\tRome\tRome\tPROPN\tNNP\t_\t3\tnmod:poss\t_\t_\n"
    "2\t's\t's\tPART\tPOS\t_\t1\tcase\t_\t_\n"
    "3\tdestruction\tdestruction\tNOUN\tNN\t_\t0\troot\t_\t_\n"
    "4\tof\tof\tADP\tIN\t_\t6\tcase\t_\t_\n"
    "5\tthe\tthe\tDET\tDT\t_\t6\tdet\t_\t_\n"
    "6\tcity\tcity\tNOUN\tNN\t_\t3\tnmod:of\t_\t_\n"
    "\n";

// "Rome 's destruction".
inline constexpr std::string_view kShortDestructionConllu =
    "# sent_id = short\n"
    "1\tRome\tRome\tPROPN\tNNP\t_\t3\tnmod:poss\t_\t_\n"
    "2\t's\t's\tPART\tPOS\t_\t1\tcase\t_\t_\n"
    "3\tdestruction\tdestruction\tNOUN\tNN\t_\t0\troot\t_\t_\n"
    "\n";

// "Rome destroyed the city".
inline constexpr std::string_view kActiveConllu =
    "# sent_id = active\n"
    "1\tRome\tRome\tPROPN\tNNP\t_\t2\tnsubj\t_\t_\n"
    "2\tdestroyed\tdestroy\tVERB\tVBD\t_\t0\troot\t_\t_\n"
    "3\tthe\tthe\tDET\tDT\t_\t4\tdet\t_\t_\n"
    "4\tcity\tcity\tNOUN\tNN\t_\t2\tdobj\t_\t_\n"
    "\n";

// "The city was destroyed by Rome".
inline constexpr std::string_view kPassiveConllu =
    "# sent_id = passive\n"
    "1\tThe\tthe\tDET\tDT\t_\t2\tdet\t_\t_\n"
    "2\tcity\tcity\tNOUN\tNN\t_\t4\tnsubjpass\t_\t_\n"
    "3\twas\tbe\tAUX\tVBD\t_\t4\tauxpass\t_\t_\n"
    "4\tdestroyed\tdestroy\tVERB\tVBN\t_\t0\troot\t_\t_\n"
    "5\tby\tby\tADP\tIN\t_\t6\tcase\t_\t_\n"
    "6\tRome\tRome\tPROPN\tNNP\t_\t4\tnmod:by\t_\t_\n"
    "\n";

inline constexpr std::string_view kDestroyLexiconJson = R"({"nouns":[
  {"noun":"destruction","verb":"destroy","patterns":[
    {"constraints":[{"rel":"nmod:poss","role":"SUBJECT"},{"rel":"nmod:of","role":"OBJECT"}]}]}]})";

Sentence parse_one(std::string_view conllu);

// Six synthetic destroy references in 4 dimensions: agents near e1,
// patients near e2.
RefBank agent_bank();
// Four patients and two agents; the patients sit near the vector
// short_destruction_embeddings() gives "Rome".
RefBank patient_bank();

// Contextual vectors for kDestructionConllu: Rome near e1, city near e2.
EmbeddingRecord destruction_embeddings();
// Vectors for kShortDestructionConllu with a patient-like "Rome".
EmbeddingRecord short_destruction_embeddings();

// The five-vector bank {nsubj:[1,0],[0.9,0.1]; dobj:[0,1],[0.1,0.9],[0.5,0.5]}.
RefBank five_vector_bank();

class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string file(std::string_view name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

// ---------------------------------------------------------------------------
// Random generators

std::vector<float> random_vector(std::mt19937_64& rng, std::size_t dim);

// `n` arguments of `verb` with labels drawn from `labels`; roughly one in
// eight vectors repeats an earlier one to exercise ties.
RefBank random_bank(std::mt19937_64& rng, std::uint32_t dim, std::size_t n,
                    const std::vector<std::string>& labels, const std::string& verb = "v");

// A valid sentence with random tree shape, forms, DEPS, MISC, comments and
// multiword-token lines.
Sentence random_sentence(std::mt19937_64& rng, const std::string& sent_id);

// ---------------------------------------------------------------------------
// Oracles

long double oracle_cosine(std::span<const float> u, std::span<const float> v);

struct OracleNeighbor {
  std::uint32_t ordinal = 0;
  std::string label;
  long double score = 0;
};

// Scores every argument in long double and sorts the whole list.
std::vector<OracleNeighbor> brute_force_knn(const RefBank& bank, std::string_view verb,
                                            std::span<const float> query, std::size_t k);

}  // namespace nomarg::testing

#endif  // NOMARG_TESTS_FIXTURES_H_
