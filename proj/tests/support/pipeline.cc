#include "pipeline.h"

#include <sstream>

#include "cli.h"

namespace nomarg::testing {

namespace {

constexpr std::string_view kByAgentConllu =
    "# sent_id = by\n"
    "1\tthe\tthe\tDET\tDT\t_\t2\tdet\t_\t_\n"
    "2\tdestruction\tdestruction\tNOUN\tNN\t_\t0\troot\t_\t_\n"
    "3\tof\tof\tADP\tIN\t_\t5\tcase\t_\t_\n"
    "4\tthe\tthe\tDET\tDT\t_\t5\tdet\t_\t_\n"
    "5\tcity\tcity\tNOUN\tNN\t_\t2\tnmod:of\t_\t_\n"
    "6\tby\tby\tADP\tIN\t_\t7\tcase\t_\t_\n"
    "7\tRome\tRome\tPROPN\tNNP\t_\t2\tnmod:by\t_\t_\n"
    "\n";

}  // namespace

CliRun run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  CliRun r;
  r.exit_code = cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

EnrichRun run_enrich(const TempDir& dir, std::string_view conllu, const RefBank& bank,
                     const EmbeddingStore& store, const std::vector<std::string>& extra) {
  write_file(dir.file("in.conllu"), conllu);
  write_file(dir.file("lex.json"), kDestroyLexiconJson);
  save_refbank(bank, dir.file("destroy.bank"));
  save_embeddings(store, dir.file("in.navf"), EmbeddingFormat::kNavf);
  std::vector<std::string> args = {"enrich",      "--conllu", dir.file("in.conllu"), "--lexicon",
                                   dir.file("lex.json"), "--bank", dir.file("destroy.bank"),
                                   "--embeddings", dir.file("in.navf"), "--method", "knn",
                                   "--k", "5", "--threshold", "0.48",
                                   "--out", dir.file("out.conllu"), "--jsonl", dir.file("out.jsonl")};
  args.insert(args.end(), extra.begin(), extra.end());
  EnrichRun run;
  run.cli = run_cli(args);
  if (run.cli.exit_code == 0) {
    run.conllu = read_file(dir.file("out.conllu"));
    run.jsonl = read_file(dir.file("out.jsonl"));
  }
  return run;
}

void write_synthetic_corpus(std::mt19937_64& rng, std::size_t n, const std::string& conllu_path,
                            const std::string& navf_path) {
  const Sentence templates[] = {parse_one(kDestructionConllu), parse_one(kShortDestructionConllu),
                                parse_one(kByAgentConllu), parse_one(kActiveConllu)};
  std::vector<Sentence> corpus;
  EmbeddingStore store(4);
  for (std::size_t i = 0; i < n; ++i) {
    Sentence s = templates[std::uniform_int_distribution<std::size_t>(0, 3)(rng)];
    s.sent_id = "syn" + std::to_string(i);
    s.comments = {"# sent_id = " + s.sent_id};
    EmbeddingRecord rec{s.sent_id, 4, {}};
    for (int t = 0; t < s.size(); ++t) {
      auto v = random_vector(rng, 4);
      rec.values.insert(rec.values.end(), v.begin(), v.end());
    }
    store.add(std::move(rec));
    corpus.push_back(std::move(s));
  }
  write_file(conllu_path, serialize_conllu(corpus));
  save_embeddings(store, navf_path, EmbeddingFormat::kNavf);
}

}  // namespace nomarg::testing
