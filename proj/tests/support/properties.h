#ifndef NOMARG_TESTS_PROPERTIES_H_
#define NOMARG_TESTS_PROPERTIES_H_

#include <cstdint>
#include <string>

namespace nomarg::testing {

struct PropertyResult {
  bool ok = true;
  std::size_t cases = 0;
  std::string failure;  // first counterexample
};

// query_knn against brute_force_knn on `banks` random banks cycling through
// dims 4, 64 and 1024 with up to 1000 vectors each.
PropertyResult check_knn_oracle(std::uint64_t seed, std::size_t banks = 200);

// The argmax label of both scorers, and the full labeling, are unchanged
// when every query vector is multiplied by a positive constant.
PropertyResult check_scale_invariance(std::uint64_t seed, std::size_t cases = 1000);

// For increasing thresholds a candidate's label either stays the same or
// becomes empty.
PropertyResult check_threshold_monotonicity(std::uint64_t seed, std::size_t cases = 1000);

// With uniqueness on, no label and no head repeats and every label is
// admitted by its candidate's relation.
PropertyResult check_uniqueness(std::uint64_t seed, std::size_t cases = 1000);

// Swapping twice restores the instance, on random token-level instances.
PropertyResult check_swap_involution(std::uint64_t seed, std::size_t cases = 1000);

// serialize(parse(serialize(s))) is byte-identical and parse restores s.
PropertyResult check_conllu_roundtrip(std::uint64_t seed, std::size_t cases = 500);

// NAVF write/read restores every float bit pattern and rewrites identical bytes.
PropertyResult check_navf_roundtrip(std::uint64_t seed, std::size_t cases = 200);

// Reference-bank write/read/write is byte-identical.
PropertyResult check_bank_roundtrip(std::uint64_t seed, std::size_t cases = 100);

}  // namespace nomarg::testing

#endif  // NOMARG_TESTS_PROPERTIES_H_
