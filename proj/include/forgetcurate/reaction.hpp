#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace forgetcurate::reaction {

// Reaction superclasses 0..11. Class 0 catches everything unrecognized,
// class 11 holds resolutions.
inline constexpr int kNumSuperclasses = 12;
inline constexpr int kUnrecognizedClass = 0;
inline constexpr int kResolutionsClass = 11;

// One preprocessed reaction: sorted unique precursors, single-fragment
// product, superclass label.
struct ReactionRecord {
  std::int64_t id = 0;
  std::vector<std::string> precursors;  // sorted ascending, no duplicates
  std::string product;                  // no '.' fragment separator
  int superclass = kUnrecognizedClass;  // 0..11
  std::string superclass_name;
};

// Normalized `sorted_precursors>>product` string; also the duplicate key.
std::string reaction_string(const ReactionRecord& record);

// Character-level token stream. `~` (fragment bond) is an ordinary
// single-character token. For reaction strings the `>>` separator is not a
// token; detokenize() re-inserts it.
struct TokenizedReaction {
  std::vector<std::string> source_tokens;
  std::vector<std::string> target_tokens;
  bool is_reaction = false;  // input contained ">>"

  std::string detokenize() const;
};

// One token per character. Throws Error(empty_input) on an empty string.
TokenizedReaction tokenize_smiles(std::string_view s);

// Sort ascending + drop duplicates. Throws Error(empty_precursor_set) on an
// empty list.
std::vector<std::string> normalize_precursors(std::vector<std::string> precursors);

// Heavy-atom count used by the largest-fragment rule:
//   - a bracket group [...] counts 1 unless its element is H;
//   - outside brackets B, C, N, O, P, S, F, Cl, Br, I count 1 each
//     (Cl/Br consumed greedily) and aromatic b, c, n, o, p, s count 1;
//   - everything else counts 0.
// Throws Error(malformed_smiles) on unbalanced brackets.
int count_heavy_atoms(std::string_view fragment);

// Largest `.`-fragment by heavy atoms, ties broken by the lexicographically
// smallest fragment. Single-fragment strings pass through unchanged.
std::string normalize_product(std::string_view product);

// Raw input line before filtering. `superclass` is empty when the label was
// missing or unparseable.
struct RawReaction {
  std::int64_t id = 0;
  std::string rxn;
  std::optional<int> superclass;
  std::string superclass_name;
};

struct FilterReport {
  std::size_t input = 0;
  std::size_t kept = 0;
  std::size_t duplicate = 0;
  std::size_t multi_product = 0;
  std::size_t purification = 0;
  std::size_t malformed = 0;
};

struct FilterResult {
  std::vector<ReactionRecord> records;
  FilterReport report;
};

// Applies the preprocessing rules in order: purification drop, rxn parse
// (exactly one ">>"), largest-fragment product selection, precursor
// normalization, unparseable class -> 0, then duplicate removal on the
// normalized reaction string. Malformed records are dropped and counted,
// never thrown.
FilterResult filter_dataset(std::span<const RawReaction> raw);

struct DatasetSplit {
  std::vector<std::int64_t> train_ids;
  std::vector<std::int64_t> valid_ids;
  std::vector<std::int64_t> test_ids;
  std::uint64_t seed = 0;
};

// Product-exclusive split: whole product groups are assigned to one split by
// a seeded shuffle until the record-count targets are met. Throws
// Error(too_few_products) when fewer than 3 distinct products exist.
DatasetSplit split_by_product(std::span<const ReactionRecord> records,
                              std::array<double, 3> fractions,
                              std::uint64_t seed);

}  // namespace forgetcurate::reaction
