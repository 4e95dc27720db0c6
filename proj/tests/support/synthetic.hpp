#pragma once

// Rule-generated reaction corpus for tests. Every clean record's product is
// a deterministic function of its core precursor, so a classifier can learn
// the rule and label noise becomes detectable through forgetting dynamics.

#include <cstdint>
#include <string>
#include <vector>

#include "forgetcurate/reaction.hpp"
#include "forgetcurate/rng.hpp"

namespace forgetcurate::testsupport {

inline const std::vector<std::string>& superclass_names() {
  static const std::vector<std::string> names = {
      "Unrecognized",     "Heteroatom Alkylation", "Acylation",
      "C-C Coupling",     "Heterocycle Formation", "Protections",
      "Deprotections",    "Reductions",            "Oxidations",
      "FGI",              "FG Addition",           "Resolutions"};
  return names;
}

struct SyntheticOptions {
  std::size_t n_records = 5000;
  int n_groups = 48;  // distinct products / rule groups
  std::uint64_t seed = 1;
};

// Product of rule group g: unique single-fragment string.
inline std::string group_product(int g) {
  std::string p = "O";
  p.append(static_cast<std::size_t>(g / 12 + 1), 'C');
  p += 'N';
  p.append(static_cast<std::size_t>(g % 12 + 1), 'C');
  return p;
}

// Core precursor that encodes the group: "Cl" + three base-4 digits over
// {C,N,O,S}. Its unigrams/bigrams carry the learnable signal.
inline std::string group_core(int g) {
  static const char digits[4] = {'C', 'N', 'O', 'S'};
  std::string core = "Cl";
  core += digits[(g / 16) % 4];
  core += digits[(g / 4) % 4];
  core += digits[g % 4];
  return core;
}

inline std::string spectator(int j) {
  static const char heteroatoms[3] = {'O', 'N', 'S'};
  std::string s(static_cast<std::size_t>(2 + j % 3), 'C');
  s += heteroatoms[j % 3];
  if (j % 5 == 0) s += "~[Na+]";  // exercise fragment-bond tokens
  return s;
}

inline std::vector<reaction::ReactionRecord> make_rule_dataset(
    const SyntheticOptions& options) {
  Rng rng(options.seed);
  std::vector<reaction::ReactionRecord> records;
  records.reserve(options.n_records);
  for (std::size_t i = 0; i < options.n_records; ++i) {
    const int g = static_cast<int>(rng.below(static_cast<std::uint64_t>(options.n_groups)));
    reaction::ReactionRecord record;
    record.id = static_cast<std::int64_t>(i);
    record.product = group_product(g);
    record.superclass = g % reaction::kNumSuperclasses;
    record.superclass_name = superclass_names()[static_cast<std::size_t>(record.superclass)];
    std::vector<std::string> precursors;
    precursors.push_back(group_core(g));
    const int n_spectators = 1 + static_cast<int>(rng.below(2));
    for (int s = 0; s < n_spectators; ++s)
      precursors.push_back(spectator(static_cast<int>(rng.below(24))));
    record.precursors = reaction::normalize_precursors(std::move(precursors));
    records.push_back(std::move(record));
  }
  return records;
}

// Raw JSONL-shaped view of the same corpus, for preprocess/CLI tests.
inline std::vector<reaction::RawReaction> to_raw(
    const std::vector<reaction::ReactionRecord>& records) {
  std::vector<reaction::RawReaction> raw;
  raw.reserve(records.size());
  for (const auto& record : records) {
    reaction::RawReaction r;
    r.id = record.id;
    r.rxn = reaction::reaction_string(record);
    r.superclass = record.superclass;
    r.superclass_name = record.superclass_name;
    raw.push_back(std::move(r));
  }
  return raw;
}

}  // namespace forgetcurate::testsupport
