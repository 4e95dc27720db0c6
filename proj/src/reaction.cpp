#include "forgetcurate/reaction.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "forgetcurate/errors.hpp"
#include "forgetcurate/rng.hpp"

namespace forgetcurate::reaction {

namespace {

std::vector<std::string> split_on(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      parts.emplace_back(s.substr(start));
      return parts;
    }
    parts.emplace_back(s.substr(start, pos - start));
    start = pos + 1;
  }
}

bool is_organic_upper(char c) {
  return c == 'B' || c == 'C' || c == 'N' || c == 'O' || c == 'P' ||
         c == 'S' || c == 'F' || c == 'I';
}

bool is_aromatic_lower(char c) {
  return c == 'b' || c == 'c' || c == 'n' || c == 'o' || c == 'p' || c == 's';
}

}  // namespace

std::string reaction_string(const ReactionRecord& record) {
  std::string out;
  for (std::size_t i = 0; i < record.precursors.size(); ++i) {
    if (i > 0) out += '.';
    out += record.precursors[i];
  }
  out += ">>";
  out += record.product;
  return out;
}

std::string TokenizedReaction::detokenize() const {
  std::string out;
  for (const auto& t : source_tokens) out += t;
  if (is_reaction) out += ">>";
  for (const auto& t : target_tokens) out += t;
  return out;
}

TokenizedReaction tokenize_smiles(std::string_view s) {
  if (s.empty()) fail(ErrorKind::empty_input, "cannot tokenize an empty string");
  TokenizedReaction out;
  std::size_t sep = s.find(">>");
  std::string_view source = s;
  std::string_view target;
  if (sep != std::string_view::npos) {
    out.is_reaction = true;
    source = s.substr(0, sep);
    target = s.substr(sep + 2);
  }
  out.source_tokens.reserve(source.size());
  for (char c : source) out.source_tokens.emplace_back(1, c);
  out.target_tokens.reserve(target.size());
  for (char c : target) out.target_tokens.emplace_back(1, c);
  return out;
}

std::vector<std::string> normalize_precursors(std::vector<std::string> precursors) {
  if (precursors.empty())
    fail(ErrorKind::empty_precursor_set, "precursor list is empty");
  std::sort(precursors.begin(), precursors.end());
  precursors.erase(std::unique(precursors.begin(), precursors.end()), precursors.end());
  return precursors;
}

int count_heavy_atoms(std::string_view fragment) {
  int count = 0;
  std::size_t i = 0;
  const std::size_t n = fragment.size();
  while (i < n) {
    char c = fragment[i];
    if (c == '[') {
      std::size_t close = i + 1;
      while (close < n && fragment[close] != ']') {
        if (fragment[close] == '[')
          fail(ErrorKind::malformed_smiles, "nested '[' in bracket atom");
        ++close;
      }
      if (close == n)
        fail(ErrorKind::malformed_smiles, "unbalanced '[' in fragment");
      std::string_view body = fragment.substr(i + 1, close - i - 1);
      // skip isotope digits, then read the element symbol
      std::size_t p = 0;
      while (p < body.size() && body[p] >= '0' && body[p] <= '9') ++p;
      bool is_hydrogen = false;
      if (p < body.size() && body[p] == 'H') {
        // element H only when not a two-letter symbol like Hg/He
        is_hydrogen = p + 1 >= body.size() ||
                      !(body[p + 1] >= 'a' && body[p + 1] <= 'z');
      }
      if (!is_hydrogen) ++count;
      i = close + 1;
      continue;
    }
    if (c == ']') fail(ErrorKind::malformed_smiles, "unbalanced ']' in fragment");
    if (c == 'C' && i + 1 < n && fragment[i + 1] == 'l') {
      ++count;
      i += 2;
      continue;
    }
    if (c == 'B' && i + 1 < n && fragment[i + 1] == 'r') {
      ++count;
      i += 2;
      continue;
    }
    if (is_organic_upper(c) || is_aromatic_lower(c)) ++count;
    ++i;
  }
  return count;
}

std::string normalize_product(std::string_view product) {
  if (product.find('.') == std::string_view::npos) return std::string(product);
  std::vector<std::string> fragments = split_on(product, '.');
  std::string best;
  int best_atoms = -1;
  for (auto& frag : fragments) {
    int atoms = count_heavy_atoms(frag);
    if (atoms > best_atoms || (atoms == best_atoms && frag < best)) {
      best = frag;
      best_atoms = atoms;
    }
  }
  return best;
}

FilterResult filter_dataset(std::span<const RawReaction> raw) {
  FilterResult result;
  result.report.input = raw.size();
  std::unordered_set<std::string> seen;
  for (const RawReaction& in : raw) {
    if (in.superclass_name == "Purification") {
      ++result.report.purification;
      continue;
    }
    std::size_t sep = in.rxn.find(">>");
    if (sep == std::string::npos) {
      ++result.report.malformed;
      continue;
    }
    // a second ">>" means extra product entries
    if (in.rxn.find(">>", sep + 2) != std::string::npos) {
      ++result.report.multi_product;
      continue;
    }
    std::string_view rxn = in.rxn;
    std::string_view precursor_side = rxn.substr(0, sep);
    std::string_view product_side = rxn.substr(sep + 2);
    if (precursor_side.empty() || product_side.empty()) {
      ++result.report.malformed;
      continue;
    }

    ReactionRecord record;
    record.id = in.id;
    try {
      std::vector<std::string> fragments = split_on(product_side, '.');
      std::string best;
      int best_atoms = -1;
      bool bad = false;
      for (auto& frag : fragments) {
        if (frag.empty()) {
          bad = true;
          break;
        }
        int atoms = count_heavy_atoms(frag);
        if (atoms > best_atoms || (atoms == best_atoms && frag < best)) {
          best = std::move(frag);
          best_atoms = atoms;
        }
      }
      if (bad) {
        ++result.report.malformed;
        continue;
      }
      record.product = std::move(best);

      std::vector<std::string> precursors = split_on(precursor_side, '.');
      if (std::any_of(precursors.begin(), precursors.end(),
                      [](const std::string& p) { return p.empty(); })) {
        ++result.report.malformed;
        continue;
      }
      record.precursors = normalize_precursors(std::move(precursors));
    } catch (const Error&) {
      ++result.report.malformed;
      continue;
    }

    // unparseable or out-of-range labels collapse into class 0
    if (in.superclass && *in.superclass >= 0 && *in.superclass < kNumSuperclasses) {
      record.superclass = *in.superclass;
      record.superclass_name = in.superclass_name;
    } else {
      record.superclass = kUnrecognizedClass;
      record.superclass_name =
          in.superclass_name.empty() ? "Unrecognized" : in.superclass_name;
    }

    std::string key = reaction_string(record);
    if (!seen.insert(std::move(key)).second) {
      ++result.report.duplicate;
      continue;
    }
    result.records.push_back(std::move(record));
  }
  result.report.kept = result.records.size();
  return result;
}

DatasetSplit split_by_product(std::span<const ReactionRecord> records,
                              std::array<double, 3> fractions,
                              std::uint64_t seed) {
  double total = fractions[0] + fractions[1] + fractions[2];
  if (std::abs(total - 1.0) > 1e-9)
    fail(ErrorKind::parameter_error, "split fractions must sum to 1");

  // group ids by product, groups ordered by first occurrence
  std::vector<std::vector<std::int64_t>> groups;
  std::map<std::string, std::size_t> index_of;
  for (const auto& record : records) {
    auto [it, inserted] = index_of.try_emplace(record.product, groups.size());
    if (inserted) groups.emplace_back();
    groups[it->second].push_back(record.id);
  }
  if (groups.size() < 3)
    fail(ErrorKind::too_few_products,
         "product-exclusive split needs at least 3 distinct products, got " +
             std::to_string(groups.size()));

  Rng rng(seed);
  rng.shuffle(groups);

  const double n = static_cast<double>(records.size());
  const double train_target = fractions[0] * n;
  const double valid_target = fractions[1] * n;

  DatasetSplit split;
  split.seed = seed;
  std::size_t train_count = 0, valid_count = 0;
  for (const auto& group : groups) {
    std::vector<std::int64_t>* dest;
    if (static_cast<double>(train_count) < train_target) {
      dest = &split.train_ids;
      train_count += group.size();
    } else if (static_cast<double>(valid_count) < valid_target) {
      dest = &split.valid_ids;
      valid_count += group.size();
    } else {
      dest = &split.test_ids;
    }
    dest->insert(dest->end(), group.begin(), group.end());
  }
  std::sort(split.train_ids.begin(), split.train_ids.end());
  std::sort(split.valid_ids.begin(), split.valid_ids.end());
  std::sort(split.test_ids.begin(), split.test_ids.end());
  return split;
}

}  // namespace forgetcurate::reaction
