#include "forgetcurate/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "forgetcurate/errors.hpp"

namespace forgetcurate::io {

namespace {

using nlohmann::json;

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io_error, "cannot open " + path.string());
  return in;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::io_error, "cannot write " + path.string());
  return out;
}

json parse_json(const std::string& text, const std::string& where) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) fail(ErrorKind::io_error, "invalid JSON in " + where);
  return j;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
}

long long parse_int(const std::string& s, const std::string& where) {
  long long v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    fail(ErrorKind::io_error, "bad integer '" + s + "' in " + where);
  return v;
}

double parse_double(const std::string& s, const std::string& where) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    fail(ErrorKind::io_error, "bad number '" + s + "' in " + where);
  }
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

std::vector<reaction::RawReaction> read_raw_reactions(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::vector<reaction::RawReaction> records;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = parse_json(line, path.string() + ":" + std::to_string(line_no));
    reaction::RawReaction record;
    if (!j.contains("id") || !j["id"].is_number_integer())
      fail(ErrorKind::io_error, "missing integer 'id' at " + path.string() + ":" +
                                    std::to_string(line_no));
    record.id = j["id"].get<std::int64_t>();
    record.rxn = j.value("rxn", std::string{});
    if (j.contains("class") && j["class"].is_number_integer())
      record.superclass = j["class"].get<int>();
    record.superclass_name = j.value("class_name", std::string{});
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<reaction::ReactionRecord> read_reactions(const std::filesystem::path& path) {
  std::vector<reaction::RawReaction> raw = read_raw_reactions(path);
  std::vector<reaction::ReactionRecord> records;
  records.reserve(raw.size());
  for (const auto& in : raw) {
    std::size_t sep = in.rxn.find(">>");
    if (sep == std::string::npos)
      fail(ErrorKind::io_error,
           "record " + std::to_string(in.id) + " in " + path.string() +
               " is not a preprocessed reaction (missing '>>')");
    reaction::ReactionRecord record;
    record.id = in.id;
    std::string precursor_side = in.rxn.substr(0, sep);
    record.product = in.rxn.substr(sep + 2);
    std::vector<std::string> precursors;
    std::size_t start = 0;
    while (true) {
      std::size_t pos = precursor_side.find('.', start);
      if (pos == std::string::npos) {
        precursors.push_back(precursor_side.substr(start));
        break;
      }
      precursors.push_back(precursor_side.substr(start, pos - start));
      start = pos + 1;
    }
    record.precursors = std::move(precursors);
    record.superclass = in.superclass.value_or(reaction::kUnrecognizedClass);
    record.superclass_name = in.superclass_name;
    records.push_back(std::move(record));
  }
  return records;
}

void write_reactions(const std::filesystem::path& path,
                     std::span<const reaction::ReactionRecord> records) {
  std::ofstream out = open_out(path);
  for (const auto& record : records) {
    json j;
    j["id"] = record.id;
    j["rxn"] = reaction::reaction_string(record);
    j["class"] = record.superclass;
    j["class_name"] = record.superclass_name;
    out << j.dump() << '\n';
  }
}

void write_filter_report(const std::filesystem::path& path,
                         const reaction::FilterReport& report) {
  json j;
  j["input"] = report.input;
  j["kept"] = report.kept;
  j["dropped"] = {{"duplicate", report.duplicate},
                  {"multi_product", report.multi_product},
                  {"purification", report.purification},
                  {"malformed", report.malformed}};
  write_text(path, j.dump(2) + "\n");
}

void write_correctness_csv(const std::filesystem::path& path,
                           const events::CorrectnessMatrix& matrix) {
  std::ofstream out = open_out(path);
  out << "example_id";
  for (std::size_t t = 0; t < matrix.epochs(); ++t) out << ",epoch_" << t;
  out << '\n';
  for (std::size_t i = 0; i < matrix.rows(); ++i) {
    out << matrix.example_ids()[i];
    for (std::uint8_t v : matrix.row(i)) out << ',' << static_cast<int>(v);
    out << '\n';
  }
}

void write_correctness_meta(const std::filesystem::path& csv_path,
                            const CorrectnessMeta& meta) {
  json j;
  j["kind"] = events::matrix_kind_name(meta.kind);
  j["model"] = meta.model;
  j["seed"] = meta.seed;
  write_text(csv_path.string() + ".meta.json", j.dump(2) + "\n");
}

events::CorrectnessMatrix read_correctness_csv(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorKind::io_error, "empty correctness file " + path.string());
  const std::size_t epochs = split_csv_line(line).size() - 1;
  if (epochs == 0) fail(ErrorKind::shape_error, "correctness file has no epoch columns");

  events::MatrixKind kind = events::MatrixKind::forward;
  if (auto meta = read_correctness_meta(path)) kind = meta->kind;

  std::vector<std::int64_t> ids;
  std::vector<std::uint8_t> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != epochs + 1)
      fail(ErrorKind::shape_error, "ragged row at " + where);
    ids.push_back(parse_int(fields[0], where));
    for (std::size_t t = 1; t < fields.size(); ++t) {
      long long v = parse_int(fields[t], where);
      if (v != 0 && v != 1) fail(ErrorKind::shape_error, "non-binary cell at " + where);
      values.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return events::CorrectnessMatrix(std::move(ids), epochs, std::move(values), kind);
}

std::optional<CorrectnessMeta> read_correctness_meta(
    const std::filesystem::path& csv_path) {
  const std::filesystem::path meta_path = csv_path.string() + ".meta.json";
  if (!std::filesystem::exists(meta_path)) return std::nullopt;
  json j = parse_json(read_text(meta_path), meta_path.string());
  CorrectnessMeta meta;
  meta.kind = events::matrix_kind_from_name(j.value("kind", "forward"));
  meta.model = j.value("model", std::string{});
  meta.seed = j.value("seed", std::uint64_t{0});
  return meta;
}

void write_profiles_csv(const std::filesystem::path& path,
                        std::span<const events::ForgettingProfile> profiles) {
  std::ofstream out = open_out(path);
  out << "example_id,n_forgetting,n_learning,learnt_ever,never_forgotten,final_state\n";
  for (const auto& p : profiles) {
    out << p.example_id << ',';
    if (p.never_learnt())
      out << "inf";
    else
      out << p.n_forgetting;
    out << ',' << p.n_learning << ',' << (p.learnt_ever ? 1 : 0) << ','
        << (p.never_forgotten ? 1 : 0) << ',' << static_cast<int>(p.final_state) << '\n';
  }
}

std::vector<events::ForgettingProfile> read_profiles_csv(
    const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorKind::io_error, "empty profile file " + path.string());
  std::vector<events::ForgettingProfile> profiles;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 6) fail(ErrorKind::io_error, "bad profile row at " + where);
    events::ForgettingProfile p;
    p.example_id = parse_int(fields[0], where);
    if (fields[1] == "inf") {
      p.learnt_ever = false;
      p.n_forgetting = 0;
    } else {
      p.learnt_ever = true;
      p.n_forgetting = static_cast<int>(parse_int(fields[1], where));
    }
    p.n_learning = static_cast<int>(parse_int(fields[2], where));
    const bool learnt_flag = parse_int(fields[3], where) != 0;
    if (learnt_flag != p.learnt_ever)
      fail(ErrorKind::io_error, "inconsistent learnt_ever flag at " + where);
    p.never_forgotten = parse_int(fields[4], where) != 0;
    p.final_state = static_cast<std::uint8_t>(parse_int(fields[5], where));
    profiles.push_back(p);
  }
  return profiles;
}

void write_confidences_csv(const std::filesystem::path& path,
                           std::span<const likelihood::ConfidenceRecord> records) {
  std::ofstream out = open_out(path);
  out << "example_id,superclass,confidence,correct\n";
  for (const auto& r : records) {
    out << r.example_id << ',' << r.superclass << ',' << format_double(r.confidence)
        << ',' << (r.correct ? 1 : 0) << '\n';
  }
}

std::vector<likelihood::ConfidenceRecord> read_confidences_csv(
    const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::string line;
  if (!std::getline(in, line))
    fail(ErrorKind::io_error, "empty confidence file " + path.string());
  std::vector<likelihood::ConfidenceRecord> records;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::string where = path.string() + ":" + std::to_string(line_no);
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != 4) fail(ErrorKind::io_error, "bad confidence row at " + where);
    likelihood::ConfidenceRecord r;
    r.example_id = parse_int(fields[0], where);
    r.superclass = static_cast<int>(parse_int(fields[1], where));
    r.confidence = parse_double(fields[2], where);
    r.correct = parse_int(fields[3], where) != 0;
    records.push_back(r);
  }
  return records;
}

void write_schedule_json(const std::filesystem::path& path,
                         const removal::RemovalSchedule& schedule) {
  json j;
  j["dataset_size"] = schedule.dataset_size;
  j["cut_fractions"] = schedule.cut_fractions;
  j["ordered_ids"] = schedule.ordered_ids;
  write_text(path, j.dump() + "\n");
}

removal::RemovalSchedule read_schedule_json(const std::filesystem::path& path) {
  json j = parse_json(read_text(path), path.string());
  removal::RemovalSchedule schedule;
  schedule.dataset_size = j.at("dataset_size").get<std::size_t>();
  schedule.cut_fractions = j.at("cut_fractions").get<std::vector<double>>();
  schedule.ordered_ids = j.at("ordered_ids").get<std::vector<std::int64_t>>();
  return schedule;
}

void write_ids(const std::filesystem::path& path, std::span<const std::int64_t> ids) {
  std::ofstream out = open_out(path);
  for (std::int64_t id : ids) out << id << '\n';
}

std::vector<std::int64_t> read_ids(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::vector<std::int64_t> ids;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ids.push_back(parse_int(line, path.string() + ":" + std::to_string(line_no)));
  }
  return ids;
}

std::vector<eval::PredictionSet> read_predictions(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::vector<eval::PredictionSet> sets;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j = parse_json(line, path.string() + ":" + std::to_string(line_no));
    eval::PredictionSet set;
    set.target_id = j.at("target_id").get<std::int64_t>();
    for (const auto& c : j.at("candidates")) {
      eval::Candidate candidate;
      candidate.text = c.at("text").get<std::string>();
      if (c.contains("round_trip_ok") && !c["round_trip_ok"].is_null())
        candidate.round_trip_ok = c["round_trip_ok"].get<bool>();
      if (c.contains("superclass") && !c["superclass"].is_null())
        candidate.superclass = c["superclass"].get<int>();
      set.candidates.push_back(std::move(candidate));
    }
    sets.push_back(std::move(set));
  }
  return sets;
}

void write_predictions(const std::filesystem::path& path,
                       std::span<const eval::PredictionSet> sets) {
  std::ofstream out = open_out(path);
  for (const auto& set : sets) {
    json j;
    j["target_id"] = set.target_id;
    json candidates = json::array();
    for (const auto& c : set.candidates) {
      json jc;
      jc["text"] = c.text;
      if (c.round_trip_ok) jc["round_trip_ok"] = *c.round_trip_ok;
      if (c.superclass) jc["superclass"] = *c.superclass;
      candidates.push_back(std::move(jc));
    }
    j["candidates"] = std::move(candidates);
    out << j.dump() << '\n';
  }
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out = open_out(path);
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in = open_in(path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string file_fingerprint(const std::filesystem::path& path) {
  const std::string bytes = read_text(path);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(h));
  return std::string("fnv1a64:") + buffer;
}

void write_manifest(const std::filesystem::path& directory, const std::string& command,
                    const std::map<std::string, std::string>& parameters,
                    std::span<const std::filesystem::path> inputs) {
  json j;
  j["tool"] = "forgetcurate";
  j["version"] = FORGETCURATE_VERSION;
  j["command"] = command;
  j["parameters"] = parameters;
  json ins = json::array();
  for (const auto& input : inputs) {
    json entry;
    entry["path"] = input.string();
    entry["bytes"] = std::filesystem::file_size(input);
    entry["fingerprint"] = file_fingerprint(input);
    ins.push_back(std::move(entry));
  }
  j["inputs"] = std::move(ins);
  write_text(directory / "manifest.json", j.dump(2) + "\n");
}

}  // namespace forgetcurate::io
