#include "ubsr/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "ubsr/errors.hpp"
#include "ubsr/grammar.hpp"

namespace ubsr {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= line.size(); ++i) {
    if (i == line.size() || line[i] == ',') {
      out.push_back(trim(line.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

struct Table {
  std::vector<std::string_view> header;
  std::vector<std::vector<double>> rows;
};

double parse_cell(std::string_view cell, std::size_t row, std::size_t col) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (cell.empty() || ec != std::errc() || ptr != cell.data() + cell.size()) {
    throw DataError("row " + std::to_string(row) + ", column " + std::to_string(col) + ": cannot parse '" +
                        std::string(cell) + "' as a number",
                    row, col);
  }
  if (!std::isfinite(v)) {
    throw DataError("row " + std::to_string(row) + ", column " + std::to_string(col) + ": non-finite value '" +
                        std::string(cell) + "'",
                    row, col);
  }
  return v;
}

// Blank lines are skipped; row numbers count physical lines.
Table parse_table(std::string_view text) {
  Table table;
  std::size_t row = 0;
  std::size_t pos = 0;
  bool have_header = false;
  while (pos < text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    const auto line = trim(text.substr(pos, end - pos));
    pos = end + 1;
    ++row;
    if (line.empty()) continue;
    auto fields = split_fields(line);
    if (!have_header) {
      table.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != table.header.size()) {
      throw DataError("row " + std::to_string(row) + ": expected " + std::to_string(table.header.size()) +
                          " columns, found " + std::to_string(fields.size()),
                      row);
    }
    std::vector<double> values;
    values.reserve(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) values.push_back(parse_cell(fields[c], row, c + 1));
    table.rows.push_back(std::move(values));
  }
  if (!have_header) throw DataError("row 1: empty file, header row required", 1);
  if (table.rows.empty()) throw DataError("row 2: no data rows after the header", 2);
  return table;
}

[[noreturn]] void bad_field(const std::string& what) { throw DataError("model file: " + what, 0); }

}  // namespace

RegressionDataset parse_dataset_csv(std::string_view text) {
  const auto table = parse_table(text);
  const auto& h = table.header;
  if (h.size() < 2) throw DataError("row 1: header must be x1,...,xd,y with d >= 1", 1);
  for (std::size_t c = 0; c + 1 < h.size(); ++c) {
    if (h[c] != "x" + std::to_string(c + 1)) {
      throw DataError("row 1, column " + std::to_string(c + 1) + ": header is '" + std::string(h[c]) + "', expected 'x" +
                          std::to_string(c + 1) + "'",
                      1, c + 1);
    }
  }
  if (h.back() != "y") {
    throw DataError("row 1, column " + std::to_string(h.size()) + ": header is '" + std::string(h.back()) +
                        "', expected 'y'",
                    1, h.size());
  }
  const auto m = static_cast<Eigen::Index>(table.rows.size());
  const auto d = static_cast<Eigen::Index>(h.size() - 1);
  RegressionDataset data{Eigen::MatrixXd(m, d), Eigen::VectorXd(m)};
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto& r = table.rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < d; ++j) data.features(i, j) = r[static_cast<std::size_t>(j)];
    data.targets(i) = r.back();
  }
  return data;
}

SampleVector parse_samples_csv(std::string_view text) {
  const auto table = parse_table(text);
  if (table.header.size() != 1 || table.header[0] != "z") {
    throw DataError("row 1: sample file header must be the single column 'z'", 1, 1);
  }
  SampleVector out;
  out.values.reserve(table.rows.size());
  for (const auto& r : table.rows) out.values.push_back(r[0]);
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

RegressionDataset load_dataset(const std::filesystem::path& path) {
  try {
    return parse_dataset_csv(read_text_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what(), e.row(), e.column());
  }
}

SampleVector load_samples(const std::filesystem::path& path) {
  try {
    return parse_samples_csv(read_text_file(path));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what(), e.row(), e.column());
  }
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InvalidArgument("cannot open '" + tmp.string() + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    out.flush();
    if (!out) throw InvalidArgument("write to '" + tmp.string() + "' failed");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw InvalidArgument("cannot rename '" + tmp.string() + "' to '" + path.string() + "': " + ec.message());
  }
}

std::string format_real(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string dataset_to_csv(const RegressionDataset& data) {
  std::string out;
  for (Eigen::Index j = 0; j < data.dim(); ++j) out += "x" + std::to_string(j + 1) + ",";
  out += "y\n";
  for (Eigen::Index i = 0; i < data.rows(); ++i) {
    for (Eigen::Index j = 0; j < data.dim(); ++j) out += format_real(data.features(i, j)) + ",";
    out += format_real(data.targets(i)) + "\n";
  }
  return out;
}

nlohmann::json model_to_json(const SavedModel& m) {
  nlohmann::json j;
  j["weights"] = std::vector<double>(m.model.weights.data(), m.model.weights.data() + m.model.weights.size());
  j["norm_bound"] = m.model.norm_bound ? nlohmann::json(*m.model.norm_bound) : nlohmann::json(nullptr);
  j["lambda"] = m.lambda;
  j["utility"] = m.utility.to_string();
  j["T"] = m.iterations;
  j["beta0"] = m.beta0;
  j["final_ubsr_estimate"] = m.final_ubsr_estimate;
  return j;
}

SavedModel model_from_json(const nlohmann::json& j) {
  if (!j.is_object()) bad_field("expected a JSON object");
  auto number = [&](const char* key) {
    if (!j.contains(key) || !j[key].is_number()) bad_field(std::string("missing numeric field '") + key + "'");
    return j[key].get<double>();
  };
  SavedModel m;
  if (!j.contains("weights") || !j["weights"].is_array()) bad_field("missing array field 'weights'");
  const auto& w = j["weights"];
  m.model.weights.resize(static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (!w[i].is_number()) bad_field("weights[" + std::to_string(i) + "] is not a number");
    m.model.weights(static_cast<Eigen::Index>(i)) = w[i].get<double>();
  }
  if (j.contains("norm_bound") && j["norm_bound"].is_number()) m.model.norm_bound = j["norm_bound"].get<double>();
  m.lambda = number("lambda");
  if (!j.contains("utility") || !j["utility"].is_string()) bad_field("missing string field 'utility'");
  m.utility = parse_utility(j["utility"].get<std::string>());
  m.iterations = static_cast<int>(number("T"));
  m.beta0 = number("beta0");
  m.final_ubsr_estimate = number("final_ubsr_estimate");
  return m;
}

}  // namespace ubsr
