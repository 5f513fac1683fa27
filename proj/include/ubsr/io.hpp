#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ubsr/distributions.hpp"
#include "ubsr/lmo.hpp"
#include "ubsr/utility.hpp"

namespace ubsr {

/// Parses a dataset CSV: header x1,...,xd,y then one numeric row per sample.
/// Throws DataError naming the 1-based row (header = row 1) and column.
RegressionDataset parse_dataset_csv(std::string_view text);
/// Parses a sample CSV with the single header column z.
SampleVector parse_samples_csv(std::string_view text);

RegressionDataset load_dataset(const std::filesystem::path& path);
SampleVector load_samples(const std::filesystem::path& path);

std::string read_text_file(const std::filesystem::path& path);

/// Writes to a sibling temporary file, then renames over `path`.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

/// printf %.17g: enough digits to round-trip any double.
std::string format_real(double v);

std::string dataset_to_csv(const RegressionDataset& data);

/// What `train` persists.
struct SavedModel {
  LinearModel model;
  double lambda = 0.0;
  Utility utility = Utility::linear();
  int iterations = 0;
  double beta0 = 0.0;
  double final_ubsr_estimate = 0.0;
};

nlohmann::json model_to_json(const SavedModel& m);
/// Throws DataError on missing or ill-typed fields.
SavedModel model_from_json(const nlohmann::json& j);

}  // namespace ubsr
