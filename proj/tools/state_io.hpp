#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mdiw/operators.hpp"

namespace mdiw::cli {

/// On-disk state schema: {"dims":[dA,dB], "re":[[...]], "im":[[...]],
/// "meta":{...}}, matrices row-major.
struct StateFile {
  std::vector<int> dims;
  CMat matrix;
  nlohmann::json meta;
};

/// Parses and shape-checks a state file. Malformed JSON or inconsistent
/// shapes raise ValidationError with the offending detail named.
StateFile read_state_file(const std::filesystem::path& path);

/// Full state validation on top of parsing (Hermiticity, trace, positivity).
DensityMatrix to_density(const StateFile& file);

/// Hermiticity-only validation, for witness operator files.
HermitianOperator to_hermitian(const StateFile& file);

void write_state_file(const std::filesystem::path& path, const std::vector<int>& dims,
                      const CMat& matrix, const nlohmann::json& meta = nlohmann::json::object());

/// Minimal CSV emitter: fixed header, rows serialized at 17 significant
/// digits, written in the order they were added.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(const std::vector<double>& numeric);
  void add_row(const std::string& label, const std::vector<double>& numeric);
  void write(const std::filesystem::path& path) const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::string> rows_;
};

}  // namespace mdiw::cli
