#include "state_io.hpp"

#include <fstream>
#include <sstream>

namespace mdiw::cli {

namespace {

RMat parse_real_matrix(const nlohmann::json& rows, int order, const char* key) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != order)
    throw ValidationError(std::string("state file '") + key + "' must be a " +
                          std::to_string(order) + "-row matrix");
  RMat m(order, order);
  for (int i = 0; i < order; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != order)
      throw ValidationError(std::string("state file '") + key + "' row " + std::to_string(i) +
                            " has wrong length");
    for (int j = 0; j < order; ++j) {
      const auto& cell = row[static_cast<std::size_t>(j)];
      if (!cell.is_number())
        throw ValidationError(std::string("state file '") + key + "' contains a non-number");
      m(i, j) = cell.get<double>();
    }
  }
  return m;
}

}  // namespace

StateFile read_state_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open state file: " + path.string());
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("state file is not valid JSON: " + std::string(e.what()));
  }
  if (!doc.is_object() || !doc.contains("dims") || !doc.contains("re"))
    throw ValidationError("state file must carry 'dims' and 're'");

  StateFile file;
  for (const auto& d : doc["dims"]) {
    if (!d.is_number_integer() || d.get<int>() < 1)
      throw ValidationError("state file dims must be positive integers");
    file.dims.push_back(d.get<int>());
  }
  const int order = dims_order(file.dims);
  const RMat re = parse_real_matrix(doc["re"], order, "re");
  const RMat im = doc.contains("im") ? parse_real_matrix(doc["im"], order, "im")
                                     : RMat::Zero(order, order);
  file.matrix = re.cast<Complex>() + Complex(0, 1) * im.cast<Complex>();
  file.meta = doc.value("meta", nlohmann::json::object());
  return file;
}

DensityMatrix to_density(const StateFile& file) {
  return DensityMatrix::make(file.dims, file.matrix);
}

HermitianOperator to_hermitian(const StateFile& file) {
  return HermitianOperator::make(file.dims, file.matrix);
}

void write_state_file(const std::filesystem::path& path, const std::vector<int>& dims,
                      const CMat& matrix, const nlohmann::json& meta) {
  const int order = dims_order(dims);
  if (matrix.rows() != order || matrix.cols() != order)
    throw ValidationError("matrix order does not match dims");
  nlohmann::json doc;
  doc["dims"] = dims;
  auto serialize = [&](auto member) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < order; ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int j = 0; j < order; ++j) row.push_back(member(matrix(i, j)));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  doc["re"] = serialize([](const Complex& c) { return c.real(); });
  doc["im"] = serialize([](const Complex& c) { return c.imag(); });
  if (!meta.empty()) doc["meta"] = meta;

  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write state file: " + path.string());
  out << doc.dump(1) << "\n";
}

void CsvWriter::add_row(const std::vector<double>& numeric) { add_row(std::string(), numeric); }

void CsvWriter::add_row(const std::string& label, const std::vector<double>& numeric) {
  std::ostringstream line;
  line.precision(17);
  bool first = true;
  if (!label.empty()) {
    line << label;
    first = false;
  }
  for (double v : numeric) {
    if (!first) line << ',';
    line << v;
    first = false;
  }
  rows_.push_back(line.str());
}

void CsvWriter::write(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write CSV file: " + path.string());
  bool first = true;
  for (const std::string& h : header_) {
    if (!first) out << ',';
    out << h;
    first = false;
  }
  out << '\n';
  for (const std::string& row : rows_) out << row << '\n';
}

}  // namespace mdiw::cli
