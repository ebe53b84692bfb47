#pragma once

#include "finiteqp/covariance.hpp"
#include "finiteqp/operators.hpp"
#include "finiteqp/states.hpp"

#include <nlohmann/json.hpp>

#include <string>
#include <vector>

namespace finiteqp {

/// Shortest round-trip decimal representation (up to 17 significant digits).
std::string format_double(double value);

nlohmann::json to_json(const Matrix& m);
nlohmann::json to_json(const RealMatrix& m);
nlohmann::json to_json(const HermitianOperator& op);
nlohmann::json to_json(const QuantumState& state);
nlohmann::json to_json(const CovMatrix& cov);

/// RFC-4180 row accumulator: quotes fields containing commas, quotes, or
/// newlines; numeric cells are rendered with format_double.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header);

  void add_row(const std::vector<std::string>& cells);
  std::string str() const;

  static std::string cell(double value) { return format_double(value); }
  static std::string cell(const std::string& value) { return value; }

 private:
  static std::string escape(const std::string& field);
  std::string body_;
};

/// Writes via a sibling temp file and rename so readers never observe a
/// partial file. Throws std::runtime_error on I/O failure.
void write_file_atomic(const std::string& path, const std::string& content);

/// Writes `content` to `path` and the generating configuration to
/// `path + ".config.json"`, both atomically.
void write_with_config(const std::string& path, const std::string& content,
                       const nlohmann::json& config);

}  // namespace finiteqp
