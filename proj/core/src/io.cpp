#include "finiteqp/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace finiteqp {

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

namespace {

nlohmann::json matrix_parts(const Matrix& m) {
  nlohmann::json re = nlohmann::json::array();
  nlohmann::json im = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row_re = nlohmann::json::array();
    nlohmann::json row_im = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row_re.push_back(m(i, j).real());
      row_im.push_back(m(i, j).imag());
    }
    re.push_back(std::move(row_re));
    im.push_back(std::move(row_im));
  }
  return {{"re", std::move(re)}, {"im", std::move(im)}};
}

}  // namespace

nlohmann::json to_json(const Matrix& m) {
  nlohmann::json j = matrix_parts(m);
  j["rows"] = m.rows();
  j["cols"] = m.cols();
  return j;
}

nlohmann::json to_json(const RealMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json to_json(const HermitianOperator& op) {
  nlohmann::json j = matrix_parts(op.matrix());
  j["dim"] = op.dim();
  return j;
}

nlohmann::json to_json(const QuantumState& state) {
  nlohmann::json j = matrix_parts(state.density());
  j["dim"] = state.dim();
  j["pure"] = state.is_pure();
  if (auto dims = state.local_dims()) {
    j["local_dims"] = {(*dims)[0], (*dims)[1]};
  }
  return j;
}

nlohmann::json to_json(const CovMatrix& cov) {
  nlohmann::json j = matrix_parts(cov.entries);
  j["m"] = cov.m;
  j["trace"] = cov.trace;
  j["det"] = cov.det;
  return j;
}

CsvWriter::CsvWriter(std::vector<std::string> header) {
  add_row(header);
}

std::string CsvWriter::escape(const std::string& field) {
  if (field.find_first_of(",\"\r\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) body_ += ',';
    body_ += escape(cells[i]);
  }
  body_ += "\r\n";
}

std::string CsvWriter::str() const { return body_; }

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("cannot open for writing: " + tmp);
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw std::runtime_error("write failed: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw std::runtime_error("rename failed: " + path + " (" +
                             std::strerror(errno) + ")");
  }
}

void write_with_config(const std::string& path, const std::string& content,
                       const nlohmann::json& config) {
  write_file_atomic(path, content);
  write_file_atomic(path + ".config.json", config.dump(2) + "\n");
}

}  // namespace finiteqp
