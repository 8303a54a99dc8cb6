#include "spcert/matrix_io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spcert/error.hpp"

namespace spcert {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string line_error(std::size_t line, const std::string& msg) {
  return "line " + std::to_string(line) + ": " + msg;
}

Matrix parse_csv(std::string_view text) {
  std::vector<double> data;
  std::size_t cols = 0;
  std::size_t rows = 0;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty()) continue;

    std::size_t count = 0;
    for (;;) {
      const auto comma = line.find(',');
      const std::string_view field = trim(line.substr(0, comma));
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size())
        throw Error(ErrorCode::ParseError, line_error(line_no, "bad number '" + std::string(field) + "'"));
      if (!std::isfinite(v)) throw Error(ErrorCode::ParseError, line_error(line_no, "non-finite value"));
      data.push_back(v);
      ++count;
      if (comma == std::string_view::npos) break;
      line = line.substr(comma + 1);
    }
    if (rows == 0) cols = count;
    else if (count != cols)
      throw Error(ErrorCode::ParseError, line_error(line_no, "expected " + std::to_string(cols) + " fields, got " +
                                                                 std::to_string(count)));
    ++rows;
  }
  if (rows == 0) throw Error(ErrorCode::ParseError, "empty csv matrix");
  return Matrix(rows, cols, std::move(data));
}

Matrix parse_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, "byte " + std::to_string(e.byte) + ": " + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::ParseError, "matrix json must be an object");
  for (const char* key : {"rows", "cols", "data"})
    if (!doc.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  const auto& r = doc["rows"];
  const auto& c = doc["cols"];
  const auto& d = doc["data"];
  if (!r.is_number_unsigned() || !c.is_number_unsigned() || r.get<std::size_t>() == 0 || c.get<std::size_t>() == 0)
    throw Error(ErrorCode::ParseError, "rows and cols must be positive integers");
  if (!d.is_array()) throw Error(ErrorCode::ParseError, "data must be an array");

  const auto rows = r.get<std::size_t>();
  const auto cols = c.get<std::size_t>();
  if (d.size() != rows * cols)
    throw Error(ErrorCode::DimensionMismatch, std::to_string(rows) + "x" + std::to_string(cols) + " needs " +
                                                  std::to_string(rows * cols) + " values, got " +
                                                  std::to_string(d.size()));
  std::vector<double> data;
  data.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (!d[i].is_number()) throw Error(ErrorCode::ParseError, "data[" + std::to_string(i) + "] is not a number");
    const double v = d[i].get<double>();
    if (!std::isfinite(v)) throw Error(ErrorCode::ParseError, "data[" + std::to_string(i) + "] is not finite");
    data.push_back(v);
  }
  return Matrix(rows, cols, std::move(data));
}

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

MatrixFormat format_from_path(std::string_view path) {
  return path.size() >= 4 && path.substr(path.size() - 4) == ".csv" ? MatrixFormat::Csv : MatrixFormat::Json;
}

Matrix parse_matrix(std::string_view text, MatrixFormat format) {
  return format == MatrixFormat::Csv ? parse_csv(text) : parse_json(text);
}

Matrix load_matrix(const std::string& path, MatrixFormat format) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_matrix(ss.str(), format);
}

std::string format_matrix(const Matrix& a, MatrixFormat format) {
  std::string out;
  if (format == MatrixFormat::Csv) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
      for (std::size_t j = 0; j < a.cols(); ++j) {
        if (j > 0) out += ',';
        out += fmt17(a(i, j));
      }
      out += '\n';
    }
    return out;
  }
  out = "{\"rows\":" + std::to_string(a.rows()) + ",\"cols\":" + std::to_string(a.cols()) + ",\"data\":[";
  for (std::size_t k = 0; k < a.data().size(); ++k) {
    if (k > 0) out += ',';
    out += fmt17(a.data()[k]);
  }
  out += "]}\n";
  return out;
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path + "'");
}

}  // namespace spcert
