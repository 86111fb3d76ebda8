#include "multipool/matrix_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "multipool/errors.hpp"

namespace multipool::io {

namespace {

using nlohmann::json;

std::string optional_uint(const std::optional<std::uint32_t>& v) { return v ? std::to_string(*v) : "null"; }

std::optional<std::uint32_t> read_optional_uint(const json& doc, const char* key) {
  if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
  if (!doc[key].is_number_unsigned()) throw ParseError(std::string("field '") + key + "' must be a non-negative integer");
  return doc[key].get<std::uint32_t>();
}

std::uint64_t read_required_uint(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_number_unsigned()) {
    throw ParseError(std::string("field '") + key + "' must be a non-negative integer");
  }
  return doc[key].get<std::uint64_t>();
}

}  // namespace

std::string to_json(const PoolingMatrix& matrix) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"format_version\": " << kMatrixFormatVersion << ",\n";
  out << "  \"q\": " << optional_uint(matrix.declared_q()) << ",\n";
  out << "  \"m\": " << optional_uint(matrix.declared_m()) << ",\n";
  out << "  \"n\": " << matrix.n() << ",\n";
  out << "  \"t\": " << matrix.t() << ",\n";
  out << "  \"pools\": [";
  for (std::size_t i = 0; i < matrix.t(); ++i) {
    out << (i == 0 ? "\n    [" : ",\n    [");
    const auto pool = matrix.pool(i);
    for (std::size_t k = 0; k < pool.size(); ++k) out << (k == 0 ? "" : ", ") << pool[k];
    out << "]";
  }
  out << (matrix.t() == 0 ? "],\n" : "\n  ],\n");
  out << "  \"labels\": [";
  const auto& labels = matrix.labels();
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out << (i == 0 ? "\n    " : ",\n    ");
    out << "{\"slope\": ";
    if (labels[i].is_vertical()) {
      out << "\"inf\"";
    } else {
      out << labels[i].slope->index;
    }
    out << ", \"intercept\": " << labels[i].intercept.index << "}";
  }
  out << (labels.empty() ? "]\n" : "\n  ]\n");
  out << "}\n";
  return out.str();
}

PoolingMatrix matrix_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    // nlohmann reports a byte offset; translate it into line/column.
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError("malformed JSON matrix document", line, column);
  }
  if (!doc.is_object()) throw ParseError("matrix document must be a JSON object");
  const auto version = read_required_uint(doc, "format_version");
  if (version != kMatrixFormatVersion) {
    throw ParseError("unsupported matrix format_version " + std::to_string(version));
  }
  const auto q = read_optional_uint(doc, "q");
  const auto m = read_optional_uint(doc, "m");
  const auto n = read_required_uint(doc, "n");
  const auto t = read_required_uint(doc, "t");
  if (!doc.contains("pools") || !doc["pools"].is_array()) throw ParseError("field 'pools' must be an array");
  const json& jpools = doc["pools"];
  if (jpools.size() != t) {
    throw ParseError("field 't' is " + std::to_string(t) + " but 'pools' has " + std::to_string(jpools.size()) +
                     " entries");
  }
  std::vector<std::vector<std::uint32_t>> pools;
  pools.reserve(t);
  for (std::size_t i = 0; i < jpools.size(); ++i) {
    if (!jpools[i].is_array()) throw ParseError("pool " + std::to_string(i) + " must be an array");
    std::vector<std::uint32_t> pool;
    for (const auto& item : jpools[i]) {
      if (!item.is_number_unsigned() || item.get<std::uint64_t>() >= n) {
        throw ParseError("pool " + std::to_string(i) + " has an item index outside [0, n)");
      }
      pool.push_back(item.get<std::uint32_t>());
    }
    pools.push_back(std::move(pool));
  }
  std::vector<PoolLabel> labels;
  if (doc.contains("labels") && !doc["labels"].is_null()) {
    const json& jlabels = doc["labels"];
    if (!jlabels.is_array()) throw ParseError("field 'labels' must be an array");
    for (std::size_t i = 0; i < jlabels.size(); ++i) {
      const json& l = jlabels[i];
      if (!l.is_object() || !l.contains("slope") || !l.contains("intercept") || !l["intercept"].is_number_unsigned()) {
        throw ParseError("label " + std::to_string(i) + " must have a slope and a non-negative intercept");
      }
      PoolLabel label{std::nullopt, gf::FieldElem{l["intercept"].get<std::uint32_t>()}};
      if (l["slope"].is_string()) {
        if (l["slope"].get<std::string>() != "inf") throw ParseError("label " + std::to_string(i) + " has a bad slope");
      } else if (l["slope"].is_number_unsigned()) {
        label.slope = gf::FieldElem{l["slope"].get<std::uint32_t>()};
      } else {
        throw ParseError("label " + std::to_string(i) + " has a bad slope");
      }
      labels.push_back(label);
    }
  }
  try {
    return PoolingMatrix(static_cast<std::size_t>(n), std::move(pools), std::move(labels), q, m);
  } catch (const DomainError& e) {
    throw ParseError(e.what());
  }
}

std::string to_dense_csv(const PoolingMatrix& matrix) {
  std::string out;
  out.reserve(matrix.t() * (2 * matrix.n()));
  for (std::size_t i = 0; i < matrix.t(); ++i) {
    for (std::size_t j = 0; j < matrix.n(); ++j) {
      if (j != 0) out.push_back(',');
      out.push_back(matrix.contains(i, j) ? '1' : '0');
    }
    out.push_back('\n');
  }
  return out;
}

PoolingMatrix matrix_from_dense_csv(std::string_view text) {
  std::vector<std::vector<std::uint32_t>> pools;
  std::size_t n = 0;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) {
      if (pos >= text.size()) break;
      throw ParseError("empty row", line_no, 1);
    }
    std::vector<std::uint32_t> pool;
    std::size_t column = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::string_view field = line.substr(start, comma == std::string_view::npos ? line.size() - start : comma - start);
      ++column;
      if (field == "1") {
        pool.push_back(static_cast<std::uint32_t>(column - 1));
      } else if (field != "0") {
        throw ParseError("entry '" + std::string(field) + "' is not 0 or 1", line_no, column);
      }
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (pools.empty()) {
      n = column;
    } else if (column != n) {
      throw ParseError("row has " + std::to_string(column) + " entries, expected " + std::to_string(n), line_no, column);
    }
    pools.push_back(std::move(pool));
  }
  if (pools.empty()) throw ParseError("matrix CSV is empty", 1, 1);
  return PoolingMatrix(n, std::move(pools));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("write failed for " + path.string());
}

void write_matrix(const std::filesystem::path& path, const PoolingMatrix& matrix, MatrixFormat format) {
  write_file(path, format == MatrixFormat::Json ? to_json(matrix) : to_dense_csv(matrix));
}

PoolingMatrix read_matrix(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return matrix_from_json(text);
  return matrix_from_dense_csv(text);
}

}  // namespace multipool::io
