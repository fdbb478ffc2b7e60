#include "relaylab/io.hpp"

#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>

namespace relaylab {

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis) {
  std::uint64_t hash = basis;
  for (const char c : bytes) {
    hash ^= static_cast<unsigned char>(c);
    hash *= 0x100000001B3ULL;
  }
  return hash;
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

OutputFormat output_format_from_string(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ArgumentError("unknown output format '" + name + "' (expected csv or json)");
}

RowWriter::RowWriter(OutputFormat format, std::vector<std::string> columns)
    : format_(format), columns_(std::move(columns)) {}

void RowWriter::add_row(const std::vector<Value>& values) {
  if (values.size() != columns_.size()) {
    throw ArgumentError("RowWriter: row width does not match column count");
  }
  rows_.push_back(values);
}

std::string RowWriter::render_cell(const Value& v, bool quote_strings) const {
  if (std::holds_alternative<std::int64_t>(v)) {
    return std::to_string(std::get<std::int64_t>(v));
  }
  if (std::holds_alternative<double>(v)) {
    const double d = std::get<double>(v);
    if (format_ == OutputFormat::json && !std::isfinite(d)) {
      return "\"" + format_double(d) + "\"";
    }
    return format_double(d);
  }
  const std::string& s = std::get<std::string>(v);
  return quote_strings ? "\"" + s + "\"" : s;
}

std::uint64_t RowWriter::digest() const {
  std::uint64_t hash = 0xCBF29CE484222325ULL;
  for (const auto& row : rows_) {
    for (const auto& cell : row) {
      hash = fnv1a64(render_cell(cell, false), hash);
      hash = fnv1a64(",", hash);
    }
    hash = fnv1a64("\n", hash);
  }
  return hash;
}

std::string RowWriter::serialize(const Manifest& manifest) const {
  std::ostringstream os;
  char digest_hex[32];
  std::snprintf(digest_hex, sizeof(digest_hex), "%016llx",
                static_cast<unsigned long long>(digest()));

  if (format_ == OutputFormat::csv) {
    os << "# experiment: " << manifest.experiment_id << "\n";
    os << "# tool: " << manifest.tool_version << "\n";
    os << "# seed: " << manifest.seed << "\n";
    for (const auto& [key, value] : manifest.params) os << "# " << key << ": " << value << "\n";
    os << "# digest: " << digest_hex << "\n";
    for (std::size_t c = 0; c < columns_.size(); ++c) {
      os << columns_[c] << (c + 1 < columns_.size() ? "," : "\n");
    }
    for (const auto& row : rows_) {
      for (std::size_t c = 0; c < row.size(); ++c) {
        os << render_cell(row[c], false) << (c + 1 < row.size() ? "," : "\n");
      }
    }
    return os.str();
  }

  os << "{\n  \"manifest\": {\n";
  os << "    \"experiment\": \"" << manifest.experiment_id << "\",\n";
  os << "    \"tool\": \"" << manifest.tool_version << "\",\n";
  os << "    \"seed\": " << manifest.seed << ",\n";
  for (const auto& [key, value] : manifest.params) {
    os << "    \"" << key << "\": \"" << value << "\",\n";
  }
  os << "    \"digest\": \"" << digest_hex << "\"\n  },\n";
  os << "  \"columns\": [";
  for (std::size_t c = 0; c < columns_.size(); ++c) {
    os << "\"" << columns_[c] << "\"" << (c + 1 < columns_.size() ? ", " : "");
  }
  os << "],\n  \"rows\": [\n";
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    os << "    [";
    for (std::size_t c = 0; c < rows_[r].size(); ++c) {
      os << render_cell(rows_[r][c], true) << (c + 1 < rows_[r].size() ? ", " : "");
    }
    os << "]" << (r + 1 < rows_.size() ? "," : "") << "\n";
  }
  os << "  ]\n}\n";
  return os.str();
}

void RowWriter::write_file(const std::string& path, const Manifest& manifest) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ArgumentError("cannot open output file '" + path + "'");
  out << serialize(manifest);
  if (!out) throw ArgumentError("failed writing output file '" + path + "'");
}

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text) {
  std::map<std::string, std::string> out;
  std::istringstream is(text);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    const auto comment = line.find('#');
    if (comment != std::string::npos) line.erase(comment);
    const std::string trimmed = trim(line);
    if (trimmed.empty()) continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string::npos) {
      throw ArgumentError("config line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(trimmed.substr(0, eq));
    const std::string value = trim(trimmed.substr(eq + 1));
    if (key.empty()) {
      throw ArgumentError("config line " + std::to_string(line_no) + ": empty key");
    }
    out[key] = value;
  }
  return out;
}

std::map<std::string, std::string> parse_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ArgumentError("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

}  // namespace relaylab
