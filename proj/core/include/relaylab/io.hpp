#pragma once
//
// Output plumbing shared by the experiments and the CLI: a buffered row
// writer that emits CSV or JSON with a commented manifest header, a digest
// over the emitted data rows, a flat key=value config-file parser, and
// round-trip-exact float formatting.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "relaylab/errors.hpp"

namespace relaylab {

/// Doubles print with 17 significant digits so parsing recovers them exactly.
std::string format_double(double value);

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t basis = 0xCBF29CE484222325ULL);

enum class OutputFormat { csv, json };

OutputFormat output_format_from_string(const std::string& name);

/// Run provenance written at the top of every output file. The digest covers
/// every emitted data row. The timestamp is runtime metadata only and is
/// never serialized into files, so that re-runs are byte-identical.
struct Manifest {
  std::string experiment_id;
  std::string tool_version;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, std::string>> params;
  std::string timestamp;  // ISO 8601 UTC; not written to output files
};

/// Current UTC time in ISO 8601 form.
std::string utc_timestamp();

/// Collects typed rows, then serializes them behind a manifest header whose
/// digest was computed over the data rows.
class RowWriter {
 public:
  using Value = std::variant<std::int64_t, double, std::string>;

  RowWriter(OutputFormat format, std::vector<std::string> columns);

  void add_row(const std::vector<Value>& values);

  std::uint64_t digest() const;
  std::string serialize(const Manifest& manifest) const;
  void write_file(const std::string& path, const Manifest& manifest) const;
  std::size_t row_count() const { return rows_.size(); }

 private:
  std::string render_cell(const Value& v, bool quote_strings) const;

  OutputFormat format_;
  std::vector<std::string> columns_;
  std::vector<std::vector<Value>> rows_;
};

/// Flat `key = value` config text: UTF-8, '#' comments, dotted keys for
/// nested parameters. Later duplicates override earlier ones.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> parse_config_file(const std::string& path);

}  // namespace relaylab
