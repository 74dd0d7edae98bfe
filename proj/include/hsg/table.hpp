#pragma once

// Row-oriented report tables with deterministic CSV and JSONL writers.
// Doubles are serialised in their shortest round-trip decimal form, so a
// rerun with the same inputs is byte-identical.

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace hsg {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double x);

enum class TableFormat { Csv, Jsonl };

TableFormat parse_format(const std::string& name);
std::string format_extension(TableFormat fmt);

using Value = std::variant<std::int64_t, double, std::string, bool,
                           std::optional<double>>;

class Table {
 public:
  explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}

  void add_row(std::vector<Value> row);
  const std::vector<std::string>& header() const { return header_; }
  std::size_t rows() const { return rows_.size(); }

  void write(std::ostream& os, TableFormat fmt) const;
  std::string to_string(TableFormat fmt) const;

 private:
  void write_csv(std::ostream& os) const;
  void write_jsonl(std::ostream& os) const;

  std::vector<std::string> header_;
  std::vector<std::vector<Value>> rows_;
};

// Writes through a temp-free direct stream; throws IoError on failure.
void write_table_file(const Table& table, const std::string& path, TableFormat fmt);

}  // namespace hsg
