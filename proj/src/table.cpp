#include "hsg/table.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "hsg/errors.hpp"

namespace hsg {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

TableFormat parse_format(const std::string& name) {
  if (name == "csv") return TableFormat::Csv;
  if (name == "jsonl") return TableFormat::Jsonl;
  throw ConfigError("unknown output format '" + name + "' (expected csv or jsonl)");
}

std::string format_extension(TableFormat fmt) {
  return fmt == TableFormat::Csv ? ".csv" : ".jsonl";
}

void Table::add_row(std::vector<Value> row) {
  if (row.size() != header_.size()) {
    throw DomainError("table row width differs from header");
  }
  rows_.push_back(std::move(row));
}

namespace {

bool csv_needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\n\r") != std::string::npos;
}

std::string csv_field(const std::string& s) {
  if (!csv_needs_quoting(s)) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::string json_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
  return out;
}

std::string value_csv(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  if (const auto* s = std::get_if<std::string>(&v)) return csv_field(*s);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  const auto& od = std::get<std::optional<double>>(v);
  return od ? format_double(*od) : "";
}

std::string value_json(const Value& v) {
  if (const auto* i = std::get_if<std::int64_t>(&v)) return std::to_string(*i);
  if (const auto* d = std::get_if<double>(&v)) {
    if (std::isnan(*d) || std::isinf(*d)) return json_string(format_double(*d));
    return format_double(*d);
  }
  if (const auto* s = std::get_if<std::string>(&v)) return json_string(*s);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  const auto& od = std::get<std::optional<double>>(v);
  if (!od) return "null";
  if (std::isnan(*od) || std::isinf(*od)) return json_string(format_double(*od));
  return format_double(*od);
}

}  // namespace

void Table::write_csv(std::ostream& os) const {
  for (std::size_t i = 0; i < header_.size(); ++i) {
    if (i) os << ',';
    os << csv_field(header_[i]);
  }
  os << '\n';
  for (const auto& row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << value_csv(row[i]);
    }
    os << '\n';
  }
}

void Table::write_jsonl(std::ostream& os) const {
  for (const auto& row : rows_) {
    os << '{';
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << ',';
      os << json_string(header_[i]) << ':' << value_json(row[i]);
    }
    os << "}\n";
  }
}

void Table::write(std::ostream& os, TableFormat fmt) const {
  if (fmt == TableFormat::Csv) write_csv(os);
  else write_jsonl(os);
}

std::string Table::to_string(TableFormat fmt) const {
  std::ostringstream os;
  write(os, fmt);
  return os.str();
}

void write_table_file(const Table& table, const std::string& path, TableFormat fmt) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  table.write(os, fmt);
  os.flush();
  if (!os) throw IoError("write failed for '" + path + "'");
}

}  // namespace hsg
