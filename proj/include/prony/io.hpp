#pragma once

#include <prony/types.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace prony {

/// 17 significant digits: enough to reproduce any double bit-exactly.
inline std::string format_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

// -------------------------------------------------------------------------
// Order-preserving JSON emission.  Key order and number formatting are part
// of the output contract (identical runs must produce identical bytes), so
// values are built explicitly and printed with format_double.
// -------------------------------------------------------------------------

class JsonValue {
 public:
  using Array = std::vector<JsonValue>;
  using Object = std::vector<std::pair<std::string, JsonValue>>;

  JsonValue() : value_(nullptr) {}
  JsonValue(bool b) : value_(b) {}
  JsonValue(int v) : value_(static_cast<long long>(v)) {}
  JsonValue(long long v) : value_(v) {}
  JsonValue(double x) : value_(x) {}
  JsonValue(const char* s) : value_(std::string(s)) {}
  JsonValue(std::string s) : value_(std::move(s)) {}
  JsonValue(Array a) : value_(std::move(a)) {}

  static JsonValue object() {
    JsonValue v;
    v.value_ = Object{};
    return v;
  }

  static JsonValue array(const Vector& xs) {
    Array a;
    for (int i = 0; i < xs.size(); ++i) a.emplace_back(xs[i]);
    return JsonValue(std::move(a));
  }

  /// Object field access; creates the field (preserving insertion order) on
  /// first use.
  JsonValue& operator[](const std::string& key) {
    Object& fields = std::get<Object>(value_);
    for (auto& [name, value] : fields)
      if (name == key) return value;
    fields.emplace_back(key, JsonValue());
    return fields.back().second;
  }

  void push_back(JsonValue v) {
    if (!std::holds_alternative<Array>(value_)) value_ = Array{};
    std::get<Array>(value_).push_back(std::move(v));
  }

  bool is_object() const { return std::holds_alternative<Object>(value_); }

  /// Multiline for objects, inline for arrays and scalars.
  void dump(std::ostream& os, int indent = 0) const {
    if (const Object* fields = std::get_if<Object>(&value_)) {
      if (fields->empty()) {
        os << "{}";
        return;
      }
      const std::string pad(indent + 2, ' ');
      os << "{\n";
      for (std::size_t i = 0; i < fields->size(); ++i) {
        os << pad;
        write_string(os, (*fields)[i].first);
        os << ": ";
        (*fields)[i].second.dump(os, indent + 2);
        os << (i + 1 < fields->size() ? ",\n" : "\n");
      }
      os << std::string(indent, ' ') << "}";
      return;
    }
    if (const Array* items = std::get_if<Array>(&value_)) {
      os << "[";
      for (std::size_t i = 0; i < items->size(); ++i) {
        if (i) os << ", ";
        (*items)[i].dump(os, indent);
      }
      os << "]";
      return;
    }
    if (std::holds_alternative<std::nullptr_t>(value_)) {
      os << "null";
    } else if (const bool* b = std::get_if<bool>(&value_)) {
      os << (*b ? "true" : "false");
    } else if (const long long* n = std::get_if<long long>(&value_)) {
      os << *n;
    } else if (const double* x = std::get_if<double>(&value_)) {
      // JSON has no non-finite numbers
      if (std::isfinite(*x))
        os << format_double(*x);
      else
        os << "null";
    } else {
      write_string(os, std::get<std::string>(value_));
    }
  }

  std::string dump() const {
    std::ostringstream os;
    dump(os);
    return os.str();
  }

 private:
  static void write_string(std::ostream& os, const std::string& s) {
    os << '"';
    for (char c : s) {
      switch (c) {
        case '"': os << "\\\""; break;
        case '\\': os << "\\\\"; break;
        case '\n': os << "\\n"; break;
        case '\t': os << "\\t"; break;
        case '\r': os << "\\r"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", c);
            os << buf;
          } else {
            os << c;
          }
      }
    }
    os << '"';
  }

  std::variant<std::nullptr_t, bool, long long, double, std::string, Array,
               Object>
      value_;
};

// -------------------------------------------------------------------------
// Numeric CSV tables (plot data).  Missing values are written as nan.
// -------------------------------------------------------------------------

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

inline void write_csv(std::ostream& os, const CsvTable& table) {
  for (std::size_t i = 0; i < table.header.size(); ++i)
    os << (i ? "," : "") << table.header[i];
  os << '\n';
  for (const std::vector<double>& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      cells.push_back(line.substr(start));
      return cells;
    }
    cells.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

inline CsvTable read_csv(std::istream& is) {
  CsvTable table;
  std::string line;
  if (!std::getline(is, line))
    throw InvalidArgument("read_csv: missing header line");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  table.header = split_csv_line(line);
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (cells.size() != table.header.size())
      throw InvalidArgument("read_csv: row width differs from header");
    std::vector<double> row;
    for (const std::string& cell : cells) {
      char* end = nullptr;
      const double x = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str() || *end != '\0')
        throw InvalidArgument("read_csv: non-numeric cell '" + cell + "'");
      row.push_back(x);
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace prony
