#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace archam {

// 17 significant digits: enough for exact double round-trips, short enough to
// strip trailing zeros.
std::string format_double(double v);

void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Minimal ordered JSON document model. Emission is fully deterministic: keys
// keep insertion order and numbers are serialized with format_double, which
// nlohmann-style shortest-representation dumping does not guarantee.
// ---------------------------------------------------------------------------
class JsonValue {
 public:
  enum class Type { Null, Bool, Number, String, Array, Object };

  JsonValue() : type_(Type::Null) {}
  JsonValue(bool b) : type_(Type::Bool), bool_(b) {}
  JsonValue(double v) : type_(Type::Number), number_(v) {}
  JsonValue(int v) : type_(Type::Number), number_(v) {}
  JsonValue(std::size_t v) : type_(Type::Number), number_(static_cast<double>(v)) {}
  JsonValue(const char* s) : type_(Type::String), string_(s) {}
  JsonValue(std::string s) : type_(Type::String), string_(std::move(s)) {}

  static JsonValue array();
  static JsonValue object();

  Type type() const { return type_; }

  JsonValue& push_back(JsonValue v);
  JsonValue& set(const std::string& key, JsonValue v);

  // serialize with two-space indentation and a trailing newline at top level
  std::string dump() const;

 private:
  void dump_to(std::string& out, int indent) const;

  Type type_;
  bool bool_ = false;
  double number_ = 0.0;
  std::string string_;
  std::vector<JsonValue> items_;
  std::vector<std::pair<std::string, JsonValue>> members_;
};

// ---------------------------------------------------------------------------
// CSV table with a fixed header; all cells are doubles.
// ---------------------------------------------------------------------------
struct CsvTable {
  std::string name;    // file stem, e.g. "energy"
  std::string header;  // e.g. "t,H"
  std::vector<std::vector<double>> rows;

  std::string render() const;
};

// Parses a CSV of doubles with a header line. Used by the flow-custom case.
struct ParsedCsv {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};
ParsedCsv parse_csv(const std::string& content);

// ---------------------------------------------------------------------------
// SVG line plots on a fixed 800x600 canvas. Data is mapped linearly from its
// bounding box onto the plot area inside a 60 px margin, y axis pointing up.
// ---------------------------------------------------------------------------
struct SvgSeries {
  std::vector<std::pair<double, double>> points;
  bool is_segment = false;  // render as detached segments (vector fields)
};

struct SvgPlot {
  std::string name;  // file stem
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<SvgSeries> series;

  std::string render() const;
};

}  // namespace archam
