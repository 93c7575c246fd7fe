#include "archam/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace archam {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

JsonValue JsonValue::array() {
  JsonValue v;
  v.type_ = Type::Array;
  return v;
}

JsonValue JsonValue::object() {
  JsonValue v;
  v.type_ = Type::Object;
  return v;
}

JsonValue& JsonValue::push_back(JsonValue v) {
  if (type_ != Type::Array) throw std::logic_error("json: push_back on non-array");
  items_.push_back(std::move(v));
  return *this;
}

JsonValue& JsonValue::set(const std::string& key, JsonValue v) {
  if (type_ != Type::Object) throw std::logic_error("json: set on non-object");
  for (auto& [k, existing] : members_) {
    if (k == key) {
      existing = std::move(v);
      return *this;
    }
  }
  members_.emplace_back(key, std::move(v));
  return *this;
}

namespace {

void append_escaped(std::string& out, const std::string& s) {
  out.push_back('"');
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
          out.push_back(c);
        }
    }
  }
  out.push_back('"');
}

void indent_to(std::string& out, int level) { out.append(static_cast<std::size_t>(level) * 2, ' '); }

}  // namespace

void JsonValue::dump_to(std::string& out, int indent) const {
  switch (type_) {
    case Type::Null: out += "null"; break;
    case Type::Bool: out += bool_ ? "true" : "false"; break;
    case Type::Number:
      // JSON has no inf/nan literals; emit as strings so documents stay valid
      if (std::isfinite(number_)) {
        out += format_double(number_);
      } else {
        append_escaped(out, format_double(number_));
      }
      break;
    case Type::String: append_escaped(out, string_); break;
    case Type::Array: {
      if (items_.empty()) {
        out += "[]";
        break;
      }
      out += "[\n";
      for (std::size_t i = 0; i < items_.size(); ++i) {
        indent_to(out, indent + 1);
        items_[i].dump_to(out, indent + 1);
        if (i + 1 < items_.size()) out.push_back(',');
        out.push_back('\n');
      }
      indent_to(out, indent);
      out.push_back(']');
      break;
    }
    case Type::Object: {
      if (members_.empty()) {
        out += "{}";
        break;
      }
      out += "{\n";
      for (std::size_t i = 0; i < members_.size(); ++i) {
        indent_to(out, indent + 1);
        append_escaped(out, members_[i].first);
        out += ": ";
        members_[i].second.dump_to(out, indent + 1);
        if (i + 1 < members_.size()) out.push_back(',');
        out.push_back('\n');
      }
      indent_to(out, indent);
      out.push_back('}');
      break;
    }
  }
}

std::string JsonValue::dump() const {
  std::string out;
  dump_to(out, 0);
  out.push_back('\n');
  return out;
}

std::string CsvTable::render() const {
  std::string out = header;
  out.push_back('\n');
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out.push_back(',');
      out += format_double(row[i]);
    }
    out.push_back('\n');
  }
  return out;
}

ParsedCsv parse_csv(const std::string& content) {
  ParsedCsv parsed;
  std::istringstream in(content);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("csv: empty input");
  {
    std::istringstream header(line);
    std::string col;
    while (std::getline(header, col, ',')) parsed.columns.push_back(col);
  }
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<double> row;
    std::istringstream cells(line);
    std::string cell;
    while (std::getline(cells, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("csv: non-numeric cell at line " + std::to_string(line_no));
      }
    }
    if (row.size() != parsed.columns.size()) {
      throw std::runtime_error("csv: ragged row at line " + std::to_string(line_no));
    }
    parsed.rows.push_back(std::move(row));
  }
  return parsed;
}

namespace {

constexpr double kCanvasW = 800.0;
constexpr double kCanvasH = 600.0;
constexpr double kMargin = 60.0;

std::string fmt_px(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  return buf;
}

}  // namespace

std::string SvgPlot::render() const {
  double xmin = 0.0, xmax = 1.0, ymin = 0.0, ymax = 1.0;
  bool first = true;
  for (const auto& s : series) {
    for (const auto& [x, y] : s.points) {
      if (first) {
        xmin = xmax = x;
        ymin = ymax = y;
        first = false;
      } else {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
        ymin = std::min(ymin, y);
        ymax = std::max(ymax, y);
      }
    }
  }
  if (xmax == xmin) xmax = xmin + 1.0;
  if (ymax == ymin) ymax = ymin + 1.0;

  const double plot_w = kCanvasW - 2.0 * kMargin;
  const double plot_h = kCanvasH - 2.0 * kMargin;
  auto px = [&](double x) { return kMargin + (x - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double y) { return kCanvasH - kMargin - (y - ymin) / (ymax - ymin) * plot_h; };

  static const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

  std::string out;
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n";
  out += "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
  out += "<text x=\"400\" y=\"30\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"16\">" + title + "</text>\n";

  // axes with min/max tick labels
  out += "<line x1=\"" + fmt_px(kMargin) + "\" y1=\"" + fmt_px(kCanvasH - kMargin) + "\" x2=\"" +
         fmt_px(kCanvasW - kMargin) + "\" y2=\"" + fmt_px(kCanvasH - kMargin) +
         "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + fmt_px(kMargin) + "\" y1=\"" + fmt_px(kMargin) + "\" x2=\"" +
         fmt_px(kMargin) + "\" y2=\"" + fmt_px(kCanvasH - kMargin) + "\" stroke=\"black\"/>\n";
  out += "<text x=\"" + fmt_px(kMargin) + "\" y=\"" + fmt_px(kCanvasH - kMargin + 20.0) +
         "\" font-family=\"sans-serif\" font-size=\"12\">" + format_double(xmin) + "</text>\n";
  out += "<text x=\"" + fmt_px(kCanvasW - kMargin) + "\" y=\"" + fmt_px(kCanvasH - kMargin + 20.0) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
         format_double(xmax) + "</text>\n";
  out += "<text x=\"" + fmt_px(kMargin - 8.0) + "\" y=\"" + fmt_px(kCanvasH - kMargin) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
         format_double(ymin) + "</text>\n";
  out += "<text x=\"" + fmt_px(kMargin - 8.0) + "\" y=\"" + fmt_px(kMargin) +
         "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" +
         format_double(ymax) + "</text>\n";
  out += "<text x=\"400\" y=\"" + fmt_px(kCanvasH - 15.0) +
         "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" + x_label +
         "</text>\n";
  out += "<text x=\"20\" y=\"300\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"13\" transform=\"rotate(-90 20 300)\">" + y_label + "</text>\n";

  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kColors[si % (sizeof(kColors) / sizeof(kColors[0]))];
    if (s.is_segment) {
      for (std::size_t i = 0; i + 1 < s.points.size(); i += 2) {
        out += "<line x1=\"" + fmt_px(px(s.points[i].first)) + "\" y1=\"" +
               fmt_px(py(s.points[i].second)) + "\" x2=\"" + fmt_px(px(s.points[i + 1].first)) +
               "\" y2=\"" + fmt_px(py(s.points[i + 1].second)) + "\" stroke=\"" + color +
               "\" stroke-width=\"1\"/>\n";
      }
    } else {
      out += "<polyline fill=\"none\" stroke=\"";
      out += color;
      out += "\" stroke-width=\"1.5\" points=\"";
      for (std::size_t i = 0; i < s.points.size(); ++i) {
        if (i > 0) out.push_back(' ');
        out += fmt_px(px(s.points[i].first)) + "," + fmt_px(py(s.points[i].second));
      }
      out += "\"/>\n";
    }
  }
  out += "</svg>\n";
  return out;
}

}  // namespace archam
