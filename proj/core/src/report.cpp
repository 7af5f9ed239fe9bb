#include "sglab/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "sglab/grid_function.hpp"

namespace sglab {

JsonValue JsonValue::boolean(bool b) {
  JsonValue v;
  v.kind_ = Kind::Boolean;
  v.bool_ = b;
  return v;
}

JsonValue JsonValue::integer(long long x) {
  JsonValue v;
  v.kind_ = Kind::Integer;
  v.int_ = x;
  return v;
}

JsonValue JsonValue::number(double x) {
  if (!std::isfinite(x))
    throw std::invalid_argument("JsonValue::number: non-finite; encode as a string");
  JsonValue v;
  v.kind_ = Kind::Double;
  v.num_ = x;
  return v;
}

JsonValue JsonValue::string(std::string s) {
  JsonValue v;
  v.kind_ = Kind::String;
  v.str_ = std::move(s);
  return v;
}

JsonValue JsonValue::array() {
  JsonValue v;
  v.kind_ = Kind::Array;
  return v;
}

JsonValue JsonValue::object() {
  JsonValue v;
  v.kind_ = Kind::Object;
  return v;
}

JsonValue JsonValue::number_array(const std::vector<double>& xs) {
  JsonValue v = array();
  for (double x : xs) v.push(number(x));
  return v;
}

JsonValue& JsonValue::push(JsonValue v) {
  if (kind_ != Kind::Array) throw std::logic_error("JsonValue::push on non-array");
  items_.push_back(std::move(v));
  return *this;
}

JsonValue& JsonValue::set(std::string key, JsonValue v) {
  if (kind_ != Kind::Object) throw std::logic_error("JsonValue::set on non-object");
  for (auto& m : members_)
    if (m.first == key) {
      m.second = std::move(v);
      return *this;
    }
  members_.emplace_back(std::move(key), std::move(v));
  return *this;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void escape_into(std::string& out, const std::string& s) {
  out += '"';
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;
        }
    }
  }
  out += '"';
}

void pad(std::string& out, int n) { out.append(static_cast<std::size_t>(n), ' '); }

}  // namespace

void JsonValue::dump_to(std::string& out, int indent, int depth) const {
  switch (kind_) {
    case Kind::Null: out += "null"; return;
    case Kind::Boolean: out += bool_ ? "true" : "false"; return;
    case Kind::Integer: out += std::to_string(int_); return;
    case Kind::Double: out += format_double(num_); return;
    case Kind::String: escape_into(out, str_); return;
    case Kind::Array: {
      if (items_.empty()) {
        out += "[]";
        return;
      }
      const bool flat = std::all_of(items_.begin(), items_.end(), [](const JsonValue& v) {
        return v.kind_ != Kind::Array && v.kind_ != Kind::Object;
      });
      if (flat) {
        out += '[';
        for (std::size_t i = 0; i < items_.size(); ++i) {
          if (i) out += ", ";
          items_[i].dump_to(out, indent, depth);
        }
        out += ']';
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < items_.size(); ++i) {
        pad(out, indent * (depth + 1));
        items_[i].dump_to(out, indent, depth + 1);
        if (i + 1 < items_.size()) out += ',';
        out += '\n';
      }
      pad(out, indent * depth);
      out += ']';
      return;
    }
    case Kind::Object: {
      if (members_.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      for (std::size_t i = 0; i < members_.size(); ++i) {
        pad(out, indent * (depth + 1));
        escape_into(out, members_[i].first);
        out += ": ";
        members_[i].second.dump_to(out, indent, depth + 1);
        if (i + 1 < members_.size()) out += ',';
        out += '\n';
      }
      pad(out, indent * depth);
      out += '}';
      return;
    }
  }
}

std::string JsonValue::dump(int indent) const {
  std::string out;
  dump_to(out, indent, 0);
  out += '\n';
  return out;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

std::string evolution_csv(const std::vector<double>& times,
                          const std::vector<GridFunction>& states,
                          const std::vector<double>& probes, int term_index_max,
                          double tail_bound) {
  if (times.size() != states.size())
    throw std::invalid_argument("evolution_csv: times/states size mismatch");
  std::vector<std::vector<std::string>> rows;
  for (std::size_t k = 0; k < times.size(); ++k)
    for (double p : probes)
      rows.push_back({format_double(times[k]), format_double(p),
                      format_double(interp_eval(states[k], p)),
                      std::to_string(term_index_max), format_double(tail_bound)});
  return csv_table({"time", "probe_x", "value", "term_index_max", "tail_bound"}, rows);
}

namespace {

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

std::string polyline_svg(const std::string& title, const std::vector<PlotSeries>& series) {
  const double W = 840, H = 520, L = 70, R = 20, T = 40, B = 50;
  double x_lo = 0, x_hi = 1, y_lo = 0, y_hi = 1;
  bool any = false;
  for (const auto& s : series)
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (!any) {
        x_lo = x_hi = x;
        y_lo = y_hi = y;
        any = true;
      } else {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
      }
    }
  if (x_hi - x_lo < 1e-12) {
    x_lo -= 1;
    x_hi += 1;
  }
  if (y_hi - y_lo < 1e-12) {
    y_lo -= 1;
    y_hi += 1;
  }
  const double x_pad = 0.02 * (x_hi - x_lo), y_pad = 0.05 * (y_hi - y_lo);
  x_lo -= x_pad, x_hi += x_pad, y_lo -= y_pad, y_hi += y_pad;
  auto px = [&](double x) { return L + (x - x_lo) / (x_hi - x_lo) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - y_lo) / (y_hi - y_lo) * (H - T - B); };

  std::string svg;
  svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " + coord(W) + " " + coord(H) +
         "\" font-family=\"monospace\" font-size=\"13\">\n";
  svg += "<rect width=\"" + coord(W) + "\" height=\"" + coord(H) + "\" fill=\"white\"/>\n";
  svg += "<text x=\"" + coord(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">";
  svg += title + "</text>\n";
  // axes box and ticks
  svg += "<rect x=\"" + coord(L) + "\" y=\"" + coord(T) + "\" width=\"" + coord(W - L - R) +
         "\" height=\"" + coord(H - T - B) + "\" fill=\"none\" stroke=\"#333\"/>\n";
  for (int i = 0; i <= 5; ++i) {
    const double xv = x_lo + (x_hi - x_lo) * i / 5.0;
    const double yv = y_lo + (y_hi - y_lo) * i / 5.0;
    svg += "<line x1=\"" + coord(px(xv)) + "\" y1=\"" + coord(H - B) + "\" x2=\"" +
           coord(px(xv)) + "\" y2=\"" + coord(H - B + 5) + "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + coord(px(xv)) + "\" y=\"" + coord(H - B + 20) +
           "\" text-anchor=\"middle\">" + coord(xv) + "</text>\n";
    svg += "<line x1=\"" + coord(L - 5) + "\" y1=\"" + coord(py(yv)) + "\" x2=\"" + coord(L) +
           "\" y2=\"" + coord(py(yv)) + "\" stroke=\"#333\"/>\n";
    svg += "<text x=\"" + coord(L - 8) + "\" y=\"" + coord(py(yv) + 4) +
           "\" text-anchor=\"end\">" + coord(yv) + "</text>\n";
  }
  for (std::size_t si = 0; si < series.size(); ++si) {
    const char* color = kPalette[si % (sizeof kPalette / sizeof *kPalette)];
    std::string pts;
    for (auto [x, y] : series[si].points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (!pts.empty()) pts += ' ';
      pts += coord(px(x)) + "," + coord(py(y));
    }
    svg += "<polyline fill=\"none\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    const double ly = T + 18.0 + 18.0 * static_cast<double>(si);
    svg += "<line x1=\"" + coord(W - R - 150) + "\" y1=\"" + coord(ly) + "\" x2=\"" +
           coord(W - R - 120) + "\" y2=\"" + coord(ly) + "\" stroke=\"";
    svg += color;
    svg += "\" stroke-width=\"2\"/>\n";
    svg += "<text x=\"" + coord(W - R - 114) + "\" y=\"" + coord(ly + 4) + "\">" +
           series[si].label + "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace sglab
