#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "sglab/grid_function.hpp"

namespace sglab {

/// Minimal ordered JSON document used for run reports. Keys keep insertion
/// order and doubles are printed with 17 significant digits, so emission is
/// byte-identical across runs of the same build and round-trips exactly
/// through any conforming parser.
class JsonValue {
 public:
  enum class Kind { Null, Boolean, Integer, Double, String, Array, Object };

  JsonValue() : kind_(Kind::Null) {}
  static JsonValue boolean(bool b);
  static JsonValue integer(long long v);
  static JsonValue number(double v);
  static JsonValue string(std::string s);
  static JsonValue array();
  static JsonValue object();
  static JsonValue number_array(const std::vector<double>& v);

  Kind kind() const { return kind_; }
  JsonValue& push(JsonValue v);            // arrays
  JsonValue& set(std::string key, JsonValue v);  // objects; replaces on rekey
  std::string dump(int indent = 2) const;

 private:
  Kind kind_;
  bool bool_ = false;
  long long int_ = 0;
  double num_ = 0.0;
  std::string str_;
  std::vector<JsonValue> items_;
  std::vector<std::pair<std::string, JsonValue>> members_;

  void dump_to(std::string& out, int indent, int depth) const;
};

/// Shortest spelling of a double that still round-trips: printf %.17g.
std::string format_double(double v);

/// One CSV table as a string; no quoting (cell content is numeric or plain).
std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows);

/// Evolution table with the fixed header
///   time,probe_x,value,term_index_max,tail_bound
/// one row per output time and probe point; value is the interpolated state.
std::string evolution_csv(const std::vector<double>& times,
                          const std::vector<GridFunction>& states,
                          const std::vector<double>& probes, int term_index_max,
                          double tail_bound);

/// A named series of (x, y) points for plotting.
struct PlotSeries {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

/// Self-contained line plot (fixed 840x520 canvas, axes, legend).
std::string polyline_svg(const std::string& title, const std::vector<PlotSeries>& series);

void write_text_file(const std::string& path, const std::string& content);

}  // namespace sglab
