#include <doctest.h>

#include <json.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "sglab/report.hpp"
#include "sglab/sampling.hpp"

using namespace sglab;

TEST_CASE("format_double round-trips bitwise through strtod") {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, -2.5e17, 0.0, 2.2250738585072014e-308,
                   1.7976931348623157e308, 6.02214076e23}) {
    const std::string s = format_double(v);
    char* end = nullptr;
    const double back = std::strtod(s.c_str(), &end);
    CHECK(*end == '\0');
    CHECK(back == v);
  }
  CHECK(format_double(0.0) == "0");
  CHECK(format_double(0.5) == "0.5");
}

TEST_CASE("JSON document: order, types, rekey, and exact numeric round-trip") {
  JsonValue doc = JsonValue::object();
  doc.set("z_first", JsonValue::string("semigroup lab"));
  doc.set("a_second", JsonValue::number(1.0 / 3.0));
  doc.set("count", JsonValue::integer(42));
  doc.set("flag", JsonValue::boolean(true));
  doc.set("nothing", JsonValue());
  doc.set("values", JsonValue::number_array({0.1, 0.2, -3.5}));
  JsonValue nested = JsonValue::object();
  nested.set("k", JsonValue::integer(1));
  nested.set("k", JsonValue::integer(2));  // rekey replaces in place
  doc.set("inner", nested);
  JsonValue arr = JsonValue::array();
  arr.push(JsonValue::object().set("id", JsonValue::integer(7)));
  doc.set("items", arr);

  const std::string text = doc.dump();
  CHECK(text.back() == '\n');
  // insertion order, not alphabetical
  CHECK(text.find("z_first") < text.find("a_second"));
  // flat scalar arrays stay on one line; %.17g spells the stored values
  CHECK(text.find("[0.10000000000000001, 0.20000000000000001, -3.5]") !=
        std::string::npos);
  // the rekeyed member appears once
  std::size_t occurrences = 0;
  for (std::size_t p = text.find("\"k\""); p != std::string::npos;
       p = text.find("\"k\"", p + 1))
    ++occurrences;
  CHECK(occurrences == 1);

  const nlohmann::json j = nlohmann::json::parse(text);
  CHECK(j["z_first"] == "semigroup lab");
  CHECK(j["a_second"].get<double>() == 1.0 / 3.0);
  CHECK(j["count"].get<long long>() == 42);
  CHECK(j["flag"].get<bool>() == true);
  CHECK(j["nothing"].is_null());
  CHECK(j["values"][0].get<double>() == 0.1);
  CHECK(j["inner"]["k"].get<int>() == 2);
  CHECK(j["items"][0]["id"].get<int>() == 7);

  // strings with control characters survive the escape path
  JsonValue tricky = JsonValue::object();
  tricky.set("s", JsonValue::string("a\"b\\c\nd\te\x01"));
  const nlohmann::json t = nlohmann::json::parse(tricky.dump());
  CHECK(t["s"].get<std::string>() == "a\"b\\c\nd\te\x01");
}

TEST_CASE("JSON document rejects non-finite numbers and type misuse") {
  CHECK_THROWS_AS(JsonValue::number(std::numeric_limits<double>::infinity()),
                  std::invalid_argument);
  CHECK_THROWS_AS(JsonValue::number(std::numeric_limits<double>::quiet_NaN()),
                  std::invalid_argument);
  JsonValue obj = JsonValue::object();
  CHECK_THROWS_AS(obj.push(JsonValue::integer(1)), std::logic_error);
  JsonValue arr = JsonValue::array();
  CHECK_THROWS_AS(arr.set("k", JsonValue::integer(1)), std::logic_error);
}

TEST_CASE("csv_table joins cells without quoting") {
  const std::string out = csv_table({"a", "b"}, {{"1", "2"}, {"3", "4"}});
  CHECK(out == "a,b\n1,2\n3,4\n");
}

TEST_CASE("evolution_csv: pinned header and row layout") {
  const std::vector<double> times{0.5};
  const std::vector<GridFunction> states{ramp_down(4)};
  const std::string out = evolution_csv(times, states, {0.0, 0.25}, 7, 0.001);
  CHECK(out == "time,probe_x,value,term_index_max,tail_bound\n"
               "0.5,0,1,7,0.001\n"
               "0.5,0.25,0.75,7,0.001\n");
  CHECK_THROWS_AS(evolution_csv({0.1, 0.2}, states, {0.0}, 1, 0.0),
                  std::invalid_argument);
}

TEST_CASE("line plot: well-formed, labeled, and silent about non-finite points") {
  PlotSeries s1{"state t=0.5", {{0.0, 0.0},
                                {0.5, std::numeric_limits<double>::quiet_NaN()},
                                {1.0, 1.0}}};
  PlotSeries s2{"state t=1", {{0.0, 1.0}, {1.0, 0.0}}};
  const std::string svg = polyline_svg("states", {s1, s2});
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("state t=0.5") != std::string::npos);
  CHECK(svg.find("state t=1") != std::string::npos);
  CHECK(svg.find("polyline") != std::string::npos);
  CHECK(svg.find("nan") == std::string::npos);
  CHECK(svg.find("inf") == std::string::npos);

  // degenerate input still renders a frame
  const std::string empty = polyline_svg("empty", {});
  CHECK(empty.rfind("<svg", 0) == 0);
}

TEST_CASE("write_text_file round trip and failure") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "sglab_report_test";
  fs::create_directories(dir);
  const fs::path file = dir / "out.txt";
  const std::string payload = "line1\nline2\x01\xff\n";
  write_text_file(file.string(), payload);
  std::ifstream in(file, std::ios::binary);
  std::string back((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(back == payload);
  fs::remove_all(dir);

  CHECK_THROWS_AS(write_text_file((dir / "missing" / "x.txt").string(), "x"),
                  std::runtime_error);
}
