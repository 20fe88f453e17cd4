#include "doctest.h"

#include "efimov/errors.hpp"
#include "efimov/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

using namespace efimov;
using namespace efimov::io;

TEST_SUITE("io") {

TEST_CASE("number formatting") {
  CHECK(format_number(1.0) == "1.00000000000e+00");
  CHECK(format_number(-22.694) == "-2.26940000000e+01");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
  CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
  for (double v : {0.1, 1.00624, -3.7e-9, 515.03})
    CHECK(std::abs(std::stod(format_number(v)) / v - 1) < 1e-11);
}

TEST_CASE("csv bytes") {
  Table t;
  t.columns = {"a", "b"};
  t.add({1.0, 2.5});
  t.add({-0.5, 0.0});
  std::ostringstream out;
  write_csv(out, t);
  CHECK(out.str() ==
        "a,b\n1.00000000000e+00,2.50000000000e+00\n-5.00000000000e-01,0.00000000000e+00\n");
  CHECK_THROWS_AS(t.add({1.0}), Error);

  const std::string path = "io_test_table.csv";
  write_csv(path, t);
  std::ifstream in(path, std::ios::binary);
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(bytes == out.str());
  std::remove(path.c_str());
}

TEST_CASE("config parsing") {
  std::istringstream in("# comment\n  s0 = 1.00624  \n\nlevels=3 # trailing\nname = bosons\n");
  const auto c = parse_config(in);
  CHECK(c.size() == 3);
  CHECK(*get_number(c, "s0") == 1.00624);
  CHECK(*get_integer(c, "levels") == 3);
  CHECK(*get_string(c, "name") == "bosons");
  CHECK(!get_number(c, "missing"));
  CHECK_THROWS_AS(get_number(c, "name"), ConfigError);

  std::istringstream no_eq("key value\n");
  CHECK_THROWS_AS(parse_config(no_eq), ConfigError);
  std::istringstream empty_key(" = 3\n");
  CHECK_THROWS_AS(parse_config(empty_key), ConfigError);
  std::istringstream duplicate("a = 1\na = 2\n");
  CHECK_THROWS_AS(parse_config(duplicate), ConfigError);
  CHECK_THROWS_AS(read_config("no/such/file.cfg"), ConfigError);

  std::istringstream frac("n = 2.5\n");
  CHECK_THROWS_AS(get_integer(parse_config(frac), "n"), ConfigError);
}

TEST_CASE("number parsing") {
  CHECK(parse_number("inf", "x") == std::numeric_limits<double>::infinity());
  CHECK(parse_number("+inf", "x") == std::numeric_limits<double>::infinity());
  CHECK(parse_number("-inf", "x") == -std::numeric_limits<double>::infinity());
  CHECK(parse_number(" -1e-3 ", "x") == -1e-3);
  CHECK_THROWS_AS(parse_number("", "x"), ConfigError);
  CHECK_THROWS_AS(parse_number("1.5abc", "x"), ConfigError);
  CHECK_THROWS_AS(parse_number("nan", "x"), ConfigError);
  CHECK_THROWS_AS(parse_number("1e999", "x"), ConfigError);
}

TEST_CASE("json manifest round trip") {
  Json m;
  m["subcommand"] = "universal";
  m["inputs"] = {{"mode", "constants"}, {"kappa-star", "1.0"}};
  m["results"] = {{"ratio", 22.694}};
  m["library_version"] = library_version();
  const std::string path = "io_test_manifest.json";
  write_json(path, m);
  std::ifstream in(path);
  const Json back = Json::parse(in);
  CHECK(back == m);
  CHECK(back.begin().key() == "subcommand");
  CHECK(std::string(library_version()).find('.') != std::string::npos);
  std::remove(path.c_str());
}

}  // TEST_SUITE
