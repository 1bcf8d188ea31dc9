#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "unialg/free_algebra.hpp"
#include "unialg/io.hpp"

using namespace unialg;
using namespace unialg::testing;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const std::string kData = UNIALG_SOURCE_DIR "/data/algebras/";
const std::string kBad = UNIALG_SOURCE_DIR "/tests/data/";

ParseError parse_failure(std::string_view text) {
  try {
    parse_algebra(text, "t.json");
  } catch (const ParseError& e) {
    return e;
  }
  FAIL("expected a ParseError");
  throw;
}

}  // namespace

TEST_CASE("shipped algebra files load and round trip byte for byte") {
  for (const char* name : {"semilattice2", "z2", "z4", "trivial"}) {
    const std::string path = kData + name + ".json";
    const auto a = parse_algebra_file(path);
    CHECK(a.name() == name);
    CHECK(serialize_algebra(a) == slurp(path));
  }
  CHECK(parse_algebra_file(kData + "z4.json") == cyclic(4));
  CHECK(parse_algebra_file(kData + "semilattice2.json") == semilattice2());
}

TEST_CASE("serialization round trips arbitrary algebras") {
  Signature sig({{"g", 1}, {"h", 3}, {"quote\"d", 2}});
  std::vector<std::vector<Element>> tables{{1, 2, 0}, std::vector<Element>(27, 2), {0, 1, 2, 0, 1, 2, 0, 1, 2}};
  FiniteAlgebra a("mixed \\ name", sig, 3, tables);
  const auto text = serialize_algebra(a);
  const auto b = parse_algebra(text);
  CHECK(b == a);
  CHECK(b.name() == a.name());
  CHECK(serialize_algebra(b) == text);
}

TEST_CASE("schema violations name the JSON pointer") {
  const auto range = slurp(kBad + "bad_range.json");
  auto e = parse_failure(range);
  CHECK(e.json_path() == "/operations/0/table/2");
  REQUIRE(e.byte_offset() < range.size());
  // Third table entry of [0, 1, 2, 0].
  CHECK(range.compare(e.byte_offset(), 4, "2, 0") == 0);
  CHECK(std::string(e.what()).find("out of range") != std::string::npos);

  e = parse_failure(slurp(kBad + "bad_length.json"));
  CHECK(e.json_path() == "/operations/0/table");

  e = parse_failure(R"({"name": "a", "size": 0, "operations": []})");
  CHECK(e.json_path() == "/size");
  e = parse_failure(R"({"name": "a", "size": 2, "operations": [], "extra": 1})");
  CHECK(e.json_path() == "/extra");
  CHECK(e.byte_offset() == std::string_view(R"({"name": "a", "size": 2, "operations": [], "extra": )").size());
  e = parse_failure(R"({"name": "a", "size": -1, "operations": []})");
  CHECK(e.json_path() == "/size");
  e = parse_failure(R"({"name": "a", "size": 1, "operations": [{"symbol": "c", "arity": 0, "table": [0]}]})");
  CHECK(e.json_path() == "/operations/0/arity");
  e = parse_failure(R"({"size": 1, "operations": []})");
  CHECK(e.json_path() == "/");
  CHECK(e.byte_offset() == 0);
  CHECK(e.file() == "t.json");
}

TEST_CASE("syntax errors carry a byte offset") {
  const auto text = slurp(kBad + "bad_syntax.json");
  auto e = parse_failure(text);
  CHECK(e.json_path().empty());
  REQUIRE(e.byte_offset() < text.size());
  // The offending byte is the closing brace after the trailing comma.
  CHECK(text[e.byte_offset()] == '}');
  CHECK_THROWS_AS(parse_algebra_file(kBad + "missing.json"), ParseError);
}

TEST_CASE("terms and partitions") {
  const auto f = free_algebra(2, {semilattice2()});
  for (Element e = 0; e < f.size(); ++e) {
    const auto text = term_to_json(f.witness(e), f.signature());
    CHECK(term_from_json(text, f.signature()) == f.witness(e));
  }
  CHECK(term_to_json(f.witness(2), f.signature()) == R"(["f",["x",1],["x",2]])");
  CHECK_THROWS_AS(term_from_json(R"(["g",["x",1]])", f.signature()), ParseError);
  CHECK_THROWS_AS(term_from_json(R"(["f",["x",1]])", f.signature()), ParseError);
  CHECK_THROWS_AS(term_from_json(R"(["x",0])", f.signature()), ParseError);

  const auto p = Partition::from_labels(std::span<const Element>(std::vector<Element>{3, 3, 1, 0}));
  CHECK(partition_to_json(p) == "[0,0,1,2]");
  CHECK(partition_from_json("[0,0,1,2]") == p);
  CHECK_THROWS_AS(partition_from_json("[1,0]"), ParseError);
}
