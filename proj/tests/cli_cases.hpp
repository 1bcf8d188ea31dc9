#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace unialg::testing {

struct Case {
  const char* name;
  std::vector<std::string> args;
  int exit_code;
};

// Paths are relative to the source tree so golden output is portable.
inline const std::vector<Case> kCliCases = {
    {"show_z4", {"show", "--algebra", "data/algebras/z4.json"}, 0},
    {"show_canonical", {"show", "--canonical", "--algebra", "data/algebras/semilattice2.json"}, 0},
    {"show_trivial_json", {"show", "--json", "--algebra", "data/algebras/trivial.json"}, 0},
    {"free_semilattice", {"free", "--k", "2", "--base", "data/algebras/semilattice2.json"}, 0},
    {"free_z2_json", {"free", "--json", "--k", "2", "--base", "data/algebras/z2.json"}, 0},
    {"free_mixed", {"free", "--k", "1", "--base", "data/algebras/z2.json", "--base",
                    "data/algebras/semilattice2.json"}, 0},
    {"conlat_z4", {"conlat", "--algebra", "data/algebras/z4.json"}, 0},
    {"conlat_semilattice_json", {"conlat", "--json", "--algebra", "data/algebras/semilattice2.json"}, 0},
    {"member_self", {"member", "--algebra", "data/algebras/z4.json", "--generators",
                     "data/algebras/z4.json"}, 0},
    {"member_negative", {"member", "--algebra", "data/algebras/semilattice2.json", "--generators",
                         "data/algebras/z2.json"}, 1},
    {"member_quotient_json", {"member", "--json", "--algebra", "data/algebras/z2.json",
                              "--generators", "data/algebras/z4.json"}, 0},
    {"member_trivial", {"member", "--algebra", "data/algebras/trivial.json", "--generators",
                        "data/algebras/semilattice2.json"}, 0},
    {"member_tuple", {"member", "--algebra", "data/algebras/z4.json", "--generators",
                      "data/algebras/z4.json", "--tuple", "3,1"}, 0},
    {"member_filter", {"member", "--mode", "filter", "--algebra", "data/algebras/z2.json",
                       "--generators", "data/algebras/z4.json"}, 0},
    {"member_filter_negative_json", {"member", "--json", "--mode", "filter", "--algebra",
                                     "data/algebras/z4.json", "--generators",
                                     "data/algebras/z2.json"}, 1},
    {"close_z4_h", {"close", "--ops", "H", "--algebra", "data/algebras/z4.json"}, 0},
    {"close_semilattice_json", {"close", "--json", "--ops", "S,P", "--size-bound", "4",
                                "--algebra", "data/algebras/semilattice2.json"}, 0},
    {"correspondence_trivial", {"verify-correspondence", "--base", "data/algebras/trivial.json"}, 0},
    {"correspondence_z2_json", {"verify-correspondence", "--json", "--size-bound", "4",
                                "--arity-bound", "2", "--base", "data/algebras/z2.json"}, 0},
    {"pointwise_semilattice", {"verify-pointwise", "--k", "2", "--algebra",
                               "data/algebras/semilattice2.json"}, 0},
    {"pointwise_z2_json", {"verify-pointwise", "--json", "--k", "1", "--algebra",
                           "data/algebras/z2.json"}, 0},
    {"entourages_z2", {"entourages", "--k", "1", "--algebra", "data/algebras/z2.json"}, 0},
    {"entourages_z4_tuple_json", {"entourages", "--json", "--tuple", "2", "--algebra",
                                  "data/algebras/z4.json"}, 0},
    {"error_range_json", {"show", "--json", "--algebra", "tests/data/bad_range.json"}, 2},
    {"error_length", {"conlat", "--algebra", "tests/data/bad_length.json"}, 2},
    {"error_syntax_json", {"show", "--json", "--algebra", "tests/data/bad_syntax.json"}, 2},
    {"error_usage", {"member", "--algebra", "data/algebras/z2.json"}, 2},
    {"error_resource_json", {"free", "--json", "--k", "3", "--max-elements", "10", "--base",
                             "data/algebras/z4.json"}, 3},
    {"error_bound_json", {"member", "--json", "--mode", "filter", "--arity-bound", "1",
                          "--tuple", "0,1", "--algebra", "data/algebras/semilattice2.json",
                          "--generators", "data/algebras/semilattice2.json"}, 3},
};

// JSON reports carry wall-clock timings; drop them before comparing.
inline std::string normalize_cli_output(const std::string& out) {
  if (out.empty() || out[0] != '{') {
    return out;
  }
  auto j = nlohmann::ordered_json::parse(out);
  j.erase("timings");
  return j.dump(2) + "\n";
}

inline std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline std::filesystem::path golden_path(const Case& c) {
  return std::filesystem::path("tests/golden") / (std::string(c.name) + ".txt");
}

}  // namespace unialg::testing
