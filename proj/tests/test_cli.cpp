#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli_cases.hpp"
#include "doctest.h"
#include "unialg/cli.hpp"

namespace fs = std::filesystem;
using unialg::testing::slurp;

TEST_CASE("golden CLI output") {
  fs::current_path(UNIALG_SOURCE_DIR);
  const bool update = std::getenv("UNIALG_UPDATE_GOLDEN") != nullptr;
  for (const auto& c : unialg::testing::kCliCases) {
    CAPTURE(c.name);
    std::ostringstream out;
    std::ostringstream err;
    const int code = unialg::cli::run(c.args, out, err);
    CHECK(code == c.exit_code);
    const std::string actual = unialg::testing::normalize_cli_output(out.str());
    const fs::path golden = unialg::testing::golden_path(c);
    if (update) {
      std::ofstream(golden, std::ios::binary) << actual;
      continue;
    }
    REQUIRE(fs::exists(golden));
    CHECK(actual == slurp(golden));
  }
}

TEST_CASE("canonical files print byte for byte") {
  fs::current_path(UNIALG_SOURCE_DIR);
  for (const char* name : {"semilattice2", "z2", "z4", "trivial"}) {
    const std::string path = std::string("data/algebras/") + name + ".json";
    std::ostringstream out;
    std::ostringstream err;
    CHECK(unialg::cli::run({"show", "--canonical", "--algebra", path}, out, err) == 0);
    CHECK(out.str() == slurp(path));
  }
}

TEST_CASE("help exits cleanly") {
  std::ostringstream out;
  std::ostringstream err;
  CHECK(unialg::cli::run({"--help"}, out, err) == 0);
  CHECK(out.str().find("verify-correspondence") != std::string::npos);
  CHECK(unialg::cli::run({}, out, err) == 2);
  CHECK(unialg::cli::run({"bogus"}, out, err) == 2);
}
