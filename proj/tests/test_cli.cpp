#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "angelesco/cli.hpp"

using namespace angelesco;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  int c = run_cli(std::move(args), o, e);
  return {c, o.str(), e.str()};
}

int count_lines(const std::string &s) { return int(std::count(s.begin(), s.end(), '\n')); }

} // namespace

TEST_CASE("gap command", "[cli]") {
  auto r = run({"gap", "--a", "-2"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["s_a"] == "-1/63");
  CHECK(j["gap_width"] == "1/63");
  CHECK(j["a"] == "-2");
  CHECK(nlohmann::json::parse(run({"gap", "--a", "-1/2"}).out)["s_a"] == "1/126");
  CHECK(run({"gap", "--a", "0"}).code == 2);
  CHECK(run({"gap", "--a", "x"}).code == 2);
}

TEST_CASE("kernel command", "[cli]") {
  auto r = run({"kernel", "--x", "0.5", "--y", "1.5", "--tau", "0.3", "--beta", "0.5", "--method", "pairing"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  REQUIRE(j["results"].size() == 1);
  CHECK(j["results"][0]["method"] == "pairing");
  CHECK(j["results"][0]["value"].get<std::string>().rfind("1.60254078982992150531", 0) == 0);
  // byte-identical on repeat
  auto again = run({"kernel", "--x", "0.5", "--y", "1.5", "--tau", "0.3", "--beta", "0.5", "--method", "pairing"});
  CHECK(again.out == r.out);
}

TEST_CASE("invalid input exits with 2", "[cli]") {
  auto r = run({"kernel", "--x", "1", "--y", "1", "--tau", "0", "--beta", "0"});
  CHECK(r.code == 2);
  CHECK(r.err.find("coincident points unsupported") != std::string::npos);
  CHECK(run({"kernel", "--x", "1", "--y", "2", "--tau", "0", "--beta", "-2"}).code == 2);
  CHECK(run({"kernel", "--x", "1"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"grid", "--xmin", "0", "--xmax", "1", "--steps", "0"}).code == 2);
  CHECK(run({"verify", "--suite", "nonsense"}).code == 2);
  // 64 bits cannot meet the default 1e-20 tolerance
  CHECK(run({"--prec", "64", "gap", "--a", "-2"}).code == 2);
}

TEST_CASE("help exits with 0", "[cli]") {
  auto r = run({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("kernel") != std::string::npos);
}

TEST_CASE("precision from the environment", "[cli]") {
  ::setenv("ANGELESCO_PREC_BITS", "garbage", 1);
  CHECK(run({"gap", "--a", "-2"}).code == 2);
  ::setenv("ANGELESCO_PREC_BITS", "320", 1);
  auto r = run({"gap", "--a", "-2"});
  ::unsetenv("ANGELESCO_PREC_BITS");
  REQUIRE(r.code == 0);
  // more bits print more digits
  auto base = run({"gap", "--a", "-2"});
  CHECK(nlohmann::json::parse(r.out)["s_a_decimal"].get<std::string>().size() >
        nlohmann::json::parse(base.out)["s_a_decimal"].get<std::string>().size());
}

TEST_CASE("--out writes the file and nothing to stdout", "[cli]") {
  auto path = std::filesystem::temp_directory_path() / "angelesco_cli_test_out.json";
  std::filesystem::remove(path);
  auto r = run({"--out", path.string(), "gap", "--a", "-2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  CHECK(nlohmann::json::parse(s.str())["s_a"] == "-1/63");
  CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
  std::filesystem::remove(path);
}

TEST_CASE("grid command", "[cli]") {
  auto r = run({"grid", "--xmin", "-1", "--xmax", "1", "--steps", "8", "--finite-n", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("x,value\n", 0) == 0);
  CHECK(count_lines(r.out) == 9);
  CHECK(run({"grid", "--xmin", "1", "--xmax", "0", "--steps", "4"}).code == 2);
}

TEST_CASE("converge command", "[cli]") {
  auto r = run({"converge", "--x", "1", "--y", "2", "--tau", "0", "--nlist", "4,8"});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("n,x,y,lhs,rhs,abs_error\n", 0) == 0);
  CHECK(count_lines(r.out) == 3);
  CHECK(run({"converge", "--x", "1", "--y", "0", "--tau", "0"}).code == 2);
}

TEST_CASE("verify command emits a schema-1 report", "[cli]") {
  auto r = run({"verify", "--suite", "concomitant,traces", "--n", "2"});
  REQUIRE(r.code == 0);
  auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema"] == 1);
  CHECK(j["pass"] == true);
  REQUIRE(j["checks"].size() > 0);
  for (auto &c : j["checks"]) {
    CHECK(c.contains("suite"));
    CHECK(c.contains("name"));
    CHECK(c.contains("max_error"));
    CHECK(c.contains("tolerance"));
    CHECK(c["pass"] == true);
  }
}

TEST_CASE("kernel reflection through the command line", "[cli]") {
  auto value = [](const Run &r) { return std::stod(nlohmann::json::parse(r.out)["results"][0]["value"].get<std::string>()); };
  auto a = run({"kernel", "--x", "1", "--y", "-2", "--tau", "0.5", "--beta", "0", "--method", "pairing"});
  auto b = run({"kernel", "--x", "-1", "--y", "2", "--tau", "-0.5", "--beta", "0", "--method", "pairing"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(value(a) == Catch::Approx(value(b)).epsilon(1e-14));
}

TEST_CASE("converge with a single n and the shared rhs", "[cli]") {
  auto r = run({"converge", "--x", "0.5", "--y", "1", "--tau", "0.2", "--beta", "0.5", "--nlist", "4"});
  REQUIRE(r.code == 0);
  CHECK(count_lines(r.out) == 2);
  auto k = run({"kernel", "--x", "0.5", "--y", "1", "--tau", "0.2", "--beta", "0.5", "--method", "pairing"});
  std::string kv = nlohmann::json::parse(k.out)["results"][0]["value"];
  // rhs is the fifth column of the data row
  std::string row = r.out.substr(r.out.find('\n') + 1);
  std::vector<std::string> cols;
  std::stringstream s(row);
  for (std::string c; std::getline(s, c, ',');)
    cols.push_back(c);
  REQUIRE(cols.size() == 6);
  CHECK(cols[4] == kv);
}

TEST_CASE("reflected grids", "[cli]") {
  auto values = [](const std::string &csv) {
    std::vector<double> v;
    std::stringstream s(csv);
    std::string line;
    std::getline(s, line);
    while (std::getline(s, line))
      v.push_back(std::stod(line.substr(line.find(',') + 1)));
    return v;
  };
  auto a = run({"grid", "--xmin", "0.5", "--xmax", "1.5", "--steps", "2", "--tau", "0.3", "--offset", "0.1"});
  auto b = run({"grid", "--xmin", "-1.5", "--xmax", "-0.5", "--steps", "2", "--tau", "-0.3", "--offset", "-0.1"});
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  auto va = values(a.out), vb = values(b.out);
  REQUIRE(va.size() == 2);
  CHECK(va[0] == Catch::Approx(vb[1]).epsilon(1e-14));
  CHECK(va[1] == Catch::Approx(vb[0]).epsilon(1e-14));
  // symmetric finite-n density is a palindrome on [-1, 1]
  auto d = values(run({"grid", "--xmin", "-1", "--xmax", "1", "--steps", "6", "--finite-n", "3", "--alpha", "0.5",
                       "--gamma", "0.5"})
                      .out);
  REQUIRE(d.size() == 6);
  for (int i = 0; i < 3; ++i)
    CHECK(d[i] == Catch::Approx(d[5 - i]).epsilon(1e-14));
}
