#include <catch_amalgamated.hpp>

#include <fstream>
#include <random>
#include <sstream>

#include "sl2z/problem.hpp"
#include "support.hpp"

using namespace sl2z;

namespace {

std::string data(const std::string& name) { return std::string(SL2Z_TEST_DATA) + "/" + name; }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string error_of(const std::string& text) {
  try {
    parse_problem_json(text);
  } catch (const ProblemError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("problem files parse", "[io]") {
  const auto p = parse_problem(data("s_and_r.json"));
  CHECK(p.name == "S and R");
  REQUIRE(p.generators.size() == 2);
  CHECK(p.generators[0].matrix == Mat2::S());
  CHECK(p.generators[1].matrix == Mat2::R());
  CHECK(p.target == -Mat2::identity());
  CHECK(p.cap == 3u);
  CHECK(p.depth == 2u);
  CHECK(p.warnings.empty());
  CHECK(p.labels.empty());
}

TEST_CASE("problem file errors name the field", "[io]") {
  const std::string entry = error_of(slurp(data("bad_entry.json")));
  CHECK(entry.find("$.generators[0].matrix[0][1]") != std::string::npos);
  CHECK(entry.find("2.5") != std::string::npos);
  CHECK(error_of(slurp(data("bad_det.json"))).find("determinant must be 1") != std::string::npos);
  CHECK(error_of(slurp(data("bad_key.json"))).find("unknown key \"weight\"") != std::string::npos);
  CHECK(error_of(slurp(data("malformed.json"))).find("malformed JSON") != std::string::npos);

  CHECK(error_of(R"({"generators": []})").find("$.generators") != std::string::npos);
  CHECK(error_of(R"({"generators": [{"word": {"sign": 2, "sr": "s"}}]})").find("$.generators[0].word.sign") !=
        std::string::npos);
  CHECK(error_of(R"({"generators": [{"word": {"sign": 1, "sr": "sx"}}]})").find(".sr") != std::string::npos);
  CHECK(error_of(R"({"generators": [{"matrix": [[1,0],[0,1]], "word": {"sign": 1, "sr": ""}}]})") != "");
  CHECK(error_of(R"({"generators": [{"matrix": [[1,0],[0,1]]}], "target": {"matrix": [[1,0],[0,1]], "label": "x"}})")
            .find("$.target") != std::string::npos);
  CHECK(error_of(R"({"generators": [{"matrix": [[1,0],[0,1]]}], "parameters": {"cap": 0}})").find("cap") !=
        std::string::npos);
  CHECK(error_of(R"({"generators": [{"matrix": [[1,0],[0,1]]}], "extra": 1})").find("unknown key") !=
        std::string::npos);
  CHECK_THROWS_AS(parse_problem(data("does_not_exist.json")), ProblemError);
}

TEST_CASE("unreduced words are normalized with a warning", "[io]") {
  const auto p = parse_problem_json(R"({"generators": [{"word": {"sign": 1, "sr": "ss"}}]})");
  CHECK(p.generators[0].matrix == -Mat2::identity());
  REQUIRE(p.warnings.size() == 1);
  CHECK(p.warnings[0].find("$.generators[0].word") != std::string::npos);
}

TEST_CASE("big entries survive exactly", "[io]") {
  Mat2 big = Mat2::identity();
  for (int k = 0; k < 80; ++k) big *= Mat2(2, 1, 1, 1);
  REQUIRE(big.a() > Integer("1000000000000000000000000000000"));
  ProblemFile p;
  p.generators.add(big);
  const std::string text = write_problem(p);
  CHECK(text.find("\"" + big.a().str() + "\"") != std::string::npos);
  CHECK(parse_problem_json(text).generators[0].matrix == big);
}

TEST_CASE("written problems round-trip byte for byte", "[io][property]") {
  std::vector<ProblemFile> problems{problem_from_fixture(encode_essp({1, 2, 3})),
                                    problem_from_fixture(encode_ssp({1, 2}, 3)), problem_from_fixture(prop1_fixture())};
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    ProblemFile p;
    for (std::size_t k = 0; k < 1 + rng() % 4; ++k) p.generators.add(test_support::random_sl2(rng, 6));
    if (rng() % 2) p.target = test_support::random_sl2(rng, 6);
    if (rng() % 2) p.cap = 1 + rng() % 9;
    problems.push_back(p);
  }
  for (const auto& p : problems) {
    const std::string once = write_problem(p);
    const ProblemFile back = parse_problem_json(once);
    CHECK(write_problem(back) == once);
    REQUIRE(back.generators.size() == p.generators.size());
    for (std::size_t i = 0; i < p.generators.size(); ++i) CHECK(back.generators[i].matrix == p.generators[i].matrix);
    CHECK(back.target == p.target);
  }
}

TEST_CASE("DFA files parse", "[io]") {
  const auto dfas = parse_dfas_json(slurp(data("two_dfas.json")));
  REQUIRE(dfas.size() == 2);
  CHECK(dfas[0].accepts({0, 0, 1}));
  CHECK_FALSE(dfas[0].accepts({0}));
  CHECK(dfas[1].accepts({1, 1}));
  CHECK_FALSE(dfas[1].accepts({0}));
  CHECK_THROWS_AS(parse_dfas_json(R"({"dfas": [{"states": 1, "alphabet": 1, "finals": [], "delta": [[0, 0]]}]})"),
                  ProblemError);
  CHECK_THROWS_AS(parse_dfas_json(R"({"dfas": []})"), ProblemError);
}

TEST_CASE("reports", "[io]") {
  const auto s = GeneratorSet::from_matrices(std::vector<Mat2>{Mat2::S()});
  const auto id = identity_in_semigroup(s);
  const auto j = nlohmann::json::parse(emit_report(id, ReportFormat::json));
  CHECK(j["problem"] == "identity");
  CHECK(j["answer"] == "YES");
  CHECK(j["witness"] == nlohmann::json::parse("[[1,1,1,1]]"));
  CHECK(exit_code(id.answer) == 0);

  const Mat2 fa(1, 2, 0, 1), fb(1, 0, 2, 1);
  const auto free = GeneratorSet::from_matrices(std::vector<Mat2>{fa, fb});
  const auto unknown = finite_freeness(free, 4);
  const auto u = nlohmann::json::parse(emit_report(unknown, ReportFormat::json));
  CHECK(u["answer"] == "UNKNOWN_UP_TO");
  CHECK(u["depth_bound"] == 4);
  CHECK(exit_code(unknown.answer) == 2);

  const auto inf = count_factorizations(s, Mat2::S(), 4);
  const auto c = nlohmann::json::parse(emit_report(inf, ReportFormat::json));
  CHECK(c["count"] == "INFINITE");
  CHECK(c["answer"] == "NO");
  CHECK(exit_code(inf.answer) == 1);

  const std::string text = emit_report(is_free(s), ReportFormat::text);
  CHECK(text.find("answer: NO (not free)") != std::string::npos);
  CHECK(text.find("witness: [1]\n") != std::string::npos);
  CHECK(text.find("witness: [1,1,1,1,1]\n") != std::string::npos);
  CHECK(emit_report(unknown, ReportFormat::text).find("UNKNOWN_UP_TO(4)") != std::string::npos);

  // Fixed input, fixed bytes.
  CHECK(emit_report(is_free(s), ReportFormat::json) == emit_report(is_free(s), ReportFormat::json));
}
