// sl2z-cli: decide, encode and enumerate from problem files.
//
// Exit codes: 0 YES, 1 NO, 2 UNKNOWN_UP_TO, 3 input error.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sl2z/sl2z.hpp"

namespace {

using namespace sl2z;
using json = nlohmann::ordered_json;

struct Options {
  std::string problem_path;
  std::size_t depth = default_depth;
  std::size_t cap = 8;
  std::string format = "json";
  std::size_t budget = default_oracle_budget;
  std::vector<std::string> values;
  std::string ssp_target;
  std::string dfa_path;
  std::vector<std::size_t> word;
  bool depth_given = false;
  bool cap_given = false;
};

ReportFormat format_of(const Options& o) { return o.format == "text" ? ReportFormat::text : ReportFormat::json; }

std::vector<Integer> parse_values(const std::vector<std::string>& raw) {
  std::vector<Integer> out;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    out.push_back(detail::parse_integer(json(raw[i]), "--values[" + std::to_string(i) + "]"));
  }
  return out;
}

ProblemFile load(const Options& o) {
  ProblemFile p = parse_problem(o.problem_path);
  for (const auto& w : p.warnings) std::cerr << "warning: " << w << "\n";
  return p;
}

const Mat2& require_target(const ProblemFile& p) {
  if (!p.target) throw ProblemError("$.target", "this command needs a target matrix");
  return *p.target;
}

int report(const Verdict& v, const Options& o) {
  std::cout << emit_report(v, format_of(o));
  return exit_code(v.answer);
}

int print_problem(const ProblemFile& p, const Options& o) {
  if (format_of(o) == ReportFormat::json) {
    std::cout << write_problem(p);
    return 0;
  }
  if (!p.name.empty()) std::cout << "name: " << p.name << "\n";
  for (std::size_t i = 0; i < p.generators.size(); ++i) {
    std::cout << "generator " << i + 1 << ": " << p.generators[i].matrix.to_string();
    if (!p.labels.empty()) std::cout << "  " << p.labels[i];
    std::cout << "\n";
  }
  if (p.target) std::cout << "target: " << p.target->to_string() << "\n";
  return 0;
}

// Bounded exhaustive search: earliest collision, or count and first
// factorization of the target.
int run_oracle(const ProblemFile& p, const Options& o) {
  json j;
  j["problem"] = "oracle";
  int code = 2;
  if (p.target) {
    const auto n = oracle_count(p.generators, *p.target, o.depth, o.budget);
    j["answer"] = n > 0 ? "YES" : "UNKNOWN_UP_TO";
    j["count"] = n;
    if (n > 0) {
      j["witness"] = json::array({detail::sequence_json(*oracle_find(p.generators, *p.target, o.depth, o.budget))});
      code = 0;
    }
  } else if (const auto c = find_collision(p.generators, o.depth, o.budget)) {
    j["answer"] = "NO";
    j["witness"] = json::array({detail::sequence_json(c->first), detail::sequence_json(c->second)});
    code = 1;
  } else {
    j["answer"] = "UNKNOWN_UP_TO";
  }
  j["depth_bound"] = o.depth;
  if (format_of(o) == ReportFormat::json) {
    std::cout << detail::layout(j, 2);
  } else {
    std::cout << "problem: oracle\nanswer: " << j["answer"].get<std::string>() << "(" << o.depth << ")\n";
    if (j.contains("count")) std::cout << "count: " << j["count"].get<std::uint64_t>() << "\n";
    if (j.contains("witness")) {
      for (const auto& w : j["witness"]) std::cout << "witness: " << w.dump() << "\n";
    }
  }
  return code;
}

int dispatch(const std::string& cmd, Options o) {
  if (cmd == "encode-essp") return print_problem(problem_from_fixture(encode_essp(parse_values(o.values))), o);
  if (cmd == "encode-ssp") {
    const Integer x = detail::parse_integer(json(o.ssp_target), "--target");
    return print_problem(problem_from_fixture(encode_ssp(parse_values(o.values), x)), o);
  }
  if (cmd == "encode-dfa") {
    std::ifstream in(o.dfa_path, std::ios::binary);
    if (!in) throw ProblemError("", "cannot read " + o.dfa_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto enc = encode_dfa_intersection(parse_dfas_json(buf.str()));
    ProblemFile p = problem_from_fixture(enc.fixture);
    if (!o.word.empty()) p.target = enc.probe(o.word);
    return print_problem(p, o);
  }

  const ProblemFile p = load(o);
  if (!o.depth_given && p.depth) o.depth = *p.depth;
  if (!o.cap_given && p.cap) o.cap = *p.cap;
  if (cmd == "check-free") return report(is_free(p.generators), o);
  if (cmd == "check-finite-free") return report(finite_freeness(p.generators, o.depth, o.budget), o);
  if (cmd == "identity") return report(identity_in_semigroup(p.generators), o);
  if (cmd == "member") return report(membership(p.generators, require_target(p)), o);
  if (cmd == "count") return report(count_factorizations(p.generators, require_target(p), o.cap), o);
  if (cmd == "recurrent") return report(is_recurrent(p.generators, require_target(p)), o);
  if (cmd == "oracle") return run_oracle(p, o);
  throw ProblemError("", "unknown command " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision procedures for finitely generated subsemigroups of SL(2,Z)"};
  app.require_subcommand(1);
  Options o;

  auto common = [&](CLI::App* sub, bool needs_problem) {
    if (needs_problem) sub->add_option("problem", o.problem_path, "problem JSON file")->required()->check(CLI::ExistingFile);
    sub->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  };
  auto bounded = [&](CLI::App* sub) {
    sub->add_option("--depth", o.depth, "bound for bounded searches")->check(CLI::PositiveNumber);
    sub->add_option("--budget", o.budget, "oracle sequence budget")->check(CLI::PositiveNumber);
  };

  const std::vector<std::pair<const char*, const char*>> deciders{
      {"check-free", "is the semigroup free"},
      {"check-finite-free", "does every element have finitely many factorizations"},
      {"identity", "is the identity a product"},
      {"member", "is the target a product"},
      {"count", "number of factorizations of the target, up to the cap"},
      {"recurrent", "does the target have infinitely many factorizations"},
      {"oracle", "bounded exhaustive enumeration"}};
  for (const auto& [name, help] : deciders) {
    auto* sub = app.add_subcommand(name, help);
    common(sub, true);
    bounded(sub);
    sub->add_option("--cap", o.cap, "count cap")->check(CLI::PositiveNumber);
  }

  auto* essp = app.add_subcommand("encode-essp", "equal subset sum instance as a generator set");
  common(essp, false);
  essp->add_option("--values", o.values, "positive integers")->required()->delimiter(',');
  auto* ssp = app.add_subcommand("encode-ssp", "subset sum instance as a generator set");
  common(ssp, false);
  ssp->add_option("--values", o.values, "positive integers")->required()->delimiter(',');
  ssp->add_option("--target", o.ssp_target, "target sum")->required();
  auto* dfa = app.add_subcommand("encode-dfa", "DFA union as a generator set");
  common(dfa, false);
  dfa->add_option("--dfa", o.dfa_path, "DFA JSON file")->required()->check(CLI::ExistingFile);
  dfa->add_option("--word", o.word, "letters of w; sets the target to the matrix of # w #")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return input_error_exit;
  }

  CLI::App* sub = app.get_subcommands().front();
  for (const char* flag : {"--depth", "--cap"}) {
    if (sub->get_option_no_throw(flag) && sub->count(flag) > 0) {
      (std::string(flag) == "--depth" ? o.depth_given : o.cap_given) = true;
    }
  }
  try {
    return dispatch(sub->get_name(), o);
  } catch (const ProblemError& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const OracleBudgetExceeded& e) {
    std::cerr << "error: " << e.what() << " (raise --budget or lower --depth)\n";
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
  } catch (const std::length_error& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return input_error_exit;
}
