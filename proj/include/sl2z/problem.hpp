#pragma once

// Problem files and verdict reports.
//
//   {
//     "name": "...",                                       optional
//     "generators": [ {"matrix": [["0","-1"],["1","0"]], "label": "..."},
//                     {"word": {"sign": 1, "sr": "srr"}} ],
//     "target": {"matrix": ...} or {"word": ...},          optional
//     "parameters": {"cap": 8, "depth": 4}                 optional
//   }
//
// Matrix entries are decimal strings (plain JSON integers are accepted on
// input).  Generator indices in reports are 1-based.

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "sl2z/core.hpp"
#include "sl2z/decision.hpp"
#include "sl2z/encoders.hpp"

namespace sl2z {

/// Input error with the JSON path of the offending field.
class ProblemError : public std::runtime_error {
 public:
  ProblemError(const std::string& path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what), path_(path) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

struct ProblemFile {
  std::string name;
  GeneratorSet generators;
  std::vector<std::string> labels;  // empty or one per generator
  std::optional<Mat2> target;
  std::optional<std::size_t> cap;
  std::optional<std::size_t> depth;
  std::vector<std::string> warnings;
};

namespace detail {

using json = nlohmann::ordered_json;

inline void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ProblemError(path, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* k : keys) known = known || key == k;
    if (!known) throw ProblemError(path, "unknown key \"" + key + "\"");
  }
}

inline Integer parse_integer(const json& j, const std::string& path) {
  if (j.is_number_integer()) return j.is_number_unsigned() ? Integer(j.get<std::uint64_t>()) : Integer(j.get<std::int64_t>());
  if (!j.is_string()) throw ProblemError(path, "expected a decimal integer string, got " + j.dump());
  const std::string s = j.get<std::string>();
  std::size_t start = (!s.empty() && (s[0] == '-' || s[0] == '+')) ? 1 : 0;
  if (s.size() == start) throw ProblemError(path, "expected a decimal integer, got \"" + s + "\"");
  for (std::size_t i = start; i < s.size(); ++i) {
    if (s[i] < '0' || s[i] > '9') throw ProblemError(path, "expected a decimal integer, got \"" + s + "\"");
  }
  return Integer(s[0] == '+' ? s.substr(1) : s);
}

inline std::size_t parse_count(const json& j, const std::string& path) {
  if (!j.is_number_unsigned()) throw ProblemError(path, "expected a nonnegative integer, got " + j.dump());
  return j.get<std::size_t>();
}

inline Mat2 parse_matrix(const json& j, const std::string& path) {
  if (!j.is_array() || j.size() != 2) throw ProblemError(path, "expected [[a,b],[c,d]]");
  Integer e[4];
  for (std::size_t r = 0; r < 2; ++r) {
    const std::string row = path + "[" + std::to_string(r) + "]";
    if (!j[r].is_array() || j[r].size() != 2) throw ProblemError(row, "expected a row of two entries");
    for (std::size_t c = 0; c < 2; ++c) e[2 * r + c] = parse_integer(j[r][c], row + "[" + std::to_string(c) + "]");
  }
  try {
    return Mat2(e[0], e[1], e[2], e[3]);
  } catch (const std::invalid_argument& ex) {
    throw ProblemError(path, ex.what());
  }
}

inline SignedWord parse_word(const json& j, const std::string& path, std::vector<std::string>& warnings) {
  only_keys(j, path, {"sign", "sr"});
  if (!j.contains("sign") || !j.contains("sr")) throw ProblemError(path, "word needs \"sign\" and \"sr\"");
  const json& sj = j["sign"];
  if (!sj.is_number_integer() || (sj.get<int>() != 1 && sj.get<int>() != -1)) {
    throw ProblemError(path + ".sign", "expected 1 or -1, got " + sj.dump());
  }
  if (!j["sr"].is_string()) throw ProblemError(path + ".sr", "expected a string over s and r");
  const std::string sr = j["sr"].get<std::string>();
  for (char ch : sr) {
    if (ch != 's' && ch != 'r') throw ProblemError(path + ".sr", "letter '" + std::string(1, ch) + "' is not s or r");
  }
  const Sign sign = sj.get<int>() == 1 ? Sign::plus : Sign::minus;
  if (is_reduced(sr)) return SignedWord{sign, sr};
  SignedWord w = reduce(sr, sign);
  warnings.push_back(path + ": word \"" + sr + "\" normalized to " + w.to_string());
  return w;
}

/// Either {"matrix": ...} or {"word": ...}; label only where allowed.
inline Mat2 parse_element(const json& j, const std::string& path, std::vector<std::string>& warnings,
                          std::string* label) {
  if (label) {
    only_keys(j, path, {"matrix", "word", "label"});
  } else {
    only_keys(j, path, {"matrix", "word"});
  }
  if (j.contains("matrix") == j.contains("word")) throw ProblemError(path, "expected exactly one of \"matrix\" or \"word\"");
  if (label && j.contains("label")) {
    if (!j["label"].is_string()) throw ProblemError(path + ".label", "expected a string");
    *label = j["label"].get<std::string>();
  }
  if (j.contains("matrix")) return parse_matrix(j["matrix"], path + ".matrix");
  return evaluate(parse_word(j["word"], path + ".word", warnings));
}

inline json matrix_json(const Mat2& m) {
  return json::array({json::array({m.a().str(), m.b().str()}), json::array({m.c().str(), m.d().str()})});
}

inline json sequence_json(const IndexSequence& s) {
  json out = json::array();
  for (std::size_t i : s) out.push_back(i + 1);
  return out;
}

/// Two-space layout that breaks lines for the top level and for containers
/// holding other containers, down to max_level; the rest stays on one line.
inline void layout(const json& j, std::size_t level, std::size_t max_level, std::string& out) {
  const bool nested = j.is_structured() && std::any_of(j.begin(), j.end(), [](const json& x) { return x.is_structured(); });
  if ((!nested && level > 0) || !j.is_structured() || level >= max_level) {
    out += j.dump();
    return;
  }
  const std::string pad(2 * (level + 1), ' ');
  const bool object = j.is_object();
  out += object ? "{\n" : "[\n";
  std::size_t k = 0;
  for (auto it = j.begin(); it != j.end(); ++it, ++k) {
    out += pad;
    if (object) out += json(it.key()).dump() + ": ";
    layout(it.value(), level + 1, max_level, out);
    out += k + 1 < j.size() ? ",\n" : "\n";
  }
  out += std::string(2 * level, ' ') + (object ? "}" : "]");
}

inline std::string layout(const json& j, std::size_t max_level) {
  std::string out;
  layout(j, 0, max_level, out);
  return out + "\n";
}

}  // namespace detail

inline ProblemFile parse_problem_json(const std::string& text) {
  detail::json j;
  try {
    j = detail::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProblemError("", std::string("malformed JSON: ") + e.what());
  }
  ProblemFile p;
  detail::only_keys(j, "$", {"name", "generators", "target", "parameters"});
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ProblemError("$.name", "expected a string");
    p.name = j["name"].get<std::string>();
  }
  if (!j.contains("generators")) throw ProblemError("$", "missing \"generators\"");
  const auto& gens = j["generators"];
  if (!gens.is_array() || gens.empty()) throw ProblemError("$.generators", "expected a nonempty array");
  bool any_label = false;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < gens.size(); ++i) {
    std::string label;
    p.generators.add(detail::parse_element(gens[i], "$.generators[" + std::to_string(i) + "]", p.warnings, &label));
    any_label = any_label || gens[i].contains("label");
    labels.push_back(std::move(label));
  }
  if (any_label) p.labels = std::move(labels);
  if (j.contains("target")) p.target = detail::parse_element(j["target"], "$.target", p.warnings, nullptr);
  if (j.contains("parameters")) {
    const auto& params = j["parameters"];
    detail::only_keys(params, "$.parameters", {"cap", "k", "depth"});
    if (params.contains("cap") && params.contains("k")) throw ProblemError("$.parameters", "give either \"cap\" or \"k\"");
    for (const char* key : {"cap", "k"}) {
      if (params.contains(key)) p.cap = detail::parse_count(params[key], std::string("$.parameters.") + key);
    }
    if (params.contains("depth")) p.depth = detail::parse_count(params["depth"], "$.parameters.depth");
    if (p.cap == 0u) throw ProblemError("$.parameters.cap", "cap must be at least 1");
    if (p.depth == 0u) throw ProblemError("$.parameters.depth", "depth must be at least 1");
  }
  return p;
}

inline ProblemFile parse_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ProblemError("", "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem_json(buf.str());
}

/// Canonical form: keys in the order name, generators, target, parameters;
/// generators as matrices; two-space indentation and a trailing newline.
inline std::string write_problem(const ProblemFile& p) {
  detail::json j;
  if (!p.name.empty()) j["name"] = p.name;
  j["generators"] = detail::json::array();
  for (std::size_t i = 0; i < p.generators.size(); ++i) {
    detail::json g;
    g["matrix"] = detail::matrix_json(p.generators[i].matrix);
    if (!p.labels.empty()) g["label"] = p.labels.at(i);
    j["generators"].push_back(std::move(g));
  }
  if (p.target) j["target"] = {{"matrix", detail::matrix_json(*p.target)}};
  if (p.cap || p.depth) {
    detail::json params = detail::json::object();
    if (p.cap) params["cap"] = *p.cap;
    if (p.depth) params["depth"] = *p.depth;
    j["parameters"] = std::move(params);
  }
  return detail::layout(j, 2);
}

inline ProblemFile problem_from_fixture(const Fixture& f) {
  ProblemFile p;
  p.name = f.name;
  p.generators = f.generators;
  p.labels = f.labels();
  p.target = f.target;
  return p;
}

/// {"dfas": [{"states": n, "alphabet": k, "initial": q, "finals": [...],
///            "delta": [[from, letter, to], ...]}, ...]}
inline std::vector<Dfa> parse_dfas_json(const std::string& text) {
  detail::json j;
  try {
    j = detail::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ProblemError("", std::string("malformed JSON: ") + e.what());
  }
  detail::only_keys(j, "$", {"dfas"});
  if (!j.contains("dfas") || !j["dfas"].is_array() || j["dfas"].empty()) {
    throw ProblemError("$.dfas", "expected a nonempty array");
  }
  std::vector<Dfa> out;
  for (std::size_t i = 0; i < j["dfas"].size(); ++i) {
    const auto& d = j["dfas"][i];
    const std::string path = "$.dfas[" + std::to_string(i) + "]";
    detail::only_keys(d, path, {"states", "alphabet", "initial", "finals", "delta"});
    for (const char* key : {"states", "alphabet", "finals", "delta"}) {
      if (!d.contains(key)) throw ProblemError(path, std::string("missing \"") + key + "\"");
    }
    Dfa dfa;
    dfa.states = detail::parse_count(d["states"], path + ".states");
    dfa.alphabet = detail::parse_count(d["alphabet"], path + ".alphabet");
    if (d.contains("initial")) dfa.initial = detail::parse_count(d["initial"], path + ".initial");
    if (!d["finals"].is_array()) throw ProblemError(path + ".finals", "expected an array");
    for (std::size_t k = 0; k < d["finals"].size(); ++k) {
      dfa.finals.push_back(detail::parse_count(d["finals"][k], path + ".finals[" + std::to_string(k) + "]"));
    }
    if (!d["delta"].is_array()) throw ProblemError(path + ".delta", "expected an array");
    for (std::size_t k = 0; k < d["delta"].size(); ++k) {
      const std::string tp = path + ".delta[" + std::to_string(k) + "]";
      const auto& t = d["delta"][k];
      if (!t.is_array() || t.size() != 3) throw ProblemError(tp, "expected [from, letter, to]");
      const std::size_t from = detail::parse_count(t[0], tp + "[0]");
      const std::size_t letter = detail::parse_count(t[1], tp + "[1]");
      if (!dfa.delta.emplace(std::make_pair(from, letter), detail::parse_count(t[2], tp + "[2]")).second) {
        throw ProblemError(tp, "duplicate transition");
      }
    }
    out.push_back(std::move(dfa));
  }
  return out;
}

enum class ReportFormat { json, text };

inline int exit_code(Answer a) noexcept {
  switch (a) {
    case Answer::yes: return 0;
    case Answer::no: return 1;
    case Answer::unknown_up_to: return 2;
  }
  return 3;
}

inline constexpr int input_error_exit = 3;

namespace detail {

inline const char* answer_phrase(const Verdict& v) {
  const bool yes = v.answer == Answer::yes;
  switch (v.problem) {
    case Problem::identity: return yes ? "identity is a product" : "identity is not a product";
    case Problem::membership: return yes ? "target is a product" : "target is not a product";
    case Problem::freeness: return yes ? "free" : "not free";
    case Problem::finite_freeness:
      return v.answer == Answer::no ? "not finitely free" : "finitely free unknown beyond the depth bound";
    case Problem::count: return yes ? "count within cap" : "count exceeds cap";
    case Problem::recurrence: return yes ? "recurrent" : "not recurrent";
  }
  return "";
}

inline std::string sequence_text(const IndexSequence& s) {
  std::string out = "[";
  for (std::size_t k = 0; k < s.size(); ++k) out += (k ? "," : "") + std::to_string(s[k] + 1);
  return out + "]";
}

}  // namespace detail

inline detail::json report_json(const Verdict& v) {
  detail::json j;
  j["problem"] = to_string(v.problem);
  j["answer"] = to_string(v.answer);
  if (v.count) {
    if (v.count->kind == Count::Kind::exact) {
      j["count"] = v.count->value;
    } else {
      j["count"] = to_string(*v.count);
    }
  }
  if (!v.witness.empty()) {
    j["witness"] = detail::json::array();
    for (const auto& s : v.witness) j["witness"].push_back(detail::sequence_json(s));
  }
  if (v.depth_bound) j["depth_bound"] = *v.depth_bound;
  if (v.matrix) j["matrix"] = detail::matrix_json(*v.matrix);
  if (v.pumping) {
    j["pumping"] = {{"alpha", detail::sequence_json(v.pumping->alpha)},
                    {"sigma", detail::sequence_json(v.pumping->sigma)},
                    {"gamma", detail::sequence_json(v.pumping->gamma)}};
  }
  if (!v.certificate.empty()) j["certificate"] = v.certificate;
  return j;
}

inline std::string emit_report(const Verdict& v, ReportFormat format) {
  if (format == ReportFormat::json) return detail::layout(report_json(v), 2);
  std::ostringstream out;
  out << "problem: " << to_string(v.problem) << "\n";
  out << "answer: " << to_string(v.answer);
  if (v.depth_bound) out << "(" << *v.depth_bound << ")";
  out << " (" << detail::answer_phrase(v) << ")\n";
  if (v.count) out << "count: " << to_string(*v.count) << "\n";
  if (v.matrix) out << "matrix: " << v.matrix->to_string() << "\n";
  for (const auto& s : v.witness) out << "witness: " << detail::sequence_text(s) << "\n";
  if (v.pumping) {
    out << "pumping: alpha=" << detail::sequence_text(v.pumping->alpha)
        << " sigma=" << detail::sequence_text(v.pumping->sigma)
        << " gamma=" << detail::sequence_text(v.pumping->gamma) << "\n";
  }
  if (!v.certificate.empty()) out << "certificate: " << v.certificate << "\n";
  return out.str();
}

}  // namespace sl2z
