#pragma once

// Group-alphabet encodings into SL(2,Z) and the fixture generators built on
// them: equal subset sum, subset sum, DFA union and the recurrent-without-
// identity example.
//
// Construction words are written over border letters (0, 1, ...), payload
// letters (a, b, ...) and an optional separator #.  They are mapped to the
// group alphabet z_1..z_l in a fixed order: border letters first, then the
// payload letters, then #.  alpha sends z_i to a^i b a^-i and f sends a, b to
// [[1,2],[0,1]] and [[1,0],[2,1]].

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sl2z/core.hpp"

namespace sl2z {

struct GroupLetter {
  std::uint32_t index;  // 1-based
  bool inverse = false;
  friend bool operator==(const GroupLetter&, const GroupLetter&) = default;
};

using GroupWord = std::vector<GroupLetter>;

/// Index 1 and 2 of the binary group alphabet.
inline constexpr GroupLetter letter_a{1, false};
inline constexpr GroupLetter letter_a_inv{1, true};
inline constexpr GroupLetter letter_b{2, false};
inline constexpr GroupLetter letter_b_inv{2, true};

inline GroupWord free_reduce(const GroupWord& w) {
  GroupWord out;
  out.reserve(w.size());
  for (const GroupLetter& x : w) {
    if (!out.empty() && out.back().index == x.index && out.back().inverse != x.inverse) {
      out.pop_back();
    } else {
      out.push_back(x);
    }
  }
  return out;
}

inline GroupWord inverse(const GroupWord& w) {
  GroupWord out(w.rbegin(), w.rend());
  for (auto& x : out) x.inverse = !x.inverse;
  return out;
}

inline std::string to_string(const GroupWord& w) {
  if (w.empty()) return "e";
  std::string out;
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (k) out += ' ';
    out += "z" + std::to_string(w[k].index);
    if (w[k].inverse) out += "'";
  }
  return out;
}

/// z_i -> a^i b a^-i,  z_i^-1 -> a^i b^-1 a^-i.
inline GroupWord alpha(const GroupWord& w, std::size_t alphabet_size) {
  GroupWord out;
  for (const GroupLetter& x : w) {
    if (x.index == 0 || x.index > alphabet_size) {
      throw std::out_of_range("letter z" + std::to_string(x.index) + " outside the alphabet of size " +
                              std::to_string(alphabet_size));
    }
    out.insert(out.end(), x.index, letter_a);
    out.push_back(x.inverse ? letter_b_inv : letter_b);
    out.insert(out.end(), x.index, letter_a_inv);
  }
  return out;
}

inline Mat2 f_matrix(const GroupWord& w) {
  static const Mat2 fa(1, 2, 0, 1), fa_inv(1, -2, 0, 1), fb(1, 0, 2, 1), fb_inv(1, 0, -2, 1);
  Mat2 m = Mat2::identity();
  for (const GroupLetter& x : w) {
    if (x.index == 1) {
      m *= x.inverse ? fa_inv : fa;
    } else if (x.index == 2) {
      m *= x.inverse ? fb_inv : fb;
    } else {
      throw std::invalid_argument("letter z" + std::to_string(x.index) + " is not in {a, b}");
    }
  }
  return m;
}

/// f(alpha(z_j^i)) = [[1+4ij, -8ij^2], [2i, 1-4ij]].
inline Mat2 closed_form(const Integer& i, const Integer& j) {
  if (i < 1 || j < 1) throw std::invalid_argument("closed form needs i >= 1 and j >= 1");
  return Mat2(1 + 4 * i * j, -8 * i * j * j, 2 * i, 1 - 4 * i * j);
}

// ---------------------------------------------------------------------------
// Bordered construction words
// ---------------------------------------------------------------------------

struct Token {
  enum class Kind : std::uint8_t { border, payload, hash };
  Kind kind;
  std::size_t index = 0;
  bool inverse = false;
  friend bool operator==(const Token&, const Token&) = default;
};

using TokenWord = std::vector<Token>;

inline Token border(std::size_t i, bool inv = false) { return {Token::Kind::border, i, inv}; }
inline Token payload(std::size_t c, bool inv = false) { return {Token::Kind::payload, c, inv}; }
inline Token hash_mark(bool inv = false) { return {Token::Kind::hash, 0, inv}; }

inline TokenWord payload_power(std::size_t c, std::size_t n, bool inv = false) {
  return TokenWord(n, payload(c, inv));
}

inline TokenWord concat(std::initializer_list<TokenWord> parts) {
  TokenWord out;
  for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

class EncodingAlphabet {
 public:
  EncodingAlphabet(std::size_t borders, std::size_t payloads, bool with_hash)
      : borders_(borders), payloads_(payloads), hash_(with_hash) {}

  std::size_t size() const noexcept { return borders_ + payloads_ + (hash_ ? 1 : 0); }

  GroupLetter letter(const Token& t) const {
    switch (t.kind) {
      case Token::Kind::border:
        if (t.index >= borders_) throw std::out_of_range("border letter out of range");
        return {static_cast<std::uint32_t>(t.index + 1), t.inverse};
      case Token::Kind::payload:
        if (t.index >= payloads_) throw std::out_of_range("payload letter out of range");
        return {static_cast<std::uint32_t>(borders_ + t.index + 1), t.inverse};
      case Token::Kind::hash:
        if (!hash_) throw std::out_of_range("alphabet has no separator");
        return {static_cast<std::uint32_t>(borders_ + payloads_ + 1), t.inverse};
    }
    throw std::logic_error("unreachable");
  }

  GroupWord group_word(const TokenWord& w) const {
    GroupWord out;
    out.reserve(w.size());
    for (const Token& t : w) out.push_back(letter(t));
    return out;
  }

  Mat2 matrix(const TokenWord& w) const { return f_matrix(alpha(group_word(w), size())); }

  std::string label(const TokenWord& w) const {
    if (w.empty()) return "e";
    std::string out;
    for (std::size_t k = 0; k < w.size();) {
      std::size_t run = 1;
      while (k + run < w.size() && w[k + run] == w[k]) ++run;
      if (!out.empty()) out += ' ';
      const Token& t = w[k];
      switch (t.kind) {
        case Token::Kind::border: out += std::to_string(t.index); break;
        case Token::Kind::payload: out += static_cast<char>('a' + t.index); break;
        case Token::Kind::hash: out += '#'; break;
      }
      if (t.inverse) out += '\'';
      if (run > 1) out += "^" + std::to_string(run);
      k += run;
    }
    return out;
  }

 private:
  std::size_t borders_, payloads_;
  bool hash_;
};

struct GroundTruth {
  std::optional<bool> free;
  std::optional<bool> identity;
  std::optional<bool> target_recurrent;
  std::optional<std::size_t> target_count;  // finite factorization count of the target
  std::string provenance;
};

struct Fixture {
  std::string name;
  EncodingAlphabet alphabet;
  std::vector<TokenWord> words;
  GeneratorSet generators;
  std::optional<Mat2> target;
  GroundTruth truth;

  std::vector<std::string> labels() const {
    std::vector<std::string> out;
    for (const auto& w : words) out.push_back(alphabet.label(w));
    return out;
  }
};

namespace detail {

inline Fixture make_fixture(std::string name, EncodingAlphabet alphabet, std::vector<TokenWord> words) {
  Fixture f{std::move(name), alphabet, std::move(words), {}, std::nullopt, {}};
  for (const auto& w : f.words) f.generators.add(f.alphabet.matrix(w));
  return f;
}

inline void require_positive(const std::vector<Integer>& values) {
  if (values.empty()) throw std::invalid_argument("instance set U is empty");
  for (const auto& v : values) {
    if (v < 1) throw std::invalid_argument("instance values must be positive integers");
    if (v > 4096) throw std::invalid_argument("instance values above 4096 are not supported");
  }
}

inline std::string describe_subset(const std::vector<Integer>& values, std::uint64_t mask) {
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(mask >> i & 1)) continue;
    if (!first) out += ",";
    out += values[i].str();
    first = false;
  }
  return out + "}";
}

}  // namespace detail

/// Two subsets of U with equal sums, as bitmasks, if any.  Distinct subsets
/// with equal sums give disjoint nonempty ones after removing the overlap.
inline std::optional<std::pair<std::uint64_t, std::uint64_t>> equal_subset_sum(const std::vector<Integer>& values) {
  if (values.size() > 24) throw std::invalid_argument("equal subset sum enumeration limited to 24 values");
  std::map<Integer, std::uint64_t> seen;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << values.size()); ++mask) {
    Integer sum = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (mask >> i & 1) sum += values[i];
    }
    auto [it, inserted] = seen.emplace(sum, mask);
    if (!inserted) {
      const std::uint64_t common = it->second & mask;
      return std::pair{it->second & ~common, mask & ~common};
    }
  }
  return std::nullopt;
}

inline std::optional<std::uint64_t> subset_with_sum(const std::vector<Integer>& values, const Integer& target) {
  if (values.size() > 24) throw std::invalid_argument("subset sum enumeration limited to 24 values");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << values.size()); ++mask) {
    Integer sum = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (mask >> i & 1) sum += values[i];
    }
    if (sum == target) return mask;
  }
  return std::nullopt;
}

/// W = { i a^{s_{i+1}} (i+1)', i (i+1)' : 0 <= i < k } over border letters 0..k.
inline Fixture encode_essp(const std::vector<Integer>& values) {
  detail::require_positive(values);
  const std::size_t k = values.size();
  std::vector<TokenWord> words;
  for (std::size_t i = 0; i < k; ++i) {
    const auto s = values[i].convert_to<std::size_t>();
    words.push_back(concat({{border(i)}, payload_power(0, s), {border(i + 1, true)}}));
    words.push_back({border(i), border(i + 1, true)});
  }
  Fixture f = detail::make_fixture("essp", EncodingAlphabet(k + 1, 1, false), std::move(words));
  const auto pair = equal_subset_sum(values);
  f.truth.free = !pair.has_value();
  f.truth.provenance = pair ? "equal sums " + detail::describe_subset(values, pair->first) + " and " +
                                  detail::describe_subset(values, pair->second)
                            : "all subset sums distinct";
  return f;
}

/// Forward a-chain over borders 0..k, bridge k a'^x (k+1)', backward b-chain
/// over borders k+1..2k+1, bridge (2k+1) b'^x 0'.  The target is the matrix of
/// 0 e 1'.
inline Fixture encode_ssp(const std::vector<Integer>& values, const Integer& x) {
  detail::require_positive(values);
  if (x < 0 || x > 4096 * 24) throw std::invalid_argument("subset sum target out of range");
  const std::size_t k = values.size();
  const auto xs = x.convert_to<std::size_t>();
  std::vector<TokenWord> words;
  for (std::size_t i = 0; i < k; ++i) {
    const auto s = values[i].convert_to<std::size_t>();
    words.push_back(concat({{border(i)}, payload_power(0, s), {border(i + 1, true)}}));
    words.push_back({border(i), border(i + 1, true)});
  }
  for (std::size_t i = k + 1; i <= 2 * k; ++i) {
    const auto s = values[i - k - 1].convert_to<std::size_t>();
    words.push_back(concat({{border(i)}, payload_power(1, s), {border(i + 1, true)}}));
    words.push_back({border(i), border(i + 1, true)});
  }
  words.push_back(concat({{border(k)}, payload_power(0, xs, true), {border(k + 1, true)}}));
  words.push_back(concat({{border(2 * k + 1)}, payload_power(1, xs, true), {border(0, true)}}));
  Fixture f = detail::make_fixture("ssp", EncodingAlphabet(2 * k + 2, 2, false), std::move(words));
  f.target = f.alphabet.matrix({border(0), border(1, true)});
  const auto solution = subset_with_sum(values, x);
  f.truth.identity = solution.has_value();
  f.truth.target_recurrent = solution.has_value();
  if (!solution) f.truth.target_count = 1;
  f.truth.provenance = solution ? "subset " + detail::describe_subset(values, *solution) + " sums to " + x.str()
                                : "no subset sums to " + x.str();
  return f;
}

/// A DFA over letters 0..alphabet-1.  Missing transitions are rejecting.
struct Dfa {
  std::size_t states = 0;
  std::size_t alphabet = 0;
  std::size_t initial = 0;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> delta;
  std::vector<std::size_t> finals;

  bool accepts(const std::vector<std::size_t>& w) const {
    std::size_t q = initial;
    for (std::size_t c : w) {
      auto it = delta.find({q, c});
      if (it == delta.end()) return false;
      q = it->second;
    }
    return std::find(finals.begin(), finals.end(), q) != finals.end();
  }
};

struct DfaFixture {
  Fixture fixture;
  std::vector<Dfa> dfas;

  bool accepted_by_some(const std::vector<std::size_t>& w) const {
    return std::any_of(dfas.begin(), dfas.end(), [&](const Dfa& d) { return d.accepts(w); });
  }
  /// The matrix of # w #.
  Mat2 probe(const std::vector<std::size_t>& w) const {
    TokenWord t{hash_mark()};
    for (std::size_t c : w) t.push_back(payload(c));
    t.push_back(hash_mark());
    return fixture.alphabet.matrix(t);
  }
};

/// Per DFA over its private border letters: # e q0' for the initial state,
/// l c m' per transition and j e # per final state.
inline DfaFixture encode_dfa_intersection(const std::vector<Dfa>& dfas) {
  if (dfas.empty()) throw std::invalid_argument("DFA list is empty");
  const std::size_t sigma = dfas.front().alphabet;
  std::size_t total_states = 0;
  for (const Dfa& d : dfas) {
    if (d.alphabet != sigma) throw std::invalid_argument("DFAs must share one alphabet");
    if (d.states == 0 || d.initial >= d.states) throw std::invalid_argument("DFA has no valid initial state");
    for (const auto& [key, to] : d.delta) {
      if (key.first >= d.states || to >= d.states || key.second >= sigma) {
        throw std::invalid_argument("DFA transition out of range");
      }
    }
    for (std::size_t f : d.finals) {
      if (f >= d.states) throw std::invalid_argument("DFA final state out of range");
    }
    total_states += d.states;
  }
  std::vector<TokenWord> words;
  std::size_t offset = 0;
  for (const Dfa& d : dfas) {
    words.push_back({hash_mark(), border(offset + d.initial, true)});
    for (const auto& [key, to] : d.delta) {
      words.push_back({border(offset + key.first), payload(key.second), border(offset + to, true)});
    }
    for (std::size_t f : d.finals) words.push_back({border(offset + f), hash_mark()});
    offset += d.states;
  }
  DfaFixture out{detail::make_fixture("dfa-union", EncodingAlphabet(total_states, sigma, true), std::move(words)),
                 dfas};
  out.fixture.truth.provenance = "# w # is a product iff some DFA accepts w";
  return out;
}

/// W = { 0 a 0', 0 a' 1', 1 a' 1' } with target 0 e 1'.
inline Fixture prop1_fixture() {
  std::vector<TokenWord> words{
      {border(0), payload(0), border(0, true)},
      {border(0), payload(0, true), border(1, true)},
      {border(1), payload(0, true), border(1, true)},
  };
  Fixture f = detail::make_fixture("recurrent-without-identity", EncodingAlphabet(2, 1, false), std::move(words));
  f.target = f.alphabet.matrix({border(0), border(1, true)});
  f.truth.identity = false;
  f.truth.target_recurrent = true;
  f.truth.provenance = "(0 a 0')^n (0 a' 1') (1 a' 1')^(n-1) = 0 1' for every n >= 1";
  return f;
}

}  // namespace sl2z
