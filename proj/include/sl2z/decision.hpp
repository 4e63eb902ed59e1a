#pragma once

// Decision procedures over a generator set.  Every verdict carries evidence
// that is re-checked by exact multiplication before it is returned.

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "sl2z/automata.hpp"
#include "sl2z/core.hpp"
#include "sl2z/grammar.hpp"
#include "sl2z/oracle.hpp"

namespace sl2z {

enum class Problem { identity, membership, freeness, finite_freeness, count, recurrence };

inline const char* to_string(Problem p) noexcept {
  switch (p) {
    case Problem::identity: return "identity";
    case Problem::membership: return "member";
    case Problem::freeness: return "check-free";
    case Problem::finite_freeness: return "check-finite-free";
    case Problem::count: return "count";
    case Problem::recurrence: return "recurrent";
  }
  return "?";
}

/// yes means the property named by the problem holds: the identity or target
/// is in the semigroup, the set is free, the count is at most the cap, the
/// target is recurrent.  For finite freeness only no and unknown_up_to occur.
enum class Answer { yes, no, unknown_up_to };

inline const char* to_string(Answer a) noexcept {
  switch (a) {
    case Answer::yes: return "YES";
    case Answer::no: return "NO";
    case Answer::unknown_up_to: return "UNKNOWN_UP_TO";
  }
  return "?";
}

struct Count {
  enum class Kind { exact, more_than, infinite };
  Kind kind = Kind::exact;
  std::size_t value = 0;  // exact count, or the cap for more_than

  friend bool operator==(const Count&, const Count&) = default;
};

inline std::string to_string(const Count& c) {
  switch (c.kind) {
    case Count::Kind::exact: return std::to_string(c.value);
    case Count::Kind::more_than: return "MORE_THAN(" + std::to_string(c.value) + ")";
    case Count::Kind::infinite: return "INFINITE";
  }
  return "?";
}

struct Verdict {
  Problem problem = Problem::identity;
  Answer answer = Answer::no;
  std::optional<std::size_t> depth_bound;
  std::vector<IndexSequence> witness;
  std::optional<PumpingTriple> pumping;
  std::optional<Mat2> matrix;
  std::optional<Count> count;
  std::string certificate;
};

/// Exact re-check of the evidence attached to a verdict.
inline bool verify_witness(const GeneratorSet& g, const Verdict& v) {
  auto valid = [&](const IndexSequence& s) {
    if (s.empty()) return false;
    for (std::size_t i : s) {
      if (i >= g.size()) return false;
    }
    return true;
  };
  for (const auto& s : v.witness) {
    if (!valid(s)) return false;
  }
  if (v.pumping) {
    if (!verify_pumping(g, *v.pumping)) return false;
    if (v.matrix && g.product(v.pumping->sigma) != *v.matrix) return false;
  }
  // Sequences attached to a matrix must all multiply to it and be distinct.
  auto all_equal_to = [&](const Mat2& m) {
    std::set<IndexSequence> seen;
    for (const auto& s : v.witness) {
      if (g.product(s) != m || !seen.insert(s).second) return false;
    }
    return true;
  };
  switch (v.problem) {
    case Problem::identity:
      return v.answer != Answer::yes || (v.witness.size() == 1 && all_equal_to(Mat2::identity()));
    case Problem::membership:
      return v.answer != Answer::yes || (v.matrix && v.witness.size() == 1 && all_equal_to(*v.matrix));
    case Problem::freeness:
      return v.answer != Answer::no ||
             (v.witness.size() == 2 && v.witness[0] != v.witness[1] &&
              g.product(v.witness[0]) == g.product(v.witness[1]));
    case Problem::finite_freeness:
      if (v.answer != Answer::no) return true;
      if (!v.matrix || !all_equal_to(*v.matrix)) return false;
      return v.pumping.has_value() || v.witness.size() >= 3;
    case Problem::count:
    case Problem::recurrence:
      return !v.matrix || all_equal_to(*v.matrix);
  }
  return false;
}

namespace detail {

inline Verdict checked(const GeneratorSet& g, Verdict v) {
  if (!verify_witness(g, v)) throw std::logic_error(std::string("witness failed verification for ") + to_string(v.problem));
  return v;
}

inline void require_nonempty(const GeneratorSet& g) {
  if (g.empty()) throw std::invalid_argument("generator set is empty");
}

}  // namespace detail

/// Whether some nonempty product equals I.
inline Verdict identity_in_semigroup(const GeneratorSet& g) {
  detail::require_nonempty(g);
  const auto a = build_loop_automaton(g);
  const auto sat = saturate(a);
  Verdict v;
  v.problem = Problem::identity;
  v.matrix = Mat2::identity();
  if (trivial_path_exists(a, sat, a.initial(), a.final_state(), Sign::plus)) {
    v.answer = Answer::yes;
    v.witness.push_back(generator_sequence(extract_witness(a, sat, a.initial(), a.final_state(), Sign::plus)));
  }
  return detail::checked(g, v);
}

/// Whether some nonempty product equals m.
inline Verdict membership(const GeneratorSet& g, const Mat2& m) {
  detail::require_nonempty(g);
  const auto a = build_membership_automaton(g, decompose(m));
  const auto sat = saturate(a);
  Verdict v;
  v.problem = Problem::membership;
  v.matrix = m;
  if (trivial_path_exists(a, sat, a.initial(), a.final_state(), Sign::plus)) {
    v.answer = Answer::yes;
    const auto w = extract_witness(a, sat, a.initial(), a.final_state(), Sign::plus);
    IndexSequence seq;
    for (const ChainStep& c : w.chains) {
      if (c.role == ChainRole::entry || c.role == ChainRole::loop) seq.push_back(c.generator);
    }
    v.witness.push_back(std::move(seq));
  }
  return detail::checked(g, v);
}

/// Free iff no two distinct sequences share a product.  Identity first, then
/// the pairs (i, j), i < j, in lexicographic order.
inline Verdict is_free(const GeneratorSet& g) {
  detail::require_nonempty(g);
  Verdict v;
  v.problem = Problem::freeness;
  const Verdict id = identity_in_semigroup(g);
  if (id.answer == Answer::yes) {
    // w multiplies to I, so w_1 and w w_1 agree.
    const IndexSequence& w = id.witness.front();
    IndexSequence longer = w;
    longer.push_back(w.front());
    v.answer = Answer::no;
    v.witness = {{w.front()}, longer};
    v.certificate = "identity product " + to_string(w);
    return detail::checked(g, v);
  }
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = i + 1; j < g.size(); ++j) {
      const auto a = build_pattern_automaton(i, j, g);
      const auto sat = saturate(a);
      if (!trivial_path_exists(a, sat, a.initial(), a.final_state(), Sign::plus)) continue;
      const auto w = extract_witness(a, sat, a.initial(), a.final_state(), Sign::plus);
      IndexSequence left{i}, right_tail;
      for (const ChainStep& c : w.chains) {
        if (c.role == ChainRole::loop) left.push_back(c.generator);
        if (c.role == ChainRole::bridge || c.role == ChainRole::inverse_loop) right_tail.push_back(c.generator);
      }
      IndexSequence right{j};
      right.insert(right.end(), right_tail.rbegin(), right_tail.rend());
      v.answer = Answer::no;
      v.witness = {left, right};
      v.certificate = "pair " + std::to_string(i + 1) + "," + std::to_string(j + 1);
      return detail::checked(g, v);
    }
  }
  v.answer = Answer::yes;
  return detail::checked(g, v);
}

/// The intersection of the words evaluating to m with the marked semigroup
/// language.  Its words are the marked forms of the factorizations of m.
inline Grammar factorization_grammar(const GeneratorSet& g, const Mat2& m) {
  detail::require_nonempty(g);
  const auto target = build_signed_target_grammar(decompose(m), generator_signs(g));
  return trim(intersect(target, build_marked_semigroup_dfa(g)));
}

namespace detail {

inline IndexSequence decode_factorization(const Word& w) { return marker_sequence(w); }

/// Three factorizations x u^k w v^k y, k = 0, 1, 2.
inline std::vector<IndexSequence> pumped_factorizations(const PumpingCertificate& cert) {
  std::vector<IndexSequence> out;
  for (std::size_t k = 0; k < 3; ++k) out.push_back(decode_factorization(cert.pumped(k)));
  return out;
}

inline std::string describe(const PumpingCertificate& cert) {
  return "nonterminal " + cert.nonterminal + " derives itself with context of " +
         std::to_string(cert.left.size() + cert.right.size()) + " letters";
}

}  // namespace detail

/// Number of factorizations of m, exact up to cap.  yes iff it is at most cap.
inline Verdict count_factorizations(const GeneratorSet& g, const Mat2& m, std::size_t cap) {
  if (cap == 0) throw std::invalid_argument("cap must be at least 1");
  const Grammar fg = factorization_grammar(g, m);
  Verdict v;
  v.problem = Problem::count;
  v.matrix = m;
  if (is_empty(fg)) {
    v.answer = Answer::yes;
    v.count = Count{Count::Kind::exact, 0};
    return detail::checked(g, v);
  }
  if (const auto cert = pumping_certificate(fg)) {
    v.answer = Answer::no;
    v.count = Count{Count::Kind::infinite, 0};
    v.witness = detail::pumped_factorizations(*cert);
    v.certificate = detail::describe(*cert);
    return detail::checked(g, v);
  }
  const auto words = enumerate_words(fg, cap);
  for (const Word& w : words.words) v.witness.push_back(detail::decode_factorization(w));
  if (words.exceeded) {
    v.answer = Answer::no;
    v.count = Count{Count::Kind::more_than, cap};
  } else {
    v.answer = Answer::yes;
    v.count = Count{Count::Kind::exact, words.words.size()};
  }
  return detail::checked(g, v);
}

inline constexpr std::size_t recurrence_pumping_depth = 3;
inline constexpr std::size_t recurrence_pumping_budget = 20'000;

/// Whether m has infinitely many factorizations.
inline Verdict is_recurrent(const GeneratorSet& g, const Mat2& m) {
  const Grammar fg = factorization_grammar(g, m);
  Verdict v;
  v.problem = Problem::recurrence;
  v.matrix = m;
  const auto cert = pumping_certificate(fg);
  if (!cert) {
    v.answer = Answer::no;
    return detail::checked(g, v);
  }
  v.answer = Answer::yes;
  v.count = Count{Count::Kind::infinite, 0};
  v.witness = detail::pumped_factorizations(*cert);
  v.certificate = detail::describe(*cert);
  // A short pumping triple around the first factorization, when one is cheap to find.
  try {
    v.pumping = find_pumping_for(g, v.witness.front(), recurrence_pumping_depth, recurrence_pumping_budget);
  } catch (const OracleBudgetExceeded&) {
  }
  return detail::checked(g, v);
}

inline constexpr std::size_t default_depth = 4;

/// Not finitely free when +-I is in the semigroup (an epsilon cycle of the
/// loop automaton) or when some product of at most depth generators is
/// recurrent.  Otherwise the answer is unknown beyond depth.
inline Verdict finite_freeness(const GeneratorSet& g, std::size_t depth = default_depth,
                               std::size_t budget = default_oracle_budget) {
  detail::require_nonempty(g);
  if (depth == 0) throw std::invalid_argument("depth must be at least 1");
  Verdict v;
  v.problem = Problem::finite_freeness;
  const auto a = build_loop_automaton(g);
  const auto sat = saturate(a);
  if (const auto cycle = epsilon_cycle(a, sat)) {
    // Any cycle conjugates to one through the hub.
    const State h = a.initial();
    IndexSequence w;
    if (trivial_path_exists(a, sat, h, h, Sign::plus)) {
      w = generator_sequence(extract_witness(a, sat, h, h, Sign::plus));
    } else if (trivial_path_exists(a, sat, h, h, Sign::minus)) {
      w = generator_sequence(extract_witness(a, sat, h, h, Sign::minus));
      const IndexSequence once = w;
      w.insert(w.end(), once.begin(), once.end());
    } else {
      throw std::logic_error("epsilon cycle without a hub cycle");
    }
    v.answer = Answer::no;
    v.matrix = Mat2::identity();
    v.witness = {w};
    v.pumping = PumpingTriple{w, w, {}};
    v.certificate = std::string("epsilon cycle with sign ") + to_symbol(cycle->sign);
    return detail::checked(g, v);
  }
  check_budget(g, depth, budget);
  std::unordered_set<Mat2, Mat2Hash> tried;
  std::vector<IndexSequence> layer{{}};
  for (std::size_t len = 1; len <= depth; ++len) {
    std::vector<IndexSequence> next;
    for (const auto& prefix : layer) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        IndexSequence sigma = prefix;
        sigma.push_back(i);
        next.push_back(sigma);
        const Mat2 m = g.product(sigma);
        if (!tried.insert(m).second) continue;
        const Verdict r = is_recurrent(g, m);
        if (r.answer != Answer::yes) continue;
        v.answer = Answer::no;
        v.matrix = m;
        v.witness = r.witness;
        v.certificate = "recurrent product " + to_string(sigma) + ": " + r.certificate;
        try {
          v.pumping = find_pumping_for(g, sigma, depth, budget);
        } catch (const OracleBudgetExceeded&) {
        }
        if (!v.pumping) v.pumping = r.pumping;
        return detail::checked(g, v);
      }
    }
    layer = std::move(next);
  }
  v.answer = Answer::unknown_up_to;
  v.depth_bound = depth;
  return detail::checked(g, v);
}

}  // namespace sl2z
