#include <catch_amalgamated.hpp>

#include <random>
#include <set>

#include "sl2z/grammar.hpp"
#include "support.hpp"

using namespace sl2z;

namespace {

// All words over letters 0..alphabet-1 with length <= max_len.
std::vector<Word> all_words(std::size_t max_len, Letter alphabet = 2) {
  std::vector<Word> out{Word{}}, layer{Word{}};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const Word& w : layer) {
      for (Letter x = 0; x < alphabet; ++x) {
        Word v = w;
        v.push_back(x);
        next.push_back(v);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// Signed value of a word where marker i stands for signs[i] * I.
SignedWord signed_value(const Word& w, const std::vector<Sign>& signs) {
  Sign sign = Sign::plus;
  std::string sr;
  for (Letter x : w) {
    if (is_marker(x)) {
      sign = sign * signs.at(marker_index(x));
    } else {
      sr.push_back(x == letter_s ? 's' : 'r');
    }
  }
  return reduce(sr, sign);
}

std::set<Word> as_set(const std::vector<Word>& ws) { return {ws.begin(), ws.end()}; }

LetterDfa random_dfa(std::mt19937_64& rng, std::size_t states, Letter alphabet) {
  LetterDfa d;
  for (std::size_t i = 0; i < states; ++i) d.add_state(rng() % 2 == 0);
  d.set_initial(0);
  for (LetterDfa::StateId q = 0; q < states; ++q) {
    for (Letter x = 0; x < alphabet; ++x) {
      if (rng() % 5 != 0) d.add_transition(q, x, static_cast<LetterDfa::StateId>(rng() % states));
    }
  }
  return d;
}

Grammar random_grammar(std::mt19937_64& rng, std::size_t nonterminals, Letter alphabet) {
  Grammar g;
  for (std::size_t i = 0; i < nonterminals; ++i) g.add_nonterminal();
  const std::size_t prods = nonterminals + rng() % (2 * nonterminals + 1);
  for (std::size_t k = 0; k < prods; ++k) {
    std::vector<Symbol> body;
    const std::size_t len = rng() % 3;
    for (std::size_t j = 0; j < len; ++j) {
      if (rng() % 2) {
        body.push_back(Symbol::terminal(static_cast<Letter>(rng() % alphabet)));
      } else {
        body.push_back(Symbol::nonterminal(static_cast<Nonterminal>(rng() % nonterminals)));
      }
    }
    g.add_production(static_cast<Nonterminal>(rng() % nonterminals), std::move(body));
  }
  g.set_start(0);
  return g;
}

}  // namespace

TEST_CASE("target grammar examples", "[grammar]") {
  const auto id = build_target_grammar({Sign::plus, ""});
  CHECK(contains(id, {}));
  CHECK_FALSE(contains(id, to_letters("ss")));
  CHECK(contains(id, to_letters("ssss")));

  const auto s = build_target_grammar({Sign::plus, "s"});
  CHECK(contains(s, to_letters("s")));
  CHECK_FALSE(contains(s, to_letters("sss")));
  CHECK(contains(s, to_letters("sssss")));

  const auto neg = build_target_grammar({Sign::minus, ""});
  CHECK(contains(neg, to_letters("ss")));
  CHECK(contains(neg, to_letters("rrr")));
  CHECK_FALSE(contains(neg, {}));

  CHECK_THROWS_AS(build_target_grammar({Sign::plus, "ss"}), std::invalid_argument);
}

TEST_CASE("target grammar matches the evaluation oracle", "[grammar][property]") {
  const auto words = all_words(9);
  for (const SignedWord& target : test_support::all_reduced_words(5)) {
    const auto lang = as_set(enumerate_up_to_length(build_target_grammar(target), 9));
    std::size_t mismatches = 0;
    for (const Word& w : words) {
      const bool oracle = evaluate(reduce(sr_string(w))) == evaluate(target);
      if (oracle != (lang.count(w) == 1)) ++mismatches;
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("membership by intersection agrees with enumeration", "[grammar][property]") {
  std::mt19937_64 rng(8);
  const auto targets = test_support::all_reduced_words(3);
  for (int trial = 0; trial < 20; ++trial) {
    const SignedWord& target = targets[rng() % targets.size()];
    const auto g = build_target_grammar(target);
    for (int k = 0; k < 20; ++k) {
      const Word w = to_letters(test_support::random_sr(rng, 9));
      CHECK(contains(g, w) == (reduce(sr_string(w)) == target));
    }
  }
}

TEST_CASE("signed markers act as +-I", "[grammar][property]") {
  const std::vector<Sign> signs{Sign::plus, Sign::minus};
  for (const SignedWord& target : test_support::all_reduced_words(2)) {
    const auto g = build_signed_target_grammar(target, signs);
    const auto lang = as_set(enumerate_up_to_length(g, 6));
    std::size_t mismatches = 0;
    for (const Word& w : all_words(6, 4)) {
      if ((signed_value(w, signs) == target) != (lang.count(w) == 1)) ++mismatches;
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("lift over markers", "[grammar]") {
  const auto eps = build_target_grammar({Sign::plus, ""});
  Grammar only_eps;
  only_eps.set_start(only_eps.add_nonterminal("S"));
  only_eps.add_production(0, {});
  const auto lifted_eps = lift_over_markers(only_eps, 1);
  for (std::size_t n = 0; n < 5; ++n) CHECK(contains(lifted_eps, Word(n, marker(0))));
  CHECK_FALSE(contains(lifted_eps, {letter_s}));

  Grammar only_s;
  only_s.set_start(only_s.add_nonterminal("S"));
  only_s.add_production(0, {Symbol::terminal(letter_s)});
  const auto lifted = lift_over_markers(only_s, 2);
  CHECK(contains(lifted, {marker(1), letter_s}));
  CHECK(contains(lifted, {letter_s}));
  CHECK(contains(lifted, {marker(0), marker(0), letter_s, marker(1)}));
  CHECK_FALSE(contains(lifted, {marker(0)}));

  // Every lifted word erases to a word of the original language.
  const auto lifted_id = lift_over_markers(eps, 2);
  const auto sample = enumerate_up_to_length(lifted_id, 6);
  REQUIRE(sample.size() >= 100);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 100; ++k) {
    const Word& w = sample[rng() % sample.size()];
    CHECK(reduce(sr_string(erase_markers(w))) == SignedWord{});
  }
}

TEST_CASE("marked semigroup automaton", "[grammar]") {
  {
    const auto d = build_marked_semigroup_dfa(GeneratorSet::from_words(std::vector<SignedWord>{{Sign::plus, "s"}}));
    CHECK(d.automaton.accepts({marker(0), letter_s}));
    CHECK(d.automaton.accepts({marker(0), letter_s, marker(0), letter_s}));
    CHECK_FALSE(d.automaton.accepts({letter_s}));
    CHECK_FALSE(d.automaton.accepts({}));
  }
  {
    const auto g = GeneratorSet::from_matrices(std::vector<Mat2>{Mat2(1, 2, 0, 1), Mat2(1, 0, 2, 1)});
    const auto d = build_marked_semigroup_dfa(g);
    Word w{marker(1)};
    for (Letter x : to_letters("srrsrr")) w.push_back(x);
    w.push_back(marker(0));
    for (Letter x : to_letters("srsr")) w.push_back(x);
    CHECK(d.automaton.accepts(w));
  }
  {
    const auto d = build_marked_semigroup_dfa(GeneratorSet::from_matrices(std::vector<Mat2>{-Mat2::identity()}));
    CHECK(d.automaton.accepts({marker(0)}));
    CHECK(d.automaton.accepts({marker(0), marker(0)}));
  }
}

TEST_CASE("marked words are in bijection with index sequences", "[grammar][property]") {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<SignedWord> ws;
    for (int k = 0; k < 3; ++k) ws.push_back(test_support::random_reduced(rng, 3));
    const auto g = GeneratorSet::from_words(ws);
    const auto d = build_marked_semigroup_dfa(g);
    std::set<Word> seen;
    std::vector<IndexSequence> layer{{}};
    for (int len = 1; len <= 4; ++len) {
      std::vector<IndexSequence> next;
      for (const auto& seq : layer) {
        for (std::size_t i = 0; i < 3; ++i) {
          auto s = seq;
          s.push_back(i);
          const Word w = marked_word(g, s);
          CHECK(seen.insert(w).second);
          CHECK(d.automaton.accepts(w));
          CHECK(marker_sequence(w) == s);
          next.push_back(s);
        }
      }
      layer = std::move(next);
    }
  }
}

TEST_CASE("intersection examples", "[grammar]") {
  const auto gs = GeneratorSet::from_words(std::vector<SignedWord>{{Sign::plus, "s"}});
  const auto lifted = lift_over_markers(build_target_grammar({Sign::minus, ""}), 1);
  const auto inter = trim(intersect(lifted, build_marked_semigroup_dfa(gs)));
  CHECK(contains(inter, {marker(0), letter_s, marker(0), letter_s}));
  CHECK_FALSE(contains(inter, {marker(0), letter_s}));
  CHECK_FALSE(is_empty(inter));
  CHECK_FALSE(is_finite(inter));
  const auto cert = pumping_certificate(inter);
  REQUIRE(cert);
  for (std::size_t k = 0; k < 3; ++k) {
    const Word w = cert->pumped(k);
    CHECK(contains(inter, w));
    CHECK(marker_sequence(w).size() % 4 == 2);
  }

  const auto none = intersect(lifted, build_marked_semigroup_dfa(GeneratorSet{}));
  CHECK(is_empty(none));

  const auto free_pair = GeneratorSet::from_matrices(std::vector<Mat2>{Mat2(1, 2, 0, 1), Mat2(1, 0, 2, 1)});
  const auto id = build_signed_target_grammar({Sign::plus, ""}, generator_signs(free_pair));
  CHECK(is_empty(trim(intersect(id, build_marked_semigroup_dfa(free_pair)))));
}

TEST_CASE("intersection equals both memberships", "[grammar][property]") {
  std::mt19937_64 rng(12);
  const auto targets = test_support::all_reduced_words(3);
  for (int trial = 0; trial < 25; ++trial) {
    const auto g = build_target_grammar(targets[rng() % targets.size()]);
    const auto d = random_dfa(rng, 1 + rng() % 4, 2);
    const auto inter = as_set(enumerate_up_to_length(intersect(g, d), 8));
    const auto base = enumerate_up_to_length(g, 8);
    std::set<Word> expected;
    for (const Word& w : base) {
      if (d.accepts(w)) expected.insert(w);
    }
    CHECK(inter == expected);
  }
  for (int trial = 0; trial < 25; ++trial) {
    const auto g = random_grammar(rng, 1 + rng() % 4, 2);
    const auto d = random_dfa(rng, 1 + rng() % 4, 2);
    const auto inter = as_set(enumerate_up_to_length(intersect(g, d), 8));
    std::set<Word> expected;
    for (const Word& w : enumerate_up_to_length(g, 8)) {
      if (d.accepts(w)) expected.insert(w);
    }
    CHECK(inter == expected);
  }
}

TEST_CASE("trim, emptiness and finiteness", "[grammar]") {
  Grammar single;
  const auto s0 = single.add_nonterminal("S");
  const auto dead = single.add_nonterminal("D");
  const auto unreachable = single.add_nonterminal("U");
  single.set_start(s0);
  single.add_production(s0, {Symbol::terminal(letter_s), Symbol::terminal(letter_r)});
  single.add_production(s0, {Symbol::nonterminal(dead)});
  single.add_production(dead, {Symbol::nonterminal(dead), Symbol::terminal(letter_s)});
  single.add_production(unreachable, {});
  const auto t = trim(single);
  CHECK(t.nonterminal_count() == 1);
  CHECK(t.productions().size() == 1);
  CHECK_FALSE(is_empty(t));
  CHECK(is_finite(t));

  Grammar empty;
  empty.set_start(empty.add_nonterminal("S"));
  empty.add_production(0, {Symbol::nonterminal(0)});
  CHECK(is_empty(empty));
  CHECK(is_finite(empty));
}

TEST_CASE("finiteness agrees with bounded enumeration growth", "[grammar][property]") {
  // With n nonterminals and bodies of length <= 2, a finite language has no
  // word longer than 2^n, and an infinite one has a word whose length lies
  // in (2^n, 2^(n+1)].
  std::mt19937_64 rng(21);
  std::size_t infinite = 0, finite = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 1 + rng() % 3;
    const auto g = random_grammar(rng, n, 2);
    const std::size_t bound = std::size_t{1} << n;
    const auto words = enumerate_up_to_length(g, 2 * bound);
    const bool long_word = std::any_of(words.begin(), words.end(), [&](const Word& w) { return w.size() > bound; });
    CHECK(is_finite(g) == !long_word);
    (long_word ? infinite : finite) += 1;
    if (!long_word) {
      CHECK(as_set(enumerate_words(g).words) == as_set(words));
      CHECK_FALSE(pumping_certificate(g));
    } else {
      const auto cert = pumping_certificate(g);
      REQUIRE(cert);
      std::set<Word> pumped;
      for (std::size_t k = 0; k < 4; ++k) {
        CHECK(contains(g, cert->pumped(k)));
        pumped.insert(cert->pumped(k));
      }
      CHECK(pumped.size() == 4);
    }
  }
  CHECK(infinite > 20);
  CHECK(finite > 20);
}

TEST_CASE("enumeration", "[grammar]") {
  Grammar eps;
  eps.set_start(eps.add_nonterminal("S"));
  eps.add_production(0, {});
  const auto e = enumerate_words(eps);
  REQUIRE(e.words.size() == 1);
  CHECK(e.words[0].empty());

  Grammar two;
  two.set_start(two.add_nonterminal("S"));
  two.add_production(0, {Symbol::terminal(letter_s)});
  two.add_production(0, {Symbol::terminal(letter_r), Symbol::terminal(letter_s)});
  two.add_production(0, {Symbol::terminal(letter_s)});
  const auto t = enumerate_words(two);
  CHECK(t.words == std::vector<Word>{{letter_s}, {letter_r, letter_s}});
  CHECK_FALSE(t.exceeded);
  const auto capped = enumerate_words(two, 1);
  CHECK(capped.exceeded);

  const auto infinite = build_target_grammar({Sign::plus, ""});
  CHECK_THROWS_AS(enumerate_words(infinite), std::invalid_argument);
  CHECK(enumerate_words(infinite, 3).exceeded);
}
