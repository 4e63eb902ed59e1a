// Acceptance run: one PASS/FAIL line per criterion, exit status 1 on any FAIL.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "brute_force.hpp"
#include "sl2z/sl2z.hpp"
#include "support.hpp"

using namespace sl2z;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Every verdict produced during the run, for the final re-check.
struct Emitted {
  GeneratorSet g;
  Verdict v;
};
std::vector<Emitted> emitted;

Verdict record(const GeneratorSet& g, Verdict v) {
  emitted.push_back({g, v});
  return v;
}

Mat2 multiply(const GeneratorSet& g, const IndexSequence& s) {
  Mat2 m = Mat2::identity();
  for (std::size_t i : s) m = m * g[i].matrix;
  return m;
}

Mat2 letters_product(const std::string& w) {
  Mat2 m = Mat2::identity();
  for (char c : w) m = m * (c == 's' ? Mat2::S() : Mat2::R());
  return m;
}

std::vector<std::string> all_sr(std::size_t max_len) {
  std::vector<std::string> layer{""}, all{""};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::string> next;
    for (const auto& w : layer) {
      next.push_back(w + 's');
      next.push_back(w + 'r');
    }
    all.insert(all.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return all;
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Canonical form round trips.
Outcome canonical_form() {
  std::size_t words = 0, bad = 0;
  for (const SignedWord& w : test_support::all_reduced_words(10)) {
    ++words;
    if (!(decompose(evaluate(w)) == w)) ++bad;
  }
  std::mt19937_64 rng(1);
  std::size_t mats = 0;
  for (int k = 0; k < 1000; ++k) {
    const Mat2 m = test_support::random_sl2(rng, 8);
    ++mats;
    if (evaluate(decompose(m)) != m) ++bad;
  }
  return {bad == 0, fmt("%zu words, %zu matrices, %zu mismatches", words, mats, bad)};
}

// 2. Fixed values.
Outcome fixed_values() {
  const bool s2 = Mat2::S() * Mat2::S() == -Mat2::identity();
  const bool r3 = Mat2::R() * Mat2::R() * Mat2::R() == -Mat2::identity();
  const bool fa = f_matrix({letter_a}) == Mat2(1, 2, 0, 1);
  const bool closed = f_matrix(alpha({{1, false}}, 1)) == Mat2(5, -8, 2, -3) && closed_form(1, 1) == Mat2(5, -8, 2, -3);
  return {s2 && r3 && fa && closed, fmt("S^2=-I %d, R^3=-I %d, f(a) %d, f(alpha(z1)) %d", s2, r3, fa, closed)};
}

// 3. Target grammar language against matrix evaluation.
Outcome grammar_oracle() {
  const auto words = all_sr(9);
  std::vector<Mat2> values;
  for (const auto& w : words) values.push_back(letters_product(w));
  std::size_t targets = 0, bad = 0;
  for (const SignedWord& target : test_support::all_reduced_words(5)) {
    ++targets;
    const Mat2 m = evaluate(target);
    std::set<Word> lang;
    for (const Word& w : enumerate_up_to_length(build_target_grammar(target), 9)) lang.insert(w);
    for (std::size_t k = 0; k < words.size(); ++k) {
      if ((values[k] == m) != (lang.count(to_letters(words[k])) == 1)) ++bad;
    }
  }
  return {bad == 0, fmt("%zu targets x %zu words, %zu mismatches", targets, words.size(), bad)};
}

// 4. Saturation against path enumeration.
Outcome saturation() {
  std::vector<CancellationAutomaton> cases;
  const auto w = [](std::initializer_list<SignedWord> ws) { return GeneratorSet::from_words(std::vector<SignedWord>(ws)); };
  cases.push_back(build_loop_automaton(w({{Sign::plus, "s"}})));
  cases.push_back(build_loop_automaton(w({{Sign::plus, "r"}, {Sign::minus, "rs"}})));
  cases.push_back(build_loop_automaton(w({{Sign::plus, "srsr"}, {Sign::plus, "srrsrr"}})));
  cases.push_back(build_pattern_automaton(0, 1, w({{Sign::plus, "s"}, {Sign::plus, "r"}})));
  cases.push_back(build_membership_automaton(w({{Sign::plus, "sr"}, {Sign::plus, "rs"}}), {Sign::plus, "srrs"}));
  std::mt19937_64 rng(4);
  for (int i = 0; i < 60; ++i) {
    const std::size_t n = 2 + rng() % 11;
    cases.push_back(test_support::random_automaton(rng, n, n + rng() % (n / 2 + 2)));
  }
  constexpr std::size_t horizon = 12;
  std::size_t missing = 0, spurious = 0, beyond = 0, triples = 0;
  for (const auto& a : cases) {
    if (a.state_count() > 12) return {false, "fixture with more than 12 states"};
    const auto sat = saturate(a);
    const auto brute = test_support::brute_force_relation(a, horizon);
    const auto got = test_support::as_set(sat);
    triples += brute.size();
    for (const auto& t : brute) missing += got.count(t) == 0;
    // A triple outside the horizon is genuine iff it has a valid witness path.
    for (const Triple& t : sat.triples()) {
      if (brute.count({t.from, t.to, to_int(t.sign)})) continue;
      try {
        const auto path = extract_witness(a, sat, t.from, t.to, t.sign);
        if (path.edges.size() > horizon) {
          ++beyond;
        } else {
          ++spurious;
        }
      } catch (const std::exception&) {
        ++spurious;
      }
    }
  }
  return {missing == 0 && spurious == 0,
          fmt("%zu automata, %zu enumerated triples, %zu missing, %zu spurious, %zu only via paths longer than %zu",
              cases.size(), triples, missing, spurious, beyond, horizon)};
}

// 5. Recurrent matrix without the identity.
Outcome recurrent_fixture() {
  const auto f = prop1_fixture();
  const auto& g = f.generators;
  const auto id = record(g, identity_in_semigroup(g));
  const auto rec = record(g, is_recurrent(g, *f.target));
  const auto ff = record(g, finite_freeness(g, 2));
  const bool pump = ff.pumping && verify_pumping(g, *ff.pumping) && ff.matrix &&
                    multiply(g, ff.pumping->sigma) == *ff.matrix;
  const bool ok = id.answer == Answer::no && rec.answer == Answer::yes && ff.answer == Answer::no && pump;
  std::string triple = "none";
  if (ff.pumping) {
    triple = to_string(ff.pumping->alpha) + " " + to_string(ff.pumping->sigma) + " " + to_string(ff.pumping->gamma);
  }
  return {ok, fmt("identity %s, recurrent %s, finite freeness %s, pumping %s", to_string(id.answer),
                  to_string(rec.answer), to_string(ff.answer), triple.c_str())};
}

// 6. Subset sum fixtures.
Outcome subset_sum() {
  const auto yes = encode_ssp({1, 2}, 3);
  const auto v = record(yes.generators, identity_in_semigroup(yes.generators));
  const bool yes_ok = v.answer == Answer::yes && v.witness.size() == 1 && multiply(yes.generators, v.witness[0]).is_identity();

  const auto no = encode_ssp({1, 2}, 4);
  const auto n = record(no.generators, identity_in_semigroup(no.generators));
  const bool oracle_none = !find_identity(no.generators, 10, 100'000'000).has_value();
  const auto c = record(no.generators, count_factorizations(no.generators, *no.target, 8));
  const bool count_ok = c.count && *c.count == Count{Count::Kind::exact, 1};
  const bool oracle_one = oracle_count(no.generators, *no.target, 10, 100'000'000) == 1;
  return {yes_ok && n.answer == Answer::no && oracle_none && count_ok && oracle_one,
          fmt("x=3 identity %s (witness length %zu); x=4 identity %s, oracle depth 10 %s, count %s, oracle count %s",
              to_string(v.answer), v.witness.empty() ? 0 : v.witness[0].size(), to_string(n.answer),
              oracle_none ? "none" : "FOUND", c.count ? to_string(*c.count).c_str() : "?", oracle_one ? "1" : "!=1")};
}

// 7. Equal subset sum fixtures.
Outcome equal_subset_sum() {
  const auto yes = encode_essp({1, 2, 3});
  const auto v = record(yes.generators, is_free(yes.generators));
  const bool yes_ok = v.answer == Answer::no && v.witness.size() == 2 && v.witness[0] != v.witness[1] &&
                      multiply(yes.generators, v.witness[0]) == multiply(yes.generators, v.witness[1]);
  const auto no = encode_essp({1, 2, 4});
  const auto n = record(no.generators, is_free(no.generators));
  const bool oracle_none = !find_collision(no.generators, 10, 100'000'000).has_value();
  return {yes_ok && n.answer == Answer::yes && oracle_none,
          fmt("{1,2,3} %s with %s vs %s; {1,2,4} %s, oracle depth 10 %s", yes_ok ? "not free" : "?",
              v.witness.empty() ? "" : to_string(v.witness[0]).c_str(),
              v.witness.size() < 2 ? "" : to_string(v.witness[1]).c_str(), n.answer == Answer::yes ? "free" : "not free",
              oracle_none ? "no collision" : "COLLISION")};
}

// 8. DFA union encoding.
Outcome dfa_union() {
  std::mt19937_64 rng(8);
  std::vector<Dfa> dfas(3);
  for (Dfa& d : dfas) {
    d.states = 1 + rng() % 3;
    d.alphabet = 2;
    d.initial = rng() % d.states;
    for (std::size_t q = 0; q < d.states; ++q) {
      for (std::size_t c = 0; c < 2; ++c) {
        if (rng() % 5) d.delta[{q, c}] = rng() % d.states;
      }
      if (rng() % 2) d.finals.push_back(q);
    }
  }
  const auto enc = encode_dfa_intersection(dfas);
  std::size_t bad = 0, accepted = 0;
  for (int k = 0; k < 20; ++k) {
    std::vector<std::size_t> w(rng() % 7);
    for (auto& c : w) c = rng() % 2;
    const bool expected = enc.accepted_by_some(w);
    accepted += expected;
    const auto v = record(enc.fixture.generators, membership(enc.fixture.generators, enc.probe(w)));
    if ((v.answer == Answer::yes) != expected) ++bad;
  }
  return {bad == 0, fmt("%zu generators, 20 words (%zu accepted), %zu mismatches", enc.fixture.generators.size(),
                        accepted, bad)};
}

// 9. Decisions against exhaustive enumeration.
Outcome oracle_agreement() {
  std::mt19937_64 rng(9);
  constexpr std::size_t depth = 8;
  std::size_t conclusive = 0, bad = 0;
  auto longest = [](const std::vector<IndexSequence>& seqs) {
    std::size_t n = 0;
    for (const auto& s : seqs) n = std::max(n, s.size());
    return n;
  };
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<SignedWord> ws(1 + rng() % 3);
    for (auto& w : ws) w = test_support::random_reduced(rng, 4);
    const auto g = GeneratorSet::from_words(ws);
    const auto table = enumerate_products(g, depth);

    const auto free = record(g, is_free(g));
    const bool collision = find_collision(g, depth).has_value();
    if (collision || (free.answer == Answer::no && longest(free.witness) <= depth)) {
      ++conclusive;
      bad += collision != (free.answer == Answer::no);
    }

    std::vector<Mat2> probes;
    for (const auto& [m, seqs] : table.entries) {
      if (seqs.front().size() <= 3) probes.push_back(m);
    }
    for (int k = 0; k < 4; ++k) probes.push_back(test_support::random_sl2(rng, 3));
    for (const Mat2& m : probes) {
      const auto* seqs = table.find(m);
      const auto mem = record(g, membership(g, m));
      if (seqs || (mem.answer == Answer::yes && longest(mem.witness) <= depth)) {
        ++conclusive;
        bad += (seqs != nullptr) != (mem.answer == Answer::yes);
      }
      const auto c = record(g, count_factorizations(g, m, 5));
      const std::size_t seen = seqs ? seqs->size() : 0;
      switch (c.count->kind) {
        case Count::Kind::exact:
          bad += seen > c.count->value;
          if (longest(c.witness) <= depth) {
            ++conclusive;
            bad += seen != c.count->value;
          }
          break;
        case Count::Kind::more_than:
          if (longest(c.witness) <= depth) {
            ++conclusive;
            bad += seen <= 5;
          }
          break;
        case Count::Kind::infinite:
          // Pumped factorizations inside the depth must all be enumerated.
          for (const auto& s : c.witness) {
            if (s.size() > depth) continue;
            ++conclusive;
            bad += !seqs || std::find(seqs->begin(), seqs->end(), s) == seqs->end();
          }
          break;
      }
    }
  }
  return {bad == 0, fmt("50 generator sets, %zu conclusive comparisons, %zu disagreements", conclusive, bad)};
}

// 10. Every witness emitted above, re-multiplied.
Outcome witness_soundness() {
  std::size_t sequences = 0, bad = 0;
  for (const auto& [g, v] : emitted) {
    if (!verify_witness(g, v)) ++bad;
    const bool paired = v.problem == Problem::freeness;
    if (paired && v.answer == Answer::no) {
      sequences += 2;
      bad += multiply(g, v.witness[0]) != multiply(g, v.witness[1]);
    } else if (v.matrix) {
      for (const auto& s : v.witness) {
        ++sequences;
        bad += multiply(g, s) != *v.matrix;
      }
    }
    if (v.pumping) {
      const auto& p = *v.pumping;
      const Mat2 a = multiply(g, p.alpha), s = multiply(g, p.sigma), c = multiply(g, p.gamma);
      ++sequences;
      bad += a * s * c != s;
    }
  }
  return {bad == 0 && sequences > 0, fmt("%zu verdicts, %zu sequences re-multiplied, %zu failures", emitted.size(),
                                         sequences, bad)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit;  // seconds, 0 for none
    Outcome (*run)();
  };
  const std::vector<Criterion> criteria{
      {1, "canonical form", 10, canonical_form},
      {2, "fixed values", 0, fixed_values},
      {3, "grammar oracle equivalence", 60, grammar_oracle},
      {4, "saturation completeness", 0, saturation},
      {5, "recurrent without identity", 30, recurrent_fixture},
      {6, "subset sum fixtures", 60, subset_sum},
      {7, "equal subset sum fixtures", 120, equal_subset_sum},
      {8, "DFA union encoding", 0, dfa_union},
      {9, "decision and oracle agreement", 0, oracle_agreement},
      {10, "witness soundness", 0, witness_soundness},
  };
  int failed = 0;
  for (const auto& [id, name, limit, run] : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (limit > 0 && secs >= limit) {
      o.pass = false;
      o.detail += fmt("; over the %.0f s limit", limit);
    }
    failed += !o.pass;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  " << name << ": " << o.detail
              << fmt(" (%.2f s)", secs) << std::endl;
  }
  std::cout << (failed ? "FAILED " : "ALL PASSED ") << 10 - failed << "/10" << std::endl;
  return failed ? 1 : 0;
}
