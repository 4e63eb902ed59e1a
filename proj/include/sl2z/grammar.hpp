#pragma once

// Context-free grammars over {s, r} plus generator markers, the grammar of
// all words evaluating to a fixed matrix, intersection with finite automata,
// and the emptiness / finiteness / enumeration analyses.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sl2z/core.hpp"

namespace sl2z {

// ---------------------------------------------------------------------------
// Letters and words
// ---------------------------------------------------------------------------

/// 0 is s, 1 is r, 2 + i is the marker of generator i.
using Letter = std::uint32_t;
using Word = std::vector<Letter>;

inline constexpr Letter letter_s = 0;
inline constexpr Letter letter_r = 1;

inline constexpr Letter marker(std::size_t generator) noexcept { return static_cast<Letter>(2 + generator); }
inline constexpr bool is_marker(Letter x) noexcept { return x >= 2; }
inline constexpr std::size_t marker_index(Letter x) noexcept { return x - 2; }

inline Word to_letters(std::string_view sr) {
  Word out;
  out.reserve(sr.size());
  for (char ch : sr) {
    if (ch == 's') {
      out.push_back(letter_s);
    } else if (ch == 'r') {
      out.push_back(letter_r);
    } else {
      throw std::invalid_argument(std::string("letter '") + ch + "' is not s or r");
    }
  }
  return out;
}

/// "#1 srsr #2 s"; the empty word prints as "e".
inline std::string to_string(const Word& w) {
  if (w.empty()) return "e";
  std::string out;
  bool in_run = false;
  for (Letter x : w) {
    if (is_marker(x)) {
      if (!out.empty()) out += ' ';
      out += '#' + std::to_string(marker_index(x) + 1);
      in_run = false;
    } else {
      if (!in_run && !out.empty()) out += ' ';
      out += x == letter_s ? 's' : 'r';
      in_run = true;
    }
  }
  return out;
}

inline Word erase_markers(const Word& w) {
  Word out;
  for (Letter x : w) {
    if (!is_marker(x)) out.push_back(x);
  }
  return out;
}

inline std::string sr_string(const Word& w) {
  std::string out;
  for (Letter x : w) {
    if (is_marker(x)) throw std::invalid_argument("word contains a marker");
    out.push_back(x == letter_s ? 's' : 'r');
  }
  return out;
}

/// Marked word #i1 w_i1 #i2 w_i2 ... of an index sequence.
inline Word marked_word(const GeneratorSet& g, std::span<const std::size_t> seq) {
  Word out;
  for (std::size_t i : seq) {
    out.push_back(marker(i));
    const Word w = to_letters(g[i].word.word);
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

inline IndexSequence marker_sequence(const Word& w) {
  IndexSequence out;
  for (Letter x : w) {
    if (is_marker(x)) out.push_back(marker_index(x));
  }
  return out;
}

struct WordOrder {
  bool operator()(const Word& x, const Word& y) const {
    if (x.size() != y.size()) return x.size() < y.size();
    return x < y;
  }
};

// ---------------------------------------------------------------------------
// Grammar
// ---------------------------------------------------------------------------

using Nonterminal = std::uint32_t;

class Symbol {
 public:
  static Symbol terminal(Letter x) { return Symbol(x | flag); }
  static Symbol nonterminal(Nonterminal a) { return Symbol(a); }

  bool is_terminal() const noexcept { return (raw_ & flag) != 0; }
  Letter letter() const noexcept { return raw_ & ~flag; }
  Nonterminal id() const noexcept { return raw_; }

  friend bool operator==(Symbol, Symbol) = default;
  friend auto operator<=>(Symbol, Symbol) = default;

 private:
  static constexpr std::uint32_t flag = 0x8000'0000u;
  explicit Symbol(std::uint32_t raw) : raw_(raw) {}
  std::uint32_t raw_;
};

struct Production {
  Nonterminal head;
  std::vector<Symbol> body;
};

class Grammar {
 public:
  Nonterminal add_nonterminal(std::string name = {}) {
    if (name.empty()) name = "X" + std::to_string(names_.size());
    names_.push_back(std::move(name));
    return static_cast<Nonterminal>(names_.size() - 1);
  }

  void add_production(Nonterminal head, std::vector<Symbol> body) {
    check(head);
    for (Symbol x : body) {
      if (!x.is_terminal()) check(x.id());
    }
    productions_.push_back({head, std::move(body)});
    trimmed_ = false;
  }

  void set_start(Nonterminal a) {
    check(a);
    start_ = a;
  }

  Nonterminal start() const {
    if (!start_) throw std::logic_error("grammar has no start symbol");
    return *start_;
  }
  bool has_start() const noexcept { return start_.has_value(); }
  std::size_t nonterminal_count() const noexcept { return names_.size(); }
  const std::vector<Production>& productions() const noexcept { return productions_; }
  const std::string& name(Nonterminal a) const { return names_.at(a); }

  bool trimmed() const noexcept { return trimmed_; }
  void mark_trimmed() noexcept { trimmed_ = true; }

 private:
  void check(Nonterminal a) const {
    if (a >= names_.size()) throw std::out_of_range("unknown nonterminal");
  }

  std::vector<std::string> names_;
  std::vector<Production> productions_;
  std::optional<Nonterminal> start_;
  bool trimmed_ = false;
};

namespace detail {

inline Symbol t(Letter x) { return Symbol::terminal(x); }
inline Symbol n(Nonterminal a) { return Symbol::nonterminal(a); }

/// N+ and N- derive the words whose value is I and -I.  Each entry of
/// marker_signs adds the production N^{sign} -> #i, so markers act as +-I.
inline Grammar target_grammar(const SignedWord& target, std::span<const Sign> marker_signs) {
  if (!is_reduced(target.word)) throw std::invalid_argument("target word must be reduced");
  Grammar g;
  const Nonterminal pos = g.add_nonterminal("N+");
  const Nonterminal neg = g.add_nonterminal("N-");
  auto nsign = [&](Sign x) { return x == Sign::plus ? pos : neg; };
  const Symbol s = t(letter_s), r = t(letter_r);

  g.add_production(pos, {});
  g.add_production(pos, {s, n(neg), s});
  g.add_production(pos, {r, n(pos), r, n(neg), r});
  g.add_production(pos, {r, n(neg), r, n(pos), r});
  g.add_production(pos, {n(pos), n(pos)});
  g.add_production(pos, {n(neg), n(neg)});
  g.add_production(neg, {s, n(pos), s});
  g.add_production(neg, {r, n(pos), r, n(pos), r});
  g.add_production(neg, {r, n(neg), r, n(neg), r});
  g.add_production(neg, {n(pos), n(neg)});
  g.add_production(neg, {n(neg), n(pos)});
  for (std::size_t i = 0; i < marker_signs.size(); ++i) {
    g.add_production(nsign(marker_signs[i]), {t(marker(i))});
  }

  // B_k^tau: the suffix from target letter k on, with remaining sign tau.
  const std::size_t len = target.word.size();
  std::vector<std::array<Nonterminal, 2>> chain(len + 1);
  for (std::size_t k = 0; k <= len; ++k) {
    chain[k][0] = g.add_nonterminal("B" + std::to_string(k + 1) + "+");
    chain[k][1] = g.add_nonterminal("B" + std::to_string(k + 1) + "-");
  }
  auto b = [&](std::size_t k, Sign tau) { return chain[k][tau == Sign::plus ? 0 : 1]; };
  for (Sign tau : {Sign::plus, Sign::minus}) {
    for (std::size_t k = 0; k < len; ++k) {
      const Symbol c = t(target.word[k] == 's' ? letter_s : letter_r);
      g.add_production(b(k, tau), {n(pos), c, n(b(k + 1, tau))});
      g.add_production(b(k, tau), {n(neg), c, n(b(k + 1, -tau))});
    }
    g.add_production(b(len, tau), {n(nsign(tau))});
  }
  g.set_start(b(0, target.sign));
  return g;
}

}  // namespace detail

/// All words over {s, r} whose signed value equals the target.
inline Grammar build_target_grammar(const SignedWord& target) { return detail::target_grammar(target, {}); }

/// Words over {s, r} and markers #1..#n where #i stands for sign_i * I.
/// Intersected with the marked semigroup language this yields exactly the
/// factorizations of the target, generator signs included.
inline Grammar build_signed_target_grammar(const SignedWord& target, std::span<const Sign> marker_signs) {
  return detail::target_grammar(target, marker_signs);
}

inline std::vector<Sign> generator_signs(const GeneratorSet& g) {
  std::vector<Sign> out;
  for (const Generator& x : g) out.push_back(x.word.sign);
  return out;
}

/// Words whose marker erasure lies in L(g).
inline Grammar lift_over_markers(const Grammar& g, std::size_t markers) {
  Grammar out;
  for (std::size_t a = 0; a < g.nonterminal_count(); ++a) out.add_nonterminal(g.name(static_cast<Nonterminal>(a)));
  const Nonterminal pad = out.add_nonterminal("K");
  out.add_production(pad, {});
  for (std::size_t i = 0; i < markers; ++i) out.add_production(pad, {detail::t(marker(i)), detail::n(pad)});
  std::map<Letter, Nonterminal> padded;
  for (const Production& p : g.productions()) {
    std::vector<Symbol> body;
    for (Symbol x : p.body) {
      if (!x.is_terminal()) {
        body.push_back(x);
        continue;
      }
      if (is_marker(x.letter())) throw std::invalid_argument("grammar already contains markers");
      auto it = padded.find(x.letter());
      if (it == padded.end()) {
        const Nonterminal a = out.add_nonterminal(std::string("X") + (x.letter() == letter_s ? "s" : "r"));
        out.add_production(a, {x, detail::n(pad)});
        it = padded.emplace(x.letter(), a).first;
      }
      body.push_back(detail::n(it->second));
    }
    out.add_production(p.head, std::move(body));
  }
  if (g.has_start()) {
    const Nonterminal start = out.add_nonterminal("S'");
    out.add_production(start, {detail::n(pad), detail::n(g.start())});
    out.set_start(start);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Deterministic automata over letters
// ---------------------------------------------------------------------------

class LetterDfa {
 public:
  using StateId = std::uint32_t;

  StateId add_state(bool accepting = false) {
    out_.emplace_back();
    accepting_.push_back(accepting);
    return static_cast<StateId>(out_.size() - 1);
  }

  void set_initial(StateId q) { initial_ = check(q); }
  void set_accepting(StateId q, bool value = true) { accepting_[check(q)] = value; }

  void add_transition(StateId from, Letter x, StateId to) {
    check(from);
    check(to);
    for (const auto& [y, p] : out_[from]) {
      if (y == x) {
        if (p == to) return;
        throw std::invalid_argument("transition would make the automaton nondeterministic");
      }
    }
    out_[from].push_back({x, to});
  }

  std::optional<StateId> step(StateId q, Letter x) const {
    for (const auto& [y, p] : out_.at(q)) {
      if (y == x) return p;
    }
    return std::nullopt;
  }

  bool accepts(const Word& w) const {
    if (out_.empty()) return false;
    StateId q = initial_;
    for (Letter x : w) {
      const auto next = step(q, x);
      if (!next) return false;
      q = *next;
    }
    return accepting_[q];
  }

  std::size_t state_count() const noexcept { return out_.size(); }
  StateId initial() const noexcept { return initial_; }
  bool accepting(StateId q) const { return accepting_.at(q); }
  const std::vector<std::pair<Letter, StateId>>& transitions(StateId q) const { return out_.at(q); }

 private:
  StateId check(StateId q) const {
    if (q >= out_.size()) throw std::out_of_range("DFA state out of range");
    return q;
  }

  std::vector<std::vector<std::pair<Letter, StateId>>> out_;
  std::vector<bool> accepting_;
  StateId initial_ = 0;
};

using DfaState = LetterDfa::StateId;

/// Recognizes (#1 w_1 | ... | #n w_n)+ over the generators' reduced words.
struct MarkedDfa {
  LetterDfa automaton;
  std::size_t markers = 0;
};

inline MarkedDfa build_marked_semigroup_dfa(const GeneratorSet& g) {
  MarkedDfa out;
  out.markers = g.size();
  LetterDfa& d = out.automaton;
  const auto q0 = d.add_state();
  d.set_initial(q0);
  if (g.empty()) return out;
  const auto hub = d.add_state(true);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Word w = to_letters(g[i].word.word);
    if (w.empty()) {
      d.add_transition(q0, marker(i), hub);
      d.add_transition(hub, marker(i), hub);
      continue;
    }
    const auto first = d.add_state();
    d.add_transition(q0, marker(i), first);
    d.add_transition(hub, marker(i), first);
    auto at = first;
    for (std::size_t k = 0; k + 1 < w.size(); ++k) {
      const auto next = d.add_state();
      d.add_transition(at, w[k], next);
      at = next;
    }
    d.add_transition(at, w.back(), hub);
  }
  return out;
}

/// Accepts exactly the given word.
inline LetterDfa linear_dfa(const Word& w) {
  LetterDfa d;
  auto at = d.add_state();
  d.set_initial(at);
  for (Letter x : w) {
    const auto next = d.add_state();
    d.add_transition(at, x, next);
    at = next;
  }
  d.set_accepting(at);
  return d;
}

// ---------------------------------------------------------------------------
// Analyses
// ---------------------------------------------------------------------------

namespace detail {

/// Same language, every body of length at most two.
inline Grammar binarize(const Grammar& g) {
  Grammar out;
  for (std::size_t a = 0; a < g.nonterminal_count(); ++a) out.add_nonterminal(g.name(static_cast<Nonterminal>(a)));
  for (const Production& p : g.productions()) {
    if (p.body.size() <= 2) {
      out.add_production(p.head, p.body);
      continue;
    }
    Nonterminal head = p.head;
    for (std::size_t k = 0; k + 2 < p.body.size(); ++k) {
      const Nonterminal rest = out.add_nonterminal();
      out.add_production(head, {p.body[k], n(rest)});
      head = rest;
    }
    out.add_production(head, {p.body[p.body.size() - 2], p.body.back()});
  }
  if (g.has_start()) out.set_start(g.start());
  return out;
}

inline std::vector<bool> productive(const Grammar& g) {
  const std::size_t nt = g.nonterminal_count();
  std::vector<bool> prod(nt, false);
  std::vector<std::size_t> missing(g.productions().size(), 0);
  std::vector<std::vector<std::size_t>> uses(nt);
  std::vector<Nonterminal> work;
  for (std::size_t k = 0; k < g.productions().size(); ++k) {
    const Production& p = g.productions()[k];
    for (Symbol x : p.body) {
      if (!x.is_terminal()) {
        ++missing[k];
        uses[x.id()].push_back(k);
      }
    }
    if (missing[k] == 0 && !prod[p.head]) {
      prod[p.head] = true;
      work.push_back(p.head);
    }
  }
  while (!work.empty()) {
    const Nonterminal a = work.back();
    work.pop_back();
    for (std::size_t k : uses[a]) {
      if (--missing[k] == 0) {
        const Nonterminal h = g.productions()[k].head;
        if (!prod[h]) {
          prod[h] = true;
          work.push_back(h);
        }
      }
    }
  }
  return prod;
}

/// Strongly connected component id per vertex; ids are in reverse
/// topological order (a component's successors have smaller ids).
inline std::vector<std::size_t> strongly_connected(const std::vector<std::vector<std::size_t>>& adj) {
  const std::size_t n = adj.size();
  constexpr std::size_t unset = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, unset), low(n, 0), comp(n, unset);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t counter = 0, comps = 0;
  struct Frame {
    std::size_t v, next;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != unset) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < adj[f.v].size()) {
        const std::size_t w = adj[f.v][f.next++];
        if (index[w] == unset) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const std::size_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comps;
        } while (w != v);
        ++comps;
      }
    }
  }
  return comp;
}

/// Nonterminals deriving at least one nonempty word.
inline std::vector<bool> derives_nonempty(const Grammar& g, const std::vector<bool>& prod) {
  std::vector<bool> out(g.nonterminal_count(), false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const Production& p : g.productions()) {
      if (out[p.head] || !prod[p.head]) continue;
      bool all_productive = true, some_nonempty = false;
      for (Symbol x : p.body) {
        if (x.is_terminal()) {
          some_nonempty = true;
        } else {
          all_productive = all_productive && prod[x.id()];
          some_nonempty = some_nonempty || out[x.id()];
        }
      }
      if (all_productive && some_nonempty) {
        out[p.head] = true;
        changed = true;
      }
    }
  }
  return out;
}

}  // namespace detail

/// Removes unproductive and unreachable nonterminals, renumbering the rest.
inline Grammar trim(const Grammar& g) {
  Grammar out;
  if (!g.has_start()) {
    out.mark_trimmed();
    return out;
  }
  const auto prod = detail::productive(g);
  if (!prod[g.start()]) {
    // Empty language: a start symbol without productions.
    out.set_start(out.add_nonterminal(g.name(g.start())));
    out.mark_trimmed();
    return out;
  }
  std::vector<std::vector<std::size_t>> by_head(g.nonterminal_count());
  for (std::size_t k = 0; k < g.productions().size(); ++k) {
    const Production& p = g.productions()[k];
    const bool usable = std::all_of(p.body.begin(), p.body.end(),
                                    [&](Symbol x) { return x.is_terminal() || prod[x.id()]; });
    if (usable) by_head[p.head].push_back(k);
  }
  constexpr Nonterminal unset = static_cast<Nonterminal>(-1);
  std::vector<Nonterminal> renumber(g.nonterminal_count(), unset);
  std::vector<Nonterminal> order{g.start()};
  renumber[g.start()] = out.add_nonterminal(g.name(g.start()));
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t k : by_head[order[i]]) {
      for (Symbol x : g.productions()[k].body) {
        if (!x.is_terminal() && renumber[x.id()] == unset) {
          renumber[x.id()] = out.add_nonterminal(g.name(x.id()));
          order.push_back(x.id());
        }
      }
    }
  }
  for (Nonterminal a : order) {
    for (std::size_t k : by_head[a]) {
      std::vector<Symbol> body;
      for (Symbol x : g.productions()[k].body) {
        body.push_back(x.is_terminal() ? x : Symbol::nonterminal(renumber[x.id()]));
      }
      out.add_production(renumber[a], std::move(body));
    }
  }
  out.set_start(renumber[g.start()]);
  out.mark_trimmed();
  return out;
}

inline bool is_empty(const Grammar& g) {
  if (!g.has_start()) return true;
  return !detail::productive(g)[g.start()];
}

/// Infinite iff some useful nonterminal A derives u A v with uv nonempty.
inline bool is_finite(const Grammar& input) {
  const Grammar g = input.trimmed() ? input : trim(input);
  if (is_empty(g)) return true;
  const std::vector<bool> prod(g.nonterminal_count(), true);
  const auto nonempty = detail::derives_nonempty(g, prod);
  std::vector<std::vector<std::size_t>> adj(g.nonterminal_count());
  struct Arc {
    Nonterminal from, to;
    bool growing;
  };
  std::vector<Arc> arcs;
  for (const Production& p : g.productions()) {
    for (std::size_t k = 0; k < p.body.size(); ++k) {
      if (p.body[k].is_terminal()) continue;
      bool growing = false;
      for (std::size_t j = 0; j < p.body.size(); ++j) {
        if (j == k) continue;
        growing = growing || p.body[j].is_terminal() || nonempty[p.body[j].id()];
      }
      adj[p.head].push_back(p.body[k].id());
      arcs.push_back({p.head, p.body[k].id(), growing});
    }
  }
  const auto comp = detail::strongly_connected(adj);
  for (const Arc& a : arcs) {
    if (a.growing && comp[a.from] == comp[a.to]) return false;
  }
  return true;
}

/// For every k >= 0, prefix left^k middle right^k suffix is in the language,
/// and left right is nonempty.
struct PumpingCertificate {
  Word prefix, left, middle, right, suffix;
  std::string nonterminal;

  Word pumped(std::size_t k) const {
    Word w = prefix;
    for (std::size_t i = 0; i < k; ++i) w.insert(w.end(), left.begin(), left.end());
    w.insert(w.end(), middle.begin(), middle.end());
    for (std::size_t i = 0; i < k; ++i) w.insert(w.end(), right.begin(), right.end());
    w.insert(w.end(), suffix.begin(), suffix.end());
    return w;
  }
};

namespace detail {

inline constexpr std::size_t no_length = static_cast<std::size_t>(-1);

/// Shortest yields (any, and nonempty) per nonterminal with the production
/// choices that realize them, computed in increasing length order so that
/// following the choices always terminates.
struct ShortestYields {
  std::vector<std::size_t> min_len, ne_len;
  std::vector<std::size_t> min_prod, ne_prod, ne_pos;
};

inline ShortestYields shortest_yields(const Grammar& g) {
  const std::size_t nt = g.nonterminal_count();
  const auto& prods = g.productions();
  ShortestYields y{std::vector<std::size_t>(nt, no_length), std::vector<std::size_t>(nt, no_length),
                   std::vector<std::size_t>(nt, 0), std::vector<std::size_t>(nt, 0), std::vector<std::size_t>(nt, 0)};
  std::vector<std::vector<std::size_t>> uses(nt);
  for (std::size_t k = 0; k < prods.size(); ++k) {
    for (Symbol x : prods[k].body) {
      if (!x.is_terminal()) uses[x.id()].push_back(k);
    }
  }
  using Entry = std::pair<std::size_t, Nonterminal>;
  // Any-length yields.
  {
    std::vector<std::size_t> missing(prods.size(), 0);
    std::set<Entry> queue;
    std::vector<bool> done(nt, false);
    auto offer = [&](Nonterminal a, std::size_t len, std::size_t k) {
      if (done[a] || len >= y.min_len[a]) return;
      if (y.min_len[a] != no_length) queue.erase({y.min_len[a], a});
      y.min_len[a] = len;
      y.min_prod[a] = k;
      queue.insert({len, a});
    };
    auto cost = [&](std::size_t k) {
      std::size_t len = 0;
      for (Symbol x : prods[k].body) len += x.is_terminal() ? 1 : y.min_len[x.id()];
      return len;
    };
    for (std::size_t k = 0; k < prods.size(); ++k) {
      for (Symbol x : prods[k].body) missing[k] += x.is_terminal() ? 0 : 1;
      if (missing[k] == 0) offer(prods[k].head, cost(k), k);
    }
    while (!queue.empty()) {
      const auto [len, a] = *queue.begin();
      queue.erase(queue.begin());
      done[a] = true;
      for (std::size_t k : uses[a]) {
        // Count each occurrence of a in the body.
        for (Symbol x : prods[k].body) {
          if (!x.is_terminal() && x.id() == a) --missing[k];
        }
        if (missing[k] == 0) offer(prods[k].head, cost(k), k);
      }
    }
  }
  // Nonempty yields: one body position is nonempty, the others shortest.
  {
    std::set<Entry> queue;
    std::vector<bool> done(nt, false);
    auto offer = [&](Nonterminal a, std::size_t len, std::size_t k, std::size_t pos) {
      if (done[a] || len >= y.ne_len[a]) return;
      if (y.ne_len[a] != no_length) queue.erase({y.ne_len[a], a});
      y.ne_len[a] = len;
      y.ne_prod[a] = k;
      y.ne_pos[a] = pos;
      queue.insert({len, a});
    };
    auto base = [&](std::size_t k, std::size_t skip) {
      std::size_t len = 0;
      for (std::size_t j = 0; j < prods[k].body.size(); ++j) {
        if (j == skip) continue;
        const Symbol x = prods[k].body[j];
        if (x.is_terminal()) {
          len += 1;
        } else if (y.min_len[x.id()] == no_length) {
          return no_length;
        } else {
          len += y.min_len[x.id()];
        }
      }
      return len;
    };
    for (std::size_t k = 0; k < prods.size(); ++k) {
      for (std::size_t j = 0; j < prods[k].body.size(); ++j) {
        if (!prods[k].body[j].is_terminal()) continue;
        const std::size_t rest = base(k, j);
        if (rest != no_length) offer(prods[k].head, rest + 1, k, j);
      }
    }
    while (!queue.empty()) {
      const auto [len, a] = *queue.begin();
      queue.erase(queue.begin());
      done[a] = true;
      for (std::size_t k : uses[a]) {
        for (std::size_t j = 0; j < prods[k].body.size(); ++j) {
          const Symbol x = prods[k].body[j];
          if (x.is_terminal() || x.id() != a) continue;
          const std::size_t rest = base(k, j);
          if (rest != no_length) offer(prods[k].head, rest + len, k, j);
        }
      }
    }
  }
  return y;
}

/// Expands a symbol along the recorded shortest choices.
inline Word expand(const Grammar& g, const ShortestYields& y, Symbol start, bool nonempty) {
  Word out;
  std::vector<std::pair<Symbol, bool>> stack{{start, nonempty}};
  while (!stack.empty()) {
    const auto [x, ne] = stack.back();
    stack.pop_back();
    if (x.is_terminal()) {
      out.push_back(x.letter());
      continue;
    }
    const std::size_t k = ne ? y.ne_prod[x.id()] : y.min_prod[x.id()];
    const auto& body = g.productions()[k].body;
    for (std::size_t j = body.size(); j-- > 0;) stack.push_back({body[j], ne && j == y.ne_pos[x.id()]});
  }
  return out;
}

}  // namespace detail

/// A pumping decomposition read off a cycle A =>+ u A v with uv nonempty, or
/// nothing when the language is finite.
inline std::optional<PumpingCertificate> pumping_certificate(const Grammar& input) {
  const Grammar g = input.trimmed() ? input : trim(input);
  if (is_empty(g)) return std::nullopt;
  const std::size_t nt = g.nonterminal_count();
  const auto& prods = g.productions();
  const auto y = detail::shortest_yields(g);
  std::vector<std::vector<std::size_t>> adj(nt);
  for (const Production& p : prods) {
    for (Symbol x : p.body) {
      if (!x.is_terminal()) adj[p.head].push_back(x.id());
    }
  }
  const auto comp = detail::strongly_connected(adj);
  // A growing arc head -> body[pos] inside one component.
  std::optional<std::pair<std::size_t, std::size_t>> arc;  // production, child position
  std::size_t grow_pos = 0;
  for (std::size_t k = 0; k < prods.size() && !arc; ++k) {
    const Production& p = prods[k];
    for (std::size_t j = 0; j < p.body.size() && !arc; ++j) {
      if (p.body[j].is_terminal() || comp[p.body[j].id()] != comp[p.head]) continue;
      for (std::size_t i = 0; i < p.body.size(); ++i) {
        if (i == j) continue;
        if (p.body[i].is_terminal() || y.ne_len[p.body[i].id()] != detail::no_length) {
          arc = std::pair{k, j};
          grow_pos = i;
          break;
        }
      }
    }
  }
  if (!arc) return std::nullopt;

  // Steps (production, child position, growing sibling or none).
  struct Step {
    std::size_t prod, pos, grow;
  };
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  auto path_between = [&](Nonterminal from, Nonterminal to, bool same_component) {
    std::vector<std::optional<std::pair<std::size_t, std::size_t>>> parent(nt);
    std::vector<bool> seen(nt, false);
    std::deque<Nonterminal> queue{from};
    seen[from] = true;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> out(nt);
    for (std::size_t k = 0; k < prods.size(); ++k) {
      for (std::size_t j = 0; j < prods[k].body.size(); ++j) {
        if (!prods[k].body[j].is_terminal()) out[prods[k].head].push_back({k, j});
      }
    }
    while (!queue.empty() && !seen[to]) {
      const Nonterminal a = queue.front();
      queue.pop_front();
      for (const auto& [k, j] : out[a]) {
        const Nonterminal b = prods[k].body[j].id();
        if (seen[b] || (same_component && comp[b] != comp[from])) continue;
        seen[b] = true;
        parent[b] = std::pair{k, j};
        queue.push_back(b);
      }
    }
    std::vector<Step> steps;
    for (Nonterminal at = to; at != from;) {
      const auto [k, j] = *parent[at];
      steps.push_back({k, j, none});
      at = prods[k].head;
    }
    std::reverse(steps.begin(), steps.end());
    return steps;
  };

  const Production& grow = prods[arc->first];
  const Nonterminal a = grow.head;
  const Nonterminal b = grow.body[arc->second].id();
  std::vector<Step> cycle{{arc->first, arc->second, grow_pos}};
  if (b != a) {
    const auto back = path_between(b, a, true);
    cycle.insert(cycle.end(), back.begin(), back.end());
  }
  std::vector<Step> context;
  if (a != g.start()) context = path_between(g.start(), a, false);

  auto sides = [&](const std::vector<Step>& steps, Word& left, Word& right) {
    std::vector<Word> rights;
    for (const Step& s : steps) {
      const auto& body = prods[s.prod].body;
      for (std::size_t i = 0; i < s.pos; ++i) {
        const Word w = detail::expand(g, y, body[i], i == s.grow);
        left.insert(left.end(), w.begin(), w.end());
      }
      Word r;
      for (std::size_t i = s.pos + 1; i < body.size(); ++i) {
        const Word w = detail::expand(g, y, body[i], i == s.grow);
        r.insert(r.end(), w.begin(), w.end());
      }
      rights.push_back(std::move(r));
    }
    for (auto it = rights.rbegin(); it != rights.rend(); ++it) right.insert(right.end(), it->begin(), it->end());
  };
  PumpingCertificate cert;
  cert.nonterminal = g.name(a);
  sides(context, cert.prefix, cert.suffix);
  sides(cycle, cert.left, cert.right);
  cert.middle = detail::expand(g, y, Symbol::nonterminal(a), false);
  if (cert.left.empty() && cert.right.empty()) throw std::logic_error("pumping cycle does not grow");
  return cert;
}

// ---------------------------------------------------------------------------
// Intersection with a DFA
// ---------------------------------------------------------------------------

/// Product grammar of g and d; its nonterminals are triples (p, A, q).
inline Grammar intersect(const Grammar& input, const LetterDfa& d) {
  Grammar out;
  const Nonterminal start = out.add_nonterminal("S");
  out.set_start(start);
  if (!input.has_start() || d.state_count() == 0) return out;
  const Grammar g = detail::binarize(input);
  const std::size_t nt = g.nonterminal_count();
  const std::size_t qn = d.state_count();

  // Symbols: nonterminals 0..nt-1, terminal x at nt + x.
  auto sym = [&](Symbol x) -> std::uint64_t { return x.is_terminal() ? nt + x.letter() : x.id(); };
  std::vector<std::vector<Nonterminal>> unit_by;            // A -> X
  std::vector<std::vector<std::pair<Nonterminal, Symbol>>> left_by;   // A -> X Y, indexed by X
  std::vector<std::vector<std::pair<Nonterminal, Symbol>>> right_by;  // A -> X Y, indexed by Y
  auto grow = [&](std::uint64_t s) {
    if (s >= unit_by.size()) {
      unit_by.resize(s + 1);
      left_by.resize(s + 1);
      right_by.resize(s + 1);
    }
  };
  std::vector<Nonterminal> nullable_heads;
  for (const Production& p : g.productions()) {
    if (p.body.empty()) {
      nullable_heads.push_back(p.head);
    } else if (p.body.size() == 1) {
      grow(sym(p.body[0]));
      unit_by[sym(p.body[0])].push_back(p.head);
    } else {
      grow(sym(p.body[0]));
      grow(sym(p.body[1]));
      left_by[sym(p.body[0])].push_back({p.head, p.body[1]});
      right_by[sym(p.body[1])].push_back({p.head, p.body[0]});
    }
  }
  grow(nt + 1);

  struct Item {
    std::uint64_t symbol;
    DfaState from, to;
  };
  std::vector<Item> items;
  std::vector<Nonterminal> item_nt;  // output nonterminal, for nonterminal items
  std::unordered_map<std::uint64_t, std::uint32_t> item_id;
  const std::uint64_t stride = qn;
  auto key = [&](std::uint64_t s, DfaState p, DfaState q) { return (s * stride + p) * stride + q; };
  if (static_cast<double>(unit_by.size()) * static_cast<double>(qn) * static_cast<double>(qn) > 1.8e19) {
    throw std::length_error("intersection too large");
  }
  // Processed items by (symbol, from) and (symbol, to).
  std::unordered_map<std::uint64_t, std::vector<std::uint32_t>> by_from, by_to;
  std::deque<std::uint32_t> agenda;
  std::vector<std::vector<std::pair<Nonterminal, std::vector<Symbol>>>> pending;

  auto output_symbol = [&](std::uint32_t id) {
    const Item& it = items[id];
    return it.symbol >= nt ? Symbol::terminal(static_cast<Letter>(it.symbol - nt)) : Symbol::nonterminal(item_nt[id]);
  };
  auto ensure = [&](std::uint64_t s, DfaState p, DfaState q) -> std::uint32_t {
    const auto k = key(s, p, q);
    auto found = item_id.find(k);
    if (found != item_id.end()) return found->second;
    const auto id = static_cast<std::uint32_t>(items.size());
    items.push_back({s, p, q});
    if (s < nt) {
      item_nt.push_back(out.add_nonterminal("(" + std::to_string(p) + "," + g.name(static_cast<Nonterminal>(s)) +
                                            "," + std::to_string(q) + ")"));
    } else {
      item_nt.push_back(0);
    }
    item_id.emplace(k, id);
    agenda.push_back(id);
    return id;
  };
  auto record = [&](Nonterminal head, DfaState p, DfaState q, std::vector<std::uint32_t> children) {
    const auto id = ensure(head, p, q);
    std::vector<Symbol> body;
    for (auto c : children) body.push_back(output_symbol(c));
    out.add_production(item_nt[id], std::move(body));
  };

  for (DfaState q = 0; q < qn; ++q) {
    for (const auto& [x, p] : d.transitions(q)) ensure(nt + x, q, p);
    for (Nonterminal a : nullable_heads) record(a, q, q, {});
  }
  auto sym_of = [&](Symbol x) -> std::uint64_t { return sym(x); };

  while (!agenda.empty()) {
    const auto id = agenda.front();
    agenda.pop_front();
    const Item it = items[id];
    if (it.symbol >= unit_by.size()) continue;
    by_from[it.symbol * stride + it.from].push_back(id);
    by_to[it.symbol * stride + it.to].push_back(id);
    for (Nonterminal a : unit_by[it.symbol]) record(a, it.from, it.to, {id});
    // As left child: A -> X Y with Y spanning it.to -> r.
    for (const auto& [a, y] : left_by[it.symbol]) {
      const auto ys = sym_of(y);
      auto found = by_from.find(ys * stride + it.to);
      if (found == by_from.end()) continue;
      const auto& partners = found->second;
      for (std::size_t k = 0; k < partners.size(); ++k) {
        const auto other = partners[k];
        record(a, it.from, items[other].to, {id, other});
      }
    }
    // As right child: A -> Y X with Y spanning r -> it.from.
    for (const auto& [a, y] : right_by[it.symbol]) {
      const auto ys = sym_of(y);
      auto found = by_to.find(ys * stride + it.from);
      if (found == by_to.end()) continue;
      const auto& partners = found->second;
      for (std::size_t k = 0; k < partners.size(); ++k) {
        const auto other = partners[k];
        if (other == id) continue;  // already paired as left child
        record(a, items[other].from, it.to, {other, id});
      }
    }
  }

  const DfaState q0 = d.initial();
  for (DfaState f = 0; f < qn; ++f) {
    if (!d.accepting(f)) continue;
    auto found = item_id.find(key(g.start(), q0, f));
    if (found != item_id.end()) out.add_production(start, {Symbol::nonterminal(item_nt[found->second])});
  }
  return out;
}

inline Grammar intersect(const Grammar& g, const MarkedDfa& d) { return intersect(g, d.automaton); }

inline bool contains(const Grammar& g, const Word& w) { return !is_empty(intersect(g, linear_dfa(w))); }

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

struct Enumeration {
  std::vector<Word> words;  // sorted by (length, lexicographic)
  bool exceeded = false;    // more than cap words; words then holds the first cap + 1
  std::optional<std::size_t> cap;
};

inline constexpr std::size_t default_enumeration_limit = std::size_t{1} << 20;

namespace detail {

using WordSet = std::set<Word, WordOrder>;

/// Concatenations of one word from each set; nullopt if the product would
/// exceed limit.
inline std::optional<WordSet> concatenate(const std::vector<const WordSet*>& parts, std::size_t limit,
                                          std::size_t max_length = static_cast<std::size_t>(-1)) {
  WordSet acc{Word{}};
  for (const WordSet* part : parts) {
    WordSet next;
    for (const Word& u : acc) {
      for (const Word& v : *part) {
        if (u.size() + v.size() > max_length) continue;
        Word w = u;
        w.insert(w.end(), v.begin(), v.end());
        next.insert(std::move(w));
        if (next.size() > limit) return std::nullopt;
      }
    }
    acc = std::move(next);
    if (acc.empty()) break;
  }
  return acc;
}

}  // namespace detail

/// The distinct words of a finite grammar.  With a cap the result stops at
/// "more than cap"; an infinite grammar needs a cap.
inline Enumeration enumerate_words(const Grammar& input, std::optional<std::size_t> cap = std::nullopt,
                                   std::size_t limit = default_enumeration_limit) {
  Enumeration out;
  out.cap = cap;
  const Grammar g = input.trimmed() ? input : trim(input);
  if (is_empty(g)) return out;
  if (!is_finite(g)) {
    if (!cap) throw std::invalid_argument("enumeration of an infinite language needs a cap");
    out.exceeded = true;
    return out;
  }
  const std::size_t nt = g.nonterminal_count();
  std::vector<std::vector<std::size_t>> adj(nt), by_head(nt);
  for (std::size_t k = 0; k < g.productions().size(); ++k) {
    const Production& p = g.productions()[k];
    by_head[p.head].push_back(k);
    for (Symbol x : p.body) {
      if (!x.is_terminal()) adj[p.head].push_back(x.id());
    }
  }
  const auto comp = detail::strongly_connected(adj);
  std::size_t comps = 0;
  for (auto c : comp) comps = std::max(comps, c + 1);
  std::vector<std::vector<Nonterminal>> members(comps);
  for (std::size_t a = 0; a < nt; ++a) members[comp[a]].push_back(static_cast<Nonterminal>(a));

  std::vector<detail::WordSet> lang(nt);
  std::map<Letter, detail::WordSet> singletons;
  auto terminal_set = [&](Letter x) -> const detail::WordSet& {
    auto it = singletons.find(x);
    if (it == singletons.end()) it = singletons.emplace(x, detail::WordSet{Word{x}}).first;
    return it->second;
  };
  // Successor components have smaller ids, so increasing order is bottom-up.
  for (std::size_t c = 0; c < comps; ++c) {
    for (bool changed = true; changed;) {
      changed = false;
      for (Nonterminal a : members[c]) {
        for (std::size_t k : by_head[a]) {
          std::vector<const detail::WordSet*> parts;
          for (Symbol x : g.productions()[k].body) {
            parts.push_back(x.is_terminal() ? &terminal_set(x.letter()) : &lang[x.id()]);
          }
          const auto words = detail::concatenate(parts, limit);
          if (!words) throw std::length_error("enumeration exceeded its word limit");
          for (const Word& w : *words) {
            if (lang[a].insert(w).second) changed = true;
          }
          if (lang[a].size() > limit) throw std::length_error("enumeration exceeded its word limit");
        }
      }
    }
  }
  const auto& all = lang[g.start()];
  if (cap && all.size() > *cap) {
    out.exceeded = true;
    out.words.assign(all.begin(), std::next(all.begin(), static_cast<std::ptrdiff_t>(*cap + 1)));
    return out;
  }
  out.words.assign(all.begin(), all.end());
  return out;
}

/// All words of length at most max_length, for grammars of any kind.
/// Words are built length by length over the binarized grammar.
inline std::vector<Word> enumerate_up_to_length(const Grammar& input, std::size_t max_length,
                                                std::size_t limit = default_enumeration_limit) {
  const Grammar g = detail::binarize(input.trimmed() ? input : trim(input));
  if (is_empty(g)) return {};
  const std::size_t nt = g.nonterminal_count();
  // by_len[a][n]: words of length n derived from a.
  std::vector<std::vector<detail::WordSet>> by_len(nt, std::vector<detail::WordSet>(max_length + 1));
  std::size_t total = 0;
  auto add = [&](Nonterminal a, Word w) {
    const std::size_t n = w.size();
    if (!by_len[a][n].insert(std::move(w)).second) return false;
    if (++total > limit) throw std::length_error("enumeration exceeded its word limit");
    return true;
  };
  // Words of a symbol at length n (terminals only at length 1).
  auto words_of = [&](Symbol x, std::size_t n, const detail::WordSet*& out, detail::WordSet& scratch) {
    if (!x.is_terminal()) {
      out = &by_len[x.id()][n];
      return;
    }
    scratch.clear();
    if (n == 1) scratch.insert(Word{x.letter()});
    out = &scratch;
  };
  for (std::size_t n = 0; n <= max_length; ++n) {
    // Productions mixing a length-0 part with a length-n part make this a
    // fixpoint within the layer.
    for (bool changed = true; changed;) {
      changed = false;
      for (const Production& p : g.productions()) {
        if (p.body.empty()) {
          if (n == 0) changed = add(p.head, {}) || changed;
          continue;
        }
        if (p.body.size() == 1) {
          const detail::WordSet* xs;
          detail::WordSet scratch;
          words_of(p.body[0], n, xs, scratch);
          const std::vector<Word> copy(xs->begin(), xs->end());
          for (const Word& w : copy) changed = add(p.head, w) || changed;
          continue;
        }
        for (std::size_t i = 0; i <= n; ++i) {
          const detail::WordSet *xs, *ys;
          detail::WordSet sx, sy;
          words_of(p.body[0], i, xs, sx);
          if (xs->empty()) continue;
          words_of(p.body[1], n - i, ys, sy);
          if (ys->empty()) continue;
          std::vector<Word> made;
          for (const Word& u : *xs) {
            for (const Word& v : *ys) {
              Word w = u;
              w.insert(w.end(), v.begin(), v.end());
              made.push_back(std::move(w));
            }
          }
          for (Word& w : made) changed = add(p.head, std::move(w)) || changed;
        }
      }
    }
  }
  std::vector<Word> out;
  for (const auto& layer : by_len[g.start()]) out.insert(out.end(), layer.begin(), layer.end());
  return out;
}

}  // namespace sl2z
