#pragma once

// Cancellation automata over {s,r} and their signed epsilon-saturation.
//
// Edges carry a letter (s, r or epsilon) and a weight in {+1,-1}.  The
// saturation relation contains (q, p, sign) exactly when some nonempty edge
// path q -> p spells a word that reduces to the empty word, where the sign is
// the product of the edge weights and one flip per deleted "ss"/"rrr".

#include <cstddef>
#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "sl2z/core.hpp"

namespace sl2z {

using State = std::uint32_t;

enum class EdgeLabel : char { s = 's', r = 'r', epsilon = 'e' };

/// What a generator chain stands for inside an automaton.
enum class ChainRole : std::uint8_t {
  none,
  loop,          // w_g traversed from the hub
  prefix,        // leading w_i of a pattern automaton
  bridge,        // first inverse chain A -> B
  inverse_loop,  // inverse chain looping at B
  exit,          // trailing inv(w_j)
  entry,         // first generator of a membership query
  target,        // inv(target) closing a membership query
};

struct ChainTag {
  ChainRole role = ChainRole::none;
  std::size_t generator = 0;
  std::size_t position = 0;
};

struct Edge {
  State from;
  State to;
  EdgeLabel label;
  Sign weight;
  ChainTag tag;
};

class CancellationAutomaton {
 public:
  State add_state() { return static_cast<State>(state_count_++); }

  std::size_t add_edge(State from, State to, EdgeLabel label, Sign weight, ChainTag tag = {}) {
    if (from >= state_count_ || to >= state_count_) {
      throw std::out_of_range("edge endpoint is not a state");
    }
    edges_.push_back({from, to, label, weight, tag});
    return edges_.size() - 1;
  }

  /// Spells w.word from `from` to `to` through fresh states; the sign sits on
  /// the first edge.  An empty word becomes a single weighted epsilon edge.
  void add_chain(State from, State to, const SignedWord& w, ChainRole role, std::size_t generator) {
    if (w.word.empty()) {
      add_edge(from, to, EdgeLabel::epsilon, w.sign, {role, generator, 0});
      return;
    }
    State cur = from;
    for (std::size_t k = 0; k < w.word.size(); ++k) {
      const State next = (k + 1 == w.word.size()) ? to : add_state();
      add_edge(cur, next, w.word[k] == 's' ? EdgeLabel::s : EdgeLabel::r,
               k == 0 ? w.sign : Sign::plus, {role, generator, k});
      cur = next;
    }
  }

  std::size_t state_count() const noexcept { return state_count_; }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const Edge& edge(std::size_t id) const { return edges_.at(id); }

  State initial() const noexcept { return initial_; }
  State final_state() const noexcept { return final_; }
  void set_initial(State q) { initial_ = q; }
  void set_final(State q) { final_ = q; }

 private:
  std::size_t state_count_ = 0;
  std::vector<Edge> edges_;
  State initial_ = 0;
  State final_ = 0;
};

/// Hub state h (initial and final) with one chain h -> ... -> h per generator.
inline CancellationAutomaton build_loop_automaton(const GeneratorSet& g) {
  if (g.empty()) throw std::invalid_argument("generator set is empty");
  CancellationAutomaton a;
  const State hub = a.add_state();
  a.set_initial(hub);
  a.set_final(hub);
  for (std::size_t i = 0; i < g.size(); ++i) a.add_chain(hub, hub, g[i].word, ChainRole::loop, i);
  return a;
}

/// Accepts the products M_i . u . v^-1 . M_j^-1 with u, v in G*:
/// initial -w_i-> A, loops w_g at A, A -inv(w_g)-> B, loops inv(w_g) at B,
/// and A, B -inv(w_j)-> final.
inline CancellationAutomaton build_pattern_automaton(std::size_t i, std::size_t j, const GeneratorSet& g) {
  if (i == j) throw std::invalid_argument("pattern automaton needs two distinct generator indices");
  if (i >= g.size() || j >= g.size()) throw std::out_of_range("generator index out of range");
  CancellationAutomaton a;
  const State init = a.add_state();
  const State left = a.add_state();
  const State right = a.add_state();
  const State fin = a.add_state();
  a.set_initial(init);
  a.set_final(fin);
  a.add_chain(init, left, g[i].word, ChainRole::prefix, i);
  for (std::size_t k = 0; k < g.size(); ++k) a.add_chain(left, left, g[k].word, ChainRole::loop, k);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const SignedWord w = inv(g[k].word);
    a.add_chain(left, right, w, ChainRole::bridge, k);
    a.add_chain(right, right, w, ChainRole::inverse_loop, k);
  }
  const SignedWord exit_word = inv(g[j].word);
  a.add_chain(left, fin, exit_word, ChainRole::exit, j);
  a.add_chain(right, fin, exit_word, ChainRole::exit, j);
  return a;
}

/// Accepts the products M_{g1} ... M_{gn} . target^-1 with n >= 1.
inline CancellationAutomaton build_membership_automaton(const GeneratorSet& g, const SignedWord& target) {
  if (g.empty()) throw std::invalid_argument("generator set is empty");
  CancellationAutomaton a;
  const State init = a.add_state();
  const State hub = a.add_state();
  const State fin = a.add_state();
  a.set_initial(init);
  a.set_final(fin);
  for (std::size_t k = 0; k < g.size(); ++k) {
    a.add_chain(init, hub, g[k].word, ChainRole::entry, k);
    a.add_chain(hub, hub, g[k].word, ChainRole::loop, k);
  }
  a.add_chain(hub, fin, inv(target), ChainRole::target, 0);
  return a;
}

// ---------------------------------------------------------------------------
// Saturation
// ---------------------------------------------------------------------------

struct Triple {
  State from;
  State to;
  Sign sign;
};

class SaturationRelation;
SaturationRelation saturate(const CancellationAutomaton& a);

class SaturationRelation {
 public:
  bool contains(State q, State p, Sign sign) const { return find(q, p, sign).has_value(); }

  std::optional<std::size_t> find(State q, State p, Sign sign) const {
    auto it = index_.find(key(q, p, sign));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const noexcept { return triples_.size(); }
  bool empty() const noexcept { return triples_.empty(); }

  /// Triples in derivation order.
  const std::vector<Triple>& triples() const noexcept { return triples_; }

  /// Edge ids of the path recorded for a triple.
  std::vector<std::size_t> edge_path(std::size_t triple_id,
                                     std::size_t limit = std::size_t{1} << 24) const {
    std::vector<std::size_t> out;
    std::vector<Node> stack{{Node::triple, static_cast<std::uint32_t>(triple_id)}};
    while (!stack.empty()) {
      const Node n = stack.back();
      stack.pop_back();
      if (n.kind == Node::edge) {
        out.push_back(n.id);
        if (out.size() > limit) throw std::length_error("witness path exceeds the length limit");
        continue;
      }
      const Derivation& d = n.kind == Node::triple ? triple_from_[n.id] : item_from_[n.id];
      switch (d.rule) {
        case Rule::base_edge:
        case Rule::seed:
          stack.push_back({Node::edge, d.x});
          break;
        case Rule::close:
        case Rule::advance:
          stack.push_back({Node::edge, d.y});
          stack.push_back({Node::item, d.x});
          break;
        case Rule::compose:
          stack.push_back({Node::triple, d.y});
          stack.push_back({Node::triple, d.x});
          break;
        case Rule::extend:
          stack.push_back({Node::triple, d.y});
          stack.push_back({Node::item, d.x});
          break;
      }
    }
    return out;
  }

 private:
  friend SaturationRelation saturate(const CancellationAutomaton& a);

  enum class Rule : std::uint8_t { base_edge, close, compose, seed, extend, advance };
  struct Derivation {
    Rule rule;
    std::uint32_t x;
    std::uint32_t y;
  };
  struct Node {
    enum Kind : std::uint8_t { triple, item, edge } kind;
    std::uint32_t id;
  };

  static std::uint64_t key(State q, State p, Sign sign) noexcept {
    return (std::uint64_t{q} << 33) | (std::uint64_t{p} << 1) | (sign == Sign::minus ? 1u : 0u);
  }

  std::vector<Triple> triples_;
  std::vector<Derivation> triple_from_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
  std::vector<Derivation> item_from_;
};

/// Worklist fixpoint.  Partial matches ("items") record an opening s or r,
/// any cancelled material after it, and for r whether a second r was read:
///   stage s1: q -s-> x ~> y          closes with y -s-> p
///   stage r1: q -r-> x ~> y          advances with y -r-> z to r2
///   stage r2: q -r-> . ~> . -r-> z ~> y   closes with y -r-> p
/// where ~> is zero or more saturated triples.  Closed triples compose.
inline SaturationRelation saturate(const CancellationAutomaton& a) {
  using Rule = SaturationRelation::Rule;
  enum Stage : std::uint8_t { s1, r1, r2 };
  struct Item {
    State from;
    State end;
    Stage stage;
    Sign sign;
  };

  SaturationRelation rel;
  const std::size_t n = a.state_count();
  if (n >= (std::size_t{1} << 31)) throw std::length_error("too many states");

  std::vector<std::vector<std::uint32_t>> out_s(n), out_r(n);
  for (std::size_t e = 0; e < a.edges().size(); ++e) {
    const Edge& ed = a.edges()[e];
    if (ed.label == EdgeLabel::s) out_s[ed.from].push_back(static_cast<std::uint32_t>(e));
    if (ed.label == EdgeLabel::r) out_r[ed.from].push_back(static_cast<std::uint32_t>(e));
  }

  std::vector<Item> items;
  std::unordered_map<std::uint64_t, std::uint32_t> item_index;
  // Adjacency over processed elements only; each pair is joined when the later
  // of the two is popped.
  std::vector<std::vector<std::uint32_t>> tri_out(n), tri_in(n), items_at(n);

  struct Work {
    bool is_triple;
    std::uint32_t id;
  };
  std::deque<Work> work;

  auto add_triple = [&](State q, State p, Sign sign, SaturationRelation::Derivation d) {
    const auto k = SaturationRelation::key(q, p, sign);
    if (rel.index_.count(k)) return;
    const auto id = static_cast<std::uint32_t>(rel.triples_.size());
    rel.index_.emplace(k, id);
    rel.triples_.push_back({q, p, sign});
    rel.triple_from_.push_back(d);
    work.push_back({true, id});
  };
  auto add_item = [&](State q, State y, Stage st, Sign sign, SaturationRelation::Derivation d) {
    const std::uint64_t k = (SaturationRelation::key(q, y, sign) << 2) | st;
    if (item_index.count(k)) return;
    const auto id = static_cast<std::uint32_t>(items.size());
    item_index.emplace(k, id);
    items.push_back({q, y, st, sign});
    rel.item_from_.push_back(d);
    work.push_back({false, id});
  };

  for (std::size_t e = 0; e < a.edges().size(); ++e) {
    const Edge& ed = a.edges()[e];
    const auto eid = static_cast<std::uint32_t>(e);
    switch (ed.label) {
      case EdgeLabel::epsilon: add_triple(ed.from, ed.to, ed.weight, {Rule::base_edge, eid, 0}); break;
      case EdgeLabel::s: add_item(ed.from, ed.to, s1, ed.weight, {Rule::seed, eid, 0}); break;
      case EdgeLabel::r: add_item(ed.from, ed.to, r1, ed.weight, {Rule::seed, eid, 0}); break;
    }
  }

  while (!work.empty()) {
    const Work w = work.front();
    work.pop_front();
    if (w.is_triple) {
      const Triple t = rel.triples_[w.id];
      tri_out[t.from].push_back(w.id);
      tri_in[t.to].push_back(w.id);
      for (std::size_t k = 0, m = tri_out[t.to].size(); k < m; ++k) {
        const std::uint32_t o = tri_out[t.to][k];
        const Triple& u = rel.triples_[o];
        add_triple(t.from, u.to, t.sign * u.sign, {Rule::compose, w.id, o});
      }
      for (std::size_t k = 0, m = tri_in[t.from].size(); k < m; ++k) {
        const std::uint32_t o = tri_in[t.from][k];
        if (o == w.id) continue;
        const Triple& u = rel.triples_[o];
        add_triple(u.from, t.to, u.sign * t.sign, {Rule::compose, o, w.id});
      }
      for (std::size_t k = 0, m = items_at[t.from].size(); k < m; ++k) {
        const std::uint32_t o = items_at[t.from][k];
        const Item it = items[o];
        add_item(it.from, t.to, it.stage, it.sign * t.sign, {Rule::extend, o, w.id});
      }
    } else {
      const Item it = items[w.id];
      items_at[it.end].push_back(w.id);
      for (std::size_t k = 0, m = tri_out[it.end].size(); k < m; ++k) {
        const std::uint32_t o = tri_out[it.end][k];
        const Triple& u = rel.triples_[o];
        add_item(it.from, u.to, it.stage, it.sign * u.sign, {Rule::extend, w.id, o});
      }
      if (it.stage == s1) {
        for (std::uint32_t e : out_s[it.end]) {
          const Edge& ed = a.edges()[e];
          add_triple(it.from, ed.to, -(it.sign * ed.weight), {Rule::close, w.id, e});
        }
      } else if (it.stage == r1) {
        for (std::uint32_t e : out_r[it.end]) {
          const Edge& ed = a.edges()[e];
          add_item(it.from, ed.to, r2, it.sign * ed.weight, {Rule::advance, w.id, e});
        }
      } else {
        for (std::uint32_t e : out_r[it.end]) {
          const Edge& ed = a.edges()[e];
          add_triple(it.from, ed.to, -(it.sign * ed.weight), {Rule::close, w.id, e});
        }
      }
    }
  }
  return rel;
}

/// The relation is closed under composition, so this is a lookup.
inline bool trivial_path_exists(const CancellationAutomaton&, const SaturationRelation& sat, State from,
                                State to, Sign sign) {
  return sat.contains(from, to, sign);
}

struct ChainStep {
  ChainRole role;
  std::size_t generator;
};

struct PathWitness {
  std::vector<std::size_t> edges;
  std::vector<ChainStep> chains;  // one entry per chain entered, in path order
};

/// Signed product of the letters along an edge path.
inline SignedWord path_word(const CancellationAutomaton& a, const std::vector<std::size_t>& edges) {
  std::string raw;
  Sign sign = Sign::plus;
  for (std::size_t e : edges) {
    const Edge& ed = a.edge(e);
    sign = sign * ed.weight;
    if (ed.label != EdgeLabel::epsilon) raw.push_back(static_cast<char>(ed.label));
  }
  return reduce(raw, sign);
}

/// Reconstructs the recorded path for (from, to, sign) and re-checks that its
/// word reduces to (sign, "").
inline PathWitness extract_witness(const CancellationAutomaton& a, const SaturationRelation& sat, State from,
                                   State to, Sign sign) {
  const auto id = sat.find(from, to, sign);
  if (!id) throw std::invalid_argument("no trivial path for the requested triple");
  PathWitness w;
  w.edges = sat.edge_path(*id);
  if (w.edges.empty() || a.edge(w.edges.front()).from != from || a.edge(w.edges.back()).to != to) {
    throw std::logic_error("witness path has wrong endpoints");
  }
  for (std::size_t k = 0; k < w.edges.size(); ++k) {
    const Edge& ed = a.edge(w.edges[k]);
    if (k + 1 < w.edges.size() && ed.to != a.edge(w.edges[k + 1]).from) {
      throw std::logic_error("witness path is not connected");
    }
    if (ed.tag.role != ChainRole::none && ed.tag.position == 0) {
      w.chains.push_back({ed.tag.role, ed.tag.generator});
    }
  }
  if (path_word(a, w.edges) != SignedWord{sign, ""}) {
    throw std::logic_error("witness path does not reduce to the claimed sign");
  }
  return w;
}

inline IndexSequence generator_sequence(const PathWitness& w) {
  IndexSequence seq;
  for (const ChainStep& c : w.chains) seq.push_back(c.generator);
  return seq;
}

struct EpsilonCycle {
  std::vector<State> states;  // q1 -> ... -> q1
  Sign sign;
};

/// A cycle made only of saturated epsilon-transitions.  The relation is
/// transitively closed, so a cycle exists iff some (q, q, sign) is present;
/// the earliest derived one is returned.
inline std::optional<EpsilonCycle> epsilon_cycle(const CancellationAutomaton&, const SaturationRelation& sat) {
  for (const Triple& t : sat.triples()) {
    if (t.from == t.to) return EpsilonCycle{{t.from, t.from}, t.sign};
  }
  return std::nullopt;
}

}  // namespace sl2z
