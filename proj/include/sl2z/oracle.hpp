#pragma once

// Brute-force ground truth over generator index sequences.
//
// Sequences are ordered by length, then lexicographically.  Counting and
// first-solution search split a sequence into halves and match half-length
// product tables; the collision search streams every sequence once per pass
// with a modular fingerprint and confirms candidates by exact products.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "sl2z/core.hpp"

namespace sl2z {

inline constexpr std::size_t default_oracle_budget = 2'000'000;

class OracleBudgetExceeded : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Numbering of all sequences of length 1..depth over n generators.
class SequenceSpace {
 public:
  SequenceSpace(std::size_t generators, std::size_t depth) : n_(generators), depth_(depth) {
    if (n_ == 0) throw std::invalid_argument("generator set is empty");
    offsets_.push_back(0);  // no sequences of length 0 are numbered
    std::uint64_t layer = 1, total = 0;
    for (std::size_t len = 1; len <= depth_; ++len) {
      if (layer > std::numeric_limits<std::uint64_t>::max() / n_) throw OracleBudgetExceeded("sequence space too large");
      layer *= n_;
      offsets_.push_back(total);
      total += layer;
      layers_.push_back(layer);
    }
    total_ = total;
  }

  std::uint64_t total() const noexcept { return total_; }
  std::uint64_t count_of_length(std::size_t len) const { return layers_.at(len - 1); }
  std::uint64_t offset(std::size_t len) const { return offsets_.at(len); }

  IndexSequence decode(std::uint64_t rank) const {
    std::size_t len = 1;
    while (len < depth_ && rank >= offsets_[len] + layers_[len - 1]) ++len;
    std::uint64_t lex = rank - offsets_[len];
    IndexSequence out(len);
    for (std::size_t k = len; k-- > 0;) {
      out[k] = static_cast<std::size_t>(lex % n_);
      lex /= n_;
    }
    return out;
  }

 private:
  std::size_t n_, depth_;
  std::vector<std::uint64_t> offsets_, layers_;
  std::uint64_t total_ = 0;
};

inline void check_budget(const GeneratorSet& g, std::size_t depth, std::size_t budget) {
  if (depth == 0) throw std::invalid_argument("depth must be at least 1");
  const SequenceSpace space(g.size(), depth);
  if (space.total() > budget) {
    throw OracleBudgetExceeded(std::to_string(space.total()) + " sequences exceed the budget of " +
                               std::to_string(budget));
  }
}

/// Every sequence of length <= depth grouped by its product.
struct ProductTable {
  std::size_t depth = 0;
  std::unordered_map<Mat2, std::vector<IndexSequence>, Mat2Hash> entries;

  std::size_t sequence_count() const {
    std::size_t n = 0;
    for (const auto& [m, seqs] : entries) n += seqs.size();
    return n;
  }
  const std::vector<IndexSequence>* find(const Mat2& m) const {
    auto it = entries.find(m);
    return it == entries.end() ? nullptr : &it->second;
  }
};

inline ProductTable enumerate_products(const GeneratorSet& g, std::size_t depth,
                                       std::size_t budget = default_oracle_budget) {
  check_budget(g, depth, budget);
  ProductTable table;
  table.depth = depth;
  std::vector<std::pair<IndexSequence, Mat2>> layer{{{}, Mat2::identity()}};
  for (std::size_t len = 1; len <= depth; ++len) {
    std::vector<std::pair<IndexSequence, Mat2>> next;
    next.reserve(layer.size() * g.size());
    for (const auto& [seq, m] : layer) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        IndexSequence s = seq;
        s.push_back(i);
        Mat2 p = m * g[i].matrix;
        table.entries[p].push_back(s);
        next.emplace_back(std::move(s), std::move(p));
      }
    }
    layer = std::move(next);
  }
  return table;
}

namespace detail {

/// Products of all sequences of one exact length, in lexicographic order,
/// with per-matrix multiplicity and first occurrence.
struct LengthLayer {
  std::vector<Mat2> products;
  std::unordered_map<Mat2, std::pair<std::uint64_t, std::uint64_t>, Mat2Hash> index;  // count, first lex index
};

inline std::vector<LengthLayer> length_layers(const GeneratorSet& g, std::size_t max_len) {
  std::vector<LengthLayer> out(max_len + 1);
  out[0].products.push_back(Mat2::identity());
  out[0].index.emplace(Mat2::identity(), std::pair<std::uint64_t, std::uint64_t>{1, 0});
  for (std::size_t len = 1; len <= max_len; ++len) {
    auto& layer = out[len];
    layer.products.reserve(out[len - 1].products.size() * g.size());
    for (const Mat2& m : out[len - 1].products) {
      for (std::size_t i = 0; i < g.size(); ++i) layer.products.push_back(m * g[i].matrix);
    }
    for (std::uint64_t k = 0; k < layer.products.size(); ++k) {
      auto [it, inserted] = layer.index.try_emplace(layer.products[k], std::pair<std::uint64_t, std::uint64_t>{0, k});
      ++it->second.first;
    }
  }
  return out;
}

inline IndexSequence lex_sequence(std::uint64_t lex, std::size_t len, std::size_t n) {
  IndexSequence out(len);
  for (std::size_t k = len; k-- > 0;) {
    out[k] = static_cast<std::size_t>(lex % n);
    lex /= n;
  }
  return out;
}

inline std::vector<LengthLayer> half_layers(const GeneratorSet& g, std::size_t depth, std::size_t budget) {
  if (depth == 0) throw std::invalid_argument("depth must be at least 1");
  const std::size_t half = (depth + 1) / 2;
  check_budget(g, half, budget);
  return length_layers(g, half);
}

}  // namespace detail

/// Number of sequences of length 1..depth whose product is m.
inline std::uint64_t oracle_count(const GeneratorSet& g, const Mat2& m, std::size_t depth,
                                  std::size_t budget = default_oracle_budget) {
  const auto layers = detail::half_layers(g, depth, budget);
  std::uint64_t count = 0;
  for (std::size_t len = 1; len <= depth; ++len) {
    const std::size_t left = (len + 1) / 2, right = len - left;
    for (const auto& [u, cu] : layers[left].index) {
      auto it = layers[right].index.find(u.inverse() * m);
      if (it != layers[right].index.end()) count += cu.first * it->second.first;
    }
  }
  return count;
}

/// The first sequence (by length, then lexicographically) with product m.
inline std::optional<IndexSequence> oracle_find(const GeneratorSet& g, const Mat2& m, std::size_t depth,
                                                std::size_t budget = default_oracle_budget) {
  const auto layers = detail::half_layers(g, depth, budget);
  for (std::size_t len = 1; len <= depth; ++len) {
    const std::size_t left = (len + 1) / 2, right = len - left;
    const auto& us = layers[left].products;
    for (std::uint64_t k = 0; k < us.size(); ++k) {
      auto it = layers[right].index.find(us[k].inverse() * m);
      if (it == layers[right].index.end()) continue;
      IndexSequence seq = detail::lex_sequence(k, left, g.size());
      const IndexSequence tail = detail::lex_sequence(it->second.second, right, g.size());
      seq.insert(seq.end(), tail.begin(), tail.end());
      return seq;
    }
  }
  return std::nullopt;
}

inline std::optional<IndexSequence> find_identity(const GeneratorSet& g, std::size_t depth,
                                                  std::size_t budget = default_oracle_budget) {
  return oracle_find(g, Mat2::identity(), depth, budget);
}

// ---------------------------------------------------------------------------
// Collisions
// ---------------------------------------------------------------------------

struct Collision {
  IndexSequence first, second;
};

namespace detail {

inline constexpr std::uint64_t mersenne61 = (std::uint64_t{1} << 61) - 1;

inline std::uint64_t mulmod61(std::uint64_t a, std::uint64_t b) noexcept {
  const unsigned __int128 z = static_cast<unsigned __int128>(a) * b;
  std::uint64_t r = static_cast<std::uint64_t>(z >> 61) + (static_cast<std::uint64_t>(z) & mersenne61);
  if (r >= mersenne61) r -= mersenne61;
  return r;
}

inline std::uint64_t addmod61(std::uint64_t a, std::uint64_t b) noexcept {
  std::uint64_t r = a + b;
  if (r >= mersenne61) r -= mersenne61;
  return r;
}

inline std::uint64_t residue61(const Integer& x) {
  Integer r = x % Integer(mersenne61);
  if (r < 0) r += mersenne61;
  return r.convert_to<std::uint64_t>();
}

struct ModMat {
  std::uint64_t a, b, c, d;
  friend ModMat operator*(const ModMat& x, const ModMat& y) noexcept {
    return {addmod61(mulmod61(x.a, y.a), mulmod61(x.b, y.c)), addmod61(mulmod61(x.a, y.b), mulmod61(x.b, y.d)),
            addmod61(mulmod61(x.c, y.a), mulmod61(x.d, y.c)), addmod61(mulmod61(x.c, y.b), mulmod61(x.d, y.d))};
  }
};

inline std::uint64_t splitmix(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t fingerprint(const ModMat& m) noexcept {
  std::uint64_t h = splitmix(m.a);
  h = splitmix(h ^ m.b);
  h = splitmix(h ^ m.c);
  return splitmix(h ^ m.d);
}

inline constexpr std::size_t collision_pass_capacity = std::size_t{1} << 24;

}  // namespace detail

/// The first repeated product in enumeration order: the earliest sequence
/// whose product already occurred, paired with the first sequence having
/// that product.
inline std::optional<Collision> find_collision(const GeneratorSet& g, std::size_t depth,
                                               std::size_t budget = default_oracle_budget,
                                               std::size_t pass_capacity = detail::collision_pass_capacity) {
  check_budget(g, depth, budget);
  const SequenceSpace space(g.size(), depth);
  const std::size_t n = g.size();
  std::vector<detail::ModMat> gens;
  for (const Generator& x : g) {
    gens.push_back({detail::residue61(x.matrix.a()), detail::residue61(x.matrix.b()),
                    detail::residue61(x.matrix.c()), detail::residue61(x.matrix.d())});
  }
  const std::uint64_t passes = std::max<std::uint64_t>(1, (space.total() + pass_capacity - 1) / pass_capacity);
  std::optional<std::pair<std::uint64_t, std::uint64_t>> best;  // ranks of (first, second)

  struct Entry {
    std::uint64_t hash, rank;
    bool operator<(const Entry& o) const { return hash != o.hash ? hash < o.hash : rank < o.rank; }
  };
  struct Frame {
    detail::ModMat m;
    std::uint64_t lex;
    std::size_t len, next;
  };
  std::vector<Entry> entries;
  for (std::uint64_t pass = 0; pass < passes; ++pass) {
    entries.clear();
    std::vector<Frame> stack{{{1, 0, 0, 1}, 0, 0, 0}};
    while (!stack.empty()) {
      Frame& f = stack.back();
      if (f.len == depth || f.next == n) {
        stack.pop_back();
        continue;
      }
      const std::size_t i = f.next++;
      Frame child{f.m * gens[i], f.lex * n + i, f.len + 1, 0};
      const std::uint64_t h = detail::fingerprint(child.m);
      if (h % passes == pass) entries.push_back({h, space.offset(child.len) + child.lex});
      stack.push_back(child);
    }
    std::sort(entries.begin(), entries.end());
    // Fingerprint groups ordered by their second rank, the earliest possible repeat.
    std::vector<std::pair<std::uint64_t, std::size_t>> groups;  // (second rank, start)
    for (std::size_t k = 0; k < entries.size();) {
      std::size_t e = k + 1;
      while (e < entries.size() && entries[e].hash == entries[k].hash) ++e;
      if (e - k >= 2) groups.push_back({entries[k + 1].rank, k});
      k = e;
    }
    std::sort(groups.begin(), groups.end());
    for (const auto& [second_rank, start] : groups) {
      if (best && best->second <= second_rank) break;
      std::vector<std::pair<Mat2, std::uint64_t>> seen;
      for (std::size_t k = start; k < entries.size() && entries[k].hash == entries[start].hash; ++k) {
        if (best && entries[k].rank >= best->second) break;
        const Mat2 m = g.product(space.decode(entries[k].rank));
        auto hit = std::find_if(seen.begin(), seen.end(), [&](const auto& s) { return s.first == m; });
        if (hit != seen.end()) {
          best = std::pair{hit->second, entries[k].rank};
          break;
        }
        seen.emplace_back(m, entries[k].rank);
      }
    }
  }
  if (!best) return std::nullopt;
  return Collision{space.decode(best->first), space.decode(best->second)};
}

// ---------------------------------------------------------------------------
// Pumping
// ---------------------------------------------------------------------------

/// product(alpha) * product(sigma) * product(gamma) = product(sigma), with
/// alpha and gamma not both empty.  Then product(sigma) has infinitely many
/// factorizations alpha^k sigma gamma^k.
struct PumpingTriple {
  IndexSequence alpha, sigma, gamma;
};

inline bool verify_pumping(const GeneratorSet& g, const PumpingTriple& t) {
  if (t.sigma.empty() || (t.alpha.empty() && t.gamma.empty())) return false;
  for (const auto* seq : {&t.alpha, &t.sigma, &t.gamma}) {
    for (std::size_t i : *seq) {
      if (i >= g.size()) return false;
    }
  }
  const Mat2 s = g.product(t.sigma);
  return g.product(t.alpha) * s * g.product(t.gamma) == s;
}

namespace detail {

inline std::vector<std::pair<IndexSequence, Mat2>> sequences_with_products(const GeneratorSet& g,
                                                                           std::size_t depth, bool with_empty) {
  std::vector<std::pair<IndexSequence, Mat2>> out;
  if (with_empty) out.emplace_back(IndexSequence{}, Mat2::identity());
  std::vector<std::pair<IndexSequence, Mat2>> layer{{{}, Mat2::identity()}};
  for (std::size_t len = 1; len <= depth; ++len) {
    std::vector<std::pair<IndexSequence, Mat2>> next;
    for (const auto& [seq, m] : layer) {
      for (std::size_t i = 0; i < g.size(); ++i) {
        IndexSequence s = seq;
        s.push_back(i);
        next.emplace_back(std::move(s), m * g[i].matrix);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

inline std::optional<PumpingTriple> pump_around(const IndexSequence& sigma, const Mat2& ps,
                                                const std::vector<std::pair<IndexSequence, Mat2>>& gammas,
                                                const ProductTable& alphas) {
  const Mat2 ps_inv = ps.inverse();
  for (const auto& [gamma, pg] : gammas) {
    const Mat2 target = ps * pg.inverse() * ps_inv;
    if (!gamma.empty() && target.is_identity()) return PumpingTriple{{}, sigma, gamma};
    if (const auto* hit = alphas.find(target)) return PumpingTriple{hit->front(), sigma, gamma};
  }
  return std::nullopt;
}

}  // namespace detail

/// First sigma (by length, then lexicographically) admitting a pumping
/// triple with alpha and gamma of length <= depth; gamma is searched in the
/// same order starting from the empty sequence.
inline std::optional<PumpingTriple> find_pumping(const GeneratorSet& g, std::size_t depth,
                                                 std::size_t budget = default_oracle_budget) {
  const auto alphas = enumerate_products(g, depth, budget);
  const auto gammas = detail::sequences_with_products(g, depth, true);
  for (std::size_t k = 1; k < gammas.size(); ++k) {
    if (auto t = detail::pump_around(gammas[k].first, gammas[k].second, gammas, alphas)) return t;
  }
  return std::nullopt;
}

/// Pumping triple around a fixed sigma.
inline std::optional<PumpingTriple> find_pumping_for(const GeneratorSet& g, const IndexSequence& sigma,
                                                     std::size_t depth, std::size_t budget = default_oracle_budget) {
  if (sigma.empty()) throw std::invalid_argument("sigma must be nonempty");
  const auto alphas = enumerate_products(g, depth, budget);
  const auto gammas = detail::sequences_with_products(g, depth, true);
  return detail::pump_around(sigma, g.product(sigma), gammas, alphas);
}

}  // namespace sl2z
