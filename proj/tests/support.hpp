#pragma once

// Shared generators for the test suites.

#include <random>
#include <string>
#include <vector>

#include "sl2z/core.hpp"

namespace test_support {

inline std::string random_sr(std::mt19937_64& rng, std::size_t max_len) {
  const std::size_t len = rng() % (max_len + 1);
  std::string w;
  for (std::size_t i = 0; i < len; ++i) w.push_back(rng() % 2 ? 'r' : 's');
  return w;
}

/// All reduced signed words with word length <= max_len, both signs.
inline std::vector<sl2z::SignedWord> all_reduced_words(std::size_t max_len) {
  std::vector<std::string> layer{""}, all{""};
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::vector<std::string> next;
    for (const std::string& w : layer) {
      for (char ch : {'s', 'r'}) {
        std::string x = w + ch;
        if (sl2z::is_reduced(x)) next.push_back(std::move(x));
      }
    }
    all.insert(all.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  std::vector<sl2z::SignedWord> out;
  for (const std::string& w : all) {
    out.push_back({sl2z::Sign::plus, w});
    out.push_back({sl2z::Sign::minus, w});
  }
  return out;
}

/// Random product of shears T^k, lower shears and swaps by S.
inline sl2z::Mat2 random_sl2(std::mt19937_64& rng, int factors) {
  using sl2z::Mat2;
  Mat2 m = Mat2::identity();
  const int n = 1 + static_cast<int>(rng() % factors);
  for (int i = 0; i < n; ++i) {
    const long k = static_cast<long>(rng() % 41) - 20;
    switch (rng() % 3) {
      case 0: m *= Mat2::shear(k); break;
      case 1: m *= Mat2(1, 0, k, 1); break;
      default: m *= Mat2::S(); break;
    }
  }
  return m;
}

inline sl2z::SignedWord random_reduced(std::mt19937_64& rng, std::size_t max_len) {
  const std::size_t len = rng() % (max_len + 1);
  std::string w;
  while (w.size() < len) {
    std::string x = w + (rng() % 2 ? 'r' : 's');
    if (sl2z::is_reduced(x)) w = std::move(x);
  }
  return {rng() % 2 ? sl2z::Sign::plus : sl2z::Sign::minus, w};
}

}  // namespace test_support
