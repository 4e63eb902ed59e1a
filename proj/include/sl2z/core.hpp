#pragma once

// Exact SL(2,Z) arithmetic and the signed reduced-word normal form over the
// generators S = [[0,-1],[1,0]] and R = [[0,-1],[1,1]].
//
// Every matrix of SL(2,Z) is  (-I)^e * phi(w)  for a unique word w over {s,r}
// that contains neither "ss" nor "rrr".  A SignedWord stores (sign, w).

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sl2z {

using Integer = boost::multiprecision::cpp_int;

enum class Sign : std::int8_t { plus = 1, minus = -1 };

constexpr Sign operator*(Sign x, Sign y) noexcept {
  return x == y ? Sign::plus : Sign::minus;
}
constexpr Sign operator-(Sign x) noexcept {
  return x == Sign::plus ? Sign::minus : Sign::plus;
}
constexpr int to_int(Sign x) noexcept { return static_cast<int>(x); }
inline Sign sign_from_int(int v) {
  if (v == 1) return Sign::plus;
  if (v == -1) return Sign::minus;
  throw std::invalid_argument("sign must be +1 or -1, got " + std::to_string(v));
}
inline const char* to_symbol(Sign x) noexcept { return x == Sign::plus ? "+" : "-"; }

/// Generator indices are 0-based in the library and 1-based in reports.
using IndexSequence = std::vector<std::size_t>;

// ---------------------------------------------------------------------------
// Mat2
// ---------------------------------------------------------------------------

class Mat2 {
 public:
  /// Throws std::invalid_argument unless a*d - b*c == 1.
  Mat2(Integer a, Integer b, Integer c, Integer d)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
    if (a_ * d_ - b_ * c_ != 1) {
      throw std::invalid_argument("determinant must be 1");
    }
  }

  static Mat2 identity() { return Mat2(unchecked, 1, 0, 0, 1); }
  static Mat2 S() { return Mat2(unchecked, 0, -1, 1, 0); }
  static Mat2 R() { return Mat2(unchecked, 0, -1, 1, 1); }
  static Mat2 shear(const Integer& n) { return Mat2(unchecked, 1, n, 0, 1); }

  const Integer& a() const noexcept { return a_; }
  const Integer& b() const noexcept { return b_; }
  const Integer& c() const noexcept { return c_; }
  const Integer& d() const noexcept { return d_; }

  bool is_identity() const { return a_ == 1 && b_ == 0 && c_ == 0 && d_ == 1; }

  Mat2 inverse() const { return Mat2(unchecked, d_, -b_, -c_, a_); }
  Mat2 operator-() const { return Mat2(unchecked, -a_, -b_, -c_, -d_); }

  friend Mat2 operator*(const Mat2& x, const Mat2& y) {
    return Mat2(unchecked, x.a_ * y.a_ + x.b_ * y.c_, x.a_ * y.b_ + x.b_ * y.d_,
                x.c_ * y.a_ + x.d_ * y.c_, x.c_ * y.b_ + x.d_ * y.d_);
  }
  Mat2& operator*=(const Mat2& y) { return *this = *this * y; }

  friend bool operator==(const Mat2& x, const Mat2& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && x.c_ == y.c_ && x.d_ == y.d_;
  }

  std::string to_string() const {
    return "[[" + a_.str() + "," + b_.str() + "],[" + c_.str() + "," + d_.str() + "]]";
  }
  friend std::ostream& operator<<(std::ostream& os, const Mat2& m) {
    return os << m.to_string();
  }

 private:
  struct Unchecked {};
  static constexpr Unchecked unchecked{};
  Mat2(Unchecked, Integer a, Integer b, Integer c, Integer d)
      : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {}

  Integer a_, b_, c_, d_;
};

struct Mat2Hash {
  std::size_t operator()(const Mat2& m) const {
    std::hash<Integer> h;
    std::size_t seed = h(m.a());
    for (const Integer* e : {&m.b(), &m.c(), &m.d()}) {
      seed ^= h(*e) + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
    }
    return seed;
  }
};

// ---------------------------------------------------------------------------
// SignedWord
// ---------------------------------------------------------------------------

struct SignedWord {
  Sign sign = Sign::plus;
  std::string word;  // letters 's' and 'r'

  friend bool operator==(const SignedWord&, const SignedWord&) = default;

  std::string to_string() const {
    return std::string("(") + to_symbol(sign) + ",\"" + word + "\")";
  }
  friend std::ostream& operator<<(std::ostream& os, const SignedWord& x) {
    return os << x.to_string();
  }
};

inline bool is_reduced(std::string_view w) noexcept {
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == 's' && i + 1 < w.size() && w[i + 1] == 's') return false;
    if (w[i] == 'r' && i + 2 < w.size() && w[i + 1] == 'r' && w[i + 2] == 'r') return false;
  }
  return true;
}

/// Deletes "ss" and "rrr" factors to a fixpoint, flipping the sign once per
/// deletion.  The stack discipline yields the unique normal form.
inline SignedWord reduce(std::string_view raw, Sign sign = Sign::plus) {
  std::string out;
  out.reserve(raw.size());
  for (char ch : raw) {
    if (ch != 's' && ch != 'r') {
      throw std::invalid_argument(std::string("letter outside {s,r}: '") + ch + "'");
    }
    out.push_back(ch);
    const std::size_t n = out.size();
    if (ch == 's' && n >= 2 && out[n - 2] == 's') {
      out.resize(n - 2);
      sign = -sign;
    } else if (ch == 'r' && n >= 3 && out[n - 2] == 'r' && out[n - 3] == 'r') {
      out.resize(n - 3);
      sign = -sign;
    }
  }
  return {sign, std::move(out)};
}

inline SignedWord mul(const SignedWord& x, const SignedWord& y) {
  std::string raw;
  raw.reserve(x.word.size() + y.word.size());
  raw += x.word;
  raw += y.word;
  return reduce(raw, x.sign * y.sign);
}

inline SignedWord operator*(const SignedWord& x, const SignedWord& y) { return mul(x, y); }

/// S^-1 = -S and R^-1 = -R^2, so the inverse reverses the word, maps r to rr
/// and flips the sign once per letter.
inline SignedWord inv(const SignedWord& x) {
  std::string raw;
  raw.reserve(2 * x.word.size());
  Sign sign = x.sign;
  for (auto it = x.word.rbegin(); it != x.word.rend(); ++it) {
    raw += (*it == 's') ? "s" : "rr";
    sign = -sign;
  }
  return reduce(raw, sign);
}

inline Mat2 evaluate(std::string_view word, Sign sign = Sign::plus) {
  // Track the product with plain integers; multiplying by S or R on the right
  // only permutes and adds columns.
  Integer a = 1, b = 0, c = 0, d = 1;
  for (char ch : word) {
    if (ch == 's') {
      // [[a,b],[c,d]] * [[0,-1],[1,0]] = [[b,-a],[d,-c]]
      Integer na = b, nc = d;
      b = -a;
      d = -c;
      a = std::move(na);
      c = std::move(nc);
    } else if (ch == 'r') {
      // [[a,b],[c,d]] * [[0,-1],[1,1]] = [[b,b-a],[d,d-c]]
      Integer na = b, nc = d;
      b = b - a;
      d = d - c;
      a = std::move(na);
      c = std::move(nc);
    } else {
      throw std::invalid_argument(std::string("letter outside {s,r}: '") + ch + "'");
    }
  }
  if (sign == Sign::minus) {
    a = -a;
    b = -b;
    c = -c;
    d = -d;
  }
  return Mat2(std::move(a), std::move(b), std::move(c), std::move(d));
}

inline Mat2 evaluate(const SignedWord& x) { return evaluate(x.word, x.sign); }

/// Upper bound on the length of a decomposed word.
inline constexpr std::size_t max_decomposed_length = std::size_t{1} << 26;

namespace detail {

// T = [[1,1],[0,1]] = (-,"sr") and T^-1 = (-,"rrs").
inline void append_shear_power(std::string& raw, Sign& sign, const Integer& q) {
  if (q == 0) return;
  const Integer mag = abs(q);
  if (mag > max_decomposed_length) {
    throw std::length_error("decomposition exceeds the maximum word length");
  }
  const auto n = mag.convert_to<std::size_t>();
  const char* unit = q > 0 ? "sr" : "rrs";
  const std::size_t unit_len = q > 0 ? 2 : 3;
  if (raw.size() + n * unit_len > 4 * max_decomposed_length) {
    throw std::length_error("decomposition exceeds the maximum word length");
  }
  for (std::size_t i = 0; i < n; ++i) raw.append(unit, unit_len);
  if (n % 2 == 1) sign = -sign;
}

// Nearest integer to a/c, ties rounded toward zero.  Requires c != 0.
inline Integer nearest_quotient(const Integer& a, const Integer& c) {
  Integer q = a / c;  // truncates toward zero
  const Integer rem = a - q * c;
  if (2 * abs(rem) > abs(c)) {
    q += ((a < 0) == (c < 0)) ? 1 : -1;
  }
  return q;
}

}  // namespace detail

/// Euclidean decomposition: m = T^q1 S^-1 T^q2 S^-1 ... (+-T^b), then reduce.
inline SignedWord decompose(const Mat2& m) {
  Integer a = m.a(), b = m.b(), c = m.c(), d = m.d();
  std::string raw;
  Sign sign = Sign::plus;
  while (c != 0) {
    const Integer q = detail::nearest_quotient(a, c);
    if (q != 0) {
      a -= q * c;
      b -= q * d;
      detail::append_shear_power(raw, sign, q);
    }
    // current = S^-1 (S current),  S^-1 = (-,"s"),  S [[a,b],[c,d]] = [[-c,-d],[a,b]]
    raw.push_back('s');
    sign = -sign;
    Integer na = -c, nb = -d;
    c = std::move(a);
    d = std::move(b);
    a = std::move(na);
    b = std::move(nb);
  }
  // Now a = d = +-1 and current = a * T^(a*b).
  if (a == -1) sign = -sign;
  detail::append_shear_power(raw, sign, a * b);
  SignedWord out = reduce(raw, sign);
  if (out.word.size() > max_decomposed_length) {
    throw std::length_error("decomposition exceeds the maximum word length");
  }
  return out;
}

// ---------------------------------------------------------------------------
// GeneratorSet
// ---------------------------------------------------------------------------

struct Generator {
  Mat2 matrix;
  SignedWord word;
};

/// Ordered generators.  Generator i carries the marker #(i+1).
class GeneratorSet {
 public:
  GeneratorSet() = default;

  static GeneratorSet from_matrices(std::span<const Mat2> ms) {
    GeneratorSet g;
    for (const Mat2& m : ms) g.add(m);
    return g;
  }
  static GeneratorSet from_words(std::span<const SignedWord> ws) {
    GeneratorSet g;
    for (const SignedWord& w : ws) g.add(w);
    return g;
  }

  void add(const Mat2& m) { gens_.push_back({m, decompose(m)}); }
  void add(const SignedWord& w) {
    SignedWord r = reduce(w.word, w.sign);
    gens_.push_back({evaluate(r), std::move(r)});
  }

  std::size_t size() const noexcept { return gens_.size(); }
  bool empty() const noexcept { return gens_.empty(); }
  const Generator& operator[](std::size_t i) const { return gens_.at(i); }
  auto begin() const noexcept { return gens_.begin(); }
  auto end() const noexcept { return gens_.end(); }

  /// Product M_{i1} M_{i2} ... ; the empty sequence gives I.
  Mat2 product(std::span<const std::size_t> seq) const {
    Mat2 p = Mat2::identity();
    for (std::size_t i : seq) p *= (*this)[i].matrix;
    return p;
  }

  std::size_t total_word_length() const noexcept {
    std::size_t n = 0;
    for (const auto& g : gens_) n += g.word.word.size();
    return n;
  }

 private:
  std::vector<Generator> gens_;
};

inline std::string to_string(std::span<const std::size_t> seq, bool one_based = true) {
  std::string out = "[";
  for (std::size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(seq[i] + (one_based ? 1 : 0));
  }
  return out + "]";
}

}  // namespace sl2z
