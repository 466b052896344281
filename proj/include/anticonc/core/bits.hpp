#pragma once

#include <bit>
#include <cassert>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include <gmpxx.h>

namespace anticonc {

/// Fixed-width bitmask over at most 128 elements (vertices or variables).
using Mask = unsigned __int128;

inline constexpr int kMaxVertices = 128;

constexpr Mask bit(int i) { return Mask{1} << i; }

constexpr int popcount(Mask m) {
  return std::popcount(static_cast<std::uint64_t>(m)) +
         std::popcount(static_cast<std::uint64_t>(m >> 64));
}

/// Index of the lowest set bit; undefined for m == 0.
constexpr int lowest_bit(Mask m) {
  auto lo = static_cast<std::uint64_t>(m);
  if (lo != 0) return std::countr_zero(lo);
  return 64 + std::countr_zero(static_cast<std::uint64_t>(m >> 64));
}

constexpr Mask low_mask(int n) { return n >= 128 ? ~Mask{0} : bit(n) - 1; }

constexpr bool is_subset(Mask a, Mask b) { return (a & ~b) == 0; }

template <class F>
constexpr void for_each_bit(Mask m, F&& f) {
  while (m != 0) {
    int i = lowest_bit(m);
    f(i);
    m &= m - 1;
  }
}

inline std::vector<int> bits_of(Mask m) {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(popcount(m)));
  for_each_bit(m, [&](int i) { out.push_back(i); });
  return out;
}

inline Mask mask_of(const std::vector<int>& elems) {
  Mask m = 0;
  for (int e : elems) m |= bit(e);
  return m;
}

/// Next mask with the same popcount in colex order (Gosper's hack). Returns 0
/// when the successor would overflow 128 bits.
constexpr Mask next_colex(Mask x) {
  Mask smallest = x & (~x + 1);
  Mask ripple = x + smallest;
  if (ripple == 0) return 0;
  Mask ones = x ^ ripple;
  ones = (ones >> 2) >> lowest_bit(smallest);
  return ripple | ones;
}

struct MaskHash {
  std::size_t operator()(Mask m) const noexcept {
    auto lo = static_cast<std::uint64_t>(m);
    auto hi = static_cast<std::uint64_t>(m >> 64);
    std::uint64_t h = lo * 0x9E3779B97F4A7C15ULL ^ (hi + 0x632BE59BD9B4E019ULL + (lo << 6) + (lo >> 2));
    h ^= h >> 31;
    return static_cast<std::size_t>(h * 0xBF58476D1CE4E5B9ULL);
  }
};

/// Monomial order: by degree, then by colex value of the index set.
struct GradedOrder {
  bool operator()(Mask a, Mask b) const {
    int da = popcount(a), db = popcount(b);
    if (da != db) return da < db;
    return a < b;
  }
};

/// A subset of the vertex set [n] stored as a bitmask.
class VertexSet {
 public:
  constexpr VertexSet() = default;
  constexpr explicit VertexSet(Mask bits) : bits_(bits) {}

  static VertexSet of(std::initializer_list<int> vs) {
    Mask m = 0;
    for (int v : vs) m |= bit(v);
    return VertexSet(m);
  }
  static constexpr VertexSet range(int n) { return VertexSet(low_mask(n)); }

  constexpr Mask bits() const { return bits_; }
  constexpr int size() const { return popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(int v) const { return (bits_ >> v) & 1; }
  constexpr void insert(int v) { bits_ |= bit(v); }
  constexpr void erase(int v) { bits_ &= ~bit(v); }
  constexpr bool subset_of(VertexSet o) const { return is_subset(bits_, o.bits_); }
  constexpr bool disjoint(VertexSet o) const { return (bits_ & o.bits_) == 0; }
  std::vector<int> elements() const { return bits_of(bits_); }

  friend constexpr bool operator==(VertexSet, VertexSet) = default;
  friend constexpr VertexSet operator|(VertexSet a, VertexSet b) { return VertexSet(a.bits_ | b.bits_); }
  friend constexpr VertexSet operator&(VertexSet a, VertexSet b) { return VertexSet(a.bits_ & b.bits_); }

 private:
  Mask bits_ = 0;
};

// ---------------------------------------------------------------------------
// Binomial coefficients
// ---------------------------------------------------------------------------

/// Exact C(n, k) as a big integer.
inline mpz_class binomial(long n, long k) {
  if (k < 0 || n < 0 || k > n) return 0;
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return out;
}

/// C(n, k) saturating at UINT64_MAX.
inline std::uint64_t binomial_u64(int n, int k) {
  mpz_class b = binomial(n, k);
  if (!b.fits_ulong_p()) return UINT64_MAX;
  return b.get_ui();
}

/// Table of C(i, j) for 0 <= i, j <= N as saturating u64 (colex ranking).
class BinomialTable {
 public:
  explicit BinomialTable(int n_max) : n_(n_max + 1), table_(static_cast<std::size_t>(n_ * n_), 0) {
    for (int i = 0; i < n_; ++i) {
      at(i, 0) = 1;
      for (int j = 1; j <= i; ++j) {
        std::uint64_t a = at(i - 1, j - 1), b = (j <= i - 1) ? at(i - 1, j) : 0;
        at(i, j) = (a > UINT64_MAX - b) ? UINT64_MAX : a + b;
      }
    }
  }
  std::uint64_t operator()(int i, int j) const {
    if (i < 0 || j < 0 || j > i) return 0;
    return table_[static_cast<std::size_t>(i * n_ + j)];
  }

 private:
  std::uint64_t& at(int i, int j) { return table_[static_cast<std::size_t>(i * n_ + j)]; }
  int n_;
  std::vector<std::uint64_t> table_;
};

/// The k-subset with the given colex rank (combinatorial number system).
inline Mask colex_unrank(std::uint64_t rank, int k, const BinomialTable& C) {
  Mask out = 0;
  for (int i = k; i >= 1; --i) {
    int c = i - 1;
    while (C(c + 1, i) <= rank) ++c;
    rank -= C(c, i);
    out |= bit(c);
  }
  return out;
}

inline std::uint64_t colex_rank(Mask set, const BinomialTable& C) {
  std::uint64_t rank = 0;
  int i = 1;
  for_each_bit(set, [&](int c) { rank += C(c, i++); });
  return rank;
}

/// Visit every k-subset of [n] in colex order.
template <class F>
void for_each_k_subset(int n, int k, F&& f) {
  if (k < 0 || k > n) return;
  if (k == 0) {
    f(Mask{0});
    return;
  }
  const Mask outside = ~low_mask(n);
  for (Mask s = low_mask(k); s != 0 && (s & outside) == 0; s = next_colex(s)) f(s);
}

}  // namespace anticonc
