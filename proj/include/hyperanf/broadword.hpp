#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <vector>

// Broadword (SWAR) primitives: per-lane unsigned comparison and maximum over
// k-bit values packed into 64-bit words, plus the multi-word extension used
// to maximise whole register files whose lanes straddle word boundaries.
//
// The comparison trick is the classic one: with H_k holding the highest bit
// of every k-bit lane and L_k the lowest,
//
//   lt = ((((x | H) - (y & ~H)) | (x ^ y)) ^ (x | ~y)) & H
//
// leaves the high bit of each lane set exactly when the lane of x is
// strictly smaller (unsigned) than the lane of y. Spreading that high bit
// into a full lane mask,
//
//   mask = ((((lt >> (k-1)) | H) - L) | H) ^ lt
//
// gives all-ones for lanes where x must be kept and all-zeros where y wins,
// so the per-lane maximum is (x & mask) | (y & ~mask). Both subtractions
// never borrow across a lane: each minuend lane has its high bit forced.

namespace hyperanf {

// L_k: lowest bit of each k-bit lane set. Requires k to divide 64.
constexpr std::uint64_t lane_low_bits(unsigned k) noexcept {
  std::uint64_t v = 0;
  for (unsigned i = 0; i < 64; i += k) v |= 1ULL << i;
  return v;
}

// H_k: highest bit of each k-bit lane set. Requires k to divide 64.
constexpr std::uint64_t lane_high_bits(unsigned k) noexcept {
  return lane_low_bits(k) << (k - 1);
}

// Number of leading zeroes of the width-bit sequence held in the low bits
// of `bits`, plus one. The all-zero sequence maps to width + 1.
constexpr unsigned rho_plus(std::uint64_t bits, unsigned width) noexcept {
  assert(width >= 1 && width <= 64);
  if (width < 64) bits &= (1ULL << width) - 1;
  if (bits == 0) return width + 1;
  return width - static_cast<unsigned>(std::bit_width(bits)) + 1;
}

// Word whose j-th k-bit lane is max(lane_j(x), lane_j(y)), unsigned.
// k must divide the word size; lanes are aligned.
constexpr std::uint64_t word_max_per_block(std::uint64_t x, std::uint64_t y,
                                           unsigned k) noexcept {
  assert(k >= 2 && 64 % k == 0);
  const std::uint64_t low = lane_low_bits(k);
  const std::uint64_t high = lane_high_bits(k);
  const std::uint64_t lt =
      ((((x | high) - (y & ~high)) | (x ^ y)) ^ (x | ~y)) & high;
  const std::uint64_t mask = ((((lt >> (k - 1)) | high) - low) | high) ^ lt;
  return (x & mask) | (y & ~mask);
}

// Register-wise maximum over a packed register file spanning several words.
//
// The single-word formulas above extend to a register file of `count`
// k-bit registers laid out back to back over ceil(count*k/64) words: the
// subtractions become multi-precision (borrows ripple across words until a
// register's forced high bit absorbs them) and the >> (k-1) becomes a
// cross-word shift. Bits past the last register are treated as padding and
// stay zero provided they are zero on input.
class PackedMax {
 public:
  PackedMax() = default;

  PackedMax(unsigned register_bits, std::uint64_t register_count)
      : k_(register_bits),
        words_(static_cast<unsigned>((register_count * register_bits + 63) / 64)),
        low_(words_, 0),
        high_(words_, 0) {
    assert(k_ >= 2 && k_ <= 62);
    for (std::uint64_t j = 0; j < register_count; ++j) {
      const std::uint64_t lo = j * k_;
      const std::uint64_t hi = lo + k_ - 1;
      low_[lo >> 6] |= 1ULL << (lo & 63);
      high_[hi >> 6] |= 1ULL << (hi & 63);
    }
  }

  unsigned words() const noexcept { return words_; }
  unsigned register_bits() const noexcept { return k_; }

  // dst <- per-register max(dst, src). Returns true iff dst changed.
  // scratch must provide words() slots.
  bool max_into(std::uint64_t* dst, const std::uint64_t* src,
                std::uint64_t* scratch) const noexcept {
    const unsigned w = words_;
    std::uint64_t borrow = 0;
    for (unsigned i = 0; i < w; ++i) {
      const std::uint64_t x = dst[i];
      const std::uint64_t y = src[i];
      const std::uint64_t h = high_[i];
      const std::uint64_t a = x | h;
      const std::uint64_t b = y & ~h;
      const std::uint64_t t = a - b;
      std::uint64_t borrow_out = a < b ? 1u : 0u;
      const std::uint64_t d = t - borrow;
      borrow_out |= d > t ? 1u : 0u;
      borrow = borrow_out;
      scratch[i] = ((d | (x ^ y)) ^ (x | ~y)) & h;
    }
    const unsigned s = k_ - 1;
    bool changed = false;
    borrow = 0;
    for (unsigned i = 0; i < w; ++i) {
      const std::uint64_t lt = scratch[i];
      const std::uint64_t lt_up = i + 1 < w ? scratch[i + 1] : 0;
      const std::uint64_t shifted = (lt >> s) | (lt_up << (64 - s));
      const std::uint64_t a = shifted | high_[i];
      const std::uint64_t t = a - low_[i];
      std::uint64_t borrow_out = a < low_[i] ? 1u : 0u;
      const std::uint64_t d = t - borrow;
      borrow_out |= d > t ? 1u : 0u;
      borrow = borrow_out;
      const std::uint64_t mask = (d | high_[i]) ^ lt;
      const std::uint64_t res = (dst[i] & mask) | (src[i] & ~mask);
      changed |= res != dst[i];
      dst[i] = res;
    }
    return changed;
  }

 private:
  unsigned k_ = 0;
  unsigned words_ = 0;
  std::vector<std::uint64_t> low_, high_;
};

}  // namespace hyperanf
