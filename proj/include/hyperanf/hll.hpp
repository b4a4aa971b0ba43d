#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperanf/broadword.hpp"
#include "hyperanf/errors.hpp"
#include "hyperanf/hash.hpp"

// Packed HyperLogLog counter arrays. Each counter is m = 2^b registers of r
// bits, packed back to back and padded to a whole number of 64-bit words so
// that every counter starts word-aligned. Merging two counters is a
// register-wise max, done word-parallel through PackedMax.

namespace hyperanf {

// Bias-correction constant; defined for m >= 16.
inline double alpha_for_registers(unsigned m) {
  switch (m) {
    case 16: return 0.673;
    case 32: return 0.697;
    case 64: return 0.709;
    default: return 0.7213 / (1.0 + 1.079 / static_cast<double>(m));
  }
}

struct SketchParams {
  unsigned bucket_bits = 7;    // b
  unsigned registers = 128;    // m = 2^b
  unsigned register_bits = 5;  // r
  double alpha = 0.0;
  std::uint64_t seed = 0;

  static SketchParams make(unsigned bucket_bits, std::uint64_t seed,
                           unsigned register_bits = 5) {
    if (bucket_bits < 4 || bucket_bits > 20)
      throw std::invalid_argument("bucket bits must be in [4, 20]");
    if (register_bits < 5 || register_bits > 8)
      throw std::invalid_argument("register width must be in [5, 8]");
    SketchParams p;
    p.bucket_bits = bucket_bits;
    p.registers = 1u << bucket_bits;
    p.register_bits = register_bits;
    p.alpha = alpha_for_registers(p.registers);
    p.seed = seed;
    return p;
  }

  unsigned words_per_counter() const noexcept {
    return (registers * register_bits + 63) / 64;
  }
  unsigned max_register_value() const noexcept {
    return (1u << register_bits) - 1;
  }
  bool layout_equals(const SketchParams& o) const noexcept {
    return bucket_bits == o.bucket_bits && register_bits == o.register_bits;
  }
  friend bool operator==(const SketchParams& a, const SketchParams& b) noexcept {
    return a.layout_equals(b) && a.seed == b.seed;
  }
};

using RegisterView = std::span<std::uint64_t>;
using ConstRegisterView = std::span<const std::uint64_t>;

inline unsigned read_register(ConstRegisterView counter, const SketchParams& p,
                              unsigned j) noexcept {
  const std::uint64_t bit = std::uint64_t(j) * p.register_bits;
  const std::uint64_t word = bit >> 6;
  const unsigned off = static_cast<unsigned>(bit & 63);
  std::uint64_t v = counter[word] >> off;
  if (off + p.register_bits > 64) v |= counter[word + 1] << (64 - off);
  return static_cast<unsigned>(v) & p.max_register_value();
}

inline void write_register(RegisterView counter, const SketchParams& p,
                           unsigned j, unsigned value) noexcept {
  const std::uint64_t mask = p.max_register_value();
  const std::uint64_t bit = std::uint64_t(j) * p.register_bits;
  const std::uint64_t word = bit >> 6;
  const unsigned off = static_cast<unsigned>(bit & 63);
  counter[word] = (counter[word] & ~(mask << off)) |
                  (std::uint64_t(value & mask) << off);
  if (off + p.register_bits > 64) {
    const unsigned spill = off + p.register_bits - 64;
    const std::uint64_t hi_mask = (1ULL << spill) - 1;
    counter[word + 1] = (counter[word + 1] & ~hi_mask) |
                        (std::uint64_t(value & mask) >> (64 - off));
  }
}

// Feeds one item: bucket from the top b hash bits, rho+ of the remaining
// 64-b bits (clamped to the register range), register updated by max.
// Returns true iff the register strictly increased.
inline bool counter_add(RegisterView counter, const SketchParams& p,
                        std::uint64_t item) noexcept {
  const std::uint64_t h = item_hash(item, p.seed);
  const unsigned bucket = static_cast<unsigned>(h >> (64 - p.bucket_bits));
  const std::uint64_t rest = h << p.bucket_bits;
  unsigned v = rest == 0
                   ? (64 - p.bucket_bits) + 1
                   : static_cast<unsigned>(std::countl_zero(rest)) + 1;
  v = std::min(v, p.max_register_value());
  const unsigned cur = read_register(counter, p, bucket);
  if (v <= cur) return false;
  write_register(counter, p, bucket, v);
  return true;
}

// Cardinality estimate: alpha_m * m^2 / sum_j 2^-M[j], with the usual
// linear-counting correction for the small range. An all-zero counter
// estimates exactly 0.
inline double counter_estimate(ConstRegisterView counter,
                               const SketchParams& p) noexcept {
  static const std::array<double, 256> pow2neg = [] {
    std::array<double, 256> t{};
    for (int i = 0; i < 256; ++i) t[i] = std::ldexp(1.0, -i);
    return t;
  }();
  double harmonic = 0.0;
  unsigned zeros = 0;
  for (unsigned j = 0; j < p.registers; ++j) {
    const unsigned reg = read_register(counter, p, j);
    harmonic += pow2neg[reg];
    zeros += reg == 0;
  }
  const double m = static_cast<double>(p.registers);
  const double raw = p.alpha * m * m / harmonic;
  if (raw <= 2.5 * m && zeros > 0)
    return m * std::log(m / static_cast<double>(zeros));
  return raw;
}

// Reference union: extract every register, take the integer max, repack.
inline bool naive_counter_union(RegisterView dst, ConstRegisterView src,
                                const SketchParams& p) noexcept {
  bool changed = false;
  for (unsigned j = 0; j < p.registers; ++j) {
    const unsigned a = read_register(dst, p, j);
    const unsigned b = read_register(src, p, j);
    if (b > a) {
      write_register(dst, p, j, b);
      changed = true;
    }
  }
  return changed;
}

namespace detail {
struct UnionScratch {
  unsigned register_bits = 0;
  unsigned registers = 0;
  std::optional<PackedMax> kernel;
  std::vector<std::uint64_t> words;
};
}  // namespace detail

// Broadword union: dst <- register-wise max(dst, src). Both views must use
// the same params. Returns true iff dst changed.
inline bool counter_union(RegisterView dst, ConstRegisterView src,
                          const SketchParams& p) {
  static thread_local detail::UnionScratch scratch;
  if (scratch.register_bits != p.register_bits ||
      scratch.registers != p.registers) {
    scratch.kernel.emplace(p.register_bits, p.registers);
    scratch.words.resize(scratch.kernel->words());
    scratch.register_bits = p.register_bits;
    scratch.registers = p.registers;
  }
  return scratch.kernel->max_into(dst.data(), src.data(), scratch.words.data());
}

// n packed counters, word-aligned, W_c = words_per_counter() words each.
class CounterArray {
 public:
  CounterArray() = default;

  CounterArray(const SketchParams& params, std::uint64_t counters)
      : params_(params),
        n_(counters),
        words_(static_cast<std::size_t>(counters) * params.words_per_counter(),
               0) {}

  const SketchParams& params() const noexcept { return params_; }
  std::uint64_t size() const noexcept { return n_; }

  RegisterView counter(std::uint64_t i) {
    check_index(i);
    const unsigned w = params_.words_per_counter();
    return {words_.data() + i * w, w};
  }
  ConstRegisterView counter(std::uint64_t i) const {
    check_index(i);
    const unsigned w = params_.words_per_counter();
    return {words_.data() + i * w, w};
  }

  bool add(std::uint64_t i, std::uint64_t item) {
    return counter_add(counter(i), params_, item);
  }
  double estimate(std::uint64_t i) const {
    return counter_estimate(counter(i), params_);
  }
  // Union with params check; merging across different layouts or hash
  // seeds is meaningless.
  bool merge_from(const CounterArray& src, std::uint64_t dst_index,
                  std::uint64_t src_index) {
    if (!(params_ == src.params_))
      throw std::invalid_argument("counter union: mismatched params");
    return counter_union(counter(dst_index), src.counter(src_index), params_);
  }

  void clear() { std::fill(words_.begin(), words_.end(), 0); }

  std::uint64_t* data() noexcept { return words_.data(); }
  const std::uint64_t* data() const noexcept { return words_.data(); }
  std::size_t word_count() const noexcept { return words_.size(); }

  friend bool operator==(const CounterArray& a, const CounterArray& b) {
    return a.params_ == b.params_ && a.n_ == b.n_ && a.words_ == b.words_;
  }

 private:
  void check_index(std::uint64_t i) const {
    if (i >= n_) throw std::out_of_range("counter index out of range");
  }

  SketchParams params_;
  std::uint64_t n_ = 0;
  std::vector<std::uint64_t> words_;
};

// --- Snapshot format (debugging / tests) ---------------------------------
// "HCA1" magic, then little-endian: u32 b, u32 r, u64 n, u64 seed, followed
// by n * W_c raw words. See docs/FORMATS.md.

namespace detail {

inline void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}
inline void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}
inline std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  in.read(reinterpret_cast<char*>(b), 4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(b[i]) << (8 * i);
  return v;
}
inline std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= std::uint64_t(b[i]) << (8 * i);
  return v;
}

}  // namespace detail

inline void save_counters(const CounterArray& arr, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write("HCA1", 4);
  detail::put_u32(out, arr.params().bucket_bits);
  detail::put_u32(out, arr.params().register_bits);
  detail::put_u64(out, arr.size());
  detail::put_u64(out, arr.params().seed);
  for (std::size_t i = 0; i < arr.word_count(); ++i)
    detail::put_u64(out, arr.data()[i]);
  if (!out) throw IoError("write failed: " + path);
}

inline CounterArray load_counters(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "HCA1", 4) != 0)
    throw ParseError(path + ": bad counter snapshot magic");
  const std::uint32_t b = detail::get_u32(in);
  const std::uint32_t r = detail::get_u32(in);
  const std::uint64_t n = detail::get_u64(in);
  const std::uint64_t seed = detail::get_u64(in);
  if (!in) throw ParseError(path + ": truncated header");
  CounterArray arr(SketchParams::make(b, seed, r), n);
  for (std::size_t i = 0; i < arr.word_count(); ++i)
    arr.data()[i] = detail::get_u64(in);
  if (!in) throw ParseError(path + ": truncated counter data");
  return arr;
}

}  // namespace hyperanf
