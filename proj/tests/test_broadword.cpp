#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <vector>

#include "hyperanf/broadword.hpp"
#include "hyperanf/hash.hpp"

using namespace hyperanf;

namespace {

// Reference per-lane max: extract, compare, repack.
std::uint64_t lanewise_max(std::uint64_t x, std::uint64_t y, unsigned k) {
  std::uint64_t out = 0;
  const std::uint64_t mask = k == 64 ? ~0ULL : (1ULL << k) - 1;
  for (unsigned i = 0; i < 64; i += k) {
    const std::uint64_t a = (x >> i) & mask;
    const std::uint64_t b = (y >> i) & mask;
    out |= std::max(a, b) << i;
  }
  return out;
}

}  // namespace

TEST_CASE("lane constants") {
  CHECK(lane_high_bits(8) == 0x8080808080808080ULL);
  CHECK(lane_low_bits(8) == 0x0101010101010101ULL);
  CHECK(lane_low_bits(4) == 0x1111111111111111ULL);
  CHECK(lane_high_bits(32) == 0x8000000080000000ULL);
}

TEST_CASE("rho_plus") {
  CHECK(rho_plus(0b00101, 5) == 3);
  CHECK(rho_plus(1ULL << 62, 63) == 1);
  CHECK(rho_plus(0, 56) == 57);
  CHECK(rho_plus(0, 64) == 65);
  CHECK(rho_plus(1, 7) == 7);
  CHECK(rho_plus(~0ULL, 64) == 1);
}

TEST_CASE("word_max_per_block per-byte example") {
  const std::uint64_t x = 0x00FF;
  const std::uint64_t y = 0xFF00;
  CHECK(word_max_per_block(x, y, 8) == 0xFFFF);
  CHECK(word_max_per_block(x, x, 8) == x);
}

TEST_CASE("word_max_per_block matches reference on random words") {
  SplitMix64 rng(7);
  for (unsigned k : {2u, 4u, 8u, 16u, 32u}) {
    for (int i = 0; i < 20000; ++i) {
      const std::uint64_t x = rng.next();
      const std::uint64_t y = rng.next();
      CAPTURE(k, x, y);
      REQUIRE(word_max_per_block(x, y, k) == lanewise_max(x, y, k));
    }
  }
}

TEST_CASE("word_max_per_block edge patterns") {
  for (unsigned k : {4u, 8u}) {
    const std::uint64_t hi = lane_high_bits(k);
    const std::uint64_t lo = lane_low_bits(k);
    const std::uint64_t patterns[] = {0, ~0ULL, hi, lo, hi | lo};
    for (std::uint64_t x : patterns) {
      for (std::uint64_t y : patterns) {
        CHECK(word_max_per_block(x, y, k) == lanewise_max(x, y, k));
      }
    }
  }
}

TEST_CASE("PackedMax agrees with register extraction across word straddles") {
  // 5-bit registers: word boundaries are straddled every 64/5 registers.
  for (unsigned r : {5u, 6u, 7u}) {
    const std::uint64_t count = 40;  // spans > 3 words for all r
    PackedMax kernel(r, count);
    const unsigned words = kernel.words();
    const std::uint64_t reg_mask = (1ULL << r) - 1;
    SplitMix64 rng(11 + r);

    auto get = [&](const std::vector<std::uint64_t>& w, std::uint64_t j) {
      const std::uint64_t bit = j * r;
      std::uint64_t v = w[bit >> 6] >> (bit & 63);
      if ((bit & 63) + r > 64) v |= w[(bit >> 6) + 1] << (64 - (bit & 63));
      return v & reg_mask;
    };
    auto randomise = [&](std::vector<std::uint64_t>& w) {
      std::fill(w.begin(), w.end(), 0);
      for (std::uint64_t j = 0; j < count; ++j) {
        const std::uint64_t v = rng.next_below(reg_mask + 1);
        const std::uint64_t bit = j * r;
        w[bit >> 6] |= v << (bit & 63);
        if ((bit & 63) + r > 64) w[(bit >> 6) + 1] |= v >> (64 - (bit & 63));
      }
    };

    std::vector<std::uint64_t> x(words), y(words), scratch(words);
    for (int rep = 0; rep < 4000; ++rep) {
      randomise(x);
      randomise(y);
      std::vector<std::uint64_t> expect(words, 0);
      bool expect_changed = false;
      for (std::uint64_t j = 0; j < count; ++j) {
        const std::uint64_t m = std::max(get(x, j), get(y, j));
        expect_changed |= m != get(x, j);
        const std::uint64_t bit = j * r;
        expect[bit >> 6] |= m << (bit & 63);
        if ((bit & 63) + r > 64) expect[(bit >> 6) + 1] |= m >> (64 - (bit & 63));
      }
      std::vector<std::uint64_t> dst = x;
      const bool changed = kernel.max_into(dst.data(), y.data(), scratch.data());
      REQUIRE(dst == expect);
      REQUIRE(changed == expect_changed);
    }
  }
}

TEST_CASE("PackedMax keeps padding bits zero") {
  // 13 registers of 5 bits: 65 bits used of 2 words, 63 padding bits.
  PackedMax kernel(5, 13);
  REQUIRE(kernel.words() == 2);
  SplitMix64 rng(3);
  std::vector<std::uint64_t> x(2), y(2), scratch(2);
  const std::uint64_t pad_mask_hi = ~1ULL;  // word 1 uses only bit 0
  for (int rep = 0; rep < 2000; ++rep) {
    x = {rng.next(), rng.next() & 1};
    y = {rng.next(), rng.next() & 1};
    kernel.max_into(x.data(), y.data(), scratch.data());
    REQUIRE((x[1] & pad_mask_hi) == 0);
  }
}
