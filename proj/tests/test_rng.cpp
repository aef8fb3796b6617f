#include <doctest.h>

#include "dlnlda/rng.hpp"

using dlnlda::Xoshiro256;

// Reference values from an independent Python implementation of the same
// published algorithms; splitmix64(0) matches the value in Vigna's reference.

TEST_CASE("splitmix64 first output from state 0") {
  std::uint64_t state = 0;
  CHECK(dlnlda::splitmix64(state) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("xoshiro256** stream for seed 8086") {
  Xoshiro256 rng(8086);
  CHECK(rng.next() == 0xbb0591f3fb90a483ULL);
  CHECK(rng.next() == 0x1915cf16cdfb3f9bULL);
  CHECK(rng.next() == 0x478f23b332503a7eULL);
}

TEST_CASE("jump splits off a different stream") {
  Xoshiro256 rng(8086);
  rng.jump();
  CHECK(rng.next() == 0x00a028698aa25f62ULL);
  CHECK(rng.next() == 0xde18b5aae541d62cULL);
}

TEST_CASE("uniform uses the top 53 bits") {
  Xoshiro256 rng(0);
  CHECK(rng.uniform() == 0.6012629994179048);
  Xoshiro256 a(1), b(1);
  for (int i = 0; i < 1000; ++i) {
    const double u = a.uniform(0.4, 0.6);
    CHECK(u >= 0.4);
    CHECK(u < 0.6);
    CHECK(u == 0.4 + (0.6 - 0.4) * b.uniform());
  }
}
