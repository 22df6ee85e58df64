#include <set>

#include "doctest.h"
#include "percolab/rng.hpp"

using namespace percolab;

TEST_CASE("philox matches the Random123 known-answer vector") {
  // Counter and key all zero.
  const auto out = philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(out[0] == 0x6627e8d5u);
  CHECK(out[1] == 0xe169c58du);
  CHECK(out[2] == 0xbc57ac4cu);
  CHECK(out[3] == 0x9b00dbd8u);
}

TEST_CASE("keyed uniforms are pure functions of their address") {
  for (std::uint64_t i = 0; i < 100; ++i) {
    const double a = keyed_uniform(7, 3, i);
    CHECK(a == keyed_uniform(7, 3, i));
    CHECK(a >= 0.0);
    CHECK(a < 1.0);
  }
  CHECK(keyed_uniform(7, 3, 1) != keyed_uniform(7, 4, 1));
  CHECK(keyed_uniform(7, 3, 1) != keyed_uniform(8, 3, 1));
}

TEST_CASE("sequential draws replay the counter interface") {
  StreamRng a(11, 2);
  const StreamRng b(11, 2);
  for (std::uint64_t i = 0; i < 10; ++i) CHECK(a.next_bits() == b.bits_at(i));
  CHECK(a.position() == 10);
}

TEST_CASE("uniform mean and spread") {
  StreamRng r(1, 1);
  double s = 0.0, s2 = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.next_uniform();
    s += u;
    s2 += u * u;
  }
  CHECK(s / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(s2 / n - (s / n) * (s / n) == doctest::Approx(1.0 / 12.0).epsilon(0.01));
}

TEST_CASE("pair keys ignore order and separate pairs") {
  CHECK(unordered_pair_key(3, 9) == unordered_pair_key(9, 3));
  std::set<std::uint64_t> keys;
  for (std::uint64_t a = 0; a < 40; ++a)
    for (std::uint64_t b = a; b < 40; ++b) keys.insert(unordered_pair_key(a, b));
  CHECK(keys.size() == 40 * 41 / 2);
  CHECK(hash_string("abc") == hash_string("abc"));
  CHECK(hash_string("abc") != hash_string("abd"));
}
