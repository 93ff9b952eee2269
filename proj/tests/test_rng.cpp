#include <doctest.h>

#include <cmath>
#include <set>

#include "courtprior/rng.hpp"

using courtprior::RngStream;

TEST_SUITE("rng") {

TEST_CASE("same seed and path give identical sequences") {
  RngStream a = RngStream(42).child("image").child(uint64_t{7});
  RngStream b = RngStream(42).child("image").child(uint64_t{7});
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("different paths diverge") {
  RngStream root(42);
  RngStream a = root.child("paste");
  RngStream b = root.child("curve");
  int same = 0;
  for (int i = 0; i < 64; ++i)
    if (a.next_u64() == b.next_u64()) ++same;
  CHECK(same == 0);
}

TEST_CASE("child derivation ignores parent consumption") {
  RngStream a(7);
  RngStream b(7);
  (void)a.next_u64();
  (void)a.next_u64();
  RngStream ca = a.child("x");
  RngStream cb = b.child("x");
  CHECK(ca.next_u64() == cb.next_u64());
}

TEST_CASE("uniform_int stays in range and hits all values") {
  RngStream r(1);
  std::set<int64_t> seen;
  for (int i = 0; i < 1000; ++i) {
    const int64_t v = r.uniform_int(3, 7);
    CHECK(v >= 3);
    CHECK(v <= 7);
    seen.insert(v);
  }
  CHECK(seen.size() == 5);
}

TEST_CASE("uniform is in [0,1) with plausible mean") {
  RngStream r(99);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / 10000.0 - 0.5) < 0.01);
}

TEST_CASE("bernoulli rate tracks p") {
  RngStream r(5);
  int hits = 0;
  for (int i = 0; i < 10000; ++i)
    if (r.bernoulli(0.3)) ++hits;
  CHECK(hits > 2800);
  CHECK(hits < 3200);
}

} // TEST_SUITE
