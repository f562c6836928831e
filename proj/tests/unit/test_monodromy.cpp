#include <algorithm>

#include <catch_amalgamated.hpp>

#include "takagi/ensemble.hpp"
#include "takagi/fields.hpp"
#include "takagi/monodromy.hpp"

using namespace takagi;

namespace {

SignFlipVector signature(const MatrixField& f, const std::vector<Point>& loop) {
  const auto initial = takagi_svd(f.eval(loop.front().x, loop.front().y));
  return loop_signature(f, loop, initial);
}

std::vector<int> flips(std::initializer_list<int> z) { return z; }

// z with the columns of `pairs` (1-based) and optionally the last column flipped.
std::vector<int> pattern(std::size_t n, const std::vector<int>& pairs, bool rank) {
  std::vector<int> z(n, 1);
  for (int j : pairs) {
    z[j - 1] *= -1;
    z[j] *= -1;
  }
  if (rank) z[n - 1] *= -1;
  return z;
}

}  // namespace

TEST_CASE("scalar x + iy: loops around the origin flip, others do not") {
  const auto f = demo_rankloss_field();
  for (double r : {0.05, 0.5, 0.9}) {
    const auto s = signature(f, circle_loop({0, 0}, r));
    CHECK(s.z == flips({-1}));
    CHECK(s.min_confidence() >= 0.99);
  }
  const auto off = signature(f, circle_loop({0.6, 0.3}, 0.2));
  CHECK(off.z == flips({1}));
  CHECK(off.min_confidence() >= 0.99);
  const auto box = signature(f, box_loop({-0.5, 0.25, -0.1, 0.3}));
  CHECK(box.z == flips({-1}));
}

TEST_CASE("2x2 coalescence field: both columns flip around the origin") {
  const auto f = demo_coalescence_field();
  const auto s = signature(f, circle_loop({0, 0}, 0.5));
  CHECK(s.z == flips({-1, -1}));
  CHECK(s.min_confidence() >= 0.99);
  CHECK(classify_flips(s).kind == EventKind::Coalescence);
  CHECK(classify_flips(s).pair == 1);
  CHECK(signature(f, circle_loop({0.3, 0.3}, 0.1)).z == flips({1, 1}));
}

TEST_CASE("loop orientation does not change the signature") {
  const auto f = demo_coalescence_field();
  auto loop = circle_loop({0.05, -0.02}, 0.4);
  const auto fwd = signature(f, loop);
  std::reverse(loop.begin(), loop.end());
  CHECK(signature(f, loop).z == fwd.z);
}

TEST_CASE("a loop crossing a degeneracy is inconclusive") {
  const auto f = demo_rankloss_field();
  const std::vector<Point> loop{{-0.5, 0.0}, {0.5, 0.0}, {0.5, 0.5}, {-0.5, 0.5}};
  const auto s = signature(f, loop);
  CHECK_FALSE(s.trusted());
  CHECK(classify_flips(s).kind == EventKind::Inconclusive);
}

TEST_CASE("signatures multiply over adjacent boxes") {
  for (std::uint64_t seed = 1; seed <= 4; ++seed) {
    const auto f = make_field(4, seed).as_field(ensemble_domain());
    const Rect left{1.0, 1.8, 0.5, 1.3}, right{1.8, 2.6, 0.5, 1.3}, both{1.0, 2.6, 0.5, 1.3};
    const auto a = signature(f, box_loop(left));
    const auto b = signature(f, box_loop(right));
    const auto ab = signature(f, box_loop(both));
    REQUIRE(a.trusted());
    REQUIRE(b.trusted());
    REQUIRE(ab.trusted());
    for (std::size_t k = 0; k < 4; ++k) CHECK(a.z[k] * b.z[k] == ab.z[k]);
  }
}

TEST_CASE("small loops on a generic field are null") {
  const auto f = make_field(6, 5).as_field(ensemble_domain());
  for (int i = 0; i < 5; ++i) {
    const auto s = signature(f, circle_loop({0.5 + i, 1.0 + 0.3 * i}, 1e-3, 8));
    CHECK(s.z == std::vector<int>(6, 1));
    CHECK(s.trusted());
  }
}

TEST_CASE("classify_flips examples") {
  SignFlipVector s;
  s.confidence = RVector::Ones(4);
  s.z = {1, 1, 1, 1};
  CHECK(classify_flips(s).kind == EventKind::None);
  s.z = {1, 1, 1, -1};
  CHECK(classify_flips(s).kind == EventKind::RankLoss);
  s.z = {1, -1, -1, 1};
  CHECK(classify_flips(s).kind == EventKind::Coalescence);
  CHECK(classify_flips(s).pair == 2);
  s.z = {-1, 1, -1, 1};
  const auto c = classify_flips(s);
  CHECK(c.kind == EventKind::Composite);
  CHECK(c.decoded.pairs == std::vector<int>{1, 2});
  CHECK_FALSE(c.decoded.rankLoss);
  s.reason = InconclusiveReason::LowConfidence;
  CHECK(classify_flips(s).kind == EventKind::Inconclusive);
  CHECK(classify_flips(s).reason == InconclusiveReason::LowConfidence);
}

TEST_CASE("flip decoding inverts every pattern") {
  for (std::size_t n = 1; n <= 6; ++n) {
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
      std::vector<int> pairs;
      for (std::size_t j = 0; j + 1 < n; ++j)
        if (mask & (1u << j)) pairs.push_back(static_cast<int>(j + 1));
      const bool rank = mask & (1u << (n - 1));
      const auto d = decode_flips(pattern(n, pairs, rank));
      CHECK(d.pairs == pairs);
      CHECK(d.rankLoss == rank);
    }
  }
}

TEST_CASE("odd flip counts always decode to a rank loss") {
  CHECK(decode_flips({-1, 1, 1}).rankLoss);
  CHECK(decode_flips({-1, 1, 1}).pairs == std::vector<int>{1, 2});
  CHECK(decode_flips({-1, -1, -1}).rankLoss);
  CHECK_FALSE(decode_flips({-1, 1, -1}).rankLoss);
}

TEST_CASE("translate moves structure by the offset") {
  const auto f = translate(demo_rankloss_field(), 0.3, -0.2);
  CHECK(f.eval(0.3, -0.2)(0, 0) == Complex(0, 0));
  CHECK(signature(f, circle_loop({0.3, -0.2}, 0.1)).z == flips({-1}));
  CHECK(signature(f, circle_loop({0, 0}, 0.1)).z == flips({1}));
}
