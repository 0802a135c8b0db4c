#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "mvhull/detect.hpp"
#include "mvhull/eval.hpp"
#include "test_support.hpp"

using namespace mvhull;
using test_support::uniform;
using test_support::uniform_int;

namespace {

GridSpec unit_grid(int ny, int nx) {
  GridSpec g;
  g.origin = {0.0, 0.0, 0.0};
  g.cell_xy = 1.0;
  g.cell_z = 1.0;
  g.nx = nx;
  g.ny = ny;
  g.nz = 1;
  return g;
}

// Exhaustive oracle: enumerate all one-to-one assignments over allowed
// pairs, maximize matches, then minimize total distance.
struct OracleBest {
  int tp = 0;
  double total = 0.0;
};

void enumerate(const std::vector<std::vector<double>>& d, double t, int i,
               std::vector<char>& used, int tp, double total, OracleBest& best) {
  const int n = int(d.size());
  const int m = n ? int(d[0].size()) : 0;
  if (i == n) {
    if (tp > best.tp || (tp == best.tp && total < best.total - 1e-12))
      best = {tp, total};
    return;
  }
  enumerate(d, t, i + 1, used, tp, total, best);  // leave det i unmatched
  for (int j = 0; j < m; ++j)
    if (!used[j] && d[i][j] < t) {
      used[j] = 1;
      enumerate(d, t, i + 1, used, tp + 1, total + d[i][j], best);
      used[j] = 0;
    }
}

OracleBest assignment_oracle(const std::vector<Detection>& dets,
                             const std::vector<Eigen::Vector2d>& gts,
                             double t) {
  std::vector<std::vector<double>> d(dets.size(),
                                     std::vector<double>(gts.size()));
  for (std::size_t i = 0; i < dets.size(); ++i)
    for (std::size_t j = 0; j < gts.size(); ++j)
      d[i][j] = (dets[i].position - gts[j]).norm();
  std::vector<char> used(gts.size(), 0);
  OracleBest best;
  best.total = 1e300;
  if (dets.empty()) return {0, 0.0};
  enumerate(d, t, 0, used, 0, 0.0, best);
  return best;
}

// Brute-force local-max oracle over every cell.
std::vector<std::pair<int, int>> peak_oracle(const BevMap& map, double threshold,
                                             int r) {
  std::vector<std::pair<int, int>> peaks;
  const int ny = map.height(), nx = map.width();
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix) {
      const float v = map.at(0, iy, ix);
      if (v < threshold) continue;
      bool ok = true;
      for (int wy = std::max(0, iy - r); wy <= std::min(ny - 1, iy + r) && ok; ++wy)
        for (int wx = std::max(0, ix - r); wx <= std::min(nx - 1, ix + r); ++wx) {
          const float o = map.at(0, wy, wx);
          if (o > v || (o == v && (long(wy) * nx + wx < long(iy) * nx + ix))) {
            ok = false;
            break;
          }
        }
      if (ok) peaks.emplace_back(iy, ix);
    }
  return peaks;
}

}  // namespace

TEST_CASE("decode_detections basics") {
  const GridSpec g = unit_grid(8, 8);
  BevMap zero(1, 8, 8);
  CHECK(decode_detections(zero, g, 0.4, 1).empty());

  BevMap one(1, 8, 8);
  one.at(0, 3, 5) = 0.9f;
  const auto dets = decode_detections(one, g, 0.4, 1);
  REQUIRE(dets.size() == 1);
  CHECK(dets[0].position == Eigen::Vector2d(5.5, 3.5));
  CHECK(dets[0].score == doctest::Approx(0.9));

  // Two peaks one cell apart with r = 1: only the higher survives.
  BevMap two(1, 8, 8);
  two.at(0, 4, 4) = 0.8f;
  two.at(0, 4, 5) = 0.6f;
  const auto kept = decode_detections(two, g, 0.4, 1);
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].position.x() == doctest::Approx(4.5));

  // Plateau of equal values collapses to the lowest linear index.
  BevMap plateau(1, 8, 8);
  plateau.at(0, 2, 2) = plateau.at(0, 2, 3) = plateau.at(0, 3, 2) = 0.7f;
  const auto single = decode_detections(plateau, g, 0.4, 1);
  REQUIRE(single.size() == 1);
  CHECK(single[0].position == Eigen::Vector2d(2.5, 2.5));
}

TEST_CASE("decode_detections matches the exhaustive window oracle") {
  std::mt19937_64 rng(31337);
  for (int trial = 0; trial < 20; ++trial) {
    const int ny = uniform_int(rng, 3, 16), nx = uniform_int(rng, 3, 16);
    const GridSpec g = unit_grid(ny, nx);
    BevMap map(1, ny, nx);
    for (int iy = 0; iy < ny; ++iy)
      for (int ix = 0; ix < nx; ++ix)
        map.at(0, iy, ix) =
            uniform(rng) < 0.3 ? float(int(uniform(rng) * 8) / 8.0) : 0.0f;
    const int r = uniform_int(rng, 1, 3);
    const double threshold = uniform(rng, 0.1, 0.6);
    const auto dets = decode_detections(map, g, threshold, r);
    const auto expect = peak_oracle(map, threshold, r);
    REQUIRE(dets.size() == expect.size());
    // Compare as position sets.
    std::vector<std::pair<int, int>> got;
    for (const auto& d : dets) {
      got.emplace_back(int(d.position.y() / g.cell_xy),
                       int(d.position.x() / g.cell_xy));
      CHECK(d.score >= threshold);
    }
    std::sort(got.begin(), got.end());
    auto want = expect;
    std::sort(want.begin(), want.end());
    CHECK(got == want);
  }
}

TEST_CASE("decode threshold is monotone in the detection count") {
  std::mt19937_64 rng(99);
  const GridSpec g = unit_grid(12, 12);
  BevMap map(1, 12, 12);
  for (int iy = 0; iy < 12; ++iy)
    for (int ix = 0; ix < 12; ++ix)
      map.at(0, iy, ix) = uniform(rng) < 0.4 ? float(uniform(rng)) : 0.0f;
  std::size_t last = decode_detections(map, g, 0.0, 1).size();
  for (double th : {0.2, 0.4, 0.6, 0.8, 1.0}) {
    const std::size_t now = decode_detections(map, g, th, 1).size();
    CHECK(now <= last);
    last = now;
  }
}

TEST_CASE("decode applies the offset map in cells") {
  const GridSpec g = unit_grid(6, 6);
  BevMap map(1, 6, 6);
  map.at(0, 2, 2) = 1.0f;
  BevMap offsets(2, 6, 6);
  offsets.at(0, 2, 2) = 0.25f;   // +x quarter cell
  offsets.at(1, 2, 2) = -0.5f;   // -y half cell
  const auto dets = decode_detections(map, g, 0.5, 1, &offsets);
  REQUIRE(dets.size() == 1);
  CHECK(dets[0].position.x() == doctest::Approx(2.75));
  CHECK(dets[0].position.y() == doctest::Approx(2.0));
}

TEST_CASE("decode idempotence on its own output") {
  std::mt19937_64 rng(4004);
  const GridSpec g = unit_grid(20, 20);
  BevMap map(1, 20, 20);
  for (int k = 0; k < 6; ++k)
    map.at(0, uniform_int(rng, 0, 19), uniform_int(rng, 0, 19)) =
        0.5f + 0.5f * float(uniform(rng));
  const auto dets = decode_detections(map, g, 0.4, 1);
  BevMap re(1, 20, 20);
  for (const auto& d : dets) {
    const auto cell = world_to_cell(g, {d.position.x(), d.position.y(), 0.5});
    REQUIRE(cell.has_value());
    re.at(0, cell->iy, cell->ix) = 1.0f;
  }
  const auto again = decode_detections(re, g, 0.4, 1);
  REQUIRE(again.size() == dets.size());
  std::vector<std::pair<double, double>> a, b;
  for (const auto& d : dets) a.emplace_back(d.position.x(), d.position.y());
  for (const auto& d : again) b.emplace_back(d.position.x(), d.position.y());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(std::abs(a[i].first - b[i].first) <= g.cell_xy);
    CHECK(std::abs(a[i].second - b[i].second) <= g.cell_xy);
  }
}

TEST_CASE("decode dimension checks") {
  const GridSpec g = unit_grid(6, 6);
  BevMap wrong(1, 5, 6);
  CHECK_THROWS_AS(decode_detections(wrong, g, 0.5, 1), DimensionMismatch);
  BevMap multi(2, 6, 6);
  CHECK_THROWS_AS(decode_detections(multi, g, 0.5, 1), DimensionMismatch);
}

TEST_CASE("match_detections hand cases") {
  std::vector<Detection> dets{{{1.0, 1.0}, 0.9}, {{3.0, 3.0}, 0.8}};
  std::vector<Eigen::Vector2d> gts{{1.0, 1.0}, {3.0, 3.0}};
  const auto perfect = match_detections(dets, gts, 0.5);
  CHECK(perfect.tp == 2);
  CHECK(perfect.fp == 0);
  CHECK(perfect.fn == 0);
  for (const auto& p : perfect.pairs) CHECK(p.distance == doctest::Approx(0.0));

  // One detection 0.6 m away with t = 0.5: a miss and a false alarm.
  const auto miss = match_detections({{{0.6, 0.0}, 1.0}}, {{0.0, 0.0}}, 0.5);
  CHECK(miss.tp == 0);
  CHECK(miss.fp == 1);
  CHECK(miss.fn == 1);

  // Crossing configuration: optimal matching pairs each det with the nearer
  // gt overall; greedy takes the single closest pair first.
  std::vector<Detection> cross{{{0.0, 0.0}, 1.0}, {{1.0, 0.0}, 1.0}};
  std::vector<Eigen::Vector2d> cross_gt{{0.45, 0.0}, {-0.3, 0.0}};
  const auto opt = match_detections(cross, cross_gt, 1.0, MatchingMode::kOptimal);
  CHECK(opt.tp == 2);
  const auto greedy =
      match_detections(cross, cross_gt, 1.0, MatchingMode::kGreedy);
  CHECK(greedy.tp >= 1);
  double opt_total = 0, greedy_total = 0;
  for (const auto& p : opt.pairs) opt_total += p.distance;
  for (const auto& p : greedy.pairs) greedy_total += p.distance;
  if (greedy.tp == opt.tp) CHECK(opt_total <= greedy_total + 1e-12);
}

TEST_CASE("optimal matching equals the exhaustive oracle") {
  std::mt19937_64 rng(515151);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = uniform_int(rng, 0, 6);
    const int m = uniform_int(rng, 0, 6);
    std::vector<Detection> dets(n);
    std::vector<Eigen::Vector2d> gts(m);
    for (auto& d : dets)
      d.position = {uniform(rng, 0, 4), uniform(rng, 0, 4)};
    for (auto& g : gts) g = {uniform(rng, 0, 4), uniform(rng, 0, 4)};
    const double t = uniform(rng, 0.3, 2.0);
    if (m == 0) continue;  // MODA needs ground truth; matching still works
    const auto got = match_detections(dets, gts, t);
    const auto want = assignment_oracle(dets, gts, t);
    CHECK(got.tp == want.tp);
    double total = 0;
    for (const auto& p : got.pairs) {
      total += p.distance;
      CHECK(p.distance < t);
    }
    CHECK(total == doctest::Approx(want.total).epsilon(1e-9));
    // Count identities.
    CHECK(got.tp + got.fp == n);
    CHECK(got.tp + got.fn == m);
    // Each det/gt appears in at most one pair.
    std::vector<char> seen_d(n, 0), seen_g(m, 0);
    for (const auto& p : got.pairs) {
      CHECK(!seen_d[p.det]);
      CHECK(!seen_g[p.gt]);
      seen_d[p.det] = seen_g[p.gt] = 1;
    }
  }
}

TEST_CASE("metric formulas") {
  MatchResult m;
  m.n_gt = 10;
  m.tp = 10;
  m.fp = 1;
  m.fn = 2;
  CHECK(moda(m) == doctest::Approx(0.7));

  m.fp = 0;
  m.fn = 0;
  CHECK(moda(m) == doctest::Approx(1.0));

  m.fp = 15;
  m.fn = 0;
  CHECK(moda(m) == doctest::Approx(-0.5));

  MatchResult none;
  CHECK_THROWS_AS(moda(none), NoGroundTruth);

  MatchResult one;
  one.n_gt = 1;
  one.tp = 1;
  one.pairs = {{0, 0, 0.25}};
  CHECK(modp(one, 0.5) == doctest::Approx(0.5));

  MatchResult two;
  two.tp = 2;
  two.n_gt = 2;
  two.pairs = {{0, 0, 0.1}, {1, 1, 0.4}};
  CHECK(modp(two, 0.5) == doctest::Approx(0.5));
  two.pairs = {{0, 0, 0.0}, {1, 1, 0.0}};
  CHECK(modp(two, 0.5) == doctest::Approx(1.0));
  CHECK(modp(none, 0.5) == 0.0);

  MatchResult pr;
  pr.tp = 9;
  pr.fp = 1;
  pr.n_gt = 10;
  CHECK(precision_recall(pr).first == doctest::Approx(0.9));
  pr.tp = 8;
  pr.fp = 0;
  CHECK(precision_recall(pr).second == doctest::Approx(0.8));

  MatchResult vac;
  vac.n_gt = 5;
  const auto [p, r] = precision_recall(vac);
  CHECK(p == 1.0);
  CHECK(r == 0.0);
  CHECK_THROWS_AS(precision_recall(none), NoGroundTruth);
}

TEST_CASE("metric consistency invariants on random instances") {
  std::mt19937_64 rng(717);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = uniform_int(rng, 0, 8);
    const int m = uniform_int(rng, 1, 8);
    std::vector<Detection> dets(n);
    std::vector<Eigen::Vector2d> gts(m);
    for (auto& d : dets) d.position = {uniform(rng, 0, 3), uniform(rng, 0, 3)};
    for (auto& g : gts) g = {uniform(rng, 0, 3), uniform(rng, 0, 3)};
    const auto res = match_detections(dets, gts, 0.5);
    CHECK(res.tp + res.fn == res.n_gt);
    CHECK(res.tp + res.fp == n);
    const auto report = make_report(res, 0.5);
    CHECK((report.moda == 1.0) == (res.fp == 0 && res.fn == 0));
    CHECK(report.precision >= 0.0);
    CHECK(report.precision <= 1.0);
    CHECK(report.recall >= 0.0);
    CHECK(report.recall <= 1.0);
    CHECK(report.moda <= 1.0);
  }
}

TEST_CASE("pooled report across frames") {
  MatchResult f1, f2;
  f1.n_gt = 2;
  f1.tp = 2;
  f1.pairs = {{0, 0, 0.1}, {1, 1, 0.2}};
  f2.n_gt = 3;
  f2.tp = 1;
  f2.fp = 2;
  f2.fn = 2;
  f2.pairs = {{0, 0, 0.3}};
  const auto report = make_report(std::vector<MatchResult>{f1, f2}, 0.5);
  CHECK(report.n_gt == 5);
  CHECK(report.tp == 3);
  CHECK(report.fp == 2);
  CHECK(report.fn == 2);
  CHECK(report.moda == doctest::Approx(1.0 - 4.0 / 5.0));
  CHECK(report.modp ==
        doctest::Approx(((1 - 0.2) + (1 - 0.4) + (1 - 0.6)) / 3.0));
  CHECK(report.recall == doctest::Approx(3.0 / 5.0));
  CHECK(report.precision == doctest::Approx(3.0 / 5.0));
}

TEST_CASE("matching mode parsing") {
  CHECK(parse_matching_mode("optimal") == MatchingMode::kOptimal);
  CHECK(parse_matching_mode("greedy") == MatchingMode::kGreedy);
  CHECK_THROWS_AS(parse_matching_mode("best"), UnknownMode);
}
