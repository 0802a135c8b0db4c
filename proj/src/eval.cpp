#include "mvhull/eval.hpp"

#include <algorithm>
#include <deque>
#include <limits>

namespace mvhull {

MatchingMode parse_matching_mode(std::string_view name) {
  if (name == "optimal") return MatchingMode::kOptimal;
  if (name == "greedy") return MatchingMode::kGreedy;
  throw UnknownMode("unknown matching mode: " + std::string(name));
}

std::string_view matching_mode_name(MatchingMode mode) {
  return mode == MatchingMode::kOptimal ? "optimal" : "greedy";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Successive shortest augmenting paths on the residual graph: maximizes the
// number of matches, then minimizes total distance among such matchings.
// Nodes 0..n-1 are detections, n..n+m-1 ground truths.
void assign_optimal(const std::vector<std::vector<double>>& cost,
                    std::vector<int>& match_det, std::vector<int>& match_gt) {
  const int n = int(match_det.size());
  const int m = int(match_gt.size());
  for (;;) {
    std::vector<double> dist(n + m, kInf);
    std::vector<int> prev(n + m, -1);
    std::deque<int> queue;
    std::vector<char> queued(n + m, 0);
    for (int i = 0; i < n; ++i)
      if (match_det[i] < 0) {
        dist[i] = 0.0;
        queue.push_back(i);
        queued[i] = 1;
      }
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      queued[u] = 0;
      if (u < n) {
        for (int j = 0; j < m; ++j) {
          if (cost[u][j] == kInf || match_det[u] == j) continue;
          const double d = dist[u] + cost[u][j];
          if (d < dist[n + j]) {
            dist[n + j] = d;
            prev[n + j] = u;
            if (!queued[n + j]) {
              queue.push_back(n + j);
              queued[n + j] = 1;
            }
          }
        }
      } else {
        const int j = u - n;
        const int i = match_gt[j];
        if (i >= 0 && dist[u] - cost[i][j] < dist[i]) {
          dist[i] = dist[u] - cost[i][j];
          prev[i] = u;
          if (!queued[i]) {
            queue.push_back(i);
            queued[i] = 1;
          }
        }
      }
    }

    int best = -1;
    for (int j = 0; j < m; ++j)
      if (match_gt[j] < 0 && dist[n + j] < kInf)
        if (best < 0 || dist[n + j] < dist[n + best]) best = j;
    if (best < 0) return;

    for (int v = n + best; v >= 0;) {
      const int i = prev[v];
      const int j = v - n;
      match_det[i] = j;
      match_gt[j] = i;
      v = prev[i];
    }
  }
}

void assign_greedy(const std::vector<std::vector<double>>& cost,
                   std::vector<int>& match_det, std::vector<int>& match_gt) {
  struct Cand {
    double d;
    int i, j;
  };
  std::vector<Cand> cands;
  for (int i = 0; i < int(match_det.size()); ++i)
    for (int j = 0; j < int(match_gt.size()); ++j)
      if (cost[i][j] != kInf) cands.push_back({cost[i][j], i, j});
  std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
    if (a.d != b.d) return a.d < b.d;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  for (const Cand& c : cands)
    if (match_det[c.i] < 0 && match_gt[c.j] < 0) {
      match_det[c.i] = c.j;
      match_gt[c.j] = c.i;
    }
}

}  // namespace

MatchResult match_detections(const std::vector<Detection>& dets,
                             const std::vector<Eigen::Vector2d>& gts,
                             double t, MatchingMode mode) {
  if (!(t > 0.0)) throw ConfigError("matching gate t must be positive");
  const int n = int(dets.size());
  const int m = int(gts.size());
  std::vector<std::vector<double>> cost(n, std::vector<double>(m, kInf));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < m; ++j) {
      const double d = (dets[i].position - gts[j]).norm();
      if (d < t) cost[i][j] = d;
    }

  std::vector<int> match_det(n, -1), match_gt(m, -1);
  if (mode == MatchingMode::kOptimal)
    assign_optimal(cost, match_det, match_gt);
  else
    assign_greedy(cost, match_det, match_gt);

  MatchResult result;
  result.n_gt = m;
  for (int i = 0; i < n; ++i)
    if (match_det[i] >= 0)
      result.pairs.push_back({i, match_det[i], cost[i][match_det[i]]});
  result.tp = int(result.pairs.size());
  result.fp = n - result.tp;
  result.fn = m - result.tp;
  return result;
}

double moda(const MatchResult& m) {
  if (m.n_gt < 1) throw NoGroundTruth("MODA undefined without ground truth");
  return 1.0 - double(m.fp + m.fn) / m.n_gt;
}

double modp(const MatchResult& m, double t) {
  if (m.tp == 0) return 0.0;
  double sum = 0.0;
  for (const auto& p : m.pairs) sum += 1.0 - p.distance / t;
  return sum / m.tp;
}

std::pair<double, double> precision_recall(const MatchResult& m) {
  const double precision = (m.tp + m.fp == 0) ? 1.0 : double(m.tp) / (m.tp + m.fp);
  if (m.n_gt < 1) throw NoGroundTruth("recall undefined without ground truth");
  return {precision, double(m.tp) / m.n_gt};
}

EvalReport make_report(const MatchResult& m, double t) {
  return make_report(std::vector<MatchResult>{m}, t);
}

EvalReport make_report(const std::vector<MatchResult>& frames, double t) {
  EvalReport r;
  double modp_sum = 0.0;
  for (const auto& m : frames) {
    r.tp += m.tp;
    r.fp += m.fp;
    r.fn += m.fn;
    r.n_gt += m.n_gt;
    for (const auto& p : m.pairs) modp_sum += 1.0 - p.distance / t;
  }
  if (r.n_gt < 1) throw NoGroundTruth("MODA undefined without ground truth");
  r.moda = 1.0 - double(r.fp + r.fn) / r.n_gt;
  r.modp = r.tp == 0 ? 0.0 : modp_sum / r.tp;
  r.precision = (r.tp + r.fp == 0) ? 1.0 : double(r.tp) / (r.tp + r.fp);
  r.recall = double(r.tp) / r.n_gt;
  return r;
}

}  // namespace mvhull
