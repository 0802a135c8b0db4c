#pragma once

#include <Eigen/Dense>
#include <string_view>
#include <vector>

#include "mvhull/detect.hpp"

namespace mvhull {

enum class MatchingMode { kOptimal, kGreedy };

MatchingMode parse_matching_mode(std::string_view name);
std::string_view matching_mode_name(MatchingMode mode);

struct MatchedPair {
  int det = -1;
  int gt = -1;
  double distance = 0.0;
};

/// Outcome of matching detections against ground truth at gate distance t.
struct MatchResult {
  std::vector<MatchedPair> pairs;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  int n_gt = 0;
};

/// One-to-one matching over pairs with distance < t. Optimal mode maximizes
/// the number of matches and, among those, minimizes total distance
/// (min-cost bipartite assignment); greedy mode repeatedly takes the closest
/// remaining pair. Unmatched detections count as FP, unmatched ground truth
/// as FN.
MatchResult match_detections(const std::vector<Detection>& dets,
                             const std::vector<Eigen::Vector2d>& gts,
                             double t,
                             MatchingMode mode = MatchingMode::kOptimal);

/// 1 - (FP + FN) / N. Throws NoGroundTruth when n_gt = 0. May be negative.
double moda(const MatchResult& m);

/// Mean of (1 - d/t) over matched pairs; 0 when there are no true positives.
double modp(const MatchResult& m, double t);

/// (TP/(TP+FP), TP/N). Precision is 1 when there are no detections; recall
/// throws NoGroundTruth when n_gt = 0.
std::pair<double, double> precision_recall(const MatchResult& m);

struct EvalReport {
  double moda = 0.0;
  double modp = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  int tp = 0;
  int fp = 0;
  int fn = 0;
  int n_gt = 0;
};

/// Metrics for one match result; t is the gate used for matching.
EvalReport make_report(const MatchResult& m, double t);

/// Metrics pooled over per-frame match results: counts are summed and MODP
/// averages over all matched pairs.
EvalReport make_report(const std::vector<MatchResult>& frames, double t);

}  // namespace mvhull
