#include "prs/gbt.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "prs/error.hpp"
#include "prs/rng.hpp"

namespace prs {

namespace {

constexpr double kLambda = 1.0;     // L2 on leaf weights
constexpr double kMinGain = 1e-10;  // below this a split is not worth taking

struct SplitChoice {
  int feature = -1;
  double threshold = 0.0;
  double gain = 0.0;
  bool found = false;
};

struct TreeBuilder {
  const Eigen::MatrixXd& X;
  const std::vector<double>& grad;
  const std::vector<double>& hess;
  const GbtConfig& cfg;
  GbtTree tree;
  int degenerate = 0;
  std::vector<int> scratch;

  // rows is a contiguous slice of scratch owned by this node.
  int build(int begin, int end, int depth) {
    const int count = end - begin;
    double G = 0.0, H = 0.0;
    for (int j = begin; j < end; ++j) {
      G += grad[scratch[j]];
      H += hess[scratch[j]];
    }

    const int node_idx = static_cast<int>(tree.nodes.size());
    tree.nodes.emplace_back();
    const bool can_split =
        depth < cfg.max_depth && count >= 2 * cfg.min_leaf;

    SplitChoice best;
    int split_pos = -1;
    if (can_split) {
      for (int k = 0; k < static_cast<int>(X.cols()); ++k) {
        std::sort(scratch.begin() + begin, scratch.begin() + end,
                  [&](int a, int b) {
                    const double xa = X(a, k), xb = X(b, k);
                    return xa < xb || (xa == xb && a < b);
                  });
        double GL = 0.0, HL = 0.0;
        for (int j = begin; j < end - 1; ++j) {
          const int row = scratch[j];
          GL += grad[row];
          HL += hess[row];
          const double xl = X(row, k);
          const double xr = X(scratch[j + 1], k);
          if (xl == xr) continue;
          const double thr = 0.5 * (xl + xr);
          // Adjacent doubles can round the midpoint onto xl, which would
          // break the "x < threshold goes left" rule; skip such cuts.
          if (!(xl < thr && thr <= xr)) continue;
          const int left_n = j - begin + 1;
          if (left_n < cfg.min_leaf || count - left_n < cfg.min_leaf) continue;
          const double GR = G - GL, HR = H - HL;
          const double gain = 0.5 * (GL * GL / (HL + kLambda) +
                                     GR * GR / (HR + kLambda) -
                                     G * G / (H + kLambda));
          if (gain > kMinGain && (!best.found || gain > best.gain + kMinGain)) {
            best = {k, thr, gain, true};
            split_pos = left_n;
          }
        }
      }
    }

    if (!best.found) {
      if (can_split) ++degenerate;  // eligible node, no improving split
      GbtNode& leaf = tree.nodes[node_idx];
      leaf.leaf = true;
      leaf.value = cfg.learning_rate * (-G / (H + kLambda));
      return node_idx;
    }

    // Re-sort on the winning feature and partition around split_pos.
    std::sort(scratch.begin() + begin, scratch.begin() + end,
              [&](int a, int b) {
                const double xa = X(a, best.feature), xb = X(b, best.feature);
                return xa < xb || (xa == xb && a < b);
              });
    const int mid = begin + split_pos;
    const int left = build(begin, mid, depth + 1);
    const int right = build(mid, end, depth + 1);
    GbtNode& node = tree.nodes[node_idx];
    node.leaf = false;
    node.feature = best.feature;
    node.threshold = best.threshold;
    node.gain = best.gain;
    node.left = left;
    node.right = right;
    return node_idx;
  }
};

double tree_value(const GbtTree& tree, const Eigen::MatrixXd& X, int row) {
  int idx = 0;
  while (!tree.nodes[idx].leaf) {
    const GbtNode& n = tree.nodes[idx];
    idx = X(row, n.feature) < n.threshold ? n.left : n.right;
  }
  return tree.nodes[idx].value;
}

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

FittedModel fit_gbt(const ActionMatrix& m, const GbtConfig& cfg) {
  const int H = m.rows();
  if (cfg.rounds < 0 || cfg.max_depth < 1 || cfg.min_leaf < 1)
    throw PrsError("BadValue", "invalid boosting configuration");
  if (!(cfg.subsample > 0.0 && cfg.subsample <= 1.0))
    throw PrsError("BadValue", "subsample must lie in (0, 1]");
  if (!(cfg.learning_rate > 0.0))
    throw PrsError("BadValue", "learning_rate must be positive");
  if (H < 2 * cfg.min_leaf)
    throw PrsError("BadValue", "boosting needs at least 2 * min_leaf rows");
  const int ones = m.y.sum();
  if (ones == 0 || ones == H)
    throw PrsError("SingleClass", "boosting requires both outcome classes");

  const double prevalence = static_cast<double>(ones) / H;
  const double base = std::log(prevalence / (1.0 - prevalence));

  FittedModel model;
  model.kind = ModelKind::Gbt;
  model.spec = m.spec;
  model.threshold = prevalence;
  model.gbt.base_score = base;
  model.gbt.config = cfg;

  std::vector<double> margin(H, base);
  std::vector<double> grad(H), hess(H);
  int degenerate_total = 0;

  for (int round = 0; round < cfg.rounds; ++round) {
    for (int i = 0; i < H; ++i) {
      const double p = sigmoid(margin[i]);
      grad[i] = p - m.y(i);
      hess[i] = p * (1.0 - p);
    }

    Rng rr = Rng::stream(cfg.seed, static_cast<std::uint64_t>(round),
                         0x474254);
    std::vector<int> rows;
    rows.reserve(H);
    if (cfg.subsample >= 1.0) {
      rows.resize(H);
      std::iota(rows.begin(), rows.end(), 0);
    } else {
      for (int i = 0; i < H; ++i)
        if (rr.uniform01() < cfg.subsample) rows.push_back(i);
      // A draw too thin to split still trains on something sensible.
      if (static_cast<int>(rows.size()) < 2 * cfg.min_leaf) {
        rows.resize(H);
        std::iota(rows.begin(), rows.end(), 0);
      }
    }

    TreeBuilder builder{m.X, grad, hess, cfg, {}, 0, std::move(rows)};
    builder.build(0, static_cast<int>(builder.scratch.size()), 0);
    degenerate_total += builder.degenerate;

    for (int i = 0; i < H; ++i)
      margin[i] += tree_value(builder.tree, m.X, i);
    model.gbt.trees.push_back(std::move(builder.tree));
  }

  model.train_meta.iterations = cfg.rounds;
  model.train_meta.degenerate_splits = degenerate_total;
  return model;
}

}  // namespace prs
