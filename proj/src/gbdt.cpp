// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The clintext Authors

#include <algorithm>
#include <cmath>
#include <limits>

#include "clintext/error.hpp"
#include "clintext/models.hpp"

namespace clintext {

namespace {

double FeatureValue(const SparseVector& x, std::size_t feature) {
  auto it = std::lower_bound(x.entries.begin(), x.entries.end(), feature,
                             [](const auto& e, std::size_t f) { return e.first < f; });
  return (it != x.entries.end() && it->first == feature) ? it->second : 0.0;
}

struct ColumnEntry {
  double value;
  std::size_t row;
};

struct NodeStats {
  double g = 0.0;
  double h = 0.0;
  std::size_t count = 0;
};

struct SplitCandidate {
  double gain = 0.0;
  int feature = -1;
  double threshold = 0.0;
};

// Scan state of one node while walking one feature column.
struct ScanState {
  std::size_t stamp = 0;
  NodeStats neg;  // negative entries seen so far (ascending)
  NodeStats pos;  // positive entries seen so far (descending)
  double prev = 0.0;
  bool has_prev = false;
  double max_neg = 0.0;
  // Best candidate of this feature among negative thresholds, and among
  // positive thresholds (lowest threshold on equal gain).
  SplitCandidate neg_best;
  SplitCandidate pos_best;
};

class TreeGrower {
 public:
  TreeGrower(const FeatureMatrix& x, const std::vector<std::vector<ColumnEntry>>& columns,
             const GbdtParams& params)
      : x_(x), columns_(columns), params_(params) {}

  // Grows one tree; row_leaf receives the leaf value reached by each row.
  Tree Grow(const std::vector<double>& g, const std::vector<double>& h, std::vector<double>& row_leaf) {
    const std::size_t n = g.size();
    Tree tree;
    tree.nodes.emplace_back();
    std::vector<int> node_of_row(n, 0);
    std::vector<int> active{0};
    std::vector<NodeStats> stats(1);
    for (std::size_t i = 0; i < n; ++i) {
      stats[0].g += g[i];
      stats[0].h += h[i];
      ++stats[0].count;
    }

    for (int depth = 0; depth < params_.max_depth && !active.empty(); ++depth) {
      const auto best = FindSplits(g, h, node_of_row, active, stats, tree.nodes.size());
      std::vector<int> next;
      for (int node : active) {
        const auto& cand = best[static_cast<std::size_t>(node)];
        if (cand.feature < 0) {
          SetLeaf(tree.nodes[static_cast<std::size_t>(node)], stats[static_cast<std::size_t>(node)]);
          continue;
        }
        const int l = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        auto& parent = tree.nodes[static_cast<std::size_t>(node)];
        parent.feature = cand.feature;
        parent.threshold = cand.threshold;
        parent.left = l;
        parent.right = l + 1;
        next.push_back(l);
        next.push_back(l + 1);
      }
      if (next.empty()) {
        active.clear();
        break;
      }
      stats.assign(tree.nodes.size(), NodeStats{});
      for (std::size_t i = 0; i < n; ++i) {
        int node = node_of_row[i];
        if (node < 0) continue;
        const auto& nd = tree.nodes[static_cast<std::size_t>(node)];
        if (nd.is_leaf()) {
          node_of_row[i] = -1;
          continue;
        }
        const double v = FeatureValue(x_.rows[i], static_cast<std::size_t>(nd.feature));
        node = v <= nd.threshold ? nd.left : nd.right;
        node_of_row[i] = node;
        auto& s = stats[static_cast<std::size_t>(node)];
        s.g += g[i];
        s.h += h[i];
        ++s.count;
      }
      active = std::move(next);
    }
    for (int node : active) {
      SetLeaf(tree.nodes[static_cast<std::size_t>(node)], stats[static_cast<std::size_t>(node)]);
    }

    row_leaf.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) row_leaf[i] = tree.Predict(x_.rows[i]);
    return tree;
  }

 private:
  void SetLeaf(TreeNode& node, const NodeStats& s) const {
    node.feature = -1;
    const double denom = s.h + params_.l2;
    node.leaf = denom > 0.0 ? -s.g / denom : 0.0;
  }

  double Score(double g, double h) const {
    const double denom = h + params_.l2;
    return denom > 0.0 ? g * g / denom : 0.0;
  }

  // Exact split search over every active node in one pass per column.
  // Thresholds are observed values and rows with x <= t go left. Absent
  // entries form a zero group between the negative and positive values.
  // Negative entries are walked ascending (left sums), positive entries
  // descending (right sums); the zero-group boundaries are added at the end.
  // Equal gains resolve to the lowest feature, then the lowest threshold.
  std::vector<SplitCandidate> FindSplits(const std::vector<double>& g, const std::vector<double>& h,
                                         const std::vector<int>& node_of_row, const std::vector<int>& active,
                                         const std::vector<NodeStats>& stats, std::size_t num_nodes) {
    std::vector<SplitCandidate> best(num_nodes);
    std::vector<char> is_active(num_nodes, 0);
    for (int node : active) {
      const auto& s = stats[static_cast<std::size_t>(node)];
      if (s.count >= 2 && s.h >= 2.0 * params_.min_child_hessian) is_active[static_cast<std::size_t>(node)] = 1;
    }
    state_.assign(num_nodes, ScanState{});
    std::size_t stamp = 0;
    std::vector<int> touched;

    std::vector<double> parent_score(num_nodes, 0.0);
    for (int node : active) {
      const auto& s = stats[static_cast<std::size_t>(node)];
      parent_score[static_cast<std::size_t>(node)] = Score(s.g, s.h);
    }
    // Gain of sending `left` to the left child; negative when not allowed.
    auto gain_of = [&](const NodeStats& total, double gl, double hl) {
      const double gr = total.g - gl, hr = total.h - hl;
      if (hl < params_.min_child_hessian || hr < params_.min_child_hessian) return -1.0;
      const double parent = parent_score[static_cast<std::size_t>(&total - stats.data())];
      return 0.5 * (Score(gl, hl) + Score(gr, hr) - parent) - params_.min_gain;
    };
    auto consider = [](SplitCandidate& b, double gain, int feature, double threshold) {
      if (gain > 0.0 && gain > b.gain) b = SplitCandidate{gain, feature, threshold};
    };
    auto node_state = [&](std::size_t row) -> ScanState* {
      const int node = node_of_row[row];
      if (node < 0 || !is_active[static_cast<std::size_t>(node)]) return nullptr;
      auto& st = state_[static_cast<std::size_t>(node)];
      if (st.stamp != stamp) {
        st = ScanState{};
        st.stamp = stamp;
        touched.push_back(node);
      }
      return &st;
    };

    for (std::size_t f = 0; f < columns_.size(); ++f) {
      const auto& col = columns_[f];
      if (col.empty()) continue;
      ++stamp;
      touched.clear();
      const int feature = static_cast<int>(f);
      const auto first_pos = std::partition_point(col.begin(), col.end(),
                                                  [](const ColumnEntry& e) { return e.value < 0.0; });

      for (auto it = col.begin(); it != first_pos; ++it) {
        ScanState* st = node_state(it->row);
        if (!st) continue;
        const int node = node_of_row[it->row];
        if (st->has_prev && it->value > st->prev) {
          const auto& total = stats[static_cast<std::size_t>(node)];
          consider(st->neg_best, gain_of(total, st->neg.g, st->neg.h), feature, st->prev);
        }
        st->neg.g += g[it->row];
        st->neg.h += h[it->row];
        ++st->neg.count;
        st->prev = it->value;
        st->has_prev = true;
      }
      for (int t : touched) {
        auto& st = state_[static_cast<std::size_t>(t)];
        st.max_neg = st.prev;
        st.has_prev = false;
      }

      for (auto it = col.end(); it != first_pos;) {
        --it;
        ScanState* st = node_state(it->row);
        if (!st) continue;
        const int node = node_of_row[it->row];
        if (st->has_prev && it->value < st->prev) {
          const auto& total = stats[static_cast<std::size_t>(node)];
          const double gain = gain_of(total, total.g - st->pos.g, total.h - st->pos.h);
          if (gain > 0.0 && gain >= st->pos_best.gain) st->pos_best = SplitCandidate{gain, feature, it->value};
        }
        st->pos.g += g[it->row];
        st->pos.h += h[it->row];
        ++st->pos.count;
        st->prev = it->value;
        st->has_prev = true;
      }

      for (int t : touched) {
        auto& st = state_[static_cast<std::size_t>(t)];
        const auto& total = stats[static_cast<std::size_t>(t)];
        const std::size_t zero_count = total.count - st.neg.count - st.pos.count;
        SplitCandidate fb = st.neg_best;
        if (st.neg.count > 0 && (zero_count > 0 || st.pos.count > 0)) {
          consider(fb, gain_of(total, st.neg.g, st.neg.h), feature, st.max_neg);
        }
        if (zero_count > 0 && st.pos.count > 0) {
          consider(fb, gain_of(total, total.g - st.pos.g, total.h - st.pos.h), feature, 0.0);
        }
        if (st.pos_best.feature >= 0) consider(fb, st.pos_best.gain, feature, st.pos_best.threshold);
        if (fb.feature >= 0) consider(best[static_cast<std::size_t>(t)], fb.gain, feature, fb.threshold);
      }
    }
    return best;
  }

  const FeatureMatrix& x_;
  const std::vector<std::vector<ColumnEntry>>& columns_;
  const GbdtParams& params_;
  std::vector<ScanState> state_;
};

void ValidateParams(const GbdtParams& p) {
  if (p.n_trees < 0) Fail(ErrorCode::kInvalidArgument, "gbdt: n_trees must be >= 0");
  if (p.max_depth < 0) Fail(ErrorCode::kInvalidArgument, "gbdt: max_depth must be >= 0");
  if (!(p.learning_rate >= 0.0) || !std::isfinite(p.learning_rate)) {
    Fail(ErrorCode::kInvalidArgument, "gbdt: learning_rate must be finite and >= 0");
  }
  if (!(p.l2 >= 0.0) || !(p.min_child_hessian >= 0.0) || !(p.min_gain >= 0.0)) {
    Fail(ErrorCode::kInvalidArgument, "gbdt: l2, min_child_hessian and min_gain must be >= 0");
  }
}

nlohmann::json NodeToJson(const Tree& t, int idx) {
  const auto& n = t.nodes[static_cast<std::size_t>(idx)];
  if (n.is_leaf()) return {{"leaf", n.leaf}};
  return {{"feature", n.feature},
          {"threshold", n.threshold},
          {"left", NodeToJson(t, n.left)},
          {"right", NodeToJson(t, n.right)}};
}

int NodeFromJson(const nlohmann::json& j, Tree& t) {
  const int idx = static_cast<int>(t.nodes.size());
  t.nodes.emplace_back();
  if (j.contains("leaf")) {
    t.nodes.back().leaf = j.at("leaf").get<double>();
    return idx;
  }
  const int feature = j.at("feature").get<int>();
  if (feature < 0) Fail(ErrorCode::kParse, "gbdt: negative feature index");
  const double threshold = j.at("threshold").get<double>();
  const int l = NodeFromJson(j.at("left"), t);
  const int r = NodeFromJson(j.at("right"), t);
  auto& n = t.nodes[static_cast<std::size_t>(idx)];
  n.feature = feature;
  n.threshold = threshold;
  n.left = l;
  n.right = r;
  return idx;
}

}  // namespace

double Tree::Predict(const SparseVector& x) const {
  if (nodes.empty()) return 0.0;
  std::size_t i = 0;
  while (!nodes[i].is_leaf()) {
    const auto& n = nodes[i];
    i = static_cast<std::size_t>(FeatureValue(x, static_cast<std::size_t>(n.feature)) <= n.threshold ? n.left
                                                                                                    : n.right);
  }
  return nodes[i].leaf;
}

int Tree::Depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::pair<std::size_t, int>> stack{{0, 0}};
  int depth = 0;
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    depth = std::max(depth, d);
    if (!nodes[i].is_leaf()) {
      stack.emplace_back(static_cast<std::size_t>(nodes[i].left), d + 1);
      stack.emplace_back(static_cast<std::size_t>(nodes[i].right), d + 1);
    }
  }
  return depth;
}

nlohmann::json Tree::ToJson() const {
  if (nodes.empty()) return {{"leaf", 0.0}};
  return NodeToJson(*this, 0);
}

Tree Tree::FromJson(const nlohmann::json& j) {
  Tree t;
  NodeFromJson(j, t);
  return t;
}

double GbdtModel::Margin(const SparseVector& x) const {
  if (!x.entries.empty() && x.entries.back().first >= num_features) {
    Fail(ErrorCode::kInvalidArgument, "gbdt: feature index beyond model dimension");
  }
  double sum = 0.0;
  for (const auto& t : trees) sum += t.Predict(x);
  return base_score + params.learning_rate * sum;
}

double GbdtModel::PredictProba(const SparseVector& x) const { return ClampProbability(Sigmoid(Margin(x))); }

nlohmann::json GbdtModel::ToJson() const {
  nlohmann::json trees_json = nlohmann::json::array();
  for (const auto& t : trees) trees_json.push_back(t.ToJson());
  return {{"hyperparams",
           {{"n_trees", params.n_trees},
            {"learning_rate", params.learning_rate},
            {"max_depth", params.max_depth},
            {"min_child_hessian", params.min_child_hessian},
            {"l2", params.l2},
            {"min_gain", params.min_gain}}},
          {"base_score", base_score},
          {"num_features", num_features},
          {"trees", trees_json}};
}

GbdtModel GbdtModel::FromJson(const nlohmann::json& j) {
  try {
    GbdtModel m;
    const auto& hp = j.at("hyperparams");
    m.params.n_trees = hp.at("n_trees").get<int>();
    m.params.learning_rate = hp.at("learning_rate").get<double>();
    m.params.max_depth = hp.at("max_depth").get<int>();
    m.params.min_child_hessian = hp.at("min_child_hessian").get<double>();
    m.params.l2 = hp.at("l2").get<double>();
    m.params.min_gain = hp.at("min_gain").get<double>();
    m.base_score = j.at("base_score").get<double>();
    m.num_features = j.at("num_features").get<std::size_t>();
    for (const auto& t : j.at("trees")) m.trees.push_back(Tree::FromJson(t));
    return m;
  } catch (const nlohmann::json::exception& e) {
    Fail(ErrorCode::kParse, std::string("gbdt model: ") + e.what());
  }
}

GbdtModel TrainGbdt(const FeatureMatrix& x, std::span<const int> y, std::span<const double> sample_weights,
                    const GbdtParams& params, std::uint64_t /*seed*/) {
  ValidateParams(params);
  const std::size_t n = x.size();
  if (y.size() != n || sample_weights.size() != n) {
    Fail(ErrorCode::kInvalidArgument, "gbdt: features, labels and weights differ in length");
  }
  double sw = 0.0, swy = 0.0;
  bool has0 = false, has1 = false;
  for (std::size_t i = 0; i < n; ++i) {
    if (y[i] != 0 && y[i] != 1) Fail(ErrorCode::kInvalidArgument, "gbdt: labels must be 0 or 1");
    if (!(sample_weights[i] > 0.0) || !std::isfinite(sample_weights[i])) {
      Fail(ErrorCode::kInvalidArgument, "gbdt: sample weights must be finite and positive");
    }
    (y[i] == 1 ? has1 : has0) = true;
    sw += sample_weights[i];
    swy += sample_weights[i] * y[i];
  }
  if (!has0 || !has1) Fail(ErrorCode::kInvalidArgument, "gbdt: training labels contain a single class");

  std::vector<std::vector<ColumnEntry>> columns(x.cols);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [j, v] : x.rows[i].entries) {
      if (j >= x.cols) Fail(ErrorCode::kInvalidArgument, "gbdt: feature index out of range");
      if (!std::isfinite(v)) Fail(ErrorCode::kInvalidArgument, "gbdt: non-finite feature value");
      if (v != 0.0) columns[j].push_back({v, i});
    }
  }
  for (auto& col : columns) {
    std::sort(col.begin(), col.end(), [](const ColumnEntry& a, const ColumnEntry& b) {
      return a.value != b.value ? a.value < b.value : a.row < b.row;
    });
  }

  GbdtModel model;
  model.params = params;
  model.num_features = x.cols;
  const double base_rate = swy / sw;
  model.base_score = std::log(base_rate / (1.0 - base_rate));

  std::vector<double> margin(n, model.base_score), g(n), h(n), row_leaf;
  TreeGrower grower(x, columns, params);
  for (int round = 0; round < params.n_trees; ++round) {
    for (std::size_t i = 0; i < n; ++i) {
      const double p = Sigmoid(margin[i]);
      g[i] = sample_weights[i] * (p - y[i]);
      h[i] = sample_weights[i] * p * (1.0 - p);
    }
    model.trees.push_back(grower.Grow(g, h, row_leaf));
    for (std::size_t i = 0; i < n; ++i) margin[i] += params.learning_rate * row_leaf[i];
  }
  return model;
}

}  // namespace clintext
