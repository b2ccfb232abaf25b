#include "tsplab/tree.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace tsplab {

namespace {

double gini(const std::vector<int>& counts, int total) {
    if (total == 0) return 0.0;
    double sum_sq = 0.0;
    for (int c : counts) {
        const double p = static_cast<double>(c) / total;
        sum_sq += p * p;
    }
    return 1.0 - sum_sq;
}

struct Builder {
    const Dataset& data;
    int max_depth;
    int min_leaf;
    int n_classes;
    std::vector<int> feature_order; // column indices sorted by name

    std::unique_ptr<TreeNode> build(const std::vector<int>& rows, int depth) {
        std::vector<int> counts(n_classes, 0);
        for (int r : rows) counts[static_cast<int>(data.y[r])] += 1;
        int majority = 0;
        for (int c = 1; c < n_classes; ++c)
            if (counts[c] > counts[majority]) majority = c;

        auto leaf = [&] {
            auto node = std::make_unique<TreeNode>();
            node->label = majority;
            return node;
        };

        const bool pure = counts[majority] == static_cast<int>(rows.size());
        if (pure || depth >= max_depth || static_cast<int>(rows.size()) < 2 * min_leaf)
            return leaf();

        const double parent_gini = gini(counts, static_cast<int>(rows.size()));
        int best_feature = -1;
        double best_threshold = 0.0;
        double best_gain = -std::numeric_limits<double>::infinity();

        std::vector<std::pair<double, int>> sorted; // (value, class)
        for (int f : feature_order) {
            sorted.clear();
            for (int r : rows)
                sorted.emplace_back(data.x[r][f], static_cast<int>(data.y[r]));
            std::sort(sorted.begin(), sorted.end());

            std::vector<int> left_counts(n_classes, 0);
            const int total = static_cast<int>(rows.size());
            for (int i = 0; i + 1 < total; ++i) {
                left_counts[sorted[i].second] += 1;
                if (sorted[i].first == sorted[i + 1].first) continue;
                const int n_left = i + 1;
                const int n_right = total - n_left;
                if (n_left < min_leaf || n_right < min_leaf) continue;

                std::vector<int> right_counts(n_classes, 0);
                for (int c = 0; c < n_classes; ++c) right_counts[c] = counts[c] - left_counts[c];
                const double child =
                    (n_left * gini(left_counts, n_left) + n_right * gini(right_counts, n_right)) /
                    total;
                const double gain = parent_gini - child;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_feature = f;
                    best_threshold = (sorted[i].first + sorted[i + 1].first) / 2.0;
                }
            }
        }

        if (best_feature < 0) return leaf();

        std::vector<int> left_rows, right_rows;
        for (int r : rows) {
            if (data.x[r][best_feature] <= best_threshold)
                left_rows.push_back(r);
            else
                right_rows.push_back(r);
        }
        auto node = std::make_unique<TreeNode>();
        node->feature = best_feature;
        node->threshold = best_threshold;
        node->label = majority;
        node->left = build(left_rows, depth + 1);
        node->right = build(right_rows, depth + 1);
        return node;
    }
};

} // namespace

DecisionTree fit_tree(const Dataset& data, int max_depth, int min_leaf) {
    if (data.target_kind != TargetKind::classification)
        throw std::invalid_argument("fit_tree: dataset target is not a class label");
    if (data.rows() == 0) throw std::invalid_argument("fit_tree: empty dataset");
    if (max_depth < 0) throw std::invalid_argument("fit_tree: max_depth must be >= 0");
    if (min_leaf < 1) throw std::invalid_argument("fit_tree: min_leaf must be >= 1");

    DecisionTree tree;
    tree.columns = data.columns;
    tree.class_names = data.class_names;
    tree.max_depth = max_depth;
    tree.min_leaf = min_leaf;

    Builder builder{data, max_depth, min_leaf, static_cast<int>(data.class_names.size()), {}};
    builder.feature_order.resize(data.cols());
    std::iota(builder.feature_order.begin(), builder.feature_order.end(), 0);
    std::sort(builder.feature_order.begin(), builder.feature_order.end(),
              [&](int a, int b) { return data.columns[a] < data.columns[b]; });

    std::vector<int> rows(data.rows());
    std::iota(rows.begin(), rows.end(), 0);
    tree.root = builder.build(rows, 0);
    return tree;
}

int predict_tree(const DecisionTree& tree, const std::vector<double>& x) {
    if (x.size() != tree.columns.size())
        throw std::invalid_argument("predict_tree: row width does not match tree features");
    const TreeNode* node = tree.root.get();
    while (node->feature >= 0)
        node = x[node->feature] <= node->threshold ? node->left.get() : node->right.get();
    return node->label;
}

const std::string& predict_tree_label(const DecisionTree& tree, const std::vector<double>& x) {
    return tree.class_names[predict_tree(tree, x)];
}

namespace {

nlohmann::json node_to_json(const TreeNode& node, const DecisionTree& tree) {
    if (node.feature < 0) return nlohmann::json{{"label", tree.class_names[node.label]}};
    return nlohmann::json{{"feature", tree.columns[node.feature]},
                          {"threshold", node.threshold},
                          {"left", node_to_json(*node.left, tree)},
                          {"right", node_to_json(*node.right, tree)}};
}

std::unique_ptr<TreeNode> node_from_json(const nlohmann::json& j, const DecisionTree& tree) {
    auto node = std::make_unique<TreeNode>();
    if (j.contains("label")) {
        const std::string label = j.at("label").get<std::string>();
        const auto it =
            std::find(tree.class_names.begin(), tree.class_names.end(), label);
        if (it == tree.class_names.end())
            throw std::runtime_error("tree JSON: unknown class '" + label + "'");
        node->label = static_cast<int>(it - tree.class_names.begin());
        return node;
    }
    const std::string feature = j.at("feature").get<std::string>();
    const auto it = std::find(tree.columns.begin(), tree.columns.end(), feature);
    if (it == tree.columns.end())
        throw std::runtime_error("tree JSON: unknown feature '" + feature + "'");
    node->feature = static_cast<int>(it - tree.columns.begin());
    node->threshold = j.at("threshold").get<double>();
    node->left = node_from_json(j.at("left"), tree);
    node->right = node_from_json(j.at("right"), tree);
    return node;
}

} // namespace

nlohmann::json to_json(const DecisionTree& tree) {
    return nlohmann::json{{"model", "tree"},
                          {"features", tree.columns},
                          {"classes", tree.class_names},
                          {"max_depth", tree.max_depth},
                          {"min_leaf", tree.min_leaf},
                          {"root", node_to_json(*tree.root, tree)}};
}

DecisionTree tree_from_json(const nlohmann::json& j) {
    if (j.value("model", std::string{}) != "tree")
        throw std::runtime_error("tree JSON: not a tree model");
    DecisionTree tree;
    tree.columns = j.at("features").get<std::vector<std::string>>();
    tree.class_names = j.at("classes").get<std::vector<std::string>>();
    tree.max_depth = j.value("max_depth", 0);
    tree.min_leaf = j.value("min_leaf", 1);
    tree.root = node_from_json(j.at("root"), tree);
    return tree;
}

} // namespace tsplab
