#pragma once

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "tsplab/dataset.hpp"

namespace tsplab {

struct TreeNode {
    int feature = -1; // -1 marks a leaf
    double threshold = 0.0;
    int label = 0; // leaf class index
    std::unique_ptr<TreeNode> left;  // rows with x[feature] <= threshold
    std::unique_ptr<TreeNode> right;
};

struct DecisionTree {
    std::vector<std::string> columns;
    std::vector<std::string> class_names;
    std::unique_ptr<TreeNode> root;
    int max_depth = 0;
    int min_leaf = 1;
};

/// Greedy CART on Gini impurity. Split thresholds are midpoints of
/// consecutive distinct feature values; equal-gain splits go to the
/// lexicographically smaller feature name, then the smaller threshold. An
/// impure node still splits on a zero-gain candidate (the best XOR-style
/// separations only pay off a level deeper). Leaves take the majority class,
/// ties to the lower class index.
DecisionTree fit_tree(const Dataset& data, int max_depth, int min_leaf);

/// Class index for a row aligned with tree.columns; boundary values go left.
int predict_tree(const DecisionTree& tree, const std::vector<double>& x);

const std::string& predict_tree_label(const DecisionTree& tree, const std::vector<double>& x);

nlohmann::json to_json(const DecisionTree& tree);
DecisionTree tree_from_json(const nlohmann::json& j);

} // namespace tsplab
