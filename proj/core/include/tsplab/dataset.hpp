#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "tsplab/features.hpp"

namespace tsplab {

enum class TargetKind { classification, regression };

/// Feature matrix plus one target column. Classification targets are indices
/// into class_names (stored in y as 0.0, 1.0, ...).
struct Dataset {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> x; // row-major, each row columns.size() wide
    std::vector<double> y;
    TargetKind target_kind = TargetKind::regression;
    std::vector<std::string> class_names;

    int rows() const { return static_cast<int>(x.size()); }
    int cols() const { return static_cast<int>(columns.size()); }
};

Dataset subset_rows(const Dataset& data, const std::vector<int>& rows);
Dataset select_columns(const Dataset& data, const std::vector<std::string>& names);

/// Minimal CSV table: comma-separated, header row, no quoting (none of the
/// writers emit commas inside cells).
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Datasets from a feature CSV: x is always the 47 canonical feature columns.
/// Classification reads string labels from `label_column` (class indices
/// follow the sorted distinct labels, so easy < hard); regression parses
/// `target_column` as numbers.
Dataset classification_dataset(const CsvTable& table, const std::string& label_column = "class");
Dataset regression_dataset(const CsvTable& table, const std::string& target_column = "fitness");

/// Feature matrix only, y left empty. For prediction inputs.
Dataset feature_dataset(const CsvTable& table);

struct FeatureRecord {
    std::string instance_id;
    int size = 0;
    std::string class_name;      // may be empty
    std::optional<double> alpha; // empty cell when absent
    FeatureVector features{};
};

/// Header: instance_id,size,class,alpha,<47 canonical names>.
void write_feature_csv(std::ostream& out, const std::vector<FeatureRecord>& records);

struct MorphRecord {
    std::string pair_id;
    double alpha = 0.0;
    double fitness = 0.0;
    FeatureVector features{};
};

/// Header: pair_id,alpha,fitness,<47 canonical names>.
void write_morph_csv(std::ostream& out, const std::vector<MorphRecord>& records);

} // namespace tsplab
