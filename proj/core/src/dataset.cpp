#include "tsplab/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "tsplab/io.hpp"

namespace tsplab {

Dataset subset_rows(const Dataset& data, const std::vector<int>& rows) {
    Dataset out;
    out.columns = data.columns;
    out.target_kind = data.target_kind;
    out.class_names = data.class_names;
    out.x.reserve(rows.size());
    out.y.reserve(rows.size());
    for (int r : rows) {
        out.x.push_back(data.x[r]);
        out.y.push_back(data.y[r]);
    }
    return out;
}

Dataset select_columns(const Dataset& data, const std::vector<std::string>& names) {
    std::vector<int> idx;
    idx.reserve(names.size());
    for (const std::string& name : names) {
        const auto it = std::find(data.columns.begin(), data.columns.end(), name);
        if (it == data.columns.end())
            throw std::invalid_argument("select_columns: unknown column " + name);
        idx.push_back(static_cast<int>(it - data.columns.begin()));
    }
    Dataset out;
    out.columns = names;
    out.target_kind = data.target_kind;
    out.class_names = data.class_names;
    out.y = data.y;
    out.x.resize(data.x.size());
    for (std::size_t r = 0; r < data.x.size(); ++r) {
        out.x[r].reserve(idx.size());
        for (int c : idx) out.x[r].push_back(data.x[r][c]);
    }
    return out;
}

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return static_cast<int>(i);
    return -1;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

} // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable table;
    std::string line;
    bool have_header = false;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (!have_header) {
            table.columns = split_csv_line(line);
            have_header = true;
            continue;
        }
        std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() != table.columns.size())
            throw std::runtime_error("CSV line " + std::to_string(lineno) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(table.columns.size()));
        table.rows.push_back(std::move(cells));
    }
    if (!have_header) throw std::runtime_error("CSV input has no header row");
    return table;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    try {
        return read_csv(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

namespace {

double parse_cell(const CsvTable& table, std::size_t row, int col) {
    const std::string& cell = table.rows[row][col];
    try {
        std::size_t pos = 0;
        const double v = std::stod(cell, &pos);
        if (pos != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("CSV row " + std::to_string(row + 1) + ", column '" +
                                 table.columns[col] + "': not a number: '" + cell + "'");
    }
}

std::vector<int> feature_column_indices(const CsvTable& table) {
    std::vector<int> idx;
    idx.reserve(kFeatureCount);
    for (const std::string& name : feature_names()) {
        const int c = table.column(name);
        if (c < 0) throw std::runtime_error("CSV lacks feature column '" + name + "'");
        idx.push_back(c);
    }
    return idx;
}

std::vector<std::vector<double>> feature_matrix(const CsvTable& table,
                                                const std::vector<int>& idx) {
    std::vector<std::vector<double>> x(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        x[r].reserve(idx.size());
        for (int c : idx) x[r].push_back(parse_cell(table, r, c));
    }
    return x;
}

} // namespace

Dataset classification_dataset(const CsvTable& table, const std::string& label_column) {
    const int label_col = table.column(label_column);
    if (label_col < 0)
        throw std::runtime_error("CSV lacks label column '" + label_column + "'");
    Dataset data;
    data.target_kind = TargetKind::classification;
    data.columns = feature_names();
    data.x = feature_matrix(table, feature_column_indices(table));

    std::set<std::string> distinct;
    for (const auto& row : table.rows) {
        if (row[label_col].empty())
            throw std::runtime_error("empty label in column '" + label_column + "'");
        distinct.insert(row[label_col]);
    }
    data.class_names.assign(distinct.begin(), distinct.end());
    data.y.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        const auto it = std::find(data.class_names.begin(), data.class_names.end(),
                                  row[label_col]);
        data.y.push_back(static_cast<double>(it - data.class_names.begin()));
    }
    return data;
}

Dataset regression_dataset(const CsvTable& table, const std::string& target_column) {
    const int target_col = table.column(target_column);
    if (target_col < 0)
        throw std::runtime_error("CSV lacks target column '" + target_column + "'");
    Dataset data;
    data.target_kind = TargetKind::regression;
    data.columns = feature_names();
    data.x = feature_matrix(table, feature_column_indices(table));
    data.y.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        data.y.push_back(parse_cell(table, r, target_col));
    return data;
}

Dataset feature_dataset(const CsvTable& table) {
    Dataset data;
    data.target_kind = TargetKind::regression;
    data.columns = feature_names();
    data.x = feature_matrix(table, feature_column_indices(table));
    return data;
}

void write_feature_csv(std::ostream& out, const std::vector<FeatureRecord>& records) {
    out << "instance_id,size,class,alpha";
    for (const std::string& name : feature_names()) out << "," << name;
    out << "\n";
    for (const FeatureRecord& rec : records) {
        out << rec.instance_id << "," << rec.size << "," << rec.class_name << ",";
        if (rec.alpha) out << format_sig(*rec.alpha);
        for (double v : rec.features) out << "," << format_sig(v);
        out << "\n";
    }
}

void write_morph_csv(std::ostream& out, const std::vector<MorphRecord>& records) {
    out << "pair_id,alpha,fitness";
    for (const std::string& name : feature_names()) out << "," << name;
    out << "\n";
    for (const MorphRecord& rec : records) {
        out << rec.pair_id << "," << format_sig(rec.alpha) << "," << format_sig(rec.fitness);
        for (double v : rec.features) out << "," << format_sig(v);
        out << "\n";
    }
}

} // namespace tsplab
