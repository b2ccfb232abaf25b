#include "tsplab/io.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace tsplab {

std::string format_sig(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

} // namespace

void write_tsplib(const Instance& inst, std::ostream& out) {
    out << "NAME : " << (inst.name.empty() ? "unnamed" : inst.name) << "\n";
    out << "TYPE : TSP\n";
    out << "DIMENSION : " << inst.size() << "\n";
    out << "EDGE_WEIGHT_TYPE : EUC_2D\n";
    out << "NODE_COORD_SECTION\n";
    for (int i = 0; i < inst.size(); ++i) {
        out << (i + 1) << " " << format_sig(inst.points[i].x) << " "
            << format_sig(inst.points[i].y) << "\n";
    }
    out << "EOF\n";
}

Instance read_tsplib(std::istream& in) {
    Instance inst;
    int dim = -1;
    bool have_coords = false;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty()) continue;
        if (line == "EOF") break;
        if (line == "NODE_COORD_SECTION") {
            if (dim <= 0) throw std::runtime_error("NODE_COORD_SECTION before DIMENSION");
            inst.points.assign(dim, Point{0.0, 0.0});
            std::vector<bool> seen(dim, false);
            for (int k = 0; k < dim; ++k) {
                int idx;
                double x, y;
                if (!(in >> idx >> x >> y))
                    throw std::runtime_error("malformed node coordinate line");
                if (idx < 1 || idx > dim)
                    throw std::runtime_error("node index out of range: " + std::to_string(idx));
                if (seen[idx - 1])
                    throw std::runtime_error("duplicate node index: " + std::to_string(idx));
                seen[idx - 1] = true;
                inst.points[idx - 1] = Point{x, y};
            }
            have_coords = true;
            continue;
        }
        const std::size_t colon = line.find(':');
        if (colon == std::string::npos)
            throw std::runtime_error("unrecognized line: " + line);
        const std::string key = trim(line.substr(0, colon));
        const std::string value = trim(line.substr(colon + 1));
        if (key == "NAME") {
            inst.name = value;
        } else if (key == "TYPE") {
            if (value != "TSP") throw std::runtime_error("unsupported TYPE: " + value);
        } else if (key == "DIMENSION") {
            try {
                dim = std::stoi(value);
            } catch (const std::exception&) {
                throw std::runtime_error("bad DIMENSION: " + value);
            }
            if (dim <= 0) throw std::runtime_error("bad DIMENSION: " + value);
        } else if (key == "EDGE_WEIGHT_TYPE") {
            if (value != "EUC_2D")
                throw std::runtime_error("unsupported EDGE_WEIGHT_TYPE: " + value);
        }
        // COMMENT and any other header keys are ignored.
    }
    if (!have_coords) throw std::runtime_error("missing NODE_COORD_SECTION");
    return inst;
}

void write_tsplib_file(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_tsplib(inst, out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

Instance read_tsplib_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    try {
        return read_tsplib(in);
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

nlohmann::json instance_to_json(const Instance& inst, nlohmann::json meta) {
    nlohmann::json points = nlohmann::json::array();
    for (const Point& p : inst.points) points.push_back({p.x, p.y});
    return nlohmann::json{{"name", inst.name}, {"points", std::move(points)},
                          {"meta", std::move(meta)}};
}

Instance instance_from_json(const nlohmann::json& j) {
    Instance inst;
    inst.name = j.value("name", std::string{});
    if (!j.contains("points") || !j["points"].is_array())
        throw std::runtime_error("instance JSON lacks a points array");
    for (const auto& e : j["points"]) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw std::runtime_error("instance JSON point is not a [x, y] pair");
        inst.points.push_back(Point{e[0].get<double>(), e[1].get<double>()});
    }
    return inst;
}

void write_json_file(const Instance& inst, const std::string& path, nlohmann::json meta) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << instance_to_json(inst, std::move(meta)).dump(2) << "\n";
    if (!out) throw std::runtime_error("write failed: " + path);
}

Instance read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    try {
        return instance_from_json(nlohmann::json::parse(in));
    } catch (const std::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

namespace {

bool has_json_extension(const std::string& path) {
    if (path.size() < 5) return false;
    std::string ext = path.substr(path.size() - 5);
    for (char& c : ext) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return ext == ".json";
}

} // namespace

Instance read_instance_file(const std::string& path) {
    return has_json_extension(path) ? read_json_file(path) : read_tsplib_file(path);
}

void write_instance_file(const Instance& inst, const std::string& path) {
    if (has_json_extension(path))
        write_json_file(inst, path);
    else
        write_tsplib_file(inst, path);
}

} // namespace tsplab
