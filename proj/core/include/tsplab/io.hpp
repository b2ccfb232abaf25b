#pragma once

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "tsplab/instance.hpp"

namespace tsplab {

/// Shortest decimal form with 9 significant digits ("%.9g"). All text output
/// (TSPLIB coordinates, CSV cells) goes through this so files are stable
/// across platforms.
std::string format_sig(double v);

/// TSPLIB subset: NAME, TYPE TSP, DIMENSION, EDGE_WEIGHT_TYPE EUC_2D,
/// NODE_COORD_SECTION with 1-based indices, EOF. Distances are NOT rounded to
/// integers on read; coordinates are kept as written.
void write_tsplib(const Instance& inst, std::ostream& out);
Instance read_tsplib(std::istream& in);
void write_tsplib_file(const Instance& inst, const std::string& path);
Instance read_tsplib_file(const std::string& path);

/// Native format: { "name": str, "points": [[x,y],...], "meta": {...} }.
nlohmann::json instance_to_json(const Instance& inst,
                                nlohmann::json meta = nlohmann::json::object());
Instance instance_from_json(const nlohmann::json& j);
void write_json_file(const Instance& inst, const std::string& path,
                     nlohmann::json meta = nlohmann::json::object());
Instance read_json_file(const std::string& path);

/// Dispatch on extension: ".json" is native, everything else TSPLIB.
Instance read_instance_file(const std::string& path);
void write_instance_file(const Instance& inst, const std::string& path);

} // namespace tsplab
