#ifndef HARDY_IO_HPP
#define HARDY_IO_HPP

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "hardy/dual_system.hpp"
#include "hardy/geometry.hpp"
#include "hardy/sequences.hpp"

namespace hardy {

using json = nlohmann::json;

/// Points serialize as arrays of [re, im] pairs.
json point_to_json(const Point& p);
Point point_from_json(const json& j);

json sequence_to_json(const PointSequence& s);
PointSequence sequence_from_json(const json& j);
PointSequence load_sequence_json(const std::string& path);
void save_sequence_json(const PointSequence& s, const std::string& path);

json dual_system_to_json(const DualSystem& ds);

/// FNV-1a of the canonical dump, for the config-hash column.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

/// Shortest round-tripping decimal form; identical across runs.
std::string format_double(double v);

/// Appends rows to a CSV file, writing the header first when the file is new
/// or empty. All doubles go through format_double.
class CsvWriter {
public:
    CsvWriter(std::string path, std::vector<std::string> columns);
    void row(const std::vector<std::string>& cells);
    const std::string& path() const { return path_; }

private:
    std::string path_;
    std::vector<std::string> columns_;
    bool header_checked_ = false;
};

} // namespace hardy

#endif
