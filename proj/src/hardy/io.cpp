#include "hardy/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace hardy {

json point_to_json(const Point& p) {
    json arr = json::array();
    for (const cplx& c : p.coords()) arr.push_back({c.real(), c.imag()});
    return arr;
}

Point point_from_json(const json& j) {
    if (!j.is_array() || j.empty())
        throw std::invalid_argument("point_from_json: expected a non-empty array");
    CVec coords;
    coords.reserve(j.size());
    for (const auto& e : j) {
        if (!e.is_array() || e.size() != 2)
            throw std::invalid_argument("point_from_json: coordinates must be [re, im] pairs");
        coords.emplace_back(e[0].get<double>(), e[1].get<double>());
    }
    return Point(std::move(coords));
}

json sequence_to_json(const PointSequence& s) {
    json j;
    j["n"] = s.dim();
    j["generator"] = s.generator();
    j["params"] = s.params();
    j["min_separation"] = s.min_separation();
    j["flagged"] = s.flagged();
    json pts = json::array();
    for (const Point& p : s.points()) pts.push_back(point_to_json(p));
    j["points"] = pts;
    return j;
}

PointSequence sequence_from_json(const json& j) {
    if (!j.contains("points"))
        throw std::invalid_argument("sequence_from_json: missing 'points'");
    std::vector<Point> pts;
    for (const auto& e : j["points"]) pts.push_back(point_from_json(e));
    return PointSequence(std::move(pts), j.value("generator", std::string("explicit")),
                         j.value("params", std::string("")));
}

PointSequence load_sequence_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open sequence file: " + path);
    json j;
    in >> j;
    return sequence_from_json(j);
}

void save_sequence_json(const PointSequence& s, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write sequence file: " + path);
    out << sequence_to_json(s).dump(2) << "\n";
}

json dual_system_to_json(const DualSystem& ds) {
    json j;
    j["n"] = ds.sequence().dim();
    j["p"] = ds.exponent();
    json pts = json::array();
    for (const Point& p : ds.sequence().points()) pts.push_back(point_to_json(p));
    j["points"] = pts;
    const auto raw = ds.raw_coefficients();
    json coeffs = json::array();
    for (const cplx& c : raw) coeffs.push_back({c.real(), c.imag()});
    j["coefficients"] = coeffs; // row-major, rho_a = sum_b C[a][b] k_b
    j["norms"] = ds.norms();
    j["targets"] = ds.targets();
    j["residual"] = ds.residual();
    j["converged"] = ds.converged();
    j["iterations"] = ds.iterations();
    j["gram_condition"] = ds.gram_condition();
    return j;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char ch : data) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return std::string(buf);
}

CsvWriter::CsvWriter(std::string path, std::vector<std::string> columns)
    : path_(std::move(path)), columns_(std::move(columns)) {}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_.size())
        throw std::invalid_argument("CsvWriter: row width does not match the header");
    if (!header_checked_) {
        header_checked_ = true;
        std::error_code ec;
        const bool fresh = !std::filesystem::exists(path_, ec) ||
                           std::filesystem::file_size(path_, ec) == 0;
        if (fresh) {
            std::ofstream out(path_, std::ios::trunc);
            if (!out) throw std::runtime_error("CsvWriter: cannot open " + path_);
            for (std::size_t i = 0; i < columns_.size(); ++i)
                out << columns_[i] << (i + 1 < columns_.size() ? "," : "\n");
        }
    }
    std::ofstream out(path_, std::ios::app);
    if (!out) throw std::runtime_error("CsvWriter: cannot open " + path_);
    for (std::size_t i = 0; i < cells.size(); ++i)
        out << cells[i] << (i + 1 < cells.size() ? "," : "\n");
}

} // namespace hardy
