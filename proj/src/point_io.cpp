#include "tda/point_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tda {

namespace {

std::vector<double> parse_csv_row(const std::string& line, std::size_t lineno) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(cell, &pos);
        } catch (const std::exception&) {
            throw std::runtime_error("parse failure at line " + std::to_string(lineno));
        }
        while (pos < cell.size() && std::isspace(static_cast<unsigned char>(cell[pos])))
            ++pos;
        if (pos != cell.size())
            throw std::runtime_error("parse failure at line " + std::to_string(lineno));
        row.push_back(v);
    }
    return row;
}

} // namespace

PointCloud load_point_cloud(const std::string& path, PointFormat format,
                            bool skip_header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    PointCloud points;
    if (format == PointFormat::Csv) {
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (skip_header && lineno == 1) continue;
            if (line.empty() || line == "\r") continue;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            points.push_back(parse_csv_row(line, lineno));
        }
    } else {
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw std::runtime_error("JSON parse failure in " + path + ": " + e.what());
        }
        if (!j.is_array()) throw std::runtime_error("expected a JSON array of points");
        for (const auto& row : j) {
            if (!row.is_array()) throw std::runtime_error("expected array rows");
            std::vector<double> p;
            for (const auto& v : row) {
                if (!v.is_number()) throw std::runtime_error("non-numeric coordinate");
                p.push_back(v.get<double>());
            }
            points.push_back(std::move(p));
        }
    }
    if (points.empty()) throw std::runtime_error("no points in " + path);
    const std::size_t dim = points[0].size();
    for (const auto& p : points)
        if (p.size() != dim) throw std::runtime_error("ragged rows in " + path);
    return points;
}

void save_point_cloud(const std::string& path, const PointCloud& points,
                      PointFormat format) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    if (format == PointFormat::Csv) {
        for (const auto& p : points) {
            for (std::size_t d = 0; d < p.size(); ++d) {
                if (d) out << ',';
                // shortest representation that round-trips the double
                out << nlohmann::json(p[d]).dump();
            }
            out << '\n';
        }
    } else {
        out << nlohmann::json(points).dump() << '\n';
    }
    if (!out) throw std::runtime_error("write failure for " + path);
}

} // namespace tda
