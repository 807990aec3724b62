#include "tda/barcode.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace tda {

Barcode::Barcode(std::vector<Interval> bars) : intervals(std::move(bars)) {
    for (const auto& bar : intervals) {
        if (bar.birth < 0.0) throw std::invalid_argument("negative birth");
        if (!(bar.birth < bar.death)) throw std::invalid_argument("empty interval");
    }
    std::sort(intervals.begin(), intervals.end());
}

Barcode truncate(const Barcode& barcode, double cutoff) {
    if (cutoff <= 0.0) throw std::invalid_argument("cutoff must be positive");
    std::vector<Interval> out;
    out.reserve(barcode.size());
    for (const auto& bar : barcode.intervals) {
        const double birth = std::min(bar.birth, cutoff);
        const double death = std::min(bar.death, cutoff);
        if (birth < death) out.push_back({birth, death});
    }
    return Barcode(std::move(out));
}

double gap_statistic(const Barcode& barcode, std::size_t m) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    std::vector<double> lengths;
    lengths.reserve(barcode.size());
    for (const auto& bar : barcode.intervals) lengths.push_back(bar.length());
    std::sort(lengths.begin(), lengths.end(), std::greater<>());
    auto nth = [&](std::size_t i) {  // 1-based, 0 beyond the end
        return i <= lengths.size() ? lengths[i - 1] : 0.0;
    };
    return nth(m) - nth(m + 1);
}

std::size_t long_bar_count(const Barcode& barcode, double threshold) {
    if (threshold < 0.0) throw std::invalid_argument("negative threshold");
    std::size_t count = 0;
    for (const auto& bar : barcode.intervals)
        if (bar.length() > threshold) ++count;
    return count;
}

std::string to_json(const Barcode& barcode) {
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& bar : barcode.intervals)
        pairs.push_back({bar.birth, bar.death});
    return nlohmann::json{{"intervals", pairs}}.dump();
}

Barcode barcode_from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    std::vector<Interval> bars;
    for (const auto& pair : j.at("intervals")) {
        if (!pair.is_array() || pair.size() != 2)
            throw std::invalid_argument("interval must be a pair");
        bars.push_back({pair[0].get<double>(), pair[1].get<double>()});
    }
    return Barcode(std::move(bars));
}

std::string to_text(const Barcode& barcode) {
    std::ostringstream out;
    for (const auto& bar : barcode.intervals)
        out << nlohmann::json(bar.birth).dump() << ' '
            << nlohmann::json(bar.death).dump() << '\n';
    return out.str();
}

Barcode barcode_from_text(const std::string& text) {
    std::istringstream in(text);
    std::vector<Interval> bars;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        double a = 0.0, b = 0.0;
        if (!(row >> a >> b)) throw std::invalid_argument("bad barcode line: " + line);
        bars.push_back({a, b});
    }
    return Barcode(std::move(bars));
}

} // namespace tda
