#pragma once

#include <compare>
#include <cstddef>
#include <string>
#include <vector>

namespace tda {

struct Interval {
    double birth = 0.0;
    double death = 0.0;

    double length() const { return death - birth; }
    auto operator<=>(const Interval&) const = default;
};

// Finite multiset of intervals [birth, death) with birth < death, kept in
// canonical (birth, death) order so equality is multiset equality.
struct Barcode {
    std::vector<Interval> intervals;

    Barcode() = default;
    explicit Barcode(std::vector<Interval> bars);

    std::size_t size() const { return intervals.size(); }
    bool empty() const { return intervals.empty(); }
    bool operator==(const Barcode&) const = default;
    auto operator<=>(const Barcode&) const = default;
};

// [a,b) -> [min(a,c), min(b,c)), dropping empty results.
Barcode truncate(const Barcode& barcode, double cutoff);

// g_m: length of the m-th longest interval minus the (m+1)-th longest
// (missing intervals count as length 0); m is 1-based.
double gap_statistic(const Barcode& barcode, std::size_t m);

// Number of intervals (with multiplicity) longer than threshold.
std::size_t long_bar_count(const Barcode& barcode, double threshold);

// JSON {"intervals": [[a,b], ...]}; text one "a b" pair per line.
// Doubles use shortest round-trip decimal form, so round-trips are
// bit-exact on canonical barcodes.
std::string to_json(const Barcode& barcode);
Barcode barcode_from_json(const std::string& text);
std::string to_text(const Barcode& barcode);
Barcode barcode_from_text(const std::string& text);

} // namespace tda
