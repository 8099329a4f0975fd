#pragma once

#include <cstdint>
#include <vector>

namespace kerrchaos {

/// Real indicator values indexed by pulse number; values[i] belongs to
/// n = start_index + i.
struct TimeSeries {
    std::vector<double> values;
    std::int64_t start_index = 0;

    std::int64_t end_index() const {
        return start_index + static_cast<std::int64_t>(values.size()) - 1;
    }
    double at_pulse(std::int64_t n) const {
        return values.at(static_cast<std::size_t>(n - start_index));
    }
};

}  // namespace kerrchaos
