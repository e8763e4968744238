#pragma once

#include <stdexcept>
#include <string>

namespace fxhedge {

// Calibration failures.
struct NonMeanReverting : std::runtime_error {
    explicit NonMeanReverting(const std::string& msg) : std::runtime_error(msg) {}
};
struct DegenerateSeries : std::runtime_error {
    explicit DegenerateSeries(const std::string& msg) : std::runtime_error(msg) {}
};

// Curve/tenor access outside the pillar range.
struct TenorOutOfRange : std::out_of_range {
    explicit TenorOutOfRange(const std::string& msg) : std::out_of_range(msg) {}
};

struct EmptyHistory : std::invalid_argument {
    explicit EmptyHistory(const std::string& msg) : std::invalid_argument(msg) {}
};

// Ledger left off the 100% hedge ratio by a fully-hedged allocation.
struct HedgeRatioViolation : std::logic_error {
    explicit HedgeRatioViolation(const std::string& msg) : std::logic_error(msg) {}
};

// A replay month has no forward curve.
struct DataGap : std::runtime_error {
    explicit DataGap(const std::string& msg) : std::runtime_error(msg) {}
};

// CSV ingestion problem; message carries the offending line number.
struct CsvError : std::runtime_error {
    CsvError(const std::string& file, long line, const std::string& msg)
        : std::runtime_error(file + ":" + std::to_string(line) + ": " + msg) {}
};

} // namespace fxhedge
