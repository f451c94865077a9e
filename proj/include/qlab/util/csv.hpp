#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "qlab/errors.hpp"

namespace qlab {

/// CSV writer with the repository's fixed conventions: header row, comma
/// separators, 17-significant-digit floats, LF line endings.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    CsvWriter& field(const std::string& value);
    CsvWriter& field(double value);
    CsvWriter& field(int value);
    CsvWriter& field(long long value);
    void end_row();

    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
    std::size_t current_ = 0;

    void separator();
};

/// "%.17g" formatting used everywhere a float is serialized.
std::string format_float(double value);

}  // namespace qlab
