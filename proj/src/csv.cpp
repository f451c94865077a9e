#include "qlab/util/csv.hpp"

#include <cstdio>

namespace qlab {

std::string format_float(double value) {
    if (value == 0.0) value = 0.0;  // write negative zero as 0
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), columns_(header.size()) {
    out_.open(path, std::ios::binary);  // binary keeps LF endings everywhere
    if (!out_) throw IoError("cannot open " + path.string() + " for writing");
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i > 0) out_ << ',';
        out_ << header[i];
    }
    out_ << '\n';
}

void CsvWriter::separator() {
    if (current_ > 0) out_ << ',';
    ++current_;
    if (current_ > columns_) throw IoError("csv row wider than header in " + path_.string());
}

CsvWriter& CsvWriter::field(const std::string& value) {
    separator();
    out_ << value;
    return *this;
}

CsvWriter& CsvWriter::field(double value) {
    separator();
    out_ << format_float(value);
    return *this;
}

CsvWriter& CsvWriter::field(int value) {
    separator();
    out_ << value;
    return *this;
}

CsvWriter& CsvWriter::field(long long value) {
    separator();
    out_ << value;
    return *this;
}

void CsvWriter::end_row() {
    if (current_ != columns_) throw IoError("csv row narrower than header in " + path_.string());
    out_ << '\n';
    current_ = 0;
    if (!out_) throw IoError("write failure on " + path_.string());
}

}  // namespace qlab
