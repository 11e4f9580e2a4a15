#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace mcas {

// Write-to-temp-then-rename; partial outputs never appear under the
// final name.
void atomic_write_text(const std::string& path, const std::string& content);

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::uint64_t fnv1a64(const std::string& s);

// One CSV cell with 17 significant digits ('.' decimal), lossless for
// 64-bit floats.
std::string csv_number(double v);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::string to_string() const;
};

}  // namespace mcas
