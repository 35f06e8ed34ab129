#ifndef AFFECT_CORE_CSV_HPP
#define AFFECT_CORE_CSV_HPP

#include <string>
#include <vector>

namespace affect {

// Minimal comma-separated text handling. The project's file formats never
// quote commas inside fields.
std::vector<std::string> split_csv_line(const std::string& line);
std::string join_csv(const std::vector<std::string>& fields);

// Full-precision decimal text; round-trips a double exactly.
std::string format_double(double v);

std::vector<std::string> read_lines(const std::string& path);
void write_lines(const std::string& path, const std::vector<std::string>& lines);

} // namespace affect

#endif
