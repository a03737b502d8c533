#ifndef QJUMP_OUTPUT_HPP
#define QJUMP_OUTPUT_HPP

#include <string>
#include <utility>
#include <vector>

#include "qjump/config.hpp"

namespace qjump {

// One emitted result file: `# key=value` metadata lines, a column header,
// then numeric rows. Values are written with 17 significant digits so a
// reparse reproduces the series exactly.
struct Table {
    std::vector<std::pair<std::string, std::string>> metadata;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string format_double(double v);

std::string render_table(const Table& table, OutputFormat format);
void write_table(const Table& table, const std::string& path, OutputFormat format);

// Reparses a rendered file (format detected from the first byte).
Table read_table_text(const std::string& text);
Table read_table(const std::string& path);

} // namespace qjump

#endif
