#include "qjump/output.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qjump/errors.hpp"

namespace qjump {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
}

namespace {

std::string render_csv(const Table& table) {
    std::string out;
    for (const auto& [k, v] : table.metadata) {
        out += "# ";
        out += k;
        out += "=";
        out += v;
        out += "\n";
    }
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        if (i) out += ",";
        out += table.columns[i];
    }
    out += "\n";
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ",";
            out += format_double(row[i]);
        }
        out += "\n";
    }
    return out;
}

std::string render_json(const Table& table) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    for (const auto& [k, v] : table.metadata) meta[k] = v;
    j["metadata"] = std::move(meta);
    j["columns"] = table.columns;
    j["rows"] = table.rows;
    return j.dump(1) + "\n";
}

Table parse_csv(const std::string& text) {
    Table table;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::string body = line.substr(1);
            if (!body.empty() && body[0] == ' ') body.erase(0, 1);
            const auto eq = body.find('=');
            if (eq != std::string::npos)
                table.metadata.emplace_back(body.substr(0, eq), body.substr(eq + 1));
            continue;
        }
        std::stringstream ss(line);
        std::string cell;
        if (!have_header) {
            while (std::getline(ss, cell, ',')) table.columns.push_back(cell);
            have_header = true;
            continue;
        }
        std::vector<double> row;
        while (std::getline(ss, cell, ',')) {
            // strtod instead of stod: subnormal tail probabilities must
            // parse back instead of raising out_of_range
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (end == cell.c_str())
                throw NumericalError("csv parse: bad number '" + cell + "'");
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    if (!have_header) throw NumericalError("csv parse: missing column header");
    return table;
}

Table parse_json(const std::string& text) {
    Table table;
    const auto j = nlohmann::ordered_json::parse(text);
    for (const auto& [k, v] : j.at("metadata").items())
        table.metadata.emplace_back(k, v.get<std::string>());
    table.columns = j.at("columns").get<std::vector<std::string>>();
    table.rows = j.at("rows").get<std::vector<std::vector<double>>>();
    return table;
}

} // namespace

std::string render_table(const Table& table, OutputFormat format) {
    return format == OutputFormat::Csv ? render_csv(table) : render_json(table);
}

void write_table(const Table& table, const std::string& path, OutputFormat format) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output path: " + path);
    out << render_table(table, format);
    if (!out) throw ConfigError("failed writing output file: " + path);
}

Table read_table_text(const std::string& text) {
    if (text.empty()) throw NumericalError("cannot parse empty result file");
    return text[0] == '{' ? parse_json(text) : parse_csv(text);
}

Table read_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open result file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return read_table_text(ss.str());
}

} // namespace qjump
