// io.cpp — CSV and JSON emission

#include "fdd/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fdd/errors.hpp"

namespace fdd::io {

namespace {

std::string format_value(double v) {
    if (!std::isfinite(v)) throw std::logic_error("non-finite value in numeric output");
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

void check_finite(const Json& j) {
    if (j.is_number_float() && !std::isfinite(j.get<double>()))
        throw std::logic_error("non-finite value in JSON output");
    if (j.is_structured())
        for (const auto& v : j) check_finite(v);
}

} // namespace

void CsvTable::add_row(std::vector<double> row) {
    if (row.size() != header.size()) throw std::logic_error("CSV row width differs from header");
    rows.push_back(std::move(row));
}

std::string to_csv(const CsvTable& table) {
    std::vector<bool> is_flag(table.header.size(), false);
    for (std::size_t c = 0; c < table.header.size(); ++c)
        is_flag[c] = std::find(table.flag_columns.begin(), table.flag_columns.end(), table.header[c]) !=
                     table.flag_columns.end();

    std::string out;
    for (std::size_t c = 0; c < table.header.size(); ++c) {
        if (c) out += ',';
        out += table.header[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) throw std::logic_error("CSV row width differs from header");
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) out += ',';
            if (is_flag[c]) {
                if (row[c] != 0.0 && row[c] != 1.0) throw std::logic_error("flag column holds non-binary value");
                out += row[c] != 0.0 ? '1' : '0';
            } else {
                out += format_value(row[c]);
            }
        }
        out += '\n';
    }
    return out;
}

CsvTable parse_csv(const std::string& text, std::vector<std::string> flag_columns) {
    CsvTable table;
    table.flag_columns = std::move(flag_columns);
    std::stringstream ss(text);
    std::string line;
    if (!std::getline(ss, line)) throw IoError("CSV input is empty");
    table.header = split(line);
    while (std::getline(ss, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != table.header.size()) throw IoError("CSV row width differs from header");
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& cell : cells) {
            // strtod rather than stod: subnormal values are valid output.
            char* end = nullptr;
            const double v = std::strtod(cell.c_str(), &end);
            if (cell.empty() || end != cell.c_str() + cell.size() || !std::isfinite(v))
                throw IoError("malformed CSV number '" + cell + "'");
            row.push_back(v);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("write to " + path.string() + " failed");
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit_csv(const CsvTable& table, const std::filesystem::path& path) { write_text(path, to_csv(table)); }

CsvTable read_csv(const std::filesystem::path& path, std::vector<std::string> flag_columns) {
    return parse_csv(read_text(path), std::move(flag_columns));
}

Json matrix_to_json(const Matrix& m) {
    Json re = Json::array(), im = Json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            re.push_back(m(r, c).real());
            im.push_back(m(r, c).imag());
        }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

Json real_matrix_to_json(const Eigen::MatrixXd& m) { return matrix_to_json(m.cast<cd>()); }

Matrix matrix_from_json(const Json& j) {
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto& re = j.at("re");
    const auto& im = j.at("im");
    if (rows < 0 || cols < 0 || re.size() != static_cast<std::size_t>(rows * cols) || im.size() != re.size())
        throw IoError("matrix dimensions do not match stored data");
    Matrix m(rows, cols);
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c, ++k) m(r, c) = cd(re[k].get<double>(), im[k].get<double>());
    return m;
}

Json make_bundle(const std::string& task, const Json& inputs) {
    return Json{{"schema_version", schema_version}, {"version", version}, {"task", task},
                {"inputs", inputs}, {"outputs", Json::object()}};
}

void emit_json(const Json& bundle, const std::filesystem::path& path) {
    check_finite(bundle);
    write_text(path, bundle.dump(2) + "\n");
}

} // namespace fdd::io
