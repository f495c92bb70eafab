// io.hpp — Deterministic CSV tables and JSON result bundles

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "fdd/linalg.hpp"

namespace fdd::io {

using Json = nlohmann::ordered_json;

inline constexpr const char* version = "0.1.0";
inline constexpr int schema_version = 1;

// Numeric table; columns listed in `flag_columns` hold 0/1 and are written as integers.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
    std::vector<std::string> flag_columns;

    void add_row(std::vector<double> row);
};

// Scientific notation with 17 significant digits, LF line endings, header row.
// Throws std::logic_error on a non-finite value.
std::string to_csv(const CsvTable& table);
CsvTable parse_csv(const std::string& text, std::vector<std::string> flag_columns = {});

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

void emit_csv(const CsvTable& table, const std::filesystem::path& path);
CsvTable read_csv(const std::filesystem::path& path, std::vector<std::string> flag_columns = {});

// {"rows", "cols", "re", "im"} with row-major data.
Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j);
Json real_matrix_to_json(const Eigen::MatrixXd& m);

// New bundle with schema and version fields filled in.
Json make_bundle(const std::string& task, const Json& inputs);

// Pretty-printed with a trailing newline. Throws std::logic_error on non-finite numbers.
void emit_json(const Json& bundle, const std::filesystem::path& path);

} // namespace fdd::io
