#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace nsp::app {

/// Column-major table written as CSV with 17 significant digits.
class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> header);

    void add_row(const std::vector<double>& row);
    std::size_t rows() const { return data_.size(); }
    const std::vector<std::string>& header() const { return header_; }

    void write(const std::filesystem::path& path) const;
    std::string str() const;

private:
    std::vector<std::string> header_;
    std::vector<std::vector<double>> data_;
};

/// %.17g, with nan and inf spelled out.
std::string format_number(double x);

/// Two-column whitespace-separated file. Throws on empty or mismatched input.
void write_dat(const std::filesystem::path& path, const std::vector<double>& x, const std::vector<double>& y,
               const std::string& comment = {});

struct Curve {
    std::string name;
    std::vector<double> x, y;
};

struct Chart {
    std::string title;
    std::string x_label = "t";
    std::string y_label;
    bool log_y = false;
    std::vector<Curve> curves;
    /// Horizontal reference lines (label, value).
    std::vector<std::pair<std::string, double>> hlines;
};

/// Self-contained SVG line chart. On a log axis non-positive samples are
/// dropped.
std::string render_svg(const Chart& chart);
void write_svg(const std::filesystem::path& path, const Chart& chart);

/// Writes a text file, creating parent directories.
void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace nsp::app
