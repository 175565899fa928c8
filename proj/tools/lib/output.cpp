#include "nsp_app/output.hpp"

#include "nsp/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace nsp::app {

std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_text(const std::filesystem::path& path, const std::string& text)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header))
{
    if (header_.empty()) throw InvalidArgument("CSV table needs at least one column");
}

void CsvTable::add_row(const std::vector<double>& row)
{
    if (row.size() != header_.size()) throw InvalidArgument("CSV row width does not match the header");
    data_.push_back(row);
}

std::string CsvTable::str() const
{
    std::string s;
    for (std::size_t j = 0; j < header_.size(); ++j) {
        if (j) s += ',';
        s += header_[j];
    }
    s += '\n';
    for (const auto& row : data_) {
        for (std::size_t j = 0; j < row.size(); ++j) {
            if (j) s += ',';
            s += format_number(row[j]);
        }
        s += '\n';
    }
    return s;
}

void CsvTable::write(const std::filesystem::path& path) const { write_text(path, str()); }

void write_dat(const std::filesystem::path& path, const std::vector<double>& x, const std::vector<double>& y,
               const std::string& comment)
{
    if (x.empty()) throw InvalidArgument("write_dat: empty series");
    if (x.size() != y.size()) throw InvalidArgument("write_dat: columns differ in length");
    std::string s;
    if (!comment.empty()) s += "# " + comment + "\n";
    for (std::size_t i = 0; i < x.size(); ++i) s += format_number(x[i]) + " " + format_number(y[i]) + "\n";
    write_text(path, s);
}

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string escape(const std::string& s)
{
    std::string o;
    for (char c : s) {
        switch (c) {
        case '<': o += "&lt;"; break;
        case '>': o += "&gt;"; break;
        case '&': o += "&amp;"; break;
        default: o += c;
        }
    }
    return o;
}

std::string tick(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

}  // namespace

std::string render_svg(const Chart& chart)
{
    if (chart.curves.empty()) throw InvalidArgument("render_svg: no curves");
    auto ty = [&](double y) { return chart.log_y ? std::log10(y) : y; };
    auto usable = [&](double y) { return std::isfinite(y) && (!chart.log_y || y > 0.0); };

    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    std::size_t points = 0;
    for (const auto& c : chart.curves) {
        if (c.x.size() != c.y.size()) throw InvalidArgument("render_svg: curve '" + c.name + "' has mismatched columns");
        for (std::size_t i = 0; i < c.x.size(); ++i) {
            if (!usable(c.y[i]) || !std::isfinite(c.x[i])) continue;
            x0 = std::min(x0, c.x[i]);
            x1 = std::max(x1, c.x[i]);
            y0 = std::min(y0, ty(c.y[i]));
            y1 = std::max(y1, ty(c.y[i]));
            ++points;
        }
    }
    for (const auto& [label, v] : chart.hlines)
        if (usable(v)) {
            y0 = std::min(y0, ty(v));
            y1 = std::max(y1, ty(v));
        }
    if (points == 0) throw InvalidArgument("render_svg: no plottable samples");
    if (x1 == x0) x1 = x0 + 1.0;
    if (y1 == y0) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const double pad = 0.05 * (y1 - y0);
    y0 -= pad;
    y1 += pad;

    const double W = 720, H = 440, L = 80, R = 160, T = 40, B = 50;
    auto px = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
    auto py = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << " " << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << escape(chart.title)
      << "</text>\n";
    s << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
      << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 5; ++k) {
        const double xv = x0 + (x1 - x0) * k / 5.0, yv = y0 + (y1 - y0) * k / 5.0;
        s << "<text x=\"" << px(xv) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << tick(xv)
          << "</text>\n";
        s << "<text x=\"" << L - 6 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\">"
          << (chart.log_y ? "1e" + tick(yv) : tick(yv)) << "</text>\n";
        s << "<line x1=\"" << L << "\" x2=\"" << W - R << "\" y1=\"" << py(yv) << "\" y2=\"" << py(yv)
          << "\" stroke=\"#ddd\"/>\n";
    }
    s << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">" << escape(chart.x_label)
      << "</text>\n";
    s << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << (T + H - B) / 2 << ")\">" << escape(chart.y_label) << (chart.log_y ? " (log10)" : "") << "</text>\n";

    std::size_t legend = 0;
    for (std::size_t ci = 0; ci < chart.curves.size(); ++ci, ++legend) {
        const auto& c = chart.curves[ci];
        const char* color = kColors[ci % 6];
        s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < c.x.size(); ++i)
            if (usable(c.y[i]) && std::isfinite(c.x[i])) s << px(c.x[i]) << "," << py(ty(c.y[i])) << " ";
        s << "\"/>\n";
        s << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 14 + 16 * legend << "\" fill=\"" << color << "\">"
          << escape(c.name) << "</text>\n";
    }
    for (const auto& [label, v] : chart.hlines) {
        if (!usable(v)) continue;
        s << "<line x1=\"" << L << "\" x2=\"" << W - R << "\" y1=\"" << py(ty(v)) << "\" y2=\"" << py(ty(v))
          << "\" stroke=\"black\" stroke-dasharray=\"6,4\"/>\n";
        s << "<text x=\"" << W - R + 10 << "\" y=\"" << T + 14 + 16 * legend++ << "\">" << escape(label)
          << "</text>\n";
    }
    s << "</svg>\n";
    return s.str();
}

void write_svg(const std::filesystem::path& path, const Chart& chart) { write_text(path, render_svg(chart)); }

}  // namespace nsp::app
