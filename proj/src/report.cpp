#include "nlg/report.hpp"

#include "nlg/errors.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace nlg {

std::string format_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

void CsvTable::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns_.size())
        throw ArgumentError("CSV row has " + std::to_string(cells.size()) + " cells, expected " +
                            std::to_string(columns_.size()));
    rows_.push_back(std::move(cells));
}

namespace {

std::string csv_cell(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

}  // namespace

std::string CsvTable::str() const {
    std::ostringstream os;
    for (const auto& [k, v] : meta_) os << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << csv_cell(columns_[i]);
    os << '\n';
    for (const auto& row : rows_) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
        os << '\n';
    }
    return os.str();
}

namespace {

constexpr double kWidth = 800.0, kHeight = 600.0;
constexpr double kLeft = 80.0, kRight = 190.0, kTop = 50.0, kBottom = 60.0;

constexpr std::array<const char*, 12> kPalette{
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b",
    "#e377c2", "#7f7f7f", "#bcbd22", "#17becf", "#393b79", "#637939",
};

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string comment_safe(std::string s) {
    for (std::size_t p; (p = s.find("--")) != std::string::npos;) s.replace(p, 2, "- ");
    return s;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << v;
    return os.str();
}

}  // namespace

std::string render_svg(const Plot& plot) {
    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    auto take_y = [&](double y) {
        if (plot.log_y && !(y > 0.0)) return;
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
    };
    for (const auto& s : plot.series)
        for (const auto& [x, y] : s.points) {
            x_lo = std::min(x_lo, x);
            x_hi = std::max(x_hi, x);
            take_y(y);
        }
    for (const auto& h : plot.hlines) take_y(h.y);
    if (!std::isfinite(x_lo)) x_lo = 0.0, x_hi = 1.0;
    if (!std::isfinite(y_lo)) y_lo = plot.log_y ? 1e-3 : 0.0, y_hi = 1.0;
    if (x_hi <= x_lo) x_hi = x_lo + 1.0;

    auto ty = [&](double y) { return plot.log_y ? std::log10(std::max(y, 1e-300)) : y; };
    double ylo = ty(y_lo), yhi = ty(y_hi);
    if (plot.log_y) {
        ylo = std::floor(std::max(ylo, -30.0));
        yhi = std::ceil(yhi);
    }
    if (yhi <= ylo) yhi = ylo + 1.0;

    const double pw = kWidth - kLeft - kRight, ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - x_lo) / (x_hi - x_lo) * pw; };
    auto py = [&](double y) {
        const double t = std::clamp((ty(y) - ylo) / (yhi - ylo), 0.0, 1.0);
        return kTop + (1.0 - t) * ph;
    };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 800 600\" width=\"800\" height=\"600\" "
          "font-family=\"sans-serif\" font-size=\"12\">\n"
       << "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n"
       << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"28\" text-anchor=\"middle\" font-size=\"16\">"
       << xml_escape(plot.title) << "</text>\n"
       << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw)
       << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"black\"/>\n";

    // axes ticks
    for (int i = 0; i <= 10; ++i) {
        const double x = x_lo + (x_hi - x_lo) * i / 10.0;
        os << "<line x1=\"" << num(px(x)) << "\" y1=\"" << num(kTop + ph) << "\" x2=\"" << num(px(x))
           << "\" y2=\"" << num(kTop + ph + 5) << "\" stroke=\"black\"/>"
           << "<text x=\"" << num(px(x)) << "\" y=\"" << num(kTop + ph + 20)
           << "\" text-anchor=\"middle\">" << format_double(std::round(x * 1000) / 1000) << "</text>\n";
    }
    const int yticks = plot.log_y ? static_cast<int>(yhi - ylo) : 10;
    const int ystride = std::max(1, yticks / 10);
    for (int i = 0; i <= yticks; i += ystride) {
        const double t = ylo + (yhi - ylo) * i / yticks;
        const double y = plot.log_y ? std::pow(10.0, t) : t;
        const std::string label = plot.log_y ? "1e" + std::to_string(static_cast<int>(std::lround(t)))
                                             : format_double(std::round(t * 1000) / 1000);
        os << "<line x1=\"" << num(kLeft - 5) << "\" y1=\"" << num(py(y)) << "\" x2=\"" << num(kLeft)
           << "\" y2=\"" << num(py(y)) << "\" stroke=\"black\"/>"
           << "<text x=\"" << num(kLeft - 8) << "\" y=\"" << num(py(y) + 4)
           << "\" text-anchor=\"end\">" << label << "</text>\n";
    }
    os << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 15)
       << "\" text-anchor=\"middle\">" << xml_escape(plot.x_label) << "</text>\n"
       << "<text transform=\"translate(20," << num(kTop + ph / 2)
       << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(plot.y_label) << "</text>\n";

    for (const auto& h : plot.hlines) {
        if (plot.log_y && !(h.y > 0.0)) continue;
        os << "<line x1=\"" << num(kLeft) << "\" y1=\"" << num(py(h.y)) << "\" x2=\"" << num(kLeft + pw)
           << "\" y2=\"" << num(py(h.y)) << "\" stroke=\"#555\" stroke-dasharray=\"6,4\"/>"
           << "<text x=\"" << num(kLeft + pw - 4) << "\" y=\"" << num(py(h.y) - 4)
           << "\" text-anchor=\"end\" fill=\"#555\">" << xml_escape(h.label) << "</text>\n";
    }

    for (std::size_t k = 0; k < plot.series.size(); ++k) {
        const auto& s = plot.series[k];
        const char* colour = kPalette[k % kPalette.size()];
        for (const auto& [x, y] : s.points)
            os << "<!-- data: " << comment_safe(s.label) << ',' << format_double(x) << ','
               << format_double(y) << " -->\n";
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : s.points) os << num(px(x)) << ',' << num(py(y)) << ' ';
        os << "\"/>\n";
        const double ly = kTop + 14.0 + 18.0 * static_cast<double>(k);
        os << "<line x1=\"" << num(kWidth - kRight + 12) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
           << num(kWidth - kRight + 32) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << colour
           << "\" stroke-width=\"2\"/><text x=\"" << num(kWidth - kRight + 38) << "\" y=\"" << num(ly)
           << "\">" << xml_escape(s.label) << "</text>\n";
    }

    for (const auto& m : plot.markers) {
        os << "<!-- marker: " << comment_safe(m.label) << ',' << format_double(m.x) << ','
           << format_double(m.y) << " -->\n"
           << "<circle cx=\"" << num(px(m.x)) << "\" cy=\"" << num(py(m.y))
           << "\" r=\"4\" fill=\"none\" stroke=\"black\"/>"
           << "<text x=\"" << num(px(m.x) + 6) << "\" y=\"" << num(py(m.y) - 6) << "\" font-size=\"10\">"
           << xml_escape(m.label) << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ArgumentError("cannot write " + path.string());
    out << content;
}

}  // namespace nlg
