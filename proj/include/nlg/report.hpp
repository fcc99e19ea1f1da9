#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace nlg {

// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

class CsvTable {
public:
    explicit CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void meta(const std::string& key, const std::string& value) { meta_.emplace_back(key, value); }
    void add_row(std::vector<std::string> cells);

    const std::vector<std::string>& columns() const noexcept { return columns_; }
    const std::vector<std::pair<std::string, std::string>>& metadata() const noexcept { return meta_; }
    const std::vector<std::vector<std::string>>& rows() const noexcept { return rows_; }
    std::string str() const;

private:
    std::vector<std::pair<std::string, std::string>> meta_;
    std::vector<std::string> columns_;
    std::vector<std::vector<std::string>> rows_;
};

struct PlotSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

struct PlotLine {
    double y;
    std::string label;
};

struct PlotMarker {
    double x;
    double y;
    std::string label;
};

struct Plot {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::vector<PlotSeries> series;
    std::vector<PlotLine> hlines;
    std::vector<PlotMarker> markers;
};

// Standalone SVG, 800x600 viewBox. Every plotted point is echoed in a
// "<!-- data: label,x,y -->" comment.
std::string render_svg(const Plot& plot);

void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace nlg
