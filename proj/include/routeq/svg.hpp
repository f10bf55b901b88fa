#pragma once

#include <string>
#include <utility>
#include <vector>

namespace routeq {

// Minimal SVG figure emission (scatter, stacked bars, histogram) so reports
// need no external plotting dependency. Figures are informational.
class SvgFigure {
public:
    SvgFigure(int width, int height, std::string title);

    // data coordinates are mapped into the plot area
    void set_range(double xmin, double xmax, double ymin, double ymax);
    void add_scatter(const std::vector<std::pair<double, double>>& points,
                     const std::string& color, double radius = 2.0);
    // bars over categorical x positions 0..n-1; segments stack bottom-up
    void add_stacked_bar(int position, int positions,
                         const std::vector<std::pair<double, std::string>>& segments);
    void add_histogram(const std::vector<double>& bin_heights, double lo, double hi,
                       const std::string& color);
    void axis_labels(const std::string& x, const std::string& y);

    std::string str() const;
    void save(const std::string& path) const;

private:
    double px(double x) const;
    double py(double y) const;
    int w_, h_;
    std::string title_;
    double xmin_ = 0, xmax_ = 1, ymin_ = 0, ymax_ = 1;
    std::string xlabel_, ylabel_;
    std::string body_;
};

}  // namespace routeq
