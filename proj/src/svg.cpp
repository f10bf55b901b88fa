#include "routeq/svg.hpp"

#include <fstream>
#include <sstream>

namespace routeq {

namespace {
constexpr int kMarginLeft = 60;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;
}  // namespace

SvgFigure::SvgFigure(int width, int height, std::string title)
    : w_(width), h_(height), title_(std::move(title)) {}

void SvgFigure::set_range(double xmin, double xmax, double ymin, double ymax) {
    xmin_ = xmin;
    xmax_ = xmax > xmin ? xmax : xmin + 1;
    ymin_ = ymin;
    ymax_ = ymax > ymin ? ymax : ymin + 1;
}

double SvgFigure::px(double x) const {
    return kMarginLeft + (x - xmin_) / (xmax_ - xmin_) * (w_ - kMarginLeft - kMarginRight);
}

double SvgFigure::py(double y) const {
    return h_ - kMarginBottom -
           (y - ymin_) / (ymax_ - ymin_) * (h_ - kMarginTop - kMarginBottom);
}

void SvgFigure::add_scatter(const std::vector<std::pair<double, double>>& points,
                            const std::string& color, double radius) {
    std::ostringstream os;
    for (const auto& [x, y] : points)
        os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"" << radius
           << "\" fill=\"" << color << "\" fill-opacity=\"0.6\"/>\n";
    body_ += os.str();
}

void SvgFigure::add_stacked_bar(int position, int positions,
                                const std::vector<std::pair<double, std::string>>& segments) {
    const double span = (xmax_ - xmin_) / positions;
    const double x0 = xmin_ + position * span + span * 0.15;
    const double x1 = xmin_ + (position + 1) * span - span * 0.15;
    double base = 0.0;
    std::ostringstream os;
    for (const auto& [value, color] : segments) {
        const double top = base + value;
        os << "<rect x=\"" << px(x0) << "\" y=\"" << py(top) << "\" width=\""
           << px(x1) - px(x0) << "\" height=\"" << py(base) - py(top) << "\" fill=\"" << color
           << "\"/>\n";
        base = top;
    }
    body_ += os.str();
}

void SvgFigure::add_histogram(const std::vector<double>& bin_heights, double lo, double hi,
                              const std::string& color) {
    if (bin_heights.empty()) return;
    const double width = (hi - lo) / static_cast<double>(bin_heights.size());
    std::ostringstream os;
    for (size_t i = 0; i < bin_heights.size(); ++i) {
        const double x0 = lo + i * width;
        os << "<rect x=\"" << px(x0) << "\" y=\"" << py(bin_heights[i]) << "\" width=\""
           << px(x0 + width) - px(x0) - 1 << "\" height=\"" << py(0) - py(bin_heights[i])
           << "\" fill=\"" << color << "\" fill-opacity=\"0.8\"/>\n";
    }
    body_ += os.str();
}

void SvgFigure::axis_labels(const std::string& x, const std::string& y) {
    xlabel_ = x;
    ylabel_ = y;
}

std::string SvgFigure::str() const {
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_
       << "\" viewBox=\"0 0 " << w_ << " " << h_ << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << w_ / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
       << title_ << "</text>\n";
    // axes
    os << "<line x1=\"" << kMarginLeft << "\" y1=\"" << h_ - kMarginBottom << "\" x2=\""
       << w_ - kMarginRight << "\" y2=\"" << h_ - kMarginBottom
       << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
       << "\" y2=\"" << h_ - kMarginBottom << "\" stroke=\"black\"/>\n";
    // range ticks
    os << "<text x=\"" << kMarginLeft << "\" y=\"" << h_ - kMarginBottom + 16
       << "\" font-size=\"10\" text-anchor=\"middle\">" << xmin_ << "</text>\n";
    os << "<text x=\"" << w_ - kMarginRight << "\" y=\"" << h_ - kMarginBottom + 16
       << "\" font-size=\"10\" text-anchor=\"middle\">" << xmax_ << "</text>\n";
    os << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << h_ - kMarginBottom
       << "\" font-size=\"10\" text-anchor=\"end\">" << ymin_ << "</text>\n";
    os << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << kMarginTop + 4
       << "\" font-size=\"10\" text-anchor=\"end\">" << ymax_ << "</text>\n";
    if (!xlabel_.empty())
        os << "<text x=\"" << (kMarginLeft + w_ - kMarginRight) / 2 << "\" y=\"" << h_ - 12
           << "\" text-anchor=\"middle\" font-size=\"12\">" << xlabel_ << "</text>\n";
    if (!ylabel_.empty())
        os << "<text x=\"16\" y=\"" << (kMarginTop + h_ - kMarginBottom) / 2
           << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
           << (kMarginTop + h_ - kMarginBottom) / 2 << ")\">" << ylabel_ << "</text>\n";
    os << body_;
    os << "</svg>\n";
    return os.str();
}

void SvgFigure::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << str();
}

}  // namespace routeq
