#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "singsys/cli/csv.hpp"

namespace singsys::cli {

/// Maps (k, value) into the fixed 800x500 canvas with a 50 px margin.
/// A degenerate value range puts every point on the baseline.
struct PlotLayout {
    static constexpr double kWidth = 800.0;
    static constexpr double kHeight = 500.0;
    static constexpr double kMargin = 50.0;

    double k_min = 0.0;
    double k_max = 1.0;
    double v_min = 0.0;
    double v_max = 0.0;

    [[nodiscard]] bool flat() const { return !(v_max > v_min); }

    [[nodiscard]] double x(double k) const {
        const double span = k_max > k_min ? k_max - k_min : 1.0;
        return kMargin + (k - k_min) / span * (kWidth - 2.0 * kMargin);
    }
    [[nodiscard]] double y(double v) const {
        const double baseline = kHeight - kMargin;
        if (flat()) {
            return baseline;
        }
        return baseline - (v - v_min) / (v_max - v_min) * (kHeight - 2.0 * kMargin);
    }
    [[nodiscard]] double k_of(double px) const {
        const double span = k_max > k_min ? k_max - k_min : 1.0;
        return k_min + (px - kMargin) / (kWidth - 2.0 * kMargin) * span;
    }
    [[nodiscard]] double value_of(double py) const {
        if (flat()) {
            return v_min;
        }
        return v_min + (kHeight - kMargin - py) / (kHeight - 2.0 * kMargin) * (v_max - v_min);
    }
};

struct PlotSeries {
    std::string name;
    std::string color;
    std::vector<std::pair<std::int64_t, double>> points;
};

inline std::vector<PlotSeries> series_from_rows(const std::vector<CsvRow>& rows) {
    PlotSeries t{"T", "#1f77b4", {}};
    PlotSeries c{"C", "#2ca02c", {}};
    PlotSeries i{"I", "#d62728", {}};
    for (const auto& r : rows) {
        t.points.emplace_back(r.k, r.T);
        if (r.C) c.points.emplace_back(r.k, *r.C);
        if (r.I) i.points.emplace_back(r.k, *r.I);
    }
    return {t, c, i};
}

inline PlotLayout layout_for(const std::vector<PlotSeries>& series) {
    PlotLayout layout;
    bool first = true;
    for (const auto& s : series) {
        for (const auto& [k, v] : s.points) {
            const auto kd = static_cast<double>(k);
            if (first) {
                layout.k_min = layout.k_max = kd;
                layout.v_min = layout.v_max = v;
                first = false;
            }
            layout.k_min = std::min(layout.k_min, kd);
            layout.k_max = std::max(layout.k_max, kd);
            layout.v_min = std::min(layout.v_min, v);
            layout.v_max = std::max(layout.v_max, v);
        }
    }
    return layout;
}

namespace detail {

inline std::string fixed4(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    std::string s(buf);
    return s == "-0.0000" ? "0.0000" : s;
}

}  // namespace detail

inline std::string render_svg(const std::vector<PlotSeries>& series, std::string_view title) {
    const PlotLayout layout = layout_for(series);
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" "
           "height=\"500\" viewBox=\"0 0 800 500\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"800\" height=\"500\" fill=\"white\"/>\n";
    out += "<title>" + std::string(title) + "</title>\n";
    out += "<line x1=\"50\" y1=\"450\" x2=\"750\" y2=\"450\" stroke=\"black\"/>\n";
    out += "<line x1=\"50\" y1=\"50\" x2=\"50\" y2=\"450\" stroke=\"black\"/>\n";
    out += "<text x=\"50\" y=\"470\" font-size=\"12\">k=" + format_shortest(layout.k_min) +
           "</text>\n";
    out += "<text x=\"750\" y=\"470\" font-size=\"12\" text-anchor=\"end\">k=" +
           format_shortest(layout.k_max) + "</text>\n";
    out += "<text x=\"45\" y=\"450\" font-size=\"12\" text-anchor=\"end\">" +
           format_shortest(layout.v_min) + "</text>\n";
    out += "<text x=\"45\" y=\"55\" font-size=\"12\" text-anchor=\"end\">" +
           format_shortest(layout.v_max) + "</text>\n";
    double legend_y = 70.0;
    for (const auto& s : series) {
        out += "<polyline id=\"" + s.name + "\" fill=\"none\" stroke=\"" + s.color +
               "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto& [k, v] : s.points) {
            if (!first) out += ' ';
            first = false;
            out += detail::fixed4(layout.x(static_cast<double>(k)));
            out += ',';
            out += detail::fixed4(layout.y(v));
        }
        out += "\"/>\n";
        out += "<text x=\"700\" y=\"" + detail::fixed4(legend_y) + "\" font-size=\"14\" fill=\"" +
               s.color + "\">" + s.name + "</text>\n";
        legend_y += 18.0;
    }
    out += "</svg>\n";
    return out;
}

}  // namespace singsys::cli
