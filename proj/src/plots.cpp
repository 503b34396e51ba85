#include "zoll/plots.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace zoll {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f"};

std::string esc(const std::string& s) {
    std::string o;
    for (char c : s) {
        if (c == '<') o += "&lt;";
        else if (c == '>') o += "&gt;";
        else if (c == '&') o += "&amp;";
        else o += c;
    }
    return o;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

}  // namespace

std::string svg_plot(const Series& s, const PlotStyle& style) {
    const double W = style.width, H = style.height, ml = 60, mr = 20, mt = 30, mb = 40;
    double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
    const bool bars = s.plot == "bars";
    for (const auto& row : s.rows) {
        x0 = std::min(x0, row[0]);
        x1 = std::max(x1, row[0]);
        for (std::size_t c = 1; c < row.size(); ++c) {
            if (!std::isfinite(row[c])) continue;
            y0 = std::min(y0, row[c]);
            y1 = std::max(y1, row[c]);
        }
    }
    if (bars) {
        y0 = 0.0;
        if (s.rows.size() > 1) x1 += s.rows[1][0] - s.rows[0][0];
    }
    if (!(x1 > x0)) x1 = x0 + 1.0;
    if (!(y1 > y0)) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    const auto X = [&](double x) { return ml + (x - x0) / (x1 - x0) * (W - ml - mr); };
    const auto Y = [&](double y) { return H - mb - (y - y0) / (y1 - y0) * (H - mt - mb); };
    std::ostringstream o;
    o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\""
      << style.font << "\" font-size=\"11\">\n";
    o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    o << "<text x=\"" << W / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">" << esc(s.title.empty() ? s.name : s.title)
      << "</text>\n";
    o << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
    o << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb << "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        const double xv = x0 + (x1 - x0) * i / 4, yv = y0 + (y1 - y0) * i / 4;
        o << "<text x=\"" << X(xv) << "\" y=\"" << H - mb + 15 << "\" text-anchor=\"middle\">" << fmt(xv) << "</text>\n";
        o << "<text x=\"" << ml - 5 << "\" y=\"" << Y(yv) + 4 << "\" text-anchor=\"end\">" << fmt(yv) << "</text>\n";
    }
    o << "<text x=\"" << (ml + W - mr) / 2 << "\" y=\"" << H - 5 << "\" text-anchor=\"middle\">" << esc(s.columns[0]) << "</text>\n";
    if (bars) {
        const double w = s.rows.size() > 1 ? X(s.rows[1][0]) - X(s.rows[0][0]) : 4.0;
        for (const auto& row : s.rows) {
            if (row[1] <= 0) continue;
            o << "<rect x=\"" << X(row[0]) << "\" y=\"" << Y(row[1]) << "\" width=\"" << std::max(w, 0.5) << "\" height=\""
              << Y(0) - Y(row[1]) << "\" fill=\"" << kColors[0] << "\"/>\n";
        }
    } else {
        for (std::size_t c = 1; c < s.columns.size(); ++c) {
            const char* col = kColors[(c - 1) % 8];
            o << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
            for (const auto& row : s.rows) {
                if (std::isfinite(row[c])) o << X(row[0]) << "," << Y(row[c]) << " ";
            }
            o << "\"/>\n";
            for (const auto& row : s.rows) {
                if (std::isfinite(row[c])) o << "<circle cx=\"" << X(row[0]) << "\" cy=\"" << Y(row[c]) << "\" r=\"2.5\" fill=\"" << col << "\"/>\n";
            }
            if (s.columns.size() <= 9) {
                o << "<text x=\"" << W - mr - 5 << "\" y=\"" << mt + 14 * c << "\" text-anchor=\"end\" fill=\"" << col << "\">"
                  << esc(s.columns[c]) << "</text>\n";
            }
        }
    }
    o << "</svg>\n";
    return o.str();
}

std::vector<std::filesystem::path> emit_plots(const RunReport& report, const std::filesystem::path& out,
                                              const PlotStyle& style, std::vector<std::string>& warnings) {
    std::vector<std::filesystem::path> files;
    bool any = false;
    for (const Series& s : report.series) {
        if (s.plot != "line" && s.plot != "bars") continue;
        if (s.rows.empty() || s.columns.size() < 2) {
            warnings.push_back("series '" + s.name + "' has no data; plot skipped");
            continue;
        }
        any = true;
        std::filesystem::create_directories(out);
        const auto path = out / (s.name + ".svg");
        std::ofstream f(path);
        f << svg_plot(s, style);
        files.push_back(path);
    }
    if (!any && report.series.empty()) warnings.push_back("report has no series; no plots written");
    return files;
}

}  // namespace zoll
