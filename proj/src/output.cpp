#include "spinbeats/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace spinbeats {

std::string config_header(const RunConfig& cfg) {
    std::ostringstream os;
    os << "# # spinbeats output; strip the leading '# ' of this header to recover the config\n";
    os << "# # rng = mt19937_64/v1\n";
    std::istringstream lines(serialize_config(cfg));
    std::string line;
    while (std::getline(lines, line)) os << "# " << line << '\n';
    return os.str();
}

std::string csv_document(const RunConfig& cfg, const std::vector<std::string>& column_names,
                         const std::vector<std::vector<std::string>>& rows,
                         const std::vector<std::string>& trailing_comments) {
    for (const auto& row : rows)
        if (row.size() != column_names.size())
            throw std::invalid_argument("csv_document: ragged rows");

    std::ostringstream os;
    os << config_header(cfg);
    for (std::size_t i = 0; i < column_names.size(); ++i)
        os << (i ? "," : "") << column_names[i];
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << '\n';
    }
    for (const auto& comment : trailing_comments) os << "# " << comment << '\n';
    return os.str();
}

namespace {

struct Ticks {
    std::vector<double> values;
};

Ticks nice_ticks(double lo, double hi, int want = 6) {
    Ticks t;
    if (!(hi > lo)) {
        t.values = {lo};
        return t;
    }
    const double raw = (hi - lo) / std::max(1, want - 1);
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    }
    const double first = std::ceil(lo / step) * step;
    for (double v = first; v <= hi + 1e-12 * step; v += step) t.values.push_back(v);
    return t;
}

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

std::string svg_line_plot(const std::string& title, const std::string& x_label,
                          const std::vector<double>& x, const std::vector<Series>& series) {
    const int width = 860, height = 520;
    const double ml = 70, mr = 20, mt = 40, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;

    double xmin = x.empty() ? 0.0 : x.front(), xmax = x.empty() ? 1.0 : x.back();
    double ymin = 0.0, ymax = 1.0;
    bool first = true;
    for (const auto& s : series)
        for (double v : s.y) {
            if (!std::isfinite(v)) continue;
            if (first) {
                ymin = ymax = v;
                first = false;
            }
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (ymax - ymin < 1e-12) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    if (xmax - xmin < 1e-12) xmax = xmin + 1.0;

    auto px = [&](double v) { return ml + (v - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double v) { return mt + (1.0 - (v - ymin) / (ymax - ymin)) * ph; };

    static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\" "
          "font-size=\"15\">" << title << "</text>\n";

    // axes
    os << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
       << mt + ph << "\" stroke=\"black\"/>\n";
    os << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
       << "\" stroke=\"black\"/>\n";
    for (double v : nice_ticks(xmin, xmax).values) {
        os << "<line x1=\"" << px(v) << "\" y1=\"" << mt + ph << "\" x2=\"" << px(v) << "\" y2=\""
           << mt + ph + 5 << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << px(v) << "\" y=\"" << mt + ph + 20
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << short_num(v)
           << "</text>\n";
    }
    for (double v : nice_ticks(ymin, ymax).values) {
        os << "<line x1=\"" << ml - 5 << "\" y1=\"" << py(v) << "\" x2=\"" << ml << "\" y2=\""
           << py(v) << "\" stroke=\"black\"/>\n";
        os << "<text x=\"" << ml - 8 << "\" y=\"" << py(v) + 4
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << short_num(v)
           << "</text>\n";
    }
    os << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << x_label
       << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = palette[s % 5];
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < x.size() && i < series[s].y.size(); ++i) {
            if (!std::isfinite(series[s].y[i])) continue;
            os << px(x[i]) << ',' << py(series[s].y[i]) << ' ';
        }
        os << "\"/>\n";
        os << "<text x=\"" << ml + pw - 8 << "\" y=\"" << mt + 16 + 16 * s
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" << color
           << "\">" << series[s].label << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file '" + path + "'");
    out << content;
    if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace spinbeats
