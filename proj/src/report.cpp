#include "cll/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "cll/errors.hpp"

namespace cll {

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns,
                     const std::string& config_hash)
    : path_(path), columns_(columns.size()), hash_(config_hash) {
    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    out_.open(path);
    if (!out_) throw Error("cannot open " + path.string());
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << columns[i] << ",";
    out_ << "config_hash\n";
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
        throw Error("CSV row width " + std::to_string(cells.size()) + " != header width " +
                    std::to_string(columns_));
    for (const auto& c : cells) out_ << c << ",";
    out_ << hash_ << "\n";
}

std::string CsvWriter::num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string CsvWriter::num(int v) { return std::to_string(v); }

std::string config_hash(const std::string& canonical) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

double map_coord(double v, double lo, double hi, double plo, double phi) {
    if (hi <= lo) return 0.5 * (plo + phi);
    return plo + (v - lo) / (hi - lo) * (phi - plo);
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

}  // namespace

void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<SvgSeries>& series, bool loglog) {
    const double W = 720, H = 480, L = 70, R = 20, T = 40, B = 50;
    double xlo = 1e300, xhi = -1e300, ylo = 1e300, yhi = -1e300;
    auto tx = [&](double v) { return loglog ? std::log10(std::max(v, 1e-300)) : v; };
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (loglog && (s.x[i] <= 0.0 || s.y[i] <= 0.0)) continue;
            xlo = std::min(xlo, tx(s.x[i]));
            xhi = std::max(xhi, tx(s.x[i]));
            ylo = std::min(ylo, tx(s.y[i]));
            yhi = std::max(yhi, tx(s.y[i]));
        }
    if (xlo > xhi) { xlo = 0; xhi = 1; ylo = 0; yhi = 1; }

    std::filesystem::create_directories(path.parent_path().empty() ? "." : path.parent_path());
    std::ofstream f(path);
    if (!f) throw Error("cannot open " + path.string());
    f << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    f << "<rect width='100%' height='100%' fill='white'/>\n";
    f << "<text x='" << W / 2 << "' y='20' text-anchor='middle' font-size='15'>" << title
      << "</text>\n";
    f << "<text x='" << W / 2 << "' y='" << H - 10 << "' text-anchor='middle' font-size='12'>"
      << xlabel << (loglog ? " (log10)" : "") << "</text>\n";
    f << "<text x='15' y='" << H / 2 << "' text-anchor='middle' font-size='12' transform='rotate(-90 15 "
      << H / 2 << ")'>" << ylabel << (loglog ? " (log10)" : "") << "</text>\n";
    f << "<rect x='" << L << "' y='" << T << "' width='" << W - L - R << "' height='" << H - T - B
      << "' fill='none' stroke='black'/>\n";
    for (int tick = 0; tick <= 4; ++tick) {
        double fx = xlo + (xhi - xlo) * tick / 4.0;
        double fy = ylo + (yhi - ylo) * tick / 4.0;
        double px = map_coord(fx, xlo, xhi, L, W - R);
        double py = map_coord(fy, ylo, yhi, H - B, T);
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.3g", fx);
        f << "<text x='" << px << "' y='" << H - B + 16 << "' text-anchor='middle' font-size='10'>"
          << buf << "</text>\n";
        std::snprintf(buf, sizeof buf, "%.3g", fy);
        f << "<text x='" << L - 6 << "' y='" << py + 3 << "' text-anchor='end' font-size='10'>" << buf
          << "</text>\n";
    }
    int idx = 0;
    for (const auto& s : series) {
        const char* color = kPalette[idx % 6];
        f << "<polyline fill='none' stroke='" << color << "' stroke-width='1.5' points='";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (loglog && (s.x[i] <= 0.0 || s.y[i] <= 0.0)) continue;
            double px = map_coord(tx(s.x[i]), xlo, xhi, L, W - R);
            double py = map_coord(tx(s.y[i]), ylo, yhi, H - B, T);
            f << px << "," << py << " ";
        }
        f << "'/>\n";
        f << "<text x='" << W - R - 8 << "' y='" << T + 16 + 14 * idx
          << "' text-anchor='end' font-size='11' fill='" << color << "'>" << s.name << "</text>\n";
        ++idx;
    }
    f << "</svg>\n";
}

}  // namespace cll
