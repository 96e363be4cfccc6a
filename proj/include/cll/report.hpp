#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace cll {

// CSV writer with a frozen header and a config-hash column appended to every
// row, so sweep outputs can be merged and traced back to their run.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& columns,
              const std::string& config_hash);

    void row(const std::vector<std::string>& cells);
    const std::filesystem::path& path() const { return path_; }

    static std::string num(double v);
    static std::string num(int v);

private:
    std::filesystem::path path_;
    std::ofstream out_;
    std::size_t columns_;
    std::string hash_;
};

// FNV-1a over the canonical config serialization; stable across runs.
std::string config_hash(const std::string& canonical);

struct SvgSeries {
    std::string name;
    std::vector<double> x, y;
};

// Minimal line plot (log-log optional); writes a standalone SVG file.
void write_svg_plot(const std::filesystem::path& path, const std::string& title,
                    const std::string& xlabel, const std::string& ylabel,
                    const std::vector<SvgSeries>& series, bool loglog);

}  // namespace cll
