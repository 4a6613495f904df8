#ifndef NESTAR_IO_HPP
#define NESTAR_IO_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nestar {

/// Deterministic shortest-roundtrip-ish formatting used for every CSV cell,
/// so identical runs produce byte-identical files.
std::string format_double(double value);

std::uint64_t fnv1a64(const std::string& text);
std::string to_hex(std::uint64_t value);

/// In-memory result table; cells are pre-formatted strings.
struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> trailing_comments;  // without leading '#'

  void add_row(std::vector<std::string> cells);
};

/// Writes header, rows, optional comment lines and a final
/// `# config_hash=<hex>` trailer.
void write_csv(const std::string& path, const ResultTable& table, std::uint64_t config_hash);
std::string render_csv(const ResultTable& table, std::uint64_t config_hash);

/// Flat key = value configuration text; '#' starts a comment. Duplicate keys
/// keep the last value.
std::map<std::string, std::string> parse_key_value_text(const std::string& text);
std::map<std::string, std::string> load_key_value_file(const std::string& path);

/// Minimal self-contained SVG line plot.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

void write_line_plot_svg(const std::string& path, const std::string& title,
                         const std::string& x_label, const std::string& y_label,
                         const std::vector<PlotSeries>& series);

}  // namespace nestar

#endif
