#ifndef RESONANT_IO_HPP
#define RESONANT_IO_HPP

#include "resonant/statistics.hpp"

#include <Eigen/Dense>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace resonant::io {

/// Shortest round-trip decimal form of x (at most 17 significant digits).
std::string format_double(double x);

/// One value per line, ascending order is the caller's business.
void write_values(const std::filesystem::path &path, std::span<const double> values);
std::vector<double> read_values(const std::filesystem::path &path);

/// Row-major, comma separated, no header.
void write_matrix(const std::filesystem::path &path, const Eigen::MatrixXd &matrix);

/// Columns bin_left, bin_right, density with a header row.
void write_histogram(const std::filesystem::path &path, const Histogram &histogram);

/// Header row followed by rows of equal length.
void write_table(const std::filesystem::path &path, const std::vector<std::string> &header,
                 const std::vector<std::vector<double>> &rows);

void write_text(const std::filesystem::path &path, const std::string &text);
std::string read_text(const std::filesystem::path &path);

} // namespace resonant::io

#endif // RESONANT_IO_HPP
