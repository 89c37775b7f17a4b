#include "resonant/io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace resonant::io {

std::string format_double(double x) {
  std::array<char, 64> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), x);
  if (ec != std::errc())
    throw std::runtime_error("format_double: conversion failed");
  return std::string(buffer.data(), end);
}

namespace {

std::ofstream open_out(const std::filesystem::path &path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream &out, const std::filesystem::path &path) {
  out.flush();
  if (!out)
    throw std::runtime_error("write to " + path.string() + " failed");
}

} // namespace

void write_values(const std::filesystem::path &path, std::span<const double> values) {
  auto out = open_out(path);
  for (double v : values)
    out << format_double(v) << '\n';
  finish(out, path);
}

std::vector<double> read_values(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  std::vector<double> values;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#')
      continue;
    const auto last = line.find_last_not_of(" \t\r,");
    const char *begin = line.data() + first;
    const char *end = line.data() + last + 1;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || ptr != end)
      throw std::runtime_error(path.string() + ":" + std::to_string(line_number) + ": not a number");
    values.push_back(v);
  }
  return values;
}

void write_matrix(const std::filesystem::path &path, const Eigen::MatrixXd &matrix) {
  auto out = open_out(path);
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    for (Eigen::Index j = 0; j < matrix.cols(); ++j) {
      if (j > 0)
        out << ',';
      out << format_double(matrix(i, j));
    }
    out << '\n';
  }
  finish(out, path);
}

void write_histogram(const std::filesystem::path &path, const Histogram &histogram) {
  std::vector<std::vector<double>> rows;
  rows.reserve(histogram.bins());
  for (std::size_t i = 0; i < histogram.bins(); ++i)
    rows.push_back({histogram.edges[i], histogram.edges[i + 1], histogram.densities[i]});
  write_table(path, {"bin_left", "bin_right", "density"}, rows);
}

void write_table(const std::filesystem::path &path, const std::vector<std::string> &header,
                 const std::vector<std::vector<double>> &rows) {
  auto out = open_out(path);
  for (std::size_t j = 0; j < header.size(); ++j)
    out << (j ? "," : "") << header[j];
  out << '\n';
  for (const auto &row : rows) {
    for (std::size_t j = 0; j < row.size(); ++j)
      out << (j ? "," : "") << format_double(row[j]);
    out << '\n';
  }
  finish(out, path);
}

void write_text(const std::filesystem::path &path, const std::string &text) {
  auto out = open_out(path);
  out << text;
  finish(out, path);
}

std::string read_text(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw std::runtime_error("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

} // namespace resonant::io
