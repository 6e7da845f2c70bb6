#include "gpmap/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace gpmap {

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc{}) {  // cannot happen for finite doubles with this buffer
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
  }
  return std::string(buf, end);
}

void atomic_write_file(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed: " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void ensure_dir(const std::string& path) { std::filesystem::create_directories(path); }

std::string grid_to_csv(const std::vector<double>& values, int resolution) {
  std::string out;
  out.reserve(values.size() * 20);
  for (int iy = 0; iy < resolution; ++iy) {
    for (int ix = 0; ix < resolution; ++ix) {
      if (ix) out += ',';
      out += format_double(values[static_cast<std::size_t>(iy) * resolution + ix]);
    }
    out += '\n';
  }
  return out;
}

std::vector<double> grid_from_csv(const std::string& csv, int* resolution_out) {
  std::vector<double> values;
  int rows = 0;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    std::size_t eol = csv.find('\n', pos);
    if (eol == std::string::npos) eol = csv.size();
    if (eol > pos) {
      ++rows;
      std::size_t p = pos;
      while (p < eol) {
        std::size_t comma = csv.find(',', p);
        if (comma == std::string::npos || comma > eol) comma = eol;
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(csv.data() + p, csv.data() + comma, v);
        if (ec != std::errc{}) throw std::runtime_error("bad number in grid csv");
        (void)ptr;
        values.push_back(v);
        p = comma + 1;
      }
    }
    pos = eol + 1;
  }
  if (rows == 0 || values.size() != static_cast<std::size_t>(rows) * rows)
    throw std::runtime_error("grid csv is not square");
  if (resolution_out) *resolution_out = rows;
  return values;
}

std::string grid_to_pgm(const std::vector<double>& values, int resolution) {
  std::string out = "P5\n" + std::to_string(resolution) + " " +
                    std::to_string(resolution) + "\n255\n";
  out.reserve(out.size() + values.size());
  for (double v : values) {
    const double c = std::clamp(v, 0.0, 1.0);
    out += static_cast<char>(static_cast<unsigned char>(std::lround(c * 255.0)));
  }
  return out;
}

}  // namespace gpmap
