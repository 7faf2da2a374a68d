#include "tvbayes/harness/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tvbayes/errors.hpp"

namespace tvbayes {
namespace {

bool is_space(char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f'; }

class HeaderReader {
 public:
  explicit HeaderReader(std::string_view s) : s_(s) {}

  std::size_t pos() const { return pos_; }

  void skip_space_and_comments() {
    while (pos_ < s_.size()) {
      if (is_space(s_[pos_])) {
        ++pos_;
      } else if (s_[pos_] == '#') {
        while (pos_ < s_.size() && s_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  long integer(const char* what) {
    skip_space_and_comments();
    const std::size_t start = pos_;
    long v = 0;
    const auto [ptr, ec] = std::from_chars(s_.data() + pos_, s_.data() + s_.size(), v);
    if (ec != std::errc() || ptr == s_.data() + pos_) {
      throw ParseError(std::string("PGM: expected ") + what, start);
    }
    pos_ = static_cast<std::size_t>(ptr - s_.data());
    if (pos_ < s_.size() && !is_space(s_[pos_]) && s_[pos_] != '#') {
      throw ParseError(std::string("PGM: malformed ") + what, pos_);
    }
    return v;
  }

  void advance(std::size_t n) { pos_ += n; }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;
};

double parse_number(std::string_view field, std::size_t offset) {
  while (!field.empty() && is_space(field.front())) {
    field.remove_prefix(1);
    ++offset;
  }
  while (!field.empty() && is_space(field.back())) field.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || field.empty()) {
    throw ParseError("CSV: malformed number '" + std::string(field) + "'", offset);
  }
  return v;
}

struct Line {
  std::string_view text;
  std::size_t offset;
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) lines.push_back({line, start});
    start = end + 1;
  }
  return lines;
}

std::vector<Line> split_fields(const Line& line) {
  std::vector<Line> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.text.find(',', start);
    const std::size_t end = comma == std::string_view::npos ? line.text.size() : comma;
    fields.push_back({line.text.substr(start, end - start), line.offset + start});
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

std::string trimmed(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return std::string(s);
}

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint8_t quantise(double v) {
  if (std::isnan(v)) return 0;
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

GridData parse_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw ParseError("PGM: missing P2/P5 magic number", 0);
  }
  const bool binary = bytes[1] == '5';
  HeaderReader h(bytes);
  h.advance(2);
  if (h.pos() < bytes.size() && !is_space(bytes[h.pos()])) {
    throw ParseError("PGM: malformed magic number", h.pos());
  }
  const std::size_t width_at = h.pos();
  const long width = h.integer("width");
  const long height = h.integer("height");
  if (width < 1 || height < 1) throw ParseError("PGM: image extents must be positive", width_at);
  const std::size_t maxval_at = h.pos();
  const long maxval = h.integer("maxval");
  if (maxval < 1 || maxval > 255) {
    throw ParseError("PGM: maxval must lie in [1, 255]", maxval_at);
  }
  const Lattice lattice(height, width);
  GridData out{lattice, Vector(lattice.size())};
  const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (binary) {
    if (h.pos() >= bytes.size() || !is_space(bytes[h.pos()])) {
      throw ParseError("PGM: expected whitespace before the raster", h.pos());
    }
    const std::size_t start = h.pos() + 1;
    if (bytes.size() - start < count) {
      throw ParseError("PGM: truncated raster (" + std::to_string(bytes.size() - start) + " of " +
                           std::to_string(count) + " bytes)",
                       bytes.size());
    }
    for (std::size_t k = 0; k < count; ++k) {
      const auto level = static_cast<unsigned char>(bytes[start + k]);
      if (level > maxval) throw ParseError("PGM: gray level exceeds maxval", start + k);
      const Index i = static_cast<Index>(k) / width;
      const Index j = static_cast<Index>(k) % width;
      out.data[lattice.index(i, j)] = static_cast<double>(level) / maxval;
    }
  } else {
    for (std::size_t k = 0; k < count; ++k) {
      h.skip_space_and_comments();
      if (h.pos() >= bytes.size()) {
        throw ParseError("PGM: truncated raster (" + std::to_string(k) + " of " +
                             std::to_string(count) + " values)",
                         bytes.size());
      }
      const std::size_t at = h.pos();
      const long level = h.integer("gray level");
      if (level < 0 || level > maxval) throw ParseError("PGM: gray level out of range", at);
      const Index i = static_cast<Index>(k) / width;
      const Index j = static_cast<Index>(k) % width;
      out.data[lattice.index(i, j)] = static_cast<double>(level) / maxval;
    }
  }
  return out;
}

GridData read_pgm(const std::string& path) { return parse_pgm(read_file(path)); }

std::string encode_pgm(const Lattice& lattice, const Vector& data, PgmFormat format) {
  if (data.size() != lattice.size()) throw DomainError("encode_pgm: length mismatch");
  std::ostringstream os;
  os << (format == PgmFormat::Binary ? "P5" : "P2") << "\n"
     << lattice.cols() << " " << lattice.rows() << "\n255\n";
  for (Index i = 0; i < lattice.rows(); ++i) {
    for (Index j = 0; j < lattice.cols(); ++j) {
      const std::uint8_t q = quantise(data[lattice.index(i, j)]);
      if (format == PgmFormat::Binary) {
        os.put(static_cast<char>(q));
      } else {
        os << static_cast<int>(q) << (j + 1 == lattice.cols() ? '\n' : ' ');
      }
    }
  }
  return os.str();
}

void write_pgm(const std::string& path, const Lattice& lattice, const Vector& data,
               PgmFormat format) {
  write_file(path, encode_pgm(lattice, data, format));
}

Vector parse_signal_csv(std::string_view text) {
  const std::vector<Line> lines = split_lines(text);
  if (lines.empty() || trimmed(lines[0].text) != "value") {
    throw ParseError("CSV: expected header 'value'", 0);
  }
  Vector v(static_cast<Index>(lines.size() - 1));
  for (std::size_t k = 1; k < lines.size(); ++k) {
    v[static_cast<Index>(k - 1)] = parse_number(lines[k].text, lines[k].offset);
  }
  if (v.size() == 0) throw ParseError("CSV: no samples", text.size());
  return v;
}

Vector read_signal_csv(const std::string& path) { return parse_signal_csv(read_file(path)); }

void write_signal_csv(const std::string& path, const Vector& v) {
  std::string s = "value\n";
  for (Index i = 0; i < v.size(); ++i) s += format_double(v[i]) + "\n";
  write_file(path, s);
}

GridData parse_map_csv(std::string_view text) {
  const std::vector<Line> lines = split_lines(text);
  if (lines.empty() || trimmed(lines[0].text) != "row,col,value") {
    throw ParseError("CSV: expected header 'row,col,value'", 0);
  }
  struct Cell {
    long row, col;
    double value;
    std::size_t offset;
  };
  std::vector<Cell> cells;
  long rows = 0;
  long cols = 0;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const std::vector<Line> f = split_fields(lines[k]);
    if (f.size() != 3) throw ParseError("CSV: expected three fields", lines[k].offset);
    const double r = parse_number(f[0].text, f[0].offset);
    const double c = parse_number(f[1].text, f[1].offset);
    if (r < 0 || c < 0 || r != std::floor(r) || c != std::floor(c)) {
      throw ParseError("CSV: row and col must be nonnegative integers", lines[k].offset);
    }
    cells.push_back({static_cast<long>(r), static_cast<long>(c), parse_number(f[2].text, f[2].offset),
                     lines[k].offset});
    rows = std::max(rows, cells.back().row + 1);
    cols = std::max(cols, cells.back().col + 1);
  }
  if (cells.empty()) throw ParseError("CSV: no cells", text.size());
  if (static_cast<std::size_t>(rows * cols) != cells.size()) {
    throw ParseError("CSV: map does not cover a full rectangle", text.size());
  }
  const Lattice lattice(rows, cols);
  GridData out{lattice, Vector::Constant(lattice.size(), std::nan(""))};
  for (const Cell& c : cells) {
    double& slot = out.data[lattice.index(c.row, c.col)];
    if (!std::isnan(slot)) throw ParseError("CSV: duplicate cell", c.offset);
    slot = c.value;
  }
  return out;
}

void write_map_csv(const std::string& path, const Lattice& lattice, const Vector& data) {
  if (data.size() != lattice.size()) throw DomainError("write_map_csv: length mismatch");
  std::string s = "row,col,value\n";
  for (Index i = 0; i < lattice.rows(); ++i) {
    for (Index j = 0; j < lattice.cols(); ++j) {
      s += std::to_string(i) + "," + std::to_string(j) + "," +
           format_double(data[lattice.index(i, j)]) + "\n";
    }
  }
  write_file(path, s);
}

void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns) {
  if (header.size() != columns.size()) throw DomainError("write_table_csv: header mismatch");
  const std::size_t n = columns.empty() ? 0 : columns[0].size();
  for (const auto& c : columns) {
    if (c.size() != n) throw DomainError("write_table_csv: ragged columns");
  }
  std::string s;
  for (std::size_t k = 0; k < header.size(); ++k) s += (k ? "," : "") + header[k];
  s += "\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < columns.size(); ++k) {
      s += (k ? "," : "") + format_double(columns[k][i]);
    }
    s += "\n";
  }
  write_file(path, s);
}

GridData read_grid(const std::string& path) {
  if (ends_with(path, ".pgm")) return read_pgm(path);
  if (ends_with(path, ".csv")) {
    const std::string text = read_file(path);
    const std::string_view head = std::string_view(text).substr(0, text.find('\n'));
    if (trimmed(head) == "row,col,value") return parse_map_csv(text);
    const Vector v = parse_signal_csv(text);
    return {Lattice(1, v.size()), v};
  }
  throw IoError("unsupported input format for '" + path + "' (expected .pgm or .csv)");
}

void write_grid(const std::string& path_stem, const GridData& grid, std::string* written) {
  std::string path;
  if (grid.lattice.rows() == 1) {
    path = path_stem + ".csv";
    write_signal_csv(path, grid.data);
  } else {
    path = path_stem + ".pgm";
    write_pgm(path, grid.lattice, grid.data);
  }
  if (written) *written = path;
}

}  // namespace tvbayes
