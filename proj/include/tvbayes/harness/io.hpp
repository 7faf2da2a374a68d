#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tvbayes/operators.hpp"

namespace tvbayes {

/// Values on a lattice, stacked column by column. Signals live on a 1 x n
/// lattice.
struct GridData {
  Lattice lattice;
  Vector data;
};

enum class PgmFormat { Ascii, Binary };

/// PGM rasters are row-major: raster[i * width + j] holds pixel (i, j),
/// which is data[i + j * rows] here. Gray levels map to [0, 1] by
/// value / maxval.
GridData parse_pgm(std::string_view bytes);
GridData read_pgm(const std::string& path);
/// Values are clamped to [0, 1] and quantised to 8 bits (maxval 255).
std::string encode_pgm(const Lattice& lattice, const Vector& data, PgmFormat format);
void write_pgm(const std::string& path, const Lattice& lattice, const Vector& data,
               PgmFormat format = PgmFormat::Binary);
std::uint8_t quantise(double v);

/// One-column CSV with header "value".
Vector parse_signal_csv(std::string_view text);
Vector read_signal_csv(const std::string& path);
void write_signal_csv(const std::string& path, const Vector& v);

/// Three-column CSV "row,col,value" for 2-D float maps.
GridData parse_map_csv(std::string_view text);
void write_map_csv(const std::string& path, const Lattice& lattice, const Vector& data);

/// Columns of equal length under a header row.
void write_table_csv(const std::string& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& columns);

/// Dispatches on the extension: .pgm, or .csv holding either a signal or a
/// row,col,value map.
GridData read_grid(const std::string& path);
/// Writes a 1 x n lattice as a signal CSV and anything else as PGM.
void write_grid(const std::string& path_stem, const GridData& grid, std::string* written = nullptr);

/// Shortest round-trip representation (17 significant digits).
std::string format_double(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view contents);

}  // namespace tvbayes
