#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "gel/grid.hpp"

namespace gel {

/// Shortest text that reads back to the same double ("%.17g").
std::string format_double(double v);

/// Column names of a full-index tensor, e.g. ("C", 2, 4) -> C_0000 .. C_1111.
std::vector<std::string> tensor_names(const std::string& base, int dim, int rank);

/// Field exchange format: one row per node (x[, y], then components), plus a
/// JSON sidecar `<path>.hdr` with dim, n, dx, bc, component names and t.
void write_field_csv(const std::filesystem::path& path, const GridSpec& g, const Field& f,
                     const std::vector<std::string>& names, double t = 0.0);

struct FieldFile {
    Field field;
    std::vector<std::string> names;
    double t = 0.0;
};

/// Reads a field written by write_field_csv, checking the sidecar against g.
/// Throws InputError on shape mismatch, missing files or unparsable numbers.
FieldFile read_field_csv(const std::filesystem::path& path, const GridSpec& g);

void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows);

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

}  // namespace gel
