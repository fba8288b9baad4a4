#pragma once

#include <filesystem>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "slp/dispersion.hpp"
#include "slp/emission.hpp"
#include "slp/evolve.hpp"

namespace slp::io {

// 17 significant digits: every double round-trips through text.
std::string format_double(double value);

class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::initializer_list<std::string> header);
    CsvWriter(std::ostream& out, const std::vector<std::string>& header);
    void row(const std::vector<std::string>& cells);
    std::size_t columns() const { return columns_; }

private:
    std::ostream& out_;
    std::size_t columns_;
};

// One row per (k, branch): k, branch, branch_label, re_omega, im_omega, w_E_plus, w_E_minus,
// w_sigma_plus, w_sigma_minus, w_S (squared eigenvector components).
void write_bands_csv(std::ostream& out, const BandStructure& bands);

// u, I_total, I_thermal, I_condensate.
void write_emission_csv(std::ostream& out, const EmissionProfile& profile);

// Snapshot: <base>.bin holds little-endian float64 pairs (re, im) in [x][y][z] order;
// <base>.json records shape, box, spacing, time, endianness and sample type.
void write_snapshot(const std::filesystem::path& base, const FieldState& state);
FieldState read_snapshot(const std::filesystem::path& base);

// Lowercase hex SHA-256 of a file's contents.
std::string sha256_file(const std::filesystem::path& path);

} // namespace slp::io
