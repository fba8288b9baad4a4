#include "slp/io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"
#include <openssl/evp.h>

#include "slp/errors.hpp"

namespace slp::io {

namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i)
            r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
        return r;
    }
    return v;
}

void put_double(std::ostream& out, double value) {
    const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(value));
    char bytes[8];
    std::memcpy(bytes, &bits, 8);
    out.write(bytes, 8);
}

double get_double(std::istream& in) {
    char bytes[8];
    if (!in.read(bytes, 8))
        throw ConfigError("snapshot binary is truncated");
    std::uint64_t bits = 0;
    std::memcpy(&bits, bytes, 8);
    return std::bit_cast<double>(to_little_endian(bits));
}

std::filesystem::path with_suffix(const std::filesystem::path& base, const char* suffix) {
    return std::filesystem::path(base.string() + suffix);
}

} // namespace

std::string format_double(double value) {
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

CsvWriter::CsvWriter(std::ostream& out, std::initializer_list<std::string> header)
    : CsvWriter(out, std::vector<std::string>(header)) {}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
    if (header.empty())
        throw std::invalid_argument("CSV header must not be empty");
    row(header);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_)
        throw std::invalid_argument("CSV row width does not match the header");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i)
            out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

void write_bands_csv(std::ostream& out, const BandStructure& bands) {
    std::vector<std::string> header{"k", "branch", "branch_label", "re_omega", "im_omega"};
    for (const char* name : component_names)
        header.push_back(std::string("w_") + name);
    CsvWriter csv(out, header);
    for (std::size_t i = 0; i < bands.k_grid.size(); ++i) {
        for (std::size_t b = 0; b < bands.branches.size(); ++b) {
            const Branch& branch = bands.branches[b];
            std::vector<std::string> cells{format_double(bands.k_grid[i]), std::to_string(b),
                                           branch.label, format_double(branch.omega[i].real()),
                                           format_double(branch.omega[i].imag())};
            for (int c = 0; c < 5; ++c)
                cells.push_back(format_double(std::norm(branch.vectors[i][c])));
            csv.row(cells);
        }
    }
}

void write_emission_csv(std::ostream& out, const EmissionProfile& p) {
    CsvWriter csv(out, {"u", "I_total", "I_thermal", "I_condensate"});
    for (std::size_t i = 0; i < p.u.size(); ++i)
        csv.row({format_double(p.u[i]), format_double(p.total[i]), format_double(p.thermal[i]),
                 format_double(p.condensate[i])});
}

void write_snapshot(const std::filesystem::path& base, const FieldState& state) {
    std::ofstream bin(with_suffix(base, ".bin"), std::ios::binary);
    if (!bin)
        throw std::runtime_error("cannot write snapshot " + base.string());
    for (const cplx& v : state.psi) {
        put_double(bin, v.real());
        put_double(bin, v.imag());
    }

    const Grid& g = state.grid;
    nlohmann::ordered_json meta;
    meta["format"] = "slpbec-snapshot";
    meta["shape"] = {g.shape[0], g.shape[1], g.shape[2]};
    meta["axes"] = {"x", "y", "z"};
    meta["box_m"] = {g.box[0], g.box[1], g.box[2]};
    meta["spacing_m"] = {g.spacing(0), g.spacing(1), g.spacing(2)};
    meta["time_s"] = state.time;
    meta["particle_number"] = state.particle_number();
    meta["dtype"] = "float64";
    meta["layout"] = "interleaved re/im, row-major [x][y][z]";
    meta["endianness"] = "little";
    meta["density_unit"] = "1/m^3";
    std::ofstream json(with_suffix(base, ".json"));
    json << meta.dump(2) << '\n';
}

FieldState read_snapshot(const std::filesystem::path& base) {
    std::ifstream json(with_suffix(base, ".json"));
    if (!json)
        throw ConfigError("cannot read snapshot metadata " + with_suffix(base, ".json").string());
    nlohmann::json meta;
    try {
        json >> meta;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed snapshot metadata: ") + e.what());
    }
    if (meta.value("endianness", "") != "little" || meta.value("dtype", "") != "float64")
        throw ConfigError("snapshot must be little-endian float64");

    FieldState state;
    for (int a = 0; a < 3; ++a) {
        state.grid.shape[a] = meta.at("shape").at(a).get<std::size_t>();
        state.grid.box[a] = meta.at("box_m").at(a).get<double>();
    }
    state.grid.validate();
    state.time = meta.value("time_s", 0.0);

    std::ifstream bin(with_suffix(base, ".bin"), std::ios::binary);
    if (!bin)
        throw ConfigError("cannot read snapshot data " + with_suffix(base, ".bin").string());
    state.psi.resize(state.grid.size());
    for (cplx& v : state.psi) {
        const double re = get_double(bin);
        const double im = get_double(bin);
        v = cplx(re, im);
    }
    if (bin.peek() != std::char_traits<char>::eof())
        throw ConfigError("snapshot binary is longer than its shape");
    return state;
}

std::string sha256_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot hash " + path.string());
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
    std::array<char, 1 << 16> buffer;
    while (in) {
        in.read(buffer.data(), buffer.size());
        EVP_DigestUpdate(ctx, buffer.data(), static_cast<std::size_t>(in.gcount()));
    }
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    EVP_DigestFinal_ex(ctx, digest, &length);
    EVP_MD_CTX_free(ctx);
    std::ostringstream hex;
    for (unsigned int i = 0; i < length; ++i)
        hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
    return hex.str();
}

} // namespace slp::io
