#include "gel/csv_io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace gel {

using json = nlohmann::json;

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> tensor_names(const std::string& base, int dim, int rank) {
    std::vector<std::string> names;
    const int total = tensor_size(dim, rank);
    for (int c = 0; c < total; ++c) {
        std::string idx(static_cast<std::size_t>(rank), '0');
        int r = c;
        for (int k = rank - 1; k >= 0; --k) {
            idx[static_cast<std::size_t>(k)] = static_cast<char>('0' + r % dim);
            r /= dim;
        }
        names.push_back(rank == 0 ? base : base + "_" + idx);
    }
    return names;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    return out;
}

std::filesystem::path sidecar(const std::filesystem::path& p) { return p.string() + ".hdr"; }

}  // namespace

void write_field_csv(const std::filesystem::path& path, const GridSpec& g, const Field& f,
                     const std::vector<std::string>& names, double t) {
    if (f.nodes() != g.nodes() || static_cast<int>(names.size()) != f.components())
        throw InputError("field does not match grid or names: " + path.string());
    std::ofstream out = open_out(path);
    out << "x";
    if (g.dim == 2) out << ",y";
    for (const auto& n : names) out << ',' << n;
    out << '\n';
    for (std::size_t p = 0; p < g.nodes(); ++p) {
        out << format_double(g.coord(p, 0));
        if (g.dim == 2) out << ',' << format_double(g.coord(p, 1));
        for (int c = 0; c < f.components(); ++c) out << ',' << format_double(f(c, p));
        out << '\n';
    }
    json hdr = {{"dim", g.dim},
                {"n", g.dim == 2 ? json::array({g.n[0], g.n[1]}) : json::array({g.n[0]})},
                {"dx", g.dim == 2 ? json::array({g.dx[0], g.dx[1]}) : json::array({g.dx[0]})},
                {"bc", std::string(to_string(g.bc))},
                {"node_order", "x fastest"},
                {"components", names},
                {"t", t}};
    open_out(sidecar(path)) << hdr.dump(2) << '\n';
}

FieldFile read_field_csv(const std::filesystem::path& path, const GridSpec& g) {
    std::ifstream hin(sidecar(path));
    if (!hin) throw InputError("missing sidecar header " + sidecar(path).string());
    json hdr;
    try {
        hin >> hdr;
    } catch (const json::exception& e) {
        throw InputError(sidecar(path).string() + ": " + e.what());
    }
    FieldFile ff;
    try {
        if (hdr.at("dim").get<int>() != g.dim) throw InputError(path.string() + ": dimension differs from the grid");
        const auto n = hdr.at("n").get<std::vector<int>>();
        for (int a = 0; a < g.dim; ++a)
            if (n.at(static_cast<std::size_t>(a)) != g.n[a])
                throw InputError(path.string() + ": node count differs from the grid");
        ff.names = hdr.at("components").get<std::vector<std::string>>();
        ff.t = hdr.value("t", 0.0);
    } catch (const json::exception& e) {
        throw InputError(sidecar(path).string() + ": " + e.what());
    }
    std::ifstream in(path);
    if (!in) throw InputError("cannot read " + path.string());
    const int ncomp = static_cast<int>(ff.names.size());
    ff.field = Field(ncomp, g.nodes());
    std::string line;
    std::getline(in, line);  // header
    std::size_t p = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (p >= g.nodes()) throw InputError(path.string() + ": more rows than grid nodes");
        std::stringstream ss(line);
        std::string cell;
        std::vector<double> vals;
        while (std::getline(ss, cell, ',')) {
            std::size_t used = 0;
            try {
                vals.push_back(std::stod(cell, &used));
            } catch (const std::exception&) {
                used = 0;
            }
            if (used == 0) throw InputError(path.string() + ": bad number '" + cell + "' on row " + std::to_string(p + 2));
        }
        if (static_cast<int>(vals.size()) != g.dim + ncomp)
            throw InputError(path.string() + ": row " + std::to_string(p + 2) + " has the wrong column count");
        for (int c = 0; c < ncomp; ++c) ff.field(c, p) = vals[static_cast<std::size_t>(g.dim + c)];
        ++p;
    }
    if (p != g.nodes()) throw InputError(path.string() + ": fewer rows than grid nodes");
    return ff;
}

void write_table_csv(const std::filesystem::path& path, const std::vector<std::string>& header,
                     const std::vector<std::vector<double>>& rows) {
    std::ofstream out = open_out(path);
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << format_double(r[i]);
        out << '\n';
    }
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace gel
