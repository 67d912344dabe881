#include "polariton/output.hpp"

#include <array>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "polariton/errors.hpp"

namespace polariton {

std::string version_string() { return "0.1.0"; }

namespace {

// compact SHA-256 (FIPS 180-4)
struct Sha256 {
    std::array<std::uint32_t, 8> h{0x6a09e667u, 0xbb67ae85u, 0x3c6ef372u, 0xa54ff53au,
                                   0x510e527fu, 0x9b05688cu, 0x1f83d9abu, 0x5be0cd19u};
    std::array<std::uint8_t, 64> buf{};
    std::uint64_t total = 0;
    std::size_t fill = 0;

    static std::uint32_t rotr(std::uint32_t x, int n) { return (x >> n) | (x << (32 - n)); }

    void block(const std::uint8_t* p) {
        static constexpr std::uint32_t K[64] = {
            0x428a2f98, 0x71374491, 0xb5c0fbcf, 0xe9b5dba5, 0x3956c25b, 0x59f111f1, 0x923f82a4,
            0xab1c5ed5, 0xd807aa98, 0x12835b01, 0x243185be, 0x550c7dc3, 0x72be5d74, 0x80deb1fe,
            0x9bdc06a7, 0xc19bf174, 0xe49b69c1, 0xefbe4786, 0x0fc19dc6, 0x240ca1cc, 0x2de92c6f,
            0x4a7484aa, 0x5cb0a9dc, 0x76f988da, 0x983e5152, 0xa831c66d, 0xb00327c8, 0xbf597fc7,
            0xc6e00bf3, 0xd5a79147, 0x06ca6351, 0x14292967, 0x27b70a85, 0x2e1b2138, 0x4d2c6dfc,
            0x53380d13, 0x650a7354, 0x766a0abb, 0x81c2c92e, 0x92722c85, 0xa2bfe8a1, 0xa81a664b,
            0xc24b8b70, 0xc76c51a3, 0xd192e819, 0xd6990624, 0xf40e3585, 0x106aa070, 0x19a4c116,
            0x1e376c08, 0x2748774c, 0x34b0bcb5, 0x391c0cb3, 0x4ed8aa4a, 0x5b9cca4f, 0x682e6ff3,
            0x748f82ee, 0x78a5636f, 0x84c87814, 0x8cc70208, 0x90befffa, 0xa4506ceb, 0xbef9a3f7,
            0xc67178f2};
        std::uint32_t w[64];
        for (int i = 0; i < 16; ++i)
            w[i] = (std::uint32_t(p[4 * i]) << 24) | (std::uint32_t(p[4 * i + 1]) << 16) |
                   (std::uint32_t(p[4 * i + 2]) << 8) | std::uint32_t(p[4 * i + 3]);
        for (int i = 16; i < 64; ++i) {
            const std::uint32_t s0 = rotr(w[i - 15], 7) ^ rotr(w[i - 15], 18) ^ (w[i - 15] >> 3);
            const std::uint32_t s1 = rotr(w[i - 2], 17) ^ rotr(w[i - 2], 19) ^ (w[i - 2] >> 10);
            w[i] = w[i - 16] + s0 + w[i - 7] + s1;
        }
        auto a = h;
        for (int i = 0; i < 64; ++i) {
            const std::uint32_t S1 = rotr(a[4], 6) ^ rotr(a[4], 11) ^ rotr(a[4], 25);
            const std::uint32_t ch = (a[4] & a[5]) ^ (~a[4] & a[6]);
            const std::uint32_t t1 = a[7] + S1 + ch + K[i] + w[i];
            const std::uint32_t S0 = rotr(a[0], 2) ^ rotr(a[0], 13) ^ rotr(a[0], 22);
            const std::uint32_t maj = (a[0] & a[1]) ^ (a[0] & a[2]) ^ (a[1] & a[2]);
            const std::uint32_t t2 = S0 + maj;
            a[7] = a[6];
            a[6] = a[5];
            a[5] = a[4];
            a[4] = a[3] + t1;
            a[3] = a[2];
            a[2] = a[1];
            a[1] = a[0];
            a[0] = t1 + t2;
        }
        for (int i = 0; i < 8; ++i) h[i] += a[i];
    }

    void update(const void* data, std::size_t len) {
        const auto* p = static_cast<const std::uint8_t*>(data);
        total += len;
        while (len > 0) {
            const std::size_t take = std::min(len, buf.size() - fill);
            std::memcpy(buf.data() + fill, p, take);
            fill += take;
            p += take;
            len -= take;
            if (fill == buf.size()) {
                block(buf.data());
                fill = 0;
            }
        }
    }

    std::string hex_digest() {
        const std::uint64_t bits = total * 8;
        const std::uint8_t pad = 0x80;
        update(&pad, 1);
        const std::uint8_t zero = 0;
        while (fill != 56) update(&zero, 1);
        std::uint8_t len[8];
        for (int i = 0; i < 8; ++i) len[i] = static_cast<std::uint8_t>(bits >> (56 - 8 * i));
        update(len, 8);
        std::ostringstream out;
        for (auto v : h) {
            char b[9];
            std::snprintf(b, sizeof(b), "%08x", v);
            out << b;
        }
        return out.str();
    }
};

}  // namespace

std::string sha256_hex(const std::string& bytes) {
    Sha256 s;
    s.update(bytes.data(), bytes.size());
    return s.hex_digest();
}

std::string format_full(double x) {
    char b[40];
    std::snprintf(b, sizeof(b), "%.16e", x);
    return b;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
}

std::vector<Vec3> read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open points file: " + path);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("points file is empty: " + path);
    // strip potential BOM / whitespace
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ')) line.pop_back();
    if (line != "x,y,z")
        throw ConfigError("points file must start with the header 'x,y,z', got '" + line + "'");
    std::vector<Vec3> pts;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string a, b, c;
        if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c))
            throw ConfigError("points file line " + std::to_string(lineno) + ": expected x,y,z");
        try {
            pts.emplace_back(std::stod(a), std::stod(b), std::stod(c));
        } catch (...) {
            throw ConfigError("points file line " + std::to_string(lineno) + ": bad number");
        }
    }
    return pts;
}

void write_modes_csv(const std::string& path, const RunConfig& cfg,
                     const SpectralReport& report) {
    std::ostringstream out;
    out << "# config_sha256=" << cfg.config_hash << "\n";
    out << "family,label,lambda,norm,residual\n";
    auto dump = [&](const std::vector<SpectralReport::Mode>& modes, const char* fam) {
        for (const auto& m : modes)
            out << fam << "," << m.label << "," << format_full(m.lambda) << ","
                << format_full(m.norm) << "," << format_full(m.residual) << "\n";
    };
    dump(report.e_modes, "e");
    dump(report.m_modes, "m");
    write_text_file(path, out.str());
}

namespace {

void field_map_rows(std::ostringstream& out, const SpectralGrid& grid, const FieldModeMap& map) {
    const auto put = [&](const Eigen::Vector3cd& c) {
        for (int i = 0; i < 3; ++i)
            out << "," << format_full(c(i).real()) << "," << format_full(c(i).imag());
        out << "\n";
    };
    for (std::size_t p = 0; p < map.points.size(); ++p) {
        const auto& pt = map.points[p];
        for (std::size_t l = 0; l < grid.n_field(); ++l) {
            const auto& lbl = grid.field_labels()[l];
            out << format_full(pt.x()) << "," << format_full(pt.y()) << ","
                << format_full(pt.z()) << ",e," << l << "," << format_full(lbl.omega) << ","
                << lbl.radial_index << "," << (lbl.sigma == Polarization::plus ? "+" : "-")
                << "," << (lbl.parity == Parity::cos ? "c" : "s");
            put(map.e_coeff(p, l));
        }
        for (std::size_t l = 0; l < grid.n_medium(); ++l) {
            const auto& lbl = grid.medium_labels()[l];
            out << format_full(pt.x()) << "," << format_full(pt.y()) << ","
                << format_full(pt.z()) << ",m," << l << "," << format_full(lbl.nu) << ","
                << lbl.voxel << "," << lbl.component << ",-";
            put(map.m_coeff(p, l));
        }
    }
}

}  // namespace

void write_field_map_csv(const std::string& path, const RunConfig& cfg, const SpectralGrid& grid,
                         const FieldModeMap& map) {
    std::ostringstream out;
    out << "# config_sha256=" << cfg.config_hash << "\n";
    out << "x,y,z,family,mode,lambda,label_a,label_b,label_c,"
           "re_Ex,im_Ex,re_Ey,im_Ey,re_Ez,im_Ez\n";
    field_map_rows(out, grid, map);
    write_text_file(path, out.str());
}

void write_field_map_sidecar(const std::string& path, const RunConfig& cfg,
                             const SpectralGrid& grid, const FieldModeMap& map) {
    nlohmann::json j;
    j["config_sha256"] = cfg.config_hash;
    j["version"] = version_string();
    j["n_points"] = map.points.size();
    j["n_e_modes"] = grid.n_field();
    j["n_m_modes"] = grid.n_medium();
    j["sign"] = (map.sign == I0Sign::plus ? "plus" : "minus");
    j["e_family_norm"] = map.e_norm();
    j["m_family_norm"] = map.m_norm();
    j["rows"] = map.points.size() * grid.n_total();
    write_text_file(path, j.dump(2) + "\n");
}

void write_manifest(const std::string& path, const RunConfig& cfg,
                    const std::vector<std::pair<std::string, double>>& timings_s) {
    nlohmann::json j = nlohmann::json::parse(cfg.to_json());
    j["version"] = version_string();
    const auto now = std::chrono::system_clock::now();
    j["timestamp_unix"] =
        std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch()).count();
    nlohmann::json t;
    for (const auto& [name, secs] : timings_s) t[name] = secs;
    j["timings_s"] = t;
    write_text_file(path, j.dump(2) + "\n");
}

}  // namespace polariton
