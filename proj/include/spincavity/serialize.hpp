// serialize.hpp — JSON schemas, CSV emission, and run manifests
//
// ModelParams serializes with the exact keys L, N, delta_c, delta_n, J_c,
// g_left, g_right, phi, omega, pos; doubles round-trip bit-exactly through
// nlohmann::json's shortest-representation printer. CSV files are UTF-8,
// comma-separated, '.' decimal, one header row, %.12g values.

#pragma once

#include <array>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "spincavity/core.hpp"
#include "spincavity/lindblad.hpp"
#include "spincavity/model.hpp"

namespace spincavity {

using json = nlohmann::json;

inline json to_json(const ModelParams& p) {
    return json{{"L", p.L},           {"N", p.N},
                {"delta_c", p.delta_c}, {"delta_n", p.delta_n},
                {"J_c", p.J_c},         {"g_left", p.g_left},
                {"g_right", p.g_right}, {"phi", p.phi},
                {"omega", p.omega},     {"pos", p.pos}};
}

inline ModelParams model_params_from_json(const json& j) {
    static const std::array<const char*, 10> known = {
        "L", "N", "delta_c", "delta_n", "J_c", "g_left", "g_right", "phi", "omega", "pos"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known) {
            if (key == k) ok = true;
        }
        if (!ok) throw ParameterError("ModelParams: unknown key '" + key + "'");
    }
    ModelParams p;
    p.L = j.at("L").get<int>();
    p.N = j.at("N").get<int>();
    p.delta_c = j.at("delta_c").get<std::vector<double>>();
    p.delta_n = j.at("delta_n").get<std::vector<double>>();
    p.J_c = j.at("J_c").get<std::vector<double>>();
    p.g_left = j.at("g_left").get<std::vector<double>>();
    p.g_right = j.at("g_right").get<std::vector<double>>();
    p.phi = j.at("phi").get<std::vector<double>>();
    p.omega = j.at("omega").get<std::vector<double>>();
    p.pos = j.at("pos").get<std::vector<int>>();
    p.validate();
    return p;
}

// ----------------------------------- CSV ------------------------------------

class CsvWriter {
public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw ParameterError("CsvWriter: cannot open " + path);
    }

    void header(const std::vector<std::string>& names) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i) out_ << ',';
            out_ << names[i];
        }
        out_ << '\n';
    }

    void row(const std::vector<double>& values) {
        char buf[32];
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (i) out_ << ',';
            if (std::isnan(values[i])) continue; // empty field
            std::snprintf(buf, sizeof buf, "%.12g", values[i]);
            out_ << buf;
        }
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

// ---------------------------------- SHA-1 -----------------------------------

// Compact SHA-1 for content-addressing run manifests.
inline std::string sha1_hex(const std::string& data) {
    auto rol = [](std::uint32_t v, int s) { return (v << s) | (v >> (32 - s)); };
    std::uint32_t h[5] = {0x67452301u, 0xEFCDAB89u, 0x98BADCFEu, 0x10325476u, 0xC3D2E1F0u};
    std::string msg = data;
    const std::uint64_t bits = static_cast<std::uint64_t>(msg.size()) * 8;
    msg.push_back('\x80');
    while (msg.size() % 64 != 56) msg.push_back('\0');
    for (int i = 7; i >= 0; --i) msg.push_back(static_cast<char>(bits >> (8 * i) & 0xFF));
    for (std::size_t chunk = 0; chunk < msg.size(); chunk += 64) {
        std::uint32_t w[80];
        for (int i = 0; i < 16; ++i) {
            w[i] = 0;
            for (int b = 0; b < 4; ++b) {
                w[i] = (w[i] << 8) | static_cast<unsigned char>(msg[chunk + 4 * i + b]);
            }
        }
        for (int i = 16; i < 80; ++i) w[i] = rol(w[i - 3] ^ w[i - 8] ^ w[i - 14] ^ w[i - 16], 1);
        std::uint32_t a = h[0], b = h[1], c = h[2], d = h[3], e = h[4];
        for (int i = 0; i < 80; ++i) {
            std::uint32_t f, k;
            if (i < 20) { f = (b & c) | (~b & d); k = 0x5A827999u; }
            else if (i < 40) { f = b ^ c ^ d; k = 0x6ED9EBA1u; }
            else if (i < 60) { f = (b & c) | (b & d) | (c & d); k = 0x8F1BBCDCu; }
            else { f = b ^ c ^ d; k = 0xCA62C1D6u; }
            const std::uint32_t t = rol(a, 5) + f + e + k + w[i];
            e = d; d = c; c = rol(b, 30); b = a; a = t;
        }
        h[0] += a; h[1] += b; h[2] += c; h[3] += d; h[4] += e;
    }
    char out[41];
    std::snprintf(out, sizeof out, "%08x%08x%08x%08x%08x", h[0], h[1], h[2], h[3], h[4]);
    return out;
}

// --------------------------------- Fixtures ----------------------------------

// A published reference parameter set: one row per stopping time.
struct OptimizedSetRow {
    double t_f = 0.0;
    std::vector<double> delta_c; // onsite mode
    std::vector<double> delta_n;
    std::vector<double> J_c;     // hopping mode
    std::vector<double> g;       // n1L n1R n2L n2R
};

struct OptimizedSet {
    std::string mode; // "onsite" | "hopping"
    double r = 0.0;
    ModelParams base;
    std::vector<OptimizedSetRow> rows;

    const OptimizedSetRow& row_for(double t_f) const {
        for (const auto& row : rows) {
            if (row.t_f == t_f) return row;
        }
        throw ParameterError("OptimizedSet: no row for the requested stopping time");
    }

    ModelParams apply(const OptimizedSetRow& row) const {
        ModelParams p = base;
        if (mode == "onsite") {
            p.delta_c = row.delta_c;
            p.delta_n = row.delta_n;
        } else {
            p.J_c = row.J_c;
            p.g_left = {row.g.at(0), row.g.at(2)};
            p.g_right = {row.g.at(1), row.g.at(3)};
        }
        p.validate();
        return p;
    }
};

inline OptimizedSet load_optimized_set(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("load_optimized_set: cannot open " + path);
    json j;
    in >> j;
    OptimizedSet set;
    set.mode = j.at("mode").get<std::string>();
    if (set.mode != "onsite" && set.mode != "hopping") {
        throw ParameterError("load_optimized_set: mode must be onsite or hopping");
    }
    set.r = j.at("r").get<double>();
    set.base = model_params_from_json(j.at("base"));
    for (const auto& row : j.at("rows")) {
        OptimizedSetRow r;
        r.t_f = row.at("tf").get<double>();
        if (set.mode == "onsite") {
            r.delta_c = row.at("delta_c").get<std::vector<double>>();
            r.delta_n = row.at("delta_n").get<std::vector<double>>();
        } else {
            r.J_c = row.at("J_c").get<std::vector<double>>();
            r.g = row.at("g").get<std::vector<double>>();
        }
        set.rows.push_back(std::move(r));
    }
    return set;
}

} // namespace spincavity
