#include "landau/io.hpp"

#include <charconv>
#include <fstream>

#include <json.hpp>

namespace landau {

std::string format_double(double v) {
    char buf[40];
    auto r = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, r.ptr);
}

std::string provenance_line(const std::string& hash) {
    return "# idslab 1.0 config_hash=" + hash;
}

void write_table(const std::string& path, const std::vector<std::string>& comments,
                 const std::vector<std::string>& header,
                 const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& c : comments) out << c << "\n";
    for (size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
        out << "\n";
    }
}

void write_ids_csv(const std::string& path, const IDSCurve& curve, const std::string& hash) {
    std::vector<std::vector<std::string>> rows;
    for (int i = 0; i < curve.energies.size(); ++i)
        rows.push_back({format_double(curve.energies[i]), format_double(curve.values[i]),
                        format_double(curve.stderrs[i])});
    write_table(path, {provenance_line(hash)}, {"E", "value", "stderr"}, rows);
}

void write_meta_json(const std::string& path, const RunConfig& cfg, const IDSCurve& curve,
                     const std::string& hash) {
    nlohmann::ordered_json j;
    j["tool"] = "idslab 1.0";
    j["config_hash"] = hash;
    j["config"] = canonical_config(cfg);
    j["seed"] = cfg.seed;
    j["q"] = curve.q;
    j["b"] = curve.b;
    j["sup_v"] = curve.sup_v;
    j["samples"] = curve.samples;
    j["theta_nodes"] = curve.theta_nodes;
    j["starved"] = curve.starved;
    j["warnings"] = curve.warnings;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << j.dump(2) << "\n";
}

} // namespace landau
