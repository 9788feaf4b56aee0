#include "spinphoton/io.hpp"

#include <cinttypes>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace spinphoton {

namespace {

const char* herald_name(HeraldKind kind) {
    switch (kind) {
        case HeraldKind::early_bin: return "early";
        case HeraldKind::late_bin: return "late";
        case HeraldKind::central_bin: return "central";
    }
    return "?";
}

const char* basis_name(SpinBasis basis) {
    switch (basis) {
        case SpinBasis::x: return "X";
        case SpinBasis::y: return "Y";
        case SpinBasis::z: return "Z";
    }
    return "?";
}

HeraldKind herald_from(const std::string& s) {
    if (s == "early") return HeraldKind::early_bin;
    if (s == "late") return HeraldKind::late_bin;
    if (s == "central") return HeraldKind::central_bin;
    throw std::runtime_error("clicks csv: bad herald '" + s + "'");
}

SpinBasis basis_from(const std::string& s) {
    if (s == "X") return SpinBasis::x;
    if (s == "Y") return SpinBasis::y;
    if (s == "Z") return SpinBasis::z;
    throw std::runtime_error("clicks csv: bad basis '" + s + "'");
}

}  // namespace

std::string clicks_to_csv(const ClickDataset& dataset) {
    std::string out =
        "attempt_id,herald,detector,window_index,detection_time_us,phi_rad,"
        "spin_basis,spin_result,photon_count\n";
    char line[192];
    for (const auto& r : dataset) {
        std::snprintf(line, sizeof(line), "%" PRIu64 ",%s,%d,%d,%.6f,%.6f,%s,%s,%d\n",
                      static_cast<std::uint64_t>(r.attempt_id), herald_name(r.herald),
                      r.detector, r.window_index, r.detection_time_us, r.phi_at_attempt,
                      basis_name(r.spin_basis),
                      r.spin_result == SpinResult::up ? "up" : "down", r.photon_count);
        out += line;
    }
    return out;
}

ClickDataset clicks_from_csv(const std::string& text) {
    ClickDataset out;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("clicks csv: empty file");
    if (line.rfind("attempt_id,", 0) != 0)
        throw std::runtime_error("clicks csv: missing header row");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string field;
        ClickRecord r;
        auto next = [&]() {
            if (!std::getline(row, field, ','))
                throw std::runtime_error("clicks csv: truncated row: " + line);
            return field;
        };
        r.attempt_id = std::stoull(next());
        r.herald = herald_from(next());
        r.detector = std::stoi(next());
        r.window_index = std::stoi(next());
        r.detection_time_us = std::stod(next());
        r.phi_at_attempt = std::stod(next());
        r.spin_basis = basis_from(next());
        r.spin_result = next() == "up" ? SpinResult::up : SpinResult::down;
        r.photon_count = std::stoi(next());
        r.spin_readout_done = true;
        out.push_back(r);
    }
    return out;
}

void write_clicks_csv(const std::string& path, const ClickDataset& dataset) {
    write_text_file(path, clicks_to_csv(dataset));
}

ClickDataset read_clicks_csv(const std::string& path) {
    return clicks_from_csv(read_text_file(path));
}

std::string run_id(const std::string& canonical_config, std::uint64_t seed) {
    // FNV-1a over the canonical config and the seed
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&](unsigned char c) {
        h ^= c;
        h *= 1099511628211ULL;
    };
    for (unsigned char c : canonical_config) mix(c);
    for (int i = 0; i < 8; ++i) mix(static_cast<unsigned char>(seed >> (8 * i)));
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

std::string manifest_json(const std::string& canonical_config, std::uint64_t seed,
                          const std::string& tool_version,
                          const std::vector<std::string>& output_paths,
                          const RunSummary& summary) {
    nlohmann::json j;
    j["run_id"] = run_id(canonical_config, seed);
    j["tool_version"] = tool_version;
    j["seed"] = seed;
    j["config"] = canonical_config;
    j["outputs"] = output_paths;
    j["timestamp_unix"] = static_cast<std::int64_t>(std::time(nullptr));
    j["summary"]["n_attempts"] = summary.n_attempts;
    j["summary"]["n_heralds"] = summary.n_heralds;
    j["summary"]["herald_probability"] = summary.herald_probability;
    j["summary"]["rate_hz"] = summary.rate_hz;
    return j.dump(2) + "\n";
}

std::string summary_to_kv(const RunSummary& s) {
    char buf[1024];
    std::string out;
    std::snprintf(buf, sizeof(buf),
                  "n_attempts = %" PRIu64 "\n"
                  "n_heralds = %" PRIu64 "\n"
                  "herald_probability = %.6e\n"
                  "wall_time_s = %.6f\n"
                  "wall_time_no_readout_s = %.6f\n"
                  "rate_hz = %.6f\n"
                  "rate_no_readout_hz = %.6f\n"
                  "readout_fidelity_bright = %.6f\n"
                  "readout_fidelity_dark = %.6f\n",
                  static_cast<std::uint64_t>(s.n_attempts),
                  static_cast<std::uint64_t>(s.n_heralds), s.herald_probability,
                  s.wall_time_s, s.wall_time_no_readout_s, s.rate_hz,
                  s.rate_no_readout_hz, s.readout_fidelity_bright,
                  s.readout_fidelity_dark);
    out = buf;
    for (std::size_t w = 0; w < s.window_counts.size(); ++w) {
        std::snprintf(buf, sizeof(buf), "window_%zu_heralds = %" PRIu64 "\n", w + 1,
                      static_cast<std::uint64_t>(s.window_counts[w]));
        out += buf;
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << text;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

}  // namespace spinphoton
