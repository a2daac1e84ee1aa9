#include "credscore/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include "credscore/errors.hpp"

namespace credscore {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(std::string_view source, std::size_t line_no, const std::string& what) {
    throw ConfigError(std::string(source) + " line " + std::to_string(line_no) + ": " + what);
}

double parse_double(std::string_view v, std::string_view key, std::string_view source,
                    std::size_t line_no) {
    double out = 0.0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size() || !std::isfinite(out)) {
        fail(source, line_no, "invalid number for '" + std::string(key) + "': '" + std::string(v) + "'");
    }
    return out;
}

std::uint64_t parse_u64(std::string_view v, std::string_view key, std::string_view source,
                        std::size_t line_no) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || ptr != v.data() + v.size()) {
        fail(source, line_no,
             "invalid unsigned integer for '" + std::string(key) + "': '" + std::string(v) + "'");
    }
    return out;
}

std::vector<std::string> split_csv_list(std::string_view v) {
    std::vector<std::string> out;
    std::string item;
    std::stringstream ss{std::string(v)};
    while (std::getline(ss, item, ',')) out.emplace_back(trim(item));
    return out;
}

}  // namespace

PipelineConfig parse_config_text(std::string_view text, std::string_view source_name) {
    PipelineConfig cfg;
    std::size_t line_no = 0;
    std::stringstream stream{std::string(text)};
    std::string raw_line;

    while (std::getline(stream, raw_line)) {
        ++line_no;
        if (!raw_line.empty() && raw_line.back() == '\r') raw_line.pop_back();
        std::string_view line = raw_line;
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            fail(source_name, line_no, "expected key=value, got '" + std::string(line) + "'");
        }
        const std::string_view key = trim(line.substr(0, eq));
        const std::string_view val = trim(line.substr(eq + 1));
        if (key.empty()) fail(source_name, line_no, "empty key");

        auto num = [&] { return parse_double(val, key, source_name, line_no); };
        auto u64 = [&] { return parse_u64(val, key, source_name, line_no); };

        if (key == "n_students") {
            cfg.sim.n_students = static_cast<std::size_t>(u64());
        } else if (key == "seed") {
            cfg.sim.seed = u64();
        } else if (key == "attendance_mean_pct") {
            cfg.sim.attendance_mean_pct = num();
        } else if (key == "attendance_sd_pct") {
            cfg.sim.attendance_sd_pct = num();
        } else if (key == "attentiveness_mean_pct") {
            cfg.sim.attentiveness_mean_pct = num();
        } else if (key == "attentiveness_sd_pct") {
            cfg.sim.attentiveness_sd_pct = num();
        } else if (key == "homework_mean_pct") {
            cfg.sim.homework_mean_pct = num();
        } else if (key == "homework_sd_pct") {
            cfg.sim.homework_sd_pct = num();
        } else if (key == "understanding_weights") {
            const auto parts = split_csv_list(val);
            if (parts.size() != cfg.sim.understanding_weights.size()) {
                fail(source_name, line_no,
                     "understanding_weights needs exactly " +
                         std::to_string(cfg.sim.understanding_weights.size()) + " values, got " +
                         std::to_string(parts.size()));
            }
            for (std::size_t i = 0; i < parts.size(); ++i) {
                cfg.sim.understanding_weights[i] = parse_double(parts[i], key, source_name, line_no);
            }
        } else if (key == "prev_score_mean") {
            cfg.sim.prev_score_mean = num();
        } else if (key == "prev_score_sd") {
            cfg.sim.prev_score_sd = num();
        } else if (key == "c0") {
            cfg.sim.weights[0] = num();
        } else if (key == "c1") {
            cfg.sim.weights[1] = num();
        } else if (key == "c2") {
            cfg.sim.weights[2] = num();
        } else if (key == "c3") {
            cfg.sim.weights[3] = num();
        } else if (key == "c4") {
            cfg.sim.weights[4] = num();
        } else if (key == "c5") {
            cfg.sim.weights[5] = num();
        } else if (key == "noise_sd") {
            cfg.sim.noise_sd = num();
        } else if (key == "alpha") {
            cfg.train.alpha = num();
        } else if (key == "iterations") {
            cfg.train.iterations = static_cast<std::size_t>(u64());
        } else if (key == "split_ratio") {
            cfg.train.split_ratio = num();
        } else if (key == "shuffle_seed") {
            cfg.train.shuffle_seed = u64();
        } else if (key == "out_dir") {
            cfg.out_dir = std::string(val);
        } else if (key == "stages") {
            const auto parts = split_csv_list(val);
            for (const auto& stage : parts) {
                if (stage != "simulate" && stage != "train" && stage != "verify" &&
                    stage != "score") {
                    fail(source_name, line_no, "unknown stage '" + stage + "'");
                }
            }
            cfg.stages = parts;
        } else {
            fail(source_name, line_no, "unknown key '" + std::string(key) + "'");
        }
    }

    cfg.sim.validate();
    cfg.train.validate();
    return cfg;
}

PipelineConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open config '" + path.string() + "' for reading");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.filename().string());
}

}  // namespace credscore
