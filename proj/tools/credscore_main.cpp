#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "credscore/config.hpp"
#include "credscore/errors.hpp"
#include "credscore/pipeline.hpp"

namespace {

struct CliOptions {
    std::string config_path;
    std::string out_dir;
    std::string cohort_path;
    std::string params_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> iterations;
    std::optional<double> alpha;
};

void add_common(CLI::App* cmd, CliOptions& opt, bool with_inputs) {
    cmd->add_option("--config", opt.config_path, "key=value config file");
    cmd->add_option("--out", opt.out_dir, "output directory (default: out)");
    cmd->add_option("--seed", opt.seed, "override simulation seed");
    cmd->add_option("--iterations", opt.iterations, "override gradient-descent iteration count");
    cmd->add_option("--alpha", opt.alpha, "override learning rate");
    if (with_inputs) {
        cmd->add_option("--cohort", opt.cohort_path, "cohort CSV (default: <out>/cohort.csv)");
        cmd->add_option("--params", opt.params_path, "params file (default: <out>/params.txt)");
    }
}

credscore::PipelineConfig load_config(const CliOptions& opt) {
    credscore::PipelineConfig cfg;
    if (!opt.config_path.empty()) {
        cfg = credscore::parse_config_file(opt.config_path);
    }
    if (!opt.out_dir.empty()) cfg.out_dir = opt.out_dir;
    if (opt.seed) cfg.sim.seed = *opt.seed;
    if (opt.iterations) cfg.train.iterations = static_cast<std::size_t>(*opt.iterations);
    if (opt.alpha) cfg.train.alpha = *opt.alpha;
    cfg.sim.validate();
    cfg.train.validate();
    return cfg;
}

std::filesystem::path cohort_or_default(const CliOptions& opt, const credscore::PipelineConfig& cfg) {
    return opt.cohort_path.empty() ? cfg.out_dir / credscore::kCohortFile
                                   : std::filesystem::path(opt.cohort_path);
}

std::filesystem::path params_or_default(const CliOptions& opt, const credscore::PipelineConfig& cfg) {
    return opt.params_path.empty() ? cfg.out_dir / credscore::kParamsFile
                                   : std::filesystem::path(opt.params_path);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"student activity simulation, regression fit and credit scoring"};
    app.require_subcommand(1);

    CliOptions opt;
    CLI::App* sim = app.add_subcommand("simulate", "generate a cohort CSV");
    CLI::App* tr = app.add_subcommand("train", "fit the model by batch gradient descent");
    CLI::App* ver = app.add_subcommand("verify", "cross-check a fit against the closed-form oracle");
    CLI::App* sc = app.add_subcommand("score", "compute per-student credit scores");
    CLI::App* all = app.add_subcommand("run-all", "simulate, train, verify and score in one go");

    add_common(sim, opt, false);
    add_common(tr, opt, true);
    add_common(ver, opt, true);
    add_common(sc, opt, true);
    add_common(all, opt, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        const credscore::PipelineConfig cfg = load_config(opt);
        if (sim->parsed()) {
            credscore::cmd_simulate(cfg);
        } else if (tr->parsed()) {
            credscore::cmd_train(cfg, cohort_or_default(opt, cfg));
        } else if (ver->parsed()) {
            if (!credscore::cmd_verify(cfg, cohort_or_default(opt, cfg), params_or_default(opt, cfg))) {
                return 4;
            }
        } else if (sc->parsed()) {
            credscore::cmd_score(cfg.out_dir, cohort_or_default(opt, cfg), params_or_default(opt, cfg));
        } else if (all->parsed()) {
            return credscore::run_all(cfg);
        }
        return 0;
    } catch (const credscore::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const credscore::SchemaError& e) {
        std::cerr << "schema error: " << e.what() << "\n";
        return 3;
    } catch (const credscore::NumericError& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    } catch (const credscore::IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 5;
    } catch (const std::invalid_argument& e) {
        std::cerr << "numeric error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
