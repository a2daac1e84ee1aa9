#include <doctest.h>

#include <cstdlib>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "credscore/config.hpp"
#include "credscore/csv.hpp"
#include "credscore/errors.hpp"
#include "credscore/pipeline.hpp"
#include "credscore/stats.hpp"
#include "test_util.hpp"

using namespace credscore;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(CREDSCORE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

PipelineConfig quick_config(const std::filesystem::path& out) {
    PipelineConfig cfg;
    cfg.sim.n_students = 300;
    cfg.train.iterations = 500;
    cfg.out_dir = out;
    return cfg;
}

}  // namespace

TEST_CASE("config parser") {
    SUBCASE("defaults survive an empty file") {
        const PipelineConfig cfg = parse_config_text("", "inline");
        CHECK(cfg.sim.n_students == 3000);
        CHECK(cfg.train.alpha == 0.05);
        CHECK(cfg.train.split_ratio == 0.8);
        CHECK(cfg.stages.size() == 4);
    }

    SUBCASE("full round of keys with comments") {
        const std::string text =
            "# comment line\n"
            "n_students = 500\n"
            "seed = 9\n"
            "homework_mean_pct = 65.5  # trailing comment\n"
            "understanding_weights = 1,2,3,4,5,6,7,8,9,10\n"
            "c3 = 0.44\n"
            "noise_sd = 0\n"
            "alpha = 0.1\n"
            "iterations = 123\n"
            "split_ratio = 0.75\n"
            "shuffle_seed = 17\n"
            "out_dir = /tmp/somewhere\n"
            "stages = simulate,train\n";
        const PipelineConfig cfg = parse_config_text(text, "inline");
        CHECK(cfg.sim.n_students == 500);
        CHECK(cfg.sim.seed == 9);
        CHECK(cfg.sim.homework_mean_pct == 65.5);
        CHECK(cfg.sim.understanding_weights[9] == 10.0);
        CHECK(cfg.sim.weights[3] == 0.44);
        CHECK(cfg.sim.noise_sd == 0.0);
        CHECK(cfg.train.alpha == 0.1);
        CHECK(cfg.train.iterations == 123);
        CHECK(cfg.train.split_ratio == 0.75);
        CHECK(cfg.train.shuffle_seed == 17);
        CHECK(cfg.out_dir == "/tmp/somewhere");
        CHECK(cfg.stages == std::vector<std::string>{"simulate", "train"});
    }

    SUBCASE("malformed line reports its number") {
        CHECK_THROWS_WITH_AS(parse_config_text("alpha = 0.05\nseed = 1\nbogus line\n", "inline"),
                             doctest::Contains("line 3"), ConfigError);
    }

    SUBCASE("unknown key is rejected") {
        CHECK_THROWS_WITH_AS(parse_config_text("alfa = 0.05\n", "inline"),
                             doctest::Contains("unknown key"), ConfigError);
    }

    SUBCASE("wrong weight count is rejected") {
        CHECK_THROWS_AS(parse_config_text("understanding_weights = 1,2,3\n", "inline"), ConfigError);
    }

    SUBCASE("validation runs after parsing") {
        CHECK_THROWS_AS(parse_config_text("alpha = -1\n", "inline"), ConfigError);
        CHECK_THROWS_AS(parse_config_text("n_students = 1\n", "inline"), ConfigError);
    }

    SUBCASE("missing file is an I/O error") {
        CHECK_THROWS_AS(parse_config_file("/nonexistent/nowhere.cfg"), IoError);
    }
}

TEST_CASE("cohort CSV schema validation") {
    const auto dir = testutil::temp_dir("credscore_csv");
    const auto path = dir / "cohort.csv";

    SUBCASE("write-read round trip is exact") {
        SimulationConfig cfg;
        cfg.n_students = 50;
        const auto cohort = generate_cohort(cfg);
        write_cohort_csv(path, cohort);
        CHECK(read_cohort_csv(path) == cohort);
    }

    SUBCASE("wrong header column is named") {
        testutil::write_file(path,
                             "attendance,attentiveness,hw,understanding,prev_performance,performance\n");
        CHECK_THROWS_WITH_AS(read_cohort_csv(path), doctest::Contains("homework"), SchemaError);
    }

    SUBCASE("missing column is named") {
        testutil::write_file(path, "attendance,attentiveness,homework,understanding,prev_performance\n");
        CHECK_THROWS_WITH_AS(read_cohort_csv(path), doctest::Contains("performance"), SchemaError);
    }

    SUBCASE("bad field reports line and column") {
        testutil::write_file(
            path, std::string(kCohortCsvHeader) + "\n70,60,70,5,70,63\n70,abc,70,5,70,63\n");
        CHECK_THROWS_WITH_AS(read_cohort_csv(path), doctest::Contains("line 3"), SchemaError);
    }

    SUBCASE("out-of-range field is rejected") {
        testutil::write_file(path, std::string(kCohortCsvHeader) + "\n120,60,70,5,70,63\n");
        CHECK_THROWS_AS(read_cohort_csv(path), SchemaError);
    }

    SUBCASE("empty cohort file parses to zero records") {
        testutil::write_file(path, std::string(kCohortCsvHeader) + "\n");
        CHECK(read_cohort_csv(path).empty());
    }
}

TEST_CASE("simulate stage is byte-reproducible") {
    testutil::CoutSilencer quiet;
    const auto dir_a = testutil::temp_dir("credscore_sim_a");
    const auto dir_b = testutil::temp_dir("credscore_sim_b");
    PipelineConfig cfg;
    cfg.sim.n_students = 400;
    cfg.out_dir = dir_a;
    cmd_simulate(cfg);
    cfg.out_dir = dir_b;
    cmd_simulate(cfg);
    const std::string a = testutil::read_file(dir_a / kCohortFile);
    const std::string b = testutil::read_file(dir_b / kCohortFile);
    CHECK(!a.empty());
    CHECK(a == b);
    CHECK(std::count(a.begin(), a.end(), '\n') == 401);  // header + 400 rows
}

TEST_CASE("train stage artifacts") {
    testutil::CoutSilencer quiet;
    const auto dir = testutil::temp_dir("credscore_train");
    PipelineConfig cfg = quick_config(dir);
    cfg.sim.noise_sd = 0.0;
    cfg.train.iterations = 30000;  // tight recovery for the noiseless check
    cmd_simulate(cfg);
    cmd_train(cfg, dir / kCohortFile);

    CHECK(std::filesystem::exists(dir / kParamsFile));
    CHECK(std::filesystem::exists(dir / kCostHistoryFile));
    CHECK(std::filesystem::exists(dir / kComparisonFile));

    SUBCASE("comparison rows agree for a noiseless cohort") {
        const ModelParams params = read_params_file(dir / kParamsFile);
        for (int j = 0; j < 6; ++j) {
            CHECK(std::abs(params.theta[j] - cfg.sim.weights[j]) < 1e-3);
        }
    }

    SUBCASE("cost CSV descends") {
        const std::string csv = testutil::read_file(dir / kCostHistoryFile);
        REQUIRE(csv.rfind("iteration,cost\n", 0) == 0);
        const auto first_row = csv.find('\n') + 1;
        const double first = std::stod(csv.substr(csv.find(',', first_row) + 1));
        const auto last_comma = csv.rfind(',');
        const double last = std::stod(csv.substr(last_comma + 1));
        CHECK(last <= first);
    }

    SUBCASE("schema mismatch surfaces before training") {
        const auto bad = dir / "bad.csv";
        testutil::write_file(bad, "a,b\n1,2\n");
        CHECK_THROWS_AS(cmd_train(cfg, bad), SchemaError);
    }
}

TEST_CASE("verify stage cross-checks the params file") {
    testutil::CoutSilencer quiet;
    const auto dir = testutil::temp_dir("credscore_verify");
    PipelineConfig cfg;
    cfg.sim.n_students = 600;
    cfg.out_dir = dir;
    // full default iteration count so the oracle tolerance holds
    cmd_simulate(cfg);
    cmd_train(cfg, dir / kCohortFile);

    SUBCASE("healthy pipeline passes") {
        CHECK(cmd_verify(cfg, dir / kCohortFile, dir / kParamsFile));
        const std::string report = testutil::read_file(dir / kVerifyReportFile);
        CHECK(report.find("overall: PASS") != std::string::npos);
    }

    SUBCASE("tampered params fail and the component is listed") {
        ModelParams params = read_params_file(dir / kParamsFile);
        params.theta[3] += 0.5;
        write_params_file(dir / kParamsFile, params);
        CHECK(!cmd_verify(cfg, dir / kCohortFile, dir / kParamsFile));
        const std::string report = testutil::read_file(dir / kVerifyReportFile);
        CHECK(report.find("overall: FAIL") != std::string::npos);
        CHECK(report.find("theta3") != std::string::npos);
    }

    SUBCASE("duplicated feature is diagnosed as singular") {
        auto cohort = read_cohort_csv(dir / kCohortFile);
        for (auto& rec : cohort) rec.attentiveness = rec.attendance;
        write_cohort_csv(dir / kCohortFile, cohort);
        CHECK_THROWS_AS(cmd_verify(cfg, dir / kCohortFile, dir / kParamsFile),
                        SingularSystemError);
    }
}

TEST_CASE("score stage artifacts") {
    testutil::CoutSilencer quiet;
    const auto dir = testutil::temp_dir("credscore_score");
    const auto& d = testutil::default_fit();
    std::filesystem::create_directories(dir);
    write_cohort_csv(dir / kCohortFile, d.split_data.train);
    write_params_file(dir / kParamsFile, d.fit.params);
    cmd_score(dir, dir / kCohortFile, dir / kParamsFile);

    SUBCASE("scores correlate with the targets") {
        const std::string csv = testutil::read_file(dir / kScoresFile);
        REQUIRE(csv.rfind("student_id,credit_score\n", 0) == 0);
        std::vector<double> scores;
        std::size_t pos = csv.find('\n') + 1;
        while (pos < csv.size()) {
            const auto comma = csv.find(',', pos);
            const auto eol = csv.find('\n', pos);
            scores.push_back(std::stod(csv.substr(comma + 1, eol - comma - 1)));
            pos = eol + 1;
        }
        REQUIRE(scores.size() == d.split_data.train.size());
        const std::vector<double> y = targets(d.split_data.train);
        CHECK(stats::pearson(scores, y) > 0.9);
    }

    SUBCASE("importance CSV is the ranking") {
        const std::string csv = testutil::read_file(dir / kImportanceFile);
        CHECK(csv.rfind("feature,weight,share\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
    }

    SUBCASE("equal coefficients fall back to column order") {
        ModelParams equal;
        equal.theta = {1.0, 0.2, 0.2, 0.2, 0.2, 0.2};
        equal.scaling.offset.fill(0.0);
        equal.scaling.scale.fill(1.0);
        write_params_file(dir / kParamsFile, equal);
        cmd_score(dir, dir / kCohortFile, dir / kParamsFile);
        const std::string csv = testutil::read_file(dir / kImportanceFile);
        const auto second_line = csv.find('\n') + 1;
        CHECK(csv.substr(second_line, 11) == "attendance,");
    }

    SUBCASE("empty cohort notes zero students") {
        testutil::write_file(dir / kCohortFile, std::string(kCohortCsvHeader) + "\n");
        cmd_score(dir, dir / kCohortFile, dir / kParamsFile);
        CHECK(testutil::read_file(dir / kScoresFile) == "student_id,credit_score\n");
        const std::string summary = testutil::read_file(dir / kScoreSummaryFile);
        CHECK(summary.find("students: 0") != std::string::npos);
    }
}

TEST_CASE("full pipeline is bit-reproducible") {
    testutil::CoutSilencer quiet;
    const auto dir = testutil::temp_dir("credscore_all");
    const auto snapshot = testutil::temp_dir("credscore_all_snapshot");
    PipelineConfig cfg = quick_config(dir);
    cfg.sim.n_students = 600;
    cfg.train.iterations = 40000;  // verify stage needs the plateau

    CHECK(run_all(cfg) == 0);
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::filesystem::copy_file(entry.path(), snapshot / entry.path().filename());
    }
    CHECK(run_all(cfg) == 0);  // same config, same paths, overwriting in place

    for (const auto name : {kCohortFile, kParamsFile, kCostHistoryFile, kComparisonFile,
                            kVerifyReportFile, kScoresFile, kImportanceFile, kScoreSummaryFile}) {
        const std::string a = testutil::read_file(snapshot / name);
        const std::string b = testutil::read_file(dir / name);
        CHECK(!a.empty());
        CHECK(a == b);
    }
}

TEST_CASE("command line exit codes") {
    const auto dir = testutil::temp_dir("credscore_cli");

    SUBCASE("help exits zero") {
        CHECK(run_cli("--help") == 0);
    }
    SUBCASE("unreadable config is an I/O error") {
        CHECK(run_cli("simulate --config /nonexistent.cfg") == 5);
    }
    SUBCASE("malformed config is a config error") {
        const auto cfg = dir / "broken.cfg";
        testutil::write_file(cfg, "not a key value line\n");
        CHECK(run_cli("simulate --config " + cfg.string()) == 2);
    }
    SUBCASE("schema violation is a schema error") {
        const auto csv = dir / "bad.csv";
        testutil::write_file(csv, "x,y\n1,2\n");
        CHECK(run_cli("train --cohort " + csv.string() + " --out " + dir.string()) == 3);
    }
    SUBCASE("quick pipeline without verify succeeds end to end") {
        const auto cfg_path = dir / "quick.cfg";
        testutil::write_file(cfg_path,
                             "n_students = 200\niterations = 300\nstages = simulate,train,score\n"
                             "out_dir = " + (dir / "out").string() + "\n");
        CHECK(run_cli("run-all --config " + cfg_path.string()) == 0);
        CHECK(std::filesystem::exists(dir / "out" / kScoresFile));
    }
    SUBCASE("numeric failures exit with the numeric code") {
        const auto cfg_path = dir / "diverge.cfg";
        testutil::write_file(cfg_path, "n_students = 200\niterations = 200\nalpha = 50\n"
                                       "stages = simulate,train\n"
                                       "out_dir = " + (dir / "dout").string() + "\n");
        CHECK(run_cli("run-all --config " + cfg_path.string()) == 4);
    }
}

TEST_CASE("command line flag overrides") {
    const auto dir = testutil::temp_dir("credscore_cli_overrides");
    const std::string out = dir.string();

    CHECK(run_cli("simulate --seed 1 --out " + out) == 0);
    const std::string first = testutil::read_file(dir / kCohortFile);
    CHECK(std::count(first.begin(), first.end(), '\n') == 3001);  // header + default 3000 rows

    CHECK(run_cli("simulate --seed 2 --out " + out) == 0);
    CHECK(testutil::read_file(dir / kCohortFile) != first);

    CHECK(run_cli("simulate --seed 1 --out " + out) == 0);
    CHECK(testutil::read_file(dir / kCohortFile) == first);

    CHECK(run_cli("train --iterations 50 --out " + out) == 0);
    const std::string hist = testutil::read_file(dir / kCostHistoryFile);
    CHECK(std::count(hist.begin(), hist.end(), '\n') == 52);  // header + iterations + 1

    CHECK(run_cli("train --iterations 200 --alpha 50 --out " + out) == 4);  // diverges
}
