#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lfcov/plot.hpp"
#include "lfcov/scenario.hpp"
#include "lfcov/selfcheck.hpp"

using namespace lfcov;
namespace fs = std::filesystem;

namespace {

std::string small_scenario_json() {
    return R"({
  "schema_version": 1,
  "msd": {"m": 1.0, "c": 2.0, "kappa": 8.0, "rest_length": 1.0, "leader_count": 6},
  "gains": {"kappa1": 0.5, "kappa2": 1.0, "kappa3": 1.5, "kappa4": 1.0,
            "delta_sensing": 0.15, "sensing_radius": 1.2},
  "coverage": {"K": 1.0, "law": "exact"},
  "follower_count": 5,
  "obstacles": [],
  "start": [0.0, 0.0],
  "goal": [3.0, 0.0],
  "v_ref": 0.6,
  "dt": 0.005,
  "duration": 1.0,
  "seed": 3,
  "log_stride": 10
})";
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LFCOV_CLI_PATH) + " " + args + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("scenario JSON: round trip preserves every field") {
    Scenario sc = parse_scenario(small_scenario_json());
    sc.obstacles = {CircleObstacle{{1.0, 2.0}, 0.25},
                    PolygonObstacle{{{0, 0}, {1, 0}, {0.5, 1}}}};
    sc.path_file = "somewhere.json";
    const std::string text = serialize_scenario(sc);
    const Scenario back = parse_scenario(text);
    CHECK(serialize_scenario(back) == text);
    CHECK(back.msd.kappa == sc.msd.kappa);
    CHECK(back.seed == sc.seed);
    CHECK(back.obstacles.size() == 2);
    CHECK(back.path_file == sc.path_file);
}

TEST_CASE("scenario JSON: unknown keys and constraint violations are named") {
    std::string bad = small_scenario_json();
    bad.insert(bad.rfind('}'), ", \"unexpected\": 1");
    CHECK_THROWS_WITH_AS(parse_scenario(bad), "unknown key 'unexpected'", ConfigError);

    std::string zero_dt = small_scenario_json();
    const auto pos = zero_dt.find("\"dt\": 0.005");
    zero_dt.replace(pos, 11, "\"dt\": 0.0");
    try {
        parse_scenario(zero_dt);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("dt") != std::string::npos);
    }
}

TEST_CASE("run log: 17-digit floats survive the round trip bit-exactly") {
    StepRecord r;
    r.time = 0.1 + 0.2;  // not representable exactly
    r.leaders = {{1.0 / 3.0, -2.0 / 7.0}, {1e-17, 3.0}};
    r.followers = {{0.12345678901234567, 9.87654321}};
    r.followers_virtual = {{M_PI, M_E}};
    r.e_gamma = std::sqrt(2.0);
    r.e_c = 1.0 / 81.0;
    r.max_elongation = 0.17157287525380988;
    r.min_obstacle_distance = 0.3333333333333333;
    r.seam = 5e-300;
    r.projections = 3;

    std::ostringstream out;
    write_run_log_record(out, r);
    StepRecord r2 = r;
    r2.time = 0.7;
    r2.min_obstacle_distance.reset();
    write_run_log_record(out, r2);

    std::istringstream in(out.str());
    const RunLog log = parse_run_log(in);
    REQUIRE(log.records.size() == 2);
    const StepRecord& p = log.records[0];
    CHECK(p.time == r.time);
    CHECK(p.leaders[0].x == r.leaders[0].x);
    CHECK(p.leaders[1].x == r.leaders[1].x);
    CHECK(p.followers[0].x == r.followers[0].x);
    CHECK(p.followers_virtual[0].y == r.followers_virtual[0].y);
    CHECK(p.e_gamma == r.e_gamma);
    CHECK(p.e_c == r.e_c);
    CHECK(p.max_elongation == r.max_elongation);
    CHECK(*p.min_obstacle_distance == *r.min_obstacle_distance);
    CHECK(p.seam == r.seam);
    CHECK_FALSE(log.records[1].min_obstacle_distance.has_value());
}

TEST_CASE("run log: malformed inputs") {
    std::istringstream empty("");
    CHECK_THROWS_AS(parse_run_log(empty), MalformedLog);
    std::istringstream junk("not json\n");
    CHECK_THROWS_AS(parse_run_log(junk), MalformedLog);
    std::istringstream decreasing(
        "{\"t\":1,\"leaders\":[],\"followers\":[],\"followers_virtual\":[],\"e_gamma\":0,"
        "\"e_c\":0,\"max_elong\":0,\"min_obs_dist\":null,\"seam\":0,\"projections\":0}\n"
        "{\"t\":0.5,\"leaders\":[],\"followers\":[],\"followers_virtual\":[],\"e_gamma\":0,"
        "\"e_c\":0,\"max_elong\":0,\"min_obs_dist\":null,\"seam\":0,\"projections\":0}\n");
    CHECK_THROWS_AS(parse_run_log(decreasing), MalformedLog);
}

TEST_CASE("metrics csv: header and empty sentinel") {
    StepRecord r;
    r.time = 0.5;
    r.e_gamma = 0.25;
    std::ostringstream out;
    write_metrics_csv(out, {r});
    const std::string text = out.str();
    CHECK(text.find("t,e_gamma,e_c,max_elong,min_obs_dist\n") == 0);
    CHECK(text.find("0.5,0.25,0,0,\n") != std::string::npos);
}

TEST_CASE("summary json: null sentinel without obstacles") {
    RunSummary s;
    s.steps = 10;
    s.completed = true;
    const std::string text = serialize_summary(s);
    CHECK(text.find("\"min_obstacle_distance\": null") != std::string::npos);
    CHECK(text.find("\"fault\": null") != std::string::npos);
}

TEST_CASE("path file round trip produces identical queries") {
    const fs::path dir = fs::temp_directory_path() / "lfcov_path_test";
    fs::create_directories(dir);
    const ReferencePath path =
        make_reference_path({{0, 0}, {1.1, 0.3}, {2.0, -0.2}, {3.7, 0.9}}, 0.8);
    save_path_file((dir / "p.json").string(), path);
    const ReferencePath loaded = load_path_file((dir / "p.json").string());
    REQUIRE(loaded.samples.size() == path.samples.size());
    for (double t : {0.0, 0.7, 1.9, 3.3, 99.0}) {
        const PathSample a = query(path, t);
        const PathSample b = query(loaded, t);
        CHECK(a.gamma.x == b.gamma.x);
        CHECK(a.gamma.y == b.gamma.y);
        CHECK(a.gamma_dot.x == b.gamma_dot.x);
        CHECK(a.gamma_dot.y == b.gamma_dot.y);
    }
    fs::remove_all(dir);
}

TEST_CASE("selfcheck: unknown suite is rejected") {
    CHECK_THROWS_AS(run_check_suite("nonsense"), UnknownSuite);
}

TEST_CASE("cli: run writes the three outputs and is byte-deterministic") {
    const fs::path dir = fs::temp_directory_path() / "lfcov_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "scenario.json");
        f << small_scenario_json();
    }
    const std::string scenario = (dir / "scenario.json").string();

    REQUIRE(run_cli("run --scenario " + scenario + " --out " + (dir / "out1").string()) == 0);
    CHECK(fs::exists(dir / "out1/run.jsonl"));
    CHECK(fs::exists(dir / "out1/summary.json"));
    CHECK(fs::exists(dir / "out1/metrics.csv"));

    // duration/dt/stride + 1 rows after the header.
    std::ifstream csv(dir / "out1/metrics.csv");
    int lines = 0;
    std::string line;
    while (std::getline(csv, line)) ++lines;
    CHECK(lines == 1 + 1.0 / 0.005 / 10 + 1);

    REQUIRE(run_cli("run --scenario " + scenario + " --out " + (dir / "out2").string()) == 0);
    CHECK(slurp(dir / "out1/run.jsonl") == slurp(dir / "out2/run.jsonl"));

    // dt = 0 is a config error naming the key.
    std::string zero_dt = small_scenario_json();
    zero_dt.replace(zero_dt.find("\"dt\": 0.005"), 11, "\"dt\": 0.0");
    {
        std::ofstream f(dir / "bad.json");
        f << zero_dt;
    }
    CHECK(run_cli("run --scenario " + (dir / "bad.json").string() + " --out " +
                  (dir / "out3").string()) == 1);
    fs::remove_all(dir);
}

TEST_CASE("cli: plan round trip and plot outputs") {
    const fs::path dir = fs::temp_directory_path() / "lfcov_cli_plot";
    fs::remove_all(dir);
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "scenario.json");
        f << small_scenario_json();
    }
    const std::string scenario = (dir / "scenario.json").string();
    REQUIRE(run_cli("plan --scenario " + scenario + " --out " + (dir / "path.json").string()) ==
            0);
    CHECK(load_path_file((dir / "path.json").string()).samples.size() >= 2);

    REQUIRE(run_cli("run --scenario " + scenario + " --out " + (dir / "out").string()) == 0);
    REQUIRE(run_cli("plot --log " + (dir / "out/run.jsonl").string() + " --out " +
                    (dir / "plots").string() + " --frames 0.5,1.0 --scenario " + scenario) == 0);
    CHECK(fs::exists(dir / "plots/metrics.svg"));
    CHECK(fs::exists(dir / "plots/frame_0.5.svg"));
    CHECK(fs::exists(dir / "plots/frame_1.svg"));

    const std::string svg = slurp(dir / "plots/frame_0.5.svg");
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("</svg>") != std::string::npos);

    // Frame time outside the log range.
    CHECK(run_cli("plot --log " + (dir / "out/run.jsonl").string() + " --out " +
                  (dir / "plots2").string() + " --frames 99") == 1);

    // Unknown suite exits with a config error.
    CHECK(run_cli("check --suite nonsense") == 1);
    fs::remove_all(dir);
}

TEST_CASE("svg renderers produce tagged documents") {
    StepRecord r;
    r.time = 1.0;
    r.leaders = {{0, 0}, {0, 1}, {-1, 0}, {-1, 1}};
    r.followers = {{-0.5, 0.5}};
    r.followers_virtual = {{0.5, 0.5}};
    r.e_gamma = 0.1;
    r.e_c = 0.4;
    const std::string metrics = render_metrics_svg({r});
    CHECK(metrics.rfind("<?xml", 0) == 0);
    CHECK(metrics.find("</svg>") != std::string::npos);
    const std::string frame = render_frame_svg(r, FrameContext{});
    CHECK(frame.rfind("<?xml", 0) == 0);
    CHECK(frame.find("</svg>") != std::string::npos);
}
