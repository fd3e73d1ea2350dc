#include "doctest.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "ptdimer/cli.hpp"

using namespace ptdimer;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("ptdimer_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int counter;
};
int TempDir::counter = 0;

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

struct Csv {
    std::vector<std::string> meta;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream in(text);
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line[0] == '#') {
            csv.meta.push_back(line);
            continue;
        }
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ',')) fields.push_back(field);
        if (!have_header) {
            csv.header = fields;
            have_header = true;
        } else {
            csv.rows.push_back(fields);
        }
    }
    return csv;
}

double to_double(const std::string& s) {
    double v = 0;
    std::from_chars(s.data(), s.data() + s.size(), v);
    return v;
}

} // namespace

TEST_CASE("sweep reproduces the asymmetric-hopping onset") {
    TempDir dir;
    RunConfig cfg;
    cfg.command = Command::sweep;
    cfg.eps = 0.5;
    cfg.t = 1;
    cfg.steps = 11;
    cfg.range = {0.0, 2.0};
    cfg.out = (dir.path / "sweep.csv").string();
    REQUIRE(run(cfg) == kExitOk);

    const Csv csv = parse_csv(slurp(cfg.out));
    REQUIRE(csv.rows.size() == 11);
    REQUIRE(csv.header ==
            std::vector<std::string>{"lambda", "re_e_plus", "im_e_plus", "re_e_minus",
                                     "im_e_minus"});
    for (const auto& row : csv.rows) {
        const double lam = to_double(row[0]);
        const double im_p = to_double(row[2]);
        const double im_m = to_double(row[4]);
        if (lam < 1.0) {
            CHECK(im_p == 0.0);
            CHECK(im_m == 0.0);
        } else if (lam > 1.0) {
            const double expect = 2.0 * std::sqrt(lam * lam - 1.0);
            CHECK(im_p == doctest::Approx(expect).epsilon(1e-12));
            CHECK(im_m == doctest::Approx(-expect).epsilon(1e-12));
        }
    }
    // metadata and line endings
    const std::string text = slurp(cfg.out);
    CHECK(text.find("# command=sweep\n") != std::string::npos);
    CHECK(text.find("# eps=0.5\n") != std::string::npos);
    CHECK(text.find('\r') == std::string::npos);
}

TEST_CASE("csv numbers survive a text round-trip bit-exactly") {
    TempDir dir;
    RunConfig cfg;
    cfg.command = Command::sweep;
    cfg.eps = 0.5;
    cfg.t = 1;
    cfg.gamma = 0.1;
    cfg.u = 2;
    cfg.steps = 57;
    cfg.range = {0.0, 2.0};
    cfg.out = (dir.path / "sweep.csv").string();
    REQUIRE(run(cfg) == kExitOk);

    const std::string text = slurp(cfg.out);
    const Csv csv = parse_csv(text);
    std::string rebuilt;
    for (const std::string& m : csv.meta) rebuilt += m + "\n";
    for (size_t i = 0; i < csv.header.size(); ++i)
        rebuilt += csv.header[i] + (i + 1 < csv.header.size() ? "," : "\n");
    for (const auto& row : csv.rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            const double v = to_double(row[i]);
            char buf[32];
            const auto r = std::to_chars(buf, buf + sizeof buf, v);
            rebuilt += std::string(buf, r.ptr) + (i + 1 < row.size() ? "," : "\n");
        }
    }
    CHECK(rebuilt == text);
}

TEST_CASE("sweeps are deterministic and independent of the worker count") {
    TempDir dir;
    RunConfig cfg;
    cfg.command = Command::sweep;
    cfg.eps = 0.5;
    cfg.t = 1;
    cfg.gamma = 0.1;
    cfg.u = 2;
    cfg.steps = 101;
    cfg.range = {0.0, 2.0};
    cfg.jobs = 1;
    cfg.out = (dir.path / "a.csv").string();
    REQUIRE(run(cfg) == kExitOk);
    cfg.jobs = 4;
    cfg.out = (dir.path / "b.csv").string();
    REQUIRE(run(cfg) == kExitOk);
    cfg.jobs = 4;
    cfg.out = (dir.path / "c.csv").string();
    REQUIRE(run(cfg) == kExitOk);
    const std::string a = slurp(dir.path / "a.csv");
    CHECK(a == slurp(dir.path / "b.csv"));
    CHECK(a == slurp(dir.path / "c.csv"));
    CHECK(!a.empty());
}

TEST_CASE("spectrum command emits all applicable methods") {
    TempDir dir;
    RunConfig cfg;
    cfg.command = Command::spectrum;
    cfg.eps = 0.5;
    cfg.t = 1;
    cfg.out = (dir.path / "spectrum.csv").string();
    REQUIRE(run(cfg) == kExitOk);
    const Csv csv = parse_csv(slurp(cfg.out));
    REQUIRE(csv.rows.size() == 18); // closed_form + cardano + oracle
    for (const char* method : {"closed_form", "cardano", "oracle"}) {
        std::vector<double> re;
        for (const auto& row : csv.rows)
            if (row[0] == method) re.push_back(to_double(row[2]));
        REQUIRE(re.size() == 6);
        const std::vector<double> expect = {-1, 1, 1, 1, 1, 3};
        for (size_t i = 0; i < 6; ++i) CHECK(re[i] == doctest::Approx(expect[i]).epsilon(1e-10));
    }

    // gamma != 0 drops the closed form
    cfg.gamma = 0.1;
    cfg.out = (dir.path / "spectrum2.csv").string();
    REQUIRE(run(cfg) == kExitOk);
    CHECK(parse_csv(slurp(cfg.out)).rows.size() == 12);
}

TEST_CASE("matrix command emits 36 entries") {
    TempDir dir;
    RunConfig cfg;
    cfg.command = Command::matrix;
    cfg.eps = 0.5;
    cfg.t = 1;
    cfg.lambda = 0.5;
    cfg.out = (dir.path / "m.csv").string();
    REQUIRE(run(cfg) == kExitOk);
    const Csv csv = parse_csv(slurp(cfg.out));
    REQUIRE(csv.rows.size() == 36);
    // entry (3,2) = t+ = 1.5
    for (const auto& row : csv.rows)
        if (row[0] == "3" && row[1] == "2") CHECK(to_double(row[2]) == 1.5);
}

TEST_CASE("find-ep emits one record per exceptional point") {
    TempDir dir;
    RunConfig cfg;
    cfg.command = Command::find_ep;
    cfg.eps = 0.5;
    cfg.t = 1;
    cfg.gamma = 0.1;
    cfg.u = 2;
    cfg.out = (dir.path / "ep.csv").string();
    REQUIRE(run(cfg) == kExitOk);
    const Csv csv = parse_csv(slurp(cfg.out));
    REQUIRE(csv.rows.size() == 3);
    CHECK(to_double(csv.rows[0][1]) == doctest::Approx(0.88365177695554575).epsilon(1e-7));
    CHECK(csv.rows[0][4] == "self-generated");
    CHECK(csv.rows[1][4] == "interaction-generated");
    CHECK(csv.rows[2][4] == "interaction-generated");
}

TEST_CASE("boundary command writes one file per branch") {
    TempDir dir;
    RunConfig cfg;
    cfg.command = Command::boundary;
    cfg.eps = 0.5;
    cfg.t = 1;
    cfg.gamma = 0.1;
    cfg.axis = "lambda";
    cfg.range = {0.0, 6.0};
    cfg.steps = 13;
    cfg.axis_range = {0.0, 2.5};
    cfg.out = (dir.path / "bound.csv").string();
    REQUIRE(run(cfg) == kExitOk);
    REQUIRE(fs::exists(dir.path / "bound_b0.csv"));
    REQUIRE(fs::exists(dir.path / "bound_b1.csv"));
    REQUIRE(fs::exists(dir.path / "bound_b2.csv"));
    CHECK(!fs::exists(dir.path / "bound.csv"));
    const Csv b0 = parse_csv(slurp(dir.path / "bound_b0.csv"));
    REQUIRE(b0.rows.size() == 13);
    CHECK(to_double(b0.rows[0][1]) == doctest::Approx(std::sqrt(0.99)).epsilon(1e-8));
}

TEST_CASE("config file merging and rejection of unknown keys") {
    TempDir dir;
    const fs::path good = dir.path / "good.cfg";
    std::ofstream(good) << "# comment\n t = 1 \neps=0.5\nU=2\nrange=0:2\nsteps=11\n";
    RunConfig cfg;
    apply_config_values(cfg, parse_config_file(good.string()), {"U"});
    CHECK(cfg.t == 1.0);
    CHECK(cfg.eps == 0.5);
    CHECK(cfg.u == 0.0); // overridden on the command line, file ignored
    REQUIRE(cfg.range.has_value());
    CHECK(cfg.range->second == 2.0);
    CHECK(cfg.steps == 11);

    const fs::path bad = dir.path / "bad.cfg";
    std::ofstream(bad) << "t=1\nfrobnicate=3\n";
    CHECK_THROWS_AS(parse_config_file(bad.string()), ConfigError);

    const fs::path malformed = dir.path / "malformed.cfg";
    std::ofstream(malformed) << "t: 1\n";
    CHECK_THROWS_AS(parse_config_file(malformed.string()), ConfigError);

    CHECK_THROWS_AS(parse_range("0;2"), ConfigError);
}

TEST_CASE("write failure exits with code 3 and leaves no file behind") {
    RunConfig cfg;
    cfg.command = Command::spectrum;
    cfg.out = "/nonexistent_ptdimer_dir/out.csv";
    CHECK(run(cfg) == kExitNumerical);
    CHECK(!fs::exists(cfg.out));
}

TEST_CASE("configuration errors exit with code 2") {
    RunConfig cfg;
    cfg.command = Command::sweep;
    cfg.range = {2.0, 0.0};
    CHECK(run(cfg) == kExitConfig);

    cfg = RunConfig{};
    cfg.command = Command::sweep;
    cfg.steps = 1;
    CHECK(run(cfg) == kExitConfig);

    cfg = RunConfig{};
    cfg.command = Command::find_ep;
    cfg.axis = "u";
    CHECK(run(cfg) == kExitConfig);

    cfg = RunConfig{};
    cfg.command = Command::sweep;
    cfg.axis = "sideways";
    CHECK(run(cfg) == kExitConfig);

    cfg = RunConfig{};
    cfg.tol = -1;
    CHECK(run(cfg) == kExitConfig);
}
