#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "blurkit/config.hpp"
#include "blurkit/io.hpp"
#include "test_util.hpp"

#ifndef BLURKIT_CLI_PATH
#error "BLURKIT_CLI_PATH must be defined"
#endif

namespace {

struct CliResult {
    int exit_code;
    std::string stderr_text;
};

CliResult run_cli(const std::string& args, const std::string& stderr_file) {
    const std::string cmd = std::string(BLURKIT_CLI_PATH) + " " + args + " 2>" + stderr_file;
    const int status = std::system(cmd.c_str());
    CliResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.stderr_text = testutil::read_file(stderr_file);
    return r;
}

}  // namespace

TEST_CASE("cli synth") {
    testutil::TempDir dir("cli_synth");
    const std::string prefix = dir.file("fx");
    const std::string args =
        "synth --out-prefix " + prefix + " --seed 7 --texture noise --rect 16,16,48,48 --bg-sigma 4";

    SUBCASE("writes three files, reruns are byte-identical") {
        CHECK(run_cli(args, dir.file("e1")).exit_code == 0);
        const std::string image1 = testutil::read_file(prefix + "_image.pgm");
        const std::string matte1 = testutil::read_file(prefix + "_matte.pgm");
        const std::string manifest1 = testutil::read_file(prefix + ".manifest");
        CHECK(!image1.empty());
        CHECK(!matte1.empty());
        CHECK(!manifest1.empty());

        CHECK(run_cli(args, dir.file("e2")).exit_code == 0);
        CHECK(testutil::read_file(prefix + "_image.pgm") == image1);
        CHECK(testutil::read_file(prefix + "_matte.pgm") == matte1);
        CHECK(testutil::read_file(prefix + ".manifest") == manifest1);
    }

    SUBCASE("full-image rectangle gives an all-white matte") {
        const std::string p2 = dir.file("full");
        CHECK(run_cli("synth --out-prefix " + p2 + " --seed 1 --rect 0,0,64,64", dir.file("e")).exit_code ==
              0);
        const blurkit::GrayImage matte = blurkit::load_gray(p2 + "_matte.pgm");
        for (double v : matte.raw()) CHECK(v == 1.0);
    }

    SUBCASE("zero background sigma is a validation error") {
        const CliResult r =
            run_cli("synth --out-prefix " + dir.file("bad") + " --seed 1 --bg-sigma 0", dir.file("e"));
        CHECK(r.exit_code == 3);
    }

    SUBCASE("degenerate rectangle is a validation error") {
        const CliResult r = run_cli(
            "synth --out-prefix " + dir.file("bad2") + " --seed 1 --rect 10,10,10,40", dir.file("e"));
        CHECK(r.exit_code == 3);
    }
}

TEST_CASE("cli segment") {
    testutil::TempDir dir("cli_segment");
    const std::string prefix = dir.file("fx");
    REQUIRE(run_cli("synth --out-prefix " + prefix + " --seed 3", dir.file("e")).exit_code == 0);

    {
        std::ofstream cfg(dir.file("cfg.txt"));
        cfg << "[dct]\nmap_gain = 0.01\n";
    }

    SUBCASE("happy path writes a binary mask") {
        const std::string args = "segment --in " + prefix + "_image.pgm --out " + dir.file("mask.pgm") +
                                 " --config " + dir.file("cfg.txt");
        CHECK(run_cli(args, dir.file("e")).exit_code == 0);
        const blurkit::GrayImage mask = blurkit::load_gray(dir.file("mask.pgm"));
        for (double v : mask.raw()) CHECK((v == 0.0 || v == 1.0));

        // Byte-identical rerun.
        const std::string bytes1 = testutil::read_file(dir.file("mask.pgm"));
        CHECK(run_cli(args, dir.file("e")).exit_code == 0);
        CHECK(testutil::read_file(dir.file("mask.pgm")) == bytes1);
    }

    SUBCASE("trace emits per-iteration counts") {
        const CliResult r = run_cli("segment --in " + prefix + "_image.pgm --out " +
                                        dir.file("m.pgm") + " --config " + dir.file("cfg.txt") +
                                        " --trace --firemap-out " + dir.file("fire.txt"),
                                    dir.file("e"));
        CHECK(r.exit_code == 0);
        CHECK(r.stderr_text.find("iter 1:") != std::string::npos);
        CHECK(!testutil::read_file(dir.file("fire.txt")).empty());
    }

    SUBCASE("bad config line is a validation error") {
        {
            std::ofstream cfg(dir.file("bad.txt"));
            cfg << "[dct]\nnot_a_key = 4\n";
        }
        const CliResult r = run_cli("segment --in " + prefix + "_image.pgm --out " +
                                        dir.file("m.pgm") + " --config " + dir.file("bad.txt"),
                                    dir.file("e"));
        CHECK(r.exit_code == 3);
        CHECK(r.stderr_text.find("line 2") != std::string::npos);
    }
}

TEST_CASE("cli blurmap") {
    testutil::TempDir dir("cli_blurmap");

    SUBCASE("missing input names the path on stderr with exit 2") {
        const CliResult r =
            run_cli("blurmap --in " + dir.file("missing.pgm") + " --out " + dir.file("x.pgm"),
                    dir.file("e"));
        CHECK(r.exit_code == 2);
        CHECK(r.stderr_text.find("missing.pgm") != std::string::npos);
    }

    SUBCASE("produces both output formats deterministically") {
        const std::string prefix = dir.file("fx");
        REQUIRE(run_cli("synth --out-prefix " + prefix + " --seed 9", dir.file("e")).exit_code == 0);
        const std::string args = "blurmap --in " + prefix + "_image.pgm --out " + dir.file("m.pgm") +
                                 " --out-txt " + dir.file("m.txt");
        CHECK(run_cli(args, dir.file("e")).exit_code == 0);
        const std::string pgm1 = testutil::read_file(dir.file("m.pgm"));
        const std::string txt1 = testutil::read_file(dir.file("m.txt"));
        CHECK(!pgm1.empty());
        // Plain-text matrix: space separated cells with 6 fractional digits.
        std::istringstream first_line(txt1.substr(0, txt1.find('\n')));
        std::string cell;
        int cells = 0;
        while (first_line >> cell) {
            ++cells;
            const auto dot = cell.find('.');
            REQUIRE(dot != std::string::npos);
            CHECK(cell.size() - dot - 1 == 6);
        }
        CHECK(cells == 64);
        CHECK(run_cli(args, dir.file("e")).exit_code == 0);
        CHECK(testutil::read_file(dir.file("m.pgm")) == pgm1);
        CHECK(testutil::read_file(dir.file("m.txt")) == txt1);
    }

    SUBCASE("no output flag is a usage error") {
        const CliResult r = run_cli("blurmap --in whatever.pgm", dir.file("e"));
        CHECK(r.exit_code == 1);
    }
}

TEST_CASE("cli rank") {
    testutil::TempDir dir("cli_rank");
    {
        std::ofstream out(dir.file("scores.csv"));
        out << "alternative,zhao:benefit,shi:benefit,published:fixed_sn\n";
        const char* rows[10] = {
            "Tang13,0.4414,0.7783,0",    "Tang16,0.6189,0.8975,0",  "Xu,0.5145,0.8785,0",
            "Karaali,0.5326,0.8877,0",   "Su,0.6896,0.8438,0",      "Shi,0.5933,0.8611,0",
            "Javaran,0.7184,0.8968,0.023692", "Yi,0.7491,0.8878,0.023692",
            "Ma,0.7851,0.9088,0.048859", "Ours,0.7941,0.9178,0.055081"};
        for (const char* r : rows) out << r << "\n";
        out << "weights,0.5,0.166667,\n";
        out << "means,0.7152,0.9731,\n";
    }

    SUBCASE("reproduces the published ranking") {
        const std::string args =
            "rank --matrix " + dir.file("scores.csv") + " --out " + dir.file("ranking.csv");
        CHECK(run_cli(args, dir.file("e")).exit_code == 0);
        const std::string text = testutil::read_file(dir.file("ranking.csv"));
        std::istringstream lines(text);
        std::string line;
        std::getline(lines, line);  // header
        std::vector<int> ranks;
        while (std::getline(lines, line)) {
            ranks.push_back(std::stoi(line.substr(line.rfind(',') + 1)));
        }
        CHECK(ranks == std::vector<int>{10, 6, 9, 8, 5, 7, 3, 4, 2, 1});

        // Byte-identical rerun.
        const std::string bytes1 = testutil::read_file(dir.file("ranking.csv"));
        CHECK(run_cli(args, dir.file("e")).exit_code == 0);
        CHECK(testutil::read_file(dir.file("ranking.csv")) == bytes1);
    }

    SUBCASE("malformed matrix is a validation error") {
        {
            std::ofstream out(dir.file("bad.csv"));
            out << "alternative,a:benefit\nx,not_a_number\n";
        }
        const CliResult r =
            run_cli("rank --matrix " + dir.file("bad.csv") + " --out " + dir.file("o.csv"),
                    dir.file("e"));
        CHECK(r.exit_code == 3);
    }

    SUBCASE("missing matrix is an io error") {
        const CliResult r =
            run_cli("rank --matrix " + dir.file("none.csv") + " --out " + dir.file("o.csv"),
                    dir.file("e"));
        CHECK(r.exit_code == 2);
    }
}

TEST_CASE("cli eval") {
    testutil::TempDir dir("cli_eval");
    const std::string prefix = dir.file("fx");
    REQUIRE(run_cli("synth --out-prefix " + prefix + " --seed 4 --width 32 --height 32 --rect 8,8,24,24",
                    dir.file("e")).exit_code == 0);
    {
        std::ofstream idx(dir.file("index.tsv"));
        idx << prefix + "_image.pgm" << "\t" << prefix + "_matte.pgm" << "\n";
    }
    const std::string args = "eval --index " + dir.file("index.tsv") + " --out " +
                             dir.file("report.csv") + " --curve-dir " + dir.file("curves");
    CHECK(run_cli(args, dir.file("e")).exit_code == 0);
    const std::string report = testutil::read_file(dir.file("report.csv"));
    CHECK(report.find("path,best_t,precision,recall,f_alpha") == 0);
    CHECK(report.find("_image.pgm") != std::string::npos);
    CHECK(!testutil::read_file(dir.file("curves") + "/pooled_curve.csv").empty());
    const std::string curve = testutil::read_file(dir.file("curves") + "/fx_image_curve.csv");
    CHECK(curve.find("t,precision,recall") == 0);
    CHECK(std::count(curve.begin(), curve.end(), '\n') == 257);  // header + 256 thresholds

    // Byte-identical rerun.
    CHECK(run_cli(args, dir.file("e")).exit_code == 0);
    CHECK(testutil::read_file(dir.file("report.csv")) == report);

    SUBCASE("mask-producing method also sweeps") {
        {
            std::ofstream cfg(dir.file("cfg.txt"));
            cfg << "[dct]\nmap_gain = 0.01\n";
        }
        const CliResult r = run_cli("eval --index " + dir.file("index.tsv") + " --out " +
                                        dir.file("seg_report.csv") + " --method segment --config " +
                                        dir.file("cfg.txt"),
                                    dir.file("e"));
        CHECK(r.exit_code == 0);
        CHECK(testutil::read_file(dir.file("seg_report.csv")).find("_image.pgm") !=
              std::string::npos);
    }

    SUBCASE("unknown method is a validation error") {
        const CliResult r = run_cli("eval --index " + dir.file("index.tsv") + " --out " +
                                        dir.file("x.csv") + " --method sideways",
                                    dir.file("e"));
        CHECK(r.exit_code == 3);
    }
}

TEST_CASE("cli help and version") {
    testutil::TempDir dir("cli_help");

    SUBCASE("help exits 0 and lists every config key with its default") {
        const std::string out_file = dir.file("help_out");
        const int status =
            std::system((std::string(BLURKIT_CLI_PATH) + " --help >" + out_file + " 2>&1").c_str());
        CHECK(WEXITSTATUS(status) == 0);
        const std::string help = testutil::read_file(out_file);
        for (const auto& k : blurkit::config_registry()) {
            CHECK(help.find(k.key + std::string(" ")) != std::string::npos);
            CHECK(help.find(k.default_value) != std::string::npos);
        }
    }

    SUBCASE("version exits 0") {
        const int status =
            std::system((std::string(BLURKIT_CLI_PATH) + " --version >/dev/null 2>&1").c_str());
        CHECK(WEXITSTATUS(status) == 0);
    }

    SUBCASE("unknown subcommand is a usage error") {
        CHECK(run_cli("frobnicate", dir.file("e")).exit_code == 1);
    }

    SUBCASE("unknown flag is a usage error") {
        CHECK(run_cli("segment --nope", dir.file("e")).exit_code == 1);
    }
}
