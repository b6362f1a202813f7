#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <unistd.h>

#include "saeos/saeos.hpp"

using namespace saeos;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    explicit TempDir(const std::string& tag) : path_(fs::temp_directory_path() / ("saeos-test-" + tag + "-" + std::to_string(::getpid()))) {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string str() const { return path_.string(); }
    fs::path operator/(const std::string& name) const { return path_ / name; }

private:
    fs::path path_;
};

solver::SolverConfig quick() {
    solver::SolverConfig c;
    c.time_limit = 30.0;
    return c;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < text.size()) {
        const auto end = text.find('\n', start);
        out.push_back(text.substr(start, end - start));
        if (end == std::string::npos) break;
        start = end + 1;
    }
    return out;
}

}  // namespace

TEST(Config, TargetCountsPerLetter) {
    const std::vector<std::pair<char, std::pair<int, int>>> table = {
        {'A', {0, 1}}, {'B', {50, 0}}, {'C', {50, 1}}, {'D', {0, 3}}, {'E', {50, 3}}, {'F', {0, 5}}, {'G', {50, 5}}};
    for (const auto& [letter, counts] : table) {
        EXPECT_EQ(bench::target_counts(letter).spots, counts.first) << letter;
        EXPECT_EQ(bench::target_counts(letter).polygons, counts.second) << letter;
    }
    EXPECT_THROW(bench::target_counts('H'), ConfigError);
    EXPECT_EQ(bench::parse_letter("C"), 'C');
    EXPECT_THROW(bench::parse_letter("AB"), ConfigError);
}

TEST(Config, SeedsAreIndependentOfCount) {
    EXPECT_EQ(bench::instance_seed(7, 'A', 3), bench::instance_seed(7, 'A', 3));
    EXPECT_NE(bench::instance_seed(7, 'A', 3), bench::instance_seed(7, 'A', 4));
    EXPECT_NE(bench::instance_seed(7, 'A', 3), bench::instance_seed(7, 'B', 3));
    EXPECT_NE(bench::instance_seed(7, 'A', 3), bench::instance_seed(8, 'A', 3));
}

TEST(Generate, BInstancesHaveFiftySpotStrips) {
    const auto inst = bench::build_instance('B', 1, 11);
    EXPECT_EQ(inst.id, "B-1");
    EXPECT_EQ(inst.spots.size(), 50u);
    EXPECT_TRUE(inst.polygons.empty());
    EXPECT_EQ(inst.strips.size(), 50u);
    EXPECT_EQ(inst.satellites, visibility::reference_constellation());
}

TEST(Generate, APolygonStripCountInEnvelope) {
    for (int i = 1; i <= 3; ++i) {
        const auto inst = bench::build_instance('A', i, 11);
        EXPECT_EQ(inst.polygons.size(), 1u);
        EXPECT_GE(inst.strips.size(), 10u);
        EXPECT_LE(inst.strips.size(), 60u);
    }
}

TEST(Generate, FilesAreByteIdenticalAcrossRuns) {
    TempDir one("gen-one"), two("gen-two");
    const auto a = bench::generate('A', 2, 5, one.str());
    const auto b = bench::generate('A', 3, 5, two.str());
    ASSERT_EQ(a.size(), 2u);
    ASSERT_EQ(b.size(), 3u);
    for (std::size_t i = 0; i < a.size(); ++i) {
        EXPECT_EQ(fs::path(a[i]).filename(), fs::path(b[i]).filename());
        EXPECT_EQ(io::read_file(a[i]), io::read_file(b[i]));
    }
    EXPECT_THROW(bench::generate('Z', 1, 5, one.str()), ConfigError);
}

TEST(Report, HeaderIsFrozen) {
    EXPECT_EQ(bench::header_line(),
              "Ins,CtSpot,CtPoly,CtStr,CtVtw,CtStrVtw,CtAcSat,CtAcOrb,CtObSpot,CtObPoly,CtObStr,TotProf,Makespan,Gap,"
              "Time");
}

TEST(Report, RowFormatting) {
    bench::ReportRow r;
    r.instance = "C-2";
    r.ct_spot = 50;
    r.ct_poly = 1;
    r.ct_str = 72;
    r.ct_vtw = 900;
    r.ct_str_vtw = 70;
    r.ct_ac_sat = 3;
    r.ct_sat = 4;
    r.ct_ac_orb = 2;
    r.ct_orb_total = 3;
    r.ct_ob_spot = 49;
    r.ct_ob_poly = 1;
    r.ct_ob_str = 68;
    r.tot_prof = 96.84;
    r.makespan = "13:02:44";
    r.gap = 0.0;
    r.time = 1.234;
    EXPECT_EQ(bench::format_row(r), "C-2,50,1,72,900,70,3/4,2/3,49/50,1/1,68/72,96.8,13:02:44,0.0,1.23");
    r.makespan_gap = 0.4;
    EXPECT_EQ(bench::format_row(r), "C-2,50,1,72,900,70,3/4,2/3,49/50,1/1,68/72,96.8,13:02:44,\"(0.0, 0.4)\",1.23");
    r.ct_spot = 0;
    EXPECT_EQ(bench::format_row(r).substr(0, 8), "C-2,-,1,");
    EXPECT_EQ(bench::format_row(bench::error_row("bad", "boom")),
              "bad,ERROR,ERROR,ERROR,ERROR,ERROR,ERROR,ERROR,ERROR,ERROR,ERROR,ERROR,ERROR,ERROR,ERROR");
}

TEST(Report, RowInvariantsAndMakespanParseBack) {
    for (int i = 1; i <= 3; ++i) {
        const auto inst = bench::build_instance('A', i, 3);
        const auto sol = bench::solve_checked(inst, quick());
        const auto row = bench::make_row(inst, sol);
        EXPECT_LE(row.ct_ob_str, row.ct_str_vtw);
        EXPECT_LE(row.ct_str_vtw, row.ct_str);
        EXPECT_LE(row.ct_ac_sat, row.ct_sat);
        EXPECT_LE(row.ct_ac_orb, row.ct_orb_total);
        EXPECT_EQ(row.gap, 0.0);
        ASSERT_TRUE(sol.makespan.has_value());
        const long long secs = parse_hms(row.makespan);
        EXPECT_EQ(secs, static_cast<long long>(std::ceil(*sol.makespan - 1e-9)));
        EXPECT_LE(secs, 86400);
    }
}

TEST(Benchmark, CorruptFileIsIsolated) {
    TempDir dir("bench-corrupt");
    bench::generate('A', 2, 9, dir.str());
    io::write_file((dir / "A-1b.json").string(), "{ not json");
    const auto result = bench::run_benchmark(dir.str(), quick());
    ASSERT_EQ(result.rows.size(), 3u);
    EXPECT_TRUE(result.rows[0].ok());
    EXPECT_FALSE(result.rows[1].ok());
    EXPECT_EQ(result.rows[1].instance, "A-1b");
    EXPECT_TRUE(result.rows[2].ok());
    EXPECT_EQ(result.telemetry.size(), 2u);

    const auto lines = lines_of(bench::format_benchmark(result));
    EXPECT_EQ(lines[0], bench::header_line());
    EXPECT_EQ(lines[2].substr(0, 11), "A-1b,ERROR,");
    EXPECT_EQ(lines[4].substr(0, 8), "mean(A),");
    EXPECT_EQ(lines[6], "Ins,Windows,SequencingPairs");
    EXPECT_EQ(lines[7].substr(0, 4), "A-1,");
}

TEST(Benchmark, EmptyAndMissingDirectory) {
    TempDir dir("bench-empty");
    const auto result = bench::run_benchmark(dir.str(), quick());
    EXPECT_TRUE(result.rows.empty());
    EXPECT_EQ(bench::format_benchmark(result), bench::header_line() + "\n");
    EXPECT_THROW(bench::run_benchmark((dir / "nope").string(), quick()), InputError);
}

TEST(Benchmark, TelemetryCountsWindowsAndPairs) {
    const auto inst = bench::build_instance('A', 1, 3);
    const auto t = bench::size_telemetry(inst);
    EXPECT_EQ(t.instance, "A-1");
    EXPECT_EQ(t.windows, inst.vtws.size());
    EXPECT_EQ(t.sequencing_pairs, io::binding_transitions(inst).size());
}
