#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "uavnet/error.hpp"
#include "uavnet/plot.hpp"
#include "uavnet/record.hpp"

using namespace uavnet;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "uavnet_record_test" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

void write(const fs::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    f << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

} // namespace

TEST_CASE("number formatting") {
    CHECK(record::format_number(1.0) == "1");
    CHECK(record::format_number(-0.0) == "0");
    CHECK(record::format_number(-0.2) == "-0.2");
    CHECK(record::format_number(24063259.2073) == "24063259.2");
}

TEST_CASE("run record round-trip") {
    std::vector<sim::StepRow> rows{
        {0, 0, policies::PolicyKind::dqn, 1.5e8, 0, 1.0, 1.0, 0.0, 101, 200},
        {0, 0, policies::PolicyKind::dqn, 1.5e8, 1, -0.2, 0.0, 0.0, 300, 400},
        {1, 3, policies::PolicyKind::kmeans, 2e8, 0, -1.0, 0.0, -1.0, 5, 6},
    };
    std::stringstream ss;
    record::write_run_record(ss, rows);
    const auto table = record::read_csv(ss, "mem");
    CHECK(record::joined_header(table) == record::kRunRecordHeader);
    const auto back = record::parse_run_record(table);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].episode == rows[i].episode);
        CHECK(back[i].policy == rows[i].policy);
        CHECK(back[i].reward == rows[i].reward);
        CHECK(back[i].uav_x == rows[i].uav_x);
    }
}

TEST_CASE("parse errors name the row") {
    std::stringstream ss("episode,mean_sum_rate_bps,total_reward,epsilon\n0,1,2,0.1\n1,x,2,0.1\n");
    const auto t = record::read_csv(ss, "bad.csv");
    CHECK(t.number(0, 1) == 1.0);
    try {
        t.number(1, 1);
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }
    std::stringstream ragged("a,b\n1,2\n3\n");
    try {
        record::read_csv(ragged, "ragged.csv");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }
}

TEST_CASE("moving average") {
    const auto m = plot::moving_average({1, 2, 3, 4, 5}, 2);
    CHECK(m == std::vector<double>{1, 1.5, 2.5, 3.5, 4.5});
    CHECK(plot::moving_average({}, 3).empty());
}

TEST_CASE("snapshot svg marks") {
    WorldState s;
    s.area = {100, 100};
    s.ues = {{10, 10}};
    s.uavs = {{50, 50}};
    const auto svg = plot::snapshot_svg(s);
    CHECK(svg.rfind("<?xml", 0) == 0);
    CHECK(svg.find("<circle") != std::string::npos);
    CHECK(svg.find("<polygon") != std::string::npos);
    CHECK(svg == plot::snapshot_svg(s));
}

TEST_CASE("plot files are pure functions of the input") {
    const auto dir = scratch("pure");
    write(dir / "train_episodes.csv",
          "episode,mean_sum_rate_bps,total_reward,epsilon\n0,1e8,-3,0.1\n1,1.1e8,2,0.1\n2,1.2e8,1,0.1\n");
    write(dir / "snap.csv", "kind,index,x,y\nue,0,10,10\nuav,0,50,50\ngbs,0,70,70\n");
    write(dir / "cmp.csv",
          "seed,t,policy,sum_rate_bps\n1,0,dqn,1e8\n1,1,dqn,2e8\n1,0,fixed,1e8\n1,1,fixed,1e8\n");
    for (const char* name : {"train_episodes.csv", "snap.csv", "cmp.csv"}) {
        const auto a = plot::plot_file(dir / name, dir / "a");
        const auto b = plot::plot_file(dir / name, dir / "b");
        CHECK(a.filename() == b.filename());
        CHECK(slurp(a) == slurp(b));
        CHECK(slurp(a).find("</svg>") != std::string::npos);
    }
}

TEST_CASE("empty or malformed records write nothing") {
    const auto dir = scratch("empty");
    write(dir / "empty.csv", "");
    CHECK_THROWS_AS(plot::plot_file(dir / "empty.csv", dir / "o"), ParseError);
    write(dir / "header_only.csv", "episode,mean_sum_rate_bps,total_reward,epsilon\n");
    CHECK_THROWS_AS(plot::plot_file(dir / "header_only.csv", dir / "o"), ParseError);
    write(dir / "bad.csv", "kind,index,x,y\nue,0,1,1\nuav,0,zz,1\n");
    CHECK_THROWS_AS(plot::plot_file(dir / "bad.csv", dir / "o"), ParseError);
    write(dir / "odd.csv", "foo,bar\n1,2\n");
    CHECK_THROWS_AS(plot::plot_file(dir / "odd.csv", dir / "o"), ParseError);
    CHECK_FALSE(fs::exists(dir / "o" / "empty.svg"));
    CHECK_FALSE(fs::exists(dir / "o" / "header_only.svg"));
    CHECK_FALSE(fs::exists(dir / "o" / "bad.svg"));
}
