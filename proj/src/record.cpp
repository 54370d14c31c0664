#include "uavnet/record.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "uavnet/error.hpp"

namespace uavnet::record {

std::string format_number(double v) {
    if (v == 0.0) return "0";  // folds -0
    return fmt::format("{:.9g}", v);
}

void write_step_row(std::ostream& out, const sim::StepRow& r) {
    fmt::print(out, "{},{},{},{},{},{},{},{},{},{}\n", r.episode, r.t, policies::to_string(r.policy),
               format_number(r.sum_rate_bps), r.agent, format_number(r.reward),
               format_number(r.action_dx), format_number(r.action_dy), format_number(r.uav_x),
               format_number(r.uav_y));
}

void write_run_record(std::ostream& out, std::span<const sim::StepRow> rows) {
    out << kRunRecordHeader << '\n';
    for (const auto& r : rows) write_step_row(out, r);
}

void write_episodes(std::ostream& out, std::span<const sim::EpisodeSummary> episodes) {
    out << kEpisodeHeader << '\n';
    for (const auto& e : episodes) {
        fmt::print(out, "{},{},{},{}\n", e.episode, format_number(e.mean_sum_rate_bps),
                   format_number(e.total_reward), format_number(e.epsilon));
    }
}

CsvStepWriter::CsvStepWriter(std::ostream& out) : out_(out) { out_ << kRunRecordHeader << '\n'; }

void CsvStepWriter::on_step(const sim::StepRow& row) { write_step_row(out_, row); }

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == name) return c;
    }
    throw ParseError(fmt::format("{}: missing column '{}'", source, name));
}

double CsvTable::number(std::size_t row, std::size_t col) const {
    const std::string& cell = rows.at(row).at(col);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError(fmt::format("{}: row {}: '{}' is not a number", source, row + 2, cell));
    }
    return v;
}

long long CsvTable::integer(std::size_t row, std::size_t col) const {
    const std::string& cell = rows.at(row).at(col);
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc() || ptr != cell.data() + cell.size()) {
        throw ParseError(fmt::format("{}: row {}: '{}' is not an integer", source, row + 2, cell));
    }
    return v;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

} // namespace

CsvTable read_csv(std::istream& in, const std::string& source) {
    CsvTable t;
    t.source = source;
    std::string line;
    if (!std::getline(in, line) || line.empty()) throw ParseError(fmt::format("{}: empty file", source));
    t.header = split(line);
    std::size_t row_no = 1;
    while (std::getline(in, line)) {
        ++row_no;
        if (line.empty()) continue;
        auto cells = split(line);
        if (cells.size() != t.header.size()) {
            throw ParseError(fmt::format("{}: row {}: expected {} fields, found {}", source, row_no,
                                         t.header.size(), cells.size()));
        }
        t.rows.push_back(std::move(cells));
    }
    return t;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(fmt::format("cannot open {}", path));
    return read_csv(in, path);
}

std::string joined_header(const CsvTable& t) {
    std::string h;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i) h += ',';
        h += t.header[i];
    }
    return h;
}

std::vector<sim::StepRow> parse_run_record(const CsvTable& t) {
    if (joined_header(t) != kRunRecordHeader) {
        throw ParseError(fmt::format("{}: row 1: not a run record header", t.source));
    }
    std::vector<sim::StepRow> rows;
    rows.reserve(t.rows.size());
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        sim::StepRow r;
        r.episode = static_cast<int>(t.integer(i, 0));
        r.t = static_cast<int>(t.integer(i, 1));
        try {
            r.policy = policies::parse_policy(t.rows[i][2]);
        } catch (const ConfigError&) {
            throw ParseError(fmt::format("{}: row {}: unknown policy '{}'", t.source, i + 2, t.rows[i][2]));
        }
        r.sum_rate_bps = t.number(i, 3);
        r.agent = static_cast<std::size_t>(t.integer(i, 4));
        r.reward = t.number(i, 5);
        r.action_dx = t.number(i, 6);
        r.action_dy = t.number(i, 7);
        r.uav_x = t.number(i, 8);
        r.uav_y = t.number(i, 9);
        rows.push_back(r);
    }
    return rows;
}

} // namespace uavnet::record
