#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "uavnet/harness.hpp"

namespace uavnet::record {

inline constexpr const char* kRunRecordHeader =
    "episode,t,policy,sum_rate_bps,agent,reward,action_dx,action_dy,uav_x,uav_y";
inline constexpr const char* kEpisodeHeader = "episode,mean_sum_rate_bps,total_reward,epsilon";
inline constexpr const char* kSnapshotHeader = "kind,index,x,y";
inline constexpr const char* kCompareHeader = "seed,t,policy,sum_rate_bps";

// Up to 9 significant digits.
std::string format_number(double v);

void write_step_row(std::ostream& out, const sim::StepRow& row);
void write_run_record(std::ostream& out, std::span<const sim::StepRow> rows);
void write_episodes(std::ostream& out, std::span<const sim::EpisodeSummary> episodes);

// Streams rows as they arrive; episode summaries are kept in memory.
class CsvStepWriter : public sim::RecordSink {
public:
    explicit CsvStepWriter(std::ostream& out);
    void on_step(const sim::StepRow& row) override;
    void on_episode(const sim::EpisodeSummary& e) override { episodes.push_back(e); }

    std::vector<sim::EpisodeSummary> episodes;

private:
    std::ostream& out_;
};

struct CsvTable {
    std::string source;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
    // Row numbers in messages count the header as row 1.
    double number(std::size_t row, std::size_t col) const;
    long long integer(std::size_t row, std::size_t col) const;
};

// Every data row must have as many cells as the header.
CsvTable read_csv(std::istream& in, const std::string& source);
CsvTable read_csv_file(const std::string& path);

std::string joined_header(const CsvTable& t);

std::vector<sim::StepRow> parse_run_record(const CsvTable& t);

} // namespace uavnet::record
