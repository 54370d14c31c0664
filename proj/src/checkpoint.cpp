#include <fstream>
#include <sstream>
#include <string>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "uavnet/dqn.hpp"
#include "uavnet/error.hpp"

namespace uavnet::dqn {

namespace {

constexpr const char* kHeader = "qnet v1 2 10 5";

// (rows, columns) of each parameter block in file order.
constexpr std::array<std::pair<std::size_t, std::size_t>, 4> kBlocks{{
    {kHidden, kInputs},
    {kHidden, 1},
    {kActions, kHidden},
    {kActions, 1},
}};

} // namespace

void write_checkpoint(std::ostream& out, const QNetwork& net) {
    out << kHeader << '\n';
    const auto theta = net.params();
    std::size_t p = 0;
    for (const auto& [rows, cols] : kBlocks) {
        for (std::size_t r = 0; r < rows; ++r) {
            for (std::size_t c = 0; c < cols; ++c) {
                fmt::print(out, "{}{:.17g}", c == 0 ? "" : " ", theta[p++]);
            }
            out << '\n';
        }
    }
}

QNetwork read_checkpoint(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kHeader) {
        throw ParseError(fmt::format("checkpoint line 1: expected '{}'", kHeader));
    }
    QNetwork net;
    auto theta = net.params();
    std::size_t p = 0;
    std::size_t line_no = 1;
    for (const auto& [rows, cols] : kBlocks) {
        for (std::size_t r = 0; r < rows; ++r) {
            ++line_no;
            if (!std::getline(in, line)) {
                throw ParseError(fmt::format("checkpoint line {}: unexpected end of file", line_no));
            }
            std::istringstream row(line);
            for (std::size_t c = 0; c < cols; ++c) {
                if (!(row >> theta[p++])) {
                    throw ParseError(fmt::format("checkpoint line {}: expected {} values", line_no, cols));
                }
            }
            std::string extra;
            if (row >> extra) {
                throw ParseError(fmt::format("checkpoint line {}: trailing data '{}'", line_no, extra));
            }
        }
    }
    if (!net.all_finite()) throw ParseError("checkpoint: non-finite parameter");
    return net;
}

void save_checkpoint(const std::filesystem::path& path, const QNetwork& net) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error(fmt::format("cannot write {}", tmp.string()));
        write_checkpoint(out, net);
        out.flush();
        if (!out) throw std::runtime_error(fmt::format("write failed: {}", tmp.string()));
    }
    std::filesystem::rename(tmp, path);
}

QNetwork load_checkpoint(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError(fmt::format("checkpoint not found: {}", path.string()));
    return read_checkpoint(in);
}

} // namespace uavnet::dqn
