#include "uavnet/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "uavnet/error.hpp"
#include "uavnet/record.hpp"

namespace uavnet::plot {

namespace {

constexpr std::array<const char*, 8> kPalette{
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 90.0;
constexpr double kRight = 170.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

std::string num(double v) { return fmt::format("{:.2f}", v == 0.0 ? 0.0 : v); }

std::string tick_label(double v) {
    if (v == 0.0) return "0";
    return fmt::format("{:.4g}", v);
}

struct Range {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();

    void add(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    void pad() {
        if (!(hi > lo)) {
            const double d = lo == 0.0 ? 1.0 : std::abs(lo) * 0.05;
            lo -= d;
            hi += d;
        }
    }
};

std::string header() {
    return fmt::format(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{0}\" height=\"{1}\" "
        "viewBox=\"0 0 {0} {1}\" font-family=\"sans-serif\" font-size=\"12\">\n"
        "<rect x=\"0\" y=\"0\" width=\"{0}\" height=\"{1}\" fill=\"white\"/>\n",
        kWidth, kHeight);
}

std::string axes(const std::string& title, const std::string& x_label, const std::string& y_label,
                 const Range& xr, const Range& yr) {
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    std::string s;
    s += fmt::format("<text x=\"{}\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
                     num(kLeft + pw / 2), esc(title));
    s += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\" stroke=\"black\"/>\n",
                     num(kLeft), num(kTop), num(pw), num(ph));
    for (int i = 0; i <= 5; ++i) {
        const double fx = xr.lo + (xr.hi - xr.lo) * i / 5.0;
        const double px = kLeft + pw * i / 5.0;
        s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", num(px),
                         num(kTop + ph), num(kTop + ph + 5));
        s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", num(px),
                         num(kTop + ph + 18), tick_label(fx));
        const double fy = yr.lo + (yr.hi - yr.lo) * i / 5.0;
        const double py = kTop + ph - ph * i / 5.0;
        s += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n",
                         num(kLeft - 5), num(py), num(kLeft));
        s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"end\">{}</text>\n", num(kLeft - 8),
                         num(py + 4), tick_label(fy));
    }
    s += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", num(kLeft + pw / 2),
                     num(kHeight - 15), esc(x_label));
    s += fmt::format("<text x=\"18\" y=\"{0}\" text-anchor=\"middle\" transform=\"rotate(-90 18 {0})\">{1}</text>\n",
                     num(kTop + ph / 2), esc(y_label));
    return s;
}

} // namespace

std::vector<double> moving_average(const std::vector<double>& v, std::size_t window) {
    std::vector<double> out;
    out.reserve(v.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        acc += v[i];
        if (i >= window) acc -= v[i - window];
        out.push_back(acc / double(std::min(i + 1, window)));
    }
    return out;
}

std::string line_chart_svg(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<Series>& series) {
    Range xr;
    Range yr;
    for (const auto& s : series) {
        for (double x : s.x) xr.add(x);
        for (double y : s.y) yr.add(y);
    }
    if (!(xr.lo <= xr.hi)) throw ParseError("plot: no data points");
    xr.pad();
    yr.pad();

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
    auto py = [&](double y) { return kTop + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

    std::string svg = header() + axes(title, x_label, y_label, xr, yr);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % kPalette.size()];
        std::string points;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (i) points += ' ';
            points += num(px(s.x[i])) + "," + num(py(s.y[i]));
        }
        svg += fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"{} points=\"{}\"/>\n",
                           color, s.dashed ? " stroke-dasharray=\"6 3\"" : "", points);
        const double ly = kTop + 16.0 + 18.0 * double(k);
        svg += fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"{3}\" stroke-width=\"2\"/>\n",
                           num(kWidth - kRight + 12), num(ly), num(kWidth - kRight + 36), color);
        svg += fmt::format("<text x=\"{}\" y=\"{}\">{}</text>\n", num(kWidth - kRight + 42), num(ly + 4),
                           esc(s.label));
    }
    svg += "</svg>\n";
    return svg;
}

std::string snapshot_svg(const WorldState& state) {
    const auto assoc = associate(state);
    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    const double scale = std::min(pw / state.area.width, ph / state.area.height);
    auto px = [&](double x) { return kLeft + x * scale; };
    auto py = [&](double y) { return kTop + (state.area.height - y) * scale; };

    Range xr{0.0, state.area.width};
    Range yr{0.0, state.area.height};
    std::string svg = header() + axes(fmt::format("UE association at t = {}", state.time_index),
                                      "x (m)", "y (m)", xr, yr);
    for (std::size_t i = 0; i < state.ues.size(); ++i) {
        svg += fmt::format("<circle cx=\"{}\" cy=\"{}\" r=\"2.5\" fill=\"{}\"/>\n", num(px(state.ues[i].x)),
                           num(py(state.ues[i].y)), kPalette[assoc.serving[i] % kPalette.size()]);
    }
    for (std::size_t s = 0; s < state.station_count(); ++s) {
        const Point p = state.station(s);
        const char* color = kPalette[s % kPalette.size()];
        const double cx = px(p.x);
        const double cy = py(p.y);
        if (state.is_uav(s)) {
            svg += fmt::format("<polygon points=\"{},{} {},{} {},{}\" fill=\"{}\" stroke=\"black\"/>\n",
                               num(cx), num(cy - 8), num(cx - 7), num(cy + 6), num(cx + 7), num(cy + 6), color);
        } else {
            svg += fmt::format("<rect x=\"{}\" y=\"{}\" width=\"12\" height=\"12\" fill=\"{}\" stroke=\"black\"/>\n",
                               num(cx - 6), num(cy - 6), color);
        }
    }
    svg += "</svg>\n";
    return svg;
}

namespace {

std::string snapshot_from(const record::CsvTable& t) {
    WorldState s;
    Range xr;
    Range yr;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const std::string& kind = t.rows[i][0];
        const Point p{t.number(i, 2), t.number(i, 3)};
        if (kind == "ue") s.ues.push_back(p);
        else if (kind == "uav") s.uavs.push_back(p);
        else if (kind == "gbs") s.gbss.push_back(p);
        else throw ParseError(fmt::format("{}: row {}: unknown kind '{}'", t.source, i + 2, kind));
        xr.add(p.x);
        yr.add(p.y);
    }
    if (s.station_count() == 0) throw ParseError(fmt::format("{}: snapshot has no stations", t.source));
    // Smallest power-of-ten-rounded square holding every entity.
    const double extent = std::max({xr.hi, yr.hi, 1.0});
    const double unit = std::pow(10.0, std::floor(std::log10(extent)));
    const double side = std::ceil(extent / unit) * unit;
    s.area = {side, side};
    return snapshot_svg(s);
}

std::string training_from(const record::CsvTable& t) {
    Series raw{"episode mean", {}, {}, false};
    const std::size_t ce = t.column("episode");
    const std::size_t cr = t.column("mean_sum_rate_bps");
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        raw.x.push_back(t.number(i, ce));
        raw.y.push_back(t.number(i, cr) / 1e6);
    }
    Series avg{"100-episode average", raw.x, moving_average(raw.y, 100), true};
    return line_chart_svg("Sum rate during training", "episode", "sum rate (Mbps)", {raw, avg});
}

// Mean over episodes/seeds of the per-instant sum rate, one series per policy,
// in the canonical policy order.
std::string policies_from(const std::map<std::string, std::map<long long, std::pair<double, int>>>& acc) {
    std::vector<Series> series;
    for (auto kind : policies::kAllPolicies) {
        const auto it = acc.find(std::string(policies::to_string(kind)));
        if (it == acc.end()) continue;
        Series s{it->first, {}, {}, false};
        for (const auto& [t, sum_n] : it->second) {
            s.x.push_back(double(t));
            s.y.push_back(sum_n.first / sum_n.second / 1e6);
        }
        series.push_back(std::move(s));
    }
    return line_chart_svg("Sum rate per time instant", "time instant", "sum rate (Mbps)", series);
}

std::string run_record_from(const record::CsvTable& t) {
    std::map<std::string, std::map<long long, std::pair<double, int>>> acc;
    for (const auto& r : record::parse_run_record(t)) {
        if (r.agent != 0) continue;
        auto& cell = acc[std::string(policies::to_string(r.policy))][r.t];
        cell.first += r.sum_rate_bps;
        cell.second += 1;
    }
    return policies_from(acc);
}

std::string compare_from(const record::CsvTable& t) {
    std::map<std::string, std::map<long long, std::pair<double, int>>> acc;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        auto& cell = acc[t.rows[i][2]][t.integer(i, 1)];
        cell.first += t.number(i, 3);
        cell.second += 1;
    }
    return policies_from(acc);
}

} // namespace

std::filesystem::path plot_file(const std::filesystem::path& input,
                                const std::filesystem::path& out_dir) {
    const auto table = record::read_csv_file(input.string());
    if (table.rows.empty()) throw ParseError(fmt::format("{}: no data rows", input.string()));

    const std::string h = record::joined_header(table);
    std::string svg;
    if (h == record::kSnapshotHeader) svg = snapshot_from(table);
    else if (h == record::kRunRecordHeader) svg = run_record_from(table);
    else if (h == record::kCompareHeader) svg = compare_from(table);
    else if (h.starts_with("episode,mean_sum_rate_bps")) svg = training_from(table);
    else throw ParseError(fmt::format("{}: row 1: unrecognized header '{}'", input.string(), h));

    std::filesystem::create_directories(out_dir);
    const auto path = out_dir / (input.stem().string() + ".svg");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << svg;
    if (!out) throw std::runtime_error(fmt::format("cannot write {}", path.string()));
    return path;
}

} // namespace uavnet::plot
