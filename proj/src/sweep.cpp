#include "vfsim/sweep.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "vfsim/errors.hpp"
#include "vfsim/protocol.hpp"

namespace vfsim::sweep {
namespace {

constexpr double kPi = 3.14159265358979323846;

const char* kCsvHeader =
    "id_A,iq_A,ms_b_m2,ms_b_m3,ms_j_m2,ms_j_m3,ms_flux,ms_emf,rem_m2_T,rem_m3_T,error";

double lerp_axis(double lo, double hi, int index, int steps) {
    if (steps <= 1) return 0.5 * (lo + hi);
    return lo + (hi - lo) * static_cast<double>(index) / static_cast<double>(steps - 1);
}

std::string format_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string csv_quote(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

/// Splits one CSV record, honoring quoted fields.
std::vector<std::string> split_record(const std::string& line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(cur);
    return fields;
}

double parse_cell(const std::string& field, int line_no) {
    if (field.empty()) return std::nan("");
    char* end = nullptr;
    double v = std::strtod(field.c_str(), &end);
    if (end != field.c_str() + field.size()) {
        std::ostringstream os;
        os << "csv line " << line_no << ": not a number: " << field;
        throw InputError(os.str());
    }
    return v;
}

struct Rgb {
    double r, g, b;
};

Rgb lerp_rgb(const Rgb& a, const Rgb& b, double t) {
    return {a.r + (b.r - a.r) * t, a.g + (b.g - a.g) * t, a.b + (b.b - a.b) * t};
}

/// Diverging blue-white-red ramp, t in [-1, 1].
std::string diverging_color(double t) {
    static const Rgb blue{33, 102, 172};
    static const Rgb white{255, 255, 255};
    static const Rgb red{178, 24, 43};
    t = std::clamp(t, -1.0, 1.0);
    Rgb c = t < 0.0 ? lerp_rgb(white, blue, -t) : lerp_rgb(white, red, t);
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", static_cast<int>(c.r + 0.5),
                  static_cast<int>(c.g + 0.5), static_cast<int>(c.b + 0.5));
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            case '\'': out += "&apos;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string fmt3g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

/// Cell edges around the axis sample points: midpoints inside, range ends
/// outside. A collapsed axis gets a synthetic span so its cells stay visible.
std::vector<double> axis_edges(double lo, double hi, int steps, double fallback_half) {
    std::vector<double> centers(static_cast<size_t>(steps));
    for (int k = 0; k < steps; ++k) centers[static_cast<size_t>(k)] = lerp_axis(lo, hi, k, steps);
    std::vector<double> edges(static_cast<size_t>(steps) + 1);
    if (hi == lo) {
        edges.front() = centers.front() - fallback_half;
        edges.back() = centers.back() + fallback_half;
    } else {
        edges.front() = lo;
        edges.back() = hi;
    }
    for (int k = 1; k < steps; ++k)
        edges[static_cast<size_t>(k)] =
            0.5 * (centers[static_cast<size_t>(k - 1)] + centers[static_cast<size_t>(k)]);
    return edges;
}

}  // namespace

double grid_theta_deg(const SweepConfig& grid, int theta_index) {
    return lerp_axis(grid.theta_min_deg, grid.theta_max_deg, theta_index, grid.theta_steps);
}

double grid_current_A(const SweepConfig& grid, int current_index) {
    return lerp_axis(grid.current_min_A, grid.current_max_A, current_index,
                     grid.current_steps);
}

Table run_sweep(const Config& config) {
    config.validate();
    const SweepConfig& grid = config.sweep;
    const int n_theta = grid.theta_steps;
    const int n_current = grid.current_steps;
    const int total = n_theta * n_current;

    Table table;
    table.grid = grid;
    table.rows.resize(static_cast<size_t>(total));

    const auto compute_row = [&](int index) {
        const int ti = index / n_current;
        const int ii = index % n_current;
        Row& row = table.rows[static_cast<size_t>(index)];
        row.theta_deg = grid_theta_deg(grid, ti);
        row.current_A = grid_current_A(grid, ii);
        const double theta = row.theta_deg * kPi / 180.0;
        row.id_A = row.current_A * std::sin(theta);
        row.iq_A = row.current_A * std::cos(theta);
        try {
            protocol::RunResult res = protocol::run_protocol(config, row.id_A, row.iq_A);
            row.ms_b_m2 = res.lcf2.ms_b;
            row.ms_b_m3 = res.lcf3.ms_b;
            row.ms_j_m2 = res.lcf2.ms_j;
            row.ms_j_m3 = res.lcf3.ms_j;
            row.ms_flux = res.ms_flux;
            row.ms_emf = res.ms_emf;
            row.rem_m2_T = res.lcf2.remanence_T;
            row.rem_m3_T = res.lcf3.remanence_T;
        } catch (const Error& e) {
            row.error = std::string(e.kind()) + ": " + e.what();
        } catch (const std::exception& e) {
            row.error = std::string("error: ") + e.what();
        }
    };

    const int workers = std::max(1, std::min(grid.parallelism, total));
    if (workers == 1) {
        for (int index = 0; index < total; ++index) compute_row(index);
    } else {
        // Strided static partition: each index is computed by exactly one
        // worker and rows never depend on each other, so the result is
        // identical for any worker count.
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&, w] {
                for (int index = w; index < total; index += workers) compute_row(index);
            });
        }
        for (auto& t : pool) t.join();
    }
    return table;
}

const std::vector<std::string>& metric_names() {
    static const std::vector<std::string> names = {
        "ms_b_m2", "ms_b_m3", "ms_j_m2", "ms_j_m3",
        "ms_flux", "ms_emf",  "rem_m2_T", "rem_m3_T"};
    return names;
}

double metric_value(const Row& row, const std::string& metric) {
    if (metric == "ms_b_m2") return row.ms_b_m2;
    if (metric == "ms_b_m3") return row.ms_b_m3;
    if (metric == "ms_j_m2") return row.ms_j_m2;
    if (metric == "ms_j_m3") return row.ms_j_m3;
    if (metric == "ms_flux") return row.ms_flux;
    if (metric == "ms_emf") return row.ms_emf;
    if (metric == "rem_m2_T") return row.rem_m2_T;
    if (metric == "rem_m3_T") return row.rem_m3_T;
    std::ostringstream os;
    os << "unknown metric: " << metric << " (expected one of:";
    for (const auto& n : metric_names()) os << ' ' << n;
    os << ')';
    throw LookupError(os.str());
}

std::string to_csv(const Table& table) {
    std::ostringstream os;
    os << kCsvHeader << '\n';
    for (const Row& row : table.rows) {
        os << format_g9(row.id_A) << ',' << format_g9(row.iq_A) << ',';
        std::string error = row.error;
        const double metrics[8] = {row.ms_b_m2, row.ms_b_m3, row.ms_j_m2, row.ms_j_m3,
                                   row.ms_flux, row.ms_emf,  row.rem_m2_T, row.rem_m3_T};
        bool finite = true;
        for (double m : metrics) finite = finite && std::isfinite(m);
        if (error.empty() && !finite) error = "error: non-finite result";
        if (error.empty()) {
            for (double m : metrics) os << format_g9(m) << ',';
        } else {
            os << ",,,,,,,,";
        }
        os << csv_quote(error) << '\n';
    }
    return os.str();
}

void write_csv(const Table& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open output file: " + path);
    out << to_csv(table);
    if (!out) throw InputError("failed writing: " + path);
}

Table read_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw InputError("csv header mismatch, expected: " + std::string(kCsvHeader));
    Table table;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto fields = split_record(line);
        if (fields.size() != 11) {
            std::ostringstream os;
            os << "csv line " << line_no << ": expected 11 fields, got " << fields.size();
            throw InputError(os.str());
        }
        Row row;
        row.id_A = parse_cell(fields[0], line_no);
        row.iq_A = parse_cell(fields[1], line_no);
        row.ms_b_m2 = parse_cell(fields[2], line_no);
        row.ms_b_m3 = parse_cell(fields[3], line_no);
        row.ms_j_m2 = parse_cell(fields[4], line_no);
        row.ms_j_m3 = parse_cell(fields[5], line_no);
        row.ms_flux = parse_cell(fields[6], line_no);
        row.ms_emf = parse_cell(fields[7], line_no);
        row.rem_m2_T = parse_cell(fields[8], line_no);
        row.rem_m3_T = parse_cell(fields[9], line_no);
        row.error = fields[10];
        row.current_A = std::hypot(row.id_A, row.iq_A);
        row.theta_deg = (row.current_A > 0.0)
                            ? std::atan2(row.id_A, row.iq_A) * 180.0 / kPi
                            : 0.0;
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string render_heatmap_svg(const Table& table, const std::string& metric) {
    metric_value(Row{}, metric);  // validate the name up front

    const SweepConfig& grid = table.grid;
    const int n_theta = std::max(1, grid.theta_steps);
    const int n_current = std::max(1, grid.current_steps);
    if (table.rows.size() != static_cast<size_t>(n_theta) * static_cast<size_t>(n_current))
        throw InputError("table does not match its grid shape");

    double limit = 0.0;
    for (const Row& row : table.rows)
        if (row.ok()) limit = std::max(limit, std::abs(metric_value(row, metric)));
    if (limit < 1e-12) limit = 1.0;

    const double width = 900.0, height = 560.0;
    const double cx = 400.0, cy = 500.0;
    const double r_in = 60.0, r_out = 340.0;

    const auto theta_edges =
        axis_edges(grid.theta_min_deg, grid.theta_max_deg, n_theta, 5.0);
    const auto current_edges =
        axis_edges(grid.current_min_A, grid.current_max_A, n_current, 1.0);
    const double i_lo = current_edges.front();
    const double i_hi = current_edges.back();

    const auto radius = [&](double i) {
        return r_in + (i - i_lo) / (i_hi - i_lo) * (r_out - r_in);
    };
    const auto px = [&](double theta_deg, double r) {
        return cx + r * std::sin(theta_deg * kPi / 180.0);
    };
    const auto py = [&](double theta_deg, double r) {
        return cy - r * std::cos(theta_deg * kPi / 180.0);
    };

    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    os << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n";
    os << "<defs><linearGradient id=\"ramp\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">"
       << "<stop offset=\"0\" stop-color=\"" << diverging_color(-1.0) << "\"/>"
       << "<stop offset=\"0.5\" stop-color=\"" << diverging_color(0.0) << "\"/>"
       << "<stop offset=\"1\" stop-color=\"" << diverging_color(1.0) << "\"/>"
       << "</linearGradient></defs>\n";
    os << "<text x=\"" << cx << "\" y=\"34\" font-family=\"sans-serif\" font-size=\"20\""
       << " text-anchor=\"middle\">" << xml_escape(metric)
       << " over the current plane</text>\n";

    // Sector patches, angle-major like the row order.
    for (int ti = 0; ti < n_theta; ++ti) {
        for (int ii = 0; ii < n_current; ++ii) {
            const Row& row = table.rows[static_cast<size_t>(ti * n_current + ii)];
            const double t0 = theta_edges[static_cast<size_t>(ti)];
            const double t1 = theta_edges[static_cast<size_t>(ti) + 1];
            const double r0 = radius(current_edges[static_cast<size_t>(ii)]);
            const double r1 = radius(current_edges[static_cast<size_t>(ii) + 1]);
            const std::string fill =
                row.ok() ? diverging_color(metric_value(row, metric) / limit) : "#999999";
            os << "<path d=\"M " << fmt2(px(t0, r1)) << ' ' << fmt2(py(t0, r1)) << " A "
               << fmt2(r1) << ' ' << fmt2(r1) << " 0 0 1 " << fmt2(px(t1, r1)) << ' '
               << fmt2(py(t1, r1)) << " L " << fmt2(px(t1, r0)) << ' ' << fmt2(py(t1, r0))
               << " A " << fmt2(r0) << ' ' << fmt2(r0) << " 0 0 0 " << fmt2(px(t0, r0))
               << ' ' << fmt2(py(t0, r0)) << " Z\" fill=\"" << fill
               << "\" stroke=\"#ffffff\" stroke-width=\"0.4\"";
            if (!row.ok()) os << " opacity=\"0.8\"";
            os << "/>\n";
        }
    }

    // Angular ticks every 45 degrees of advance angle.
    os << "<g font-family=\"sans-serif\" font-size=\"13\" fill=\"#333333\">\n";
    for (double tick = -90.0; tick <= 90.0; tick += 45.0) {
        if (tick < grid.theta_min_deg - 1e-9 || tick > grid.theta_max_deg + 1e-9) continue;
        os << "<line x1=\"" << fmt2(px(tick, r_out)) << "\" y1=\"" << fmt2(py(tick, r_out))
           << "\" x2=\"" << fmt2(px(tick, r_out + 7)) << "\" y2=\""
           << fmt2(py(tick, r_out + 7)) << "\" stroke=\"#333333\"/>\n";
        os << "<text x=\"" << fmt2(px(tick, r_out + 22)) << "\" y=\""
           << fmt2(py(tick, r_out + 22) + 4) << "\" text-anchor=\"middle\">" << fmt3g(tick)
           << "&#176;</text>\n";
    }
    // Radial ticks on the left baseline, labeled in amperes.
    const double i_mid = 0.5 * (i_lo + i_hi);
    for (double tick : {i_lo, i_mid, i_hi}) {
        const double x = cx - radius(tick);
        os << "<line x1=\"" << fmt2(x) << "\" y1=\"" << fmt2(cy) << "\" x2=\"" << fmt2(x)
           << "\" y2=\"" << fmt2(cy + 6) << "\" stroke=\"#333333\"/>\n";
        os << "<text x=\"" << fmt2(x) << "\" y=\"" << fmt2(cy + 22)
           << "\" text-anchor=\"middle\">" << fmt3g(tick) << " A</text>\n";
    }
    os << "<text x=\"" << cx << "\" y=\"58\" text-anchor=\"middle\">advance angle "
       << "(id = i sin&#952;, iq = i cos&#952;)</text>\n";
    os << "<text x=\"" << fmt2(cx - r_out - 14) << "\" y=\"" << fmt2(cy - 10)
       << "\" text-anchor=\"start\">current magnitude</text>\n";
    os << "</g>\n";

    // Colorbar with the symmetric scale limits.
    const double bar_x = 810.0, bar_y = 140.0, bar_w = 26.0, bar_h = 300.0;
    os << "<rect x=\"" << bar_x << "\" y=\"" << bar_y << "\" width=\"" << bar_w
       << "\" height=\"" << bar_h
       << "\" fill=\"url(#ramp)\" stroke=\"#333333\" stroke-width=\"0.7\"/>\n";
    os << "<g font-family=\"sans-serif\" font-size=\"13\" fill=\"#333333\">\n";
    os << "<text x=\"" << bar_x + bar_w + 8 << "\" y=\"" << bar_y + 5 << "\">"
       << fmt3g(limit) << "</text>\n";
    os << "<text x=\"" << bar_x + bar_w + 8 << "\" y=\"" << bar_y + bar_h / 2 + 5
       << "\">0</text>\n";
    os << "<text x=\"" << bar_x + bar_w + 8 << "\" y=\"" << bar_y + bar_h + 5 << "\">"
       << fmt3g(-limit) << "</text>\n";
    os << "<text x=\"" << bar_x + bar_w / 2 << "\" y=\"" << bar_y - 14
       << "\" text-anchor=\"middle\">" << xml_escape(metric) << "</text>\n";
    os << "</g>\n";
    os << "</svg>\n";
    return os.str();
}

void write_heatmap_svg(const Table& table, const std::string& metric,
                       const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot open output file: " + path);
    out << render_heatmap_svg(table, metric);
    if (!out) throw InputError("failed writing: " + path);
}

}  // namespace vfsim::sweep
