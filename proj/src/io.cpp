#include "ksreg/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace ksreg {

namespace {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    size_t b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

}  // namespace

void write_csv(std::ostream& os, const CsvTable& table) {
    os << "# format_version " << kFormatVersion << "\n";
    for (size_t i = 0; i < table.header.size(); ++i)
        os << (i ? "," : "") << table.header[i];
    os << "\n";
    for (const auto& row : table.rows) {
        for (size_t i = 0; i < row.size(); ++i)
            os << (i ? "," : "") << format_double(row[i]);
        os << "\n";
    }
}

std::string csv_to_string(const CsvTable& table) {
    std::ostringstream os;
    write_csv(os, table);
    return os.str();
}

CsvParseResult read_csv(std::istream& is) {
    CsvParseResult out;
    std::string line;
    int lineno = 0;
    bool header_seen = false;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (!header_seen) {
            for (const std::string& cell : split(t, ','))
                out.table.header.push_back(trim(cell));
            header_seen = true;
            continue;
        }
        std::vector<double> row;
        bool bad = false;
        for (const std::string& cell : split(t, ',')) {
            const std::string c = trim(cell);
            double v = 0;
            const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
            if (ec != std::errc{} || ptr != c.data() + c.size()) {
                out.errors.emplace_back(lineno, "unparseable cell '" + c + "'");
                bad = true;
                break;
            }
            row.push_back(v);
        }
        if (bad) continue;
        if (!out.table.rows.empty() && row.size() != out.table.rows.front().size()) {
            out.errors.emplace_back(lineno, "row width differs from first data row");
            continue;
        }
        if (row.size() != out.table.header.size()) {
            out.errors.emplace_back(lineno, "row width differs from header");
            continue;
        }
        out.table.rows.push_back(std::move(row));
    }
    return out;
}

std::vector<double> parse_number_list(const std::string& text) {
    std::vector<double> out;
    for (const std::string& cell : split(text, ',')) {
        const std::string c = trim(cell);
        double v = 0;
        const auto [ptr, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
        if (ec != std::errc{} || ptr != c.data() + c.size())
            throw std::invalid_argument("unparseable number '" + c + "'");
        out.push_back(v);
    }
    return out;
}

std::vector<std::string> state_column_names(const HamiltonianSpec& spec) {
    switch (spec.kind) {
        case HamiltonianKind::osc4:
            return {"q1", "q2", "q3", "q4", "p1", "p2", "p3", "p4"};
        case HamiltonianKind::kepler3:
            return {"x1", "x2", "x3", "y1", "y2", "y3"};
        case HamiltonianKind::kepler2:
        case HamiltonianKind::aux_kepler2:
            return {"x1", "x2", "y1", "y2"};
        case HamiltonianKind::kepler_spherical:
            return {"rho", "theta", "phi", "P", "Theta", "Phi"};
        case HamiltonianKind::andoyer_regularized:
            return {"rho", "lambda", "mu", "nu", "P", "Lambda", "M", "N"};
        default:
            return {"rho", "phi", "theta", "psi", "P", "Phi", "Theta", "Psi"};
    }
}

CsvTable trajectory_table(const Trajectory& traj, const std::vector<std::string>& state_names) {
    CsvTable table;
    table.header = {"s", "t"};
    table.header.insert(table.header.end(), state_names.begin(), state_names.end());
    table.header.insert(table.header.end(), {"H", "Xi0", "Xi1"});
    for (const TrajectorySample& smp : traj.samples()) {
        std::vector<double> row;
        row.reserve(2 + smp.state.size() + 3);
        row.push_back(smp.s);
        row.push_back(smp.t);
        for (int i = 0; i < smp.state.size(); ++i) row.push_back(smp.state[i]);
        row.push_back(smp.energy);
        row.push_back(smp.xi0);
        row.push_back(smp.xi1);
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string trajectory_jsonl(const Trajectory& traj, const std::vector<std::string>& state_names) {
    // Strict JSON has no nan literal; undefined diagnostics become null.
    const auto cell = [](double v) { return std::isfinite(v) ? format_double(v) : "null"; };
    std::ostringstream os;
    os << "{\"format_version\":" << kFormatVersion << ",\"columns\":[\"s\",\"t\"";
    for (const auto& n : state_names) os << ",\"" << n << "\"";
    os << ",\"H\",\"Xi0\",\"Xi1\"]}\n";
    for (const TrajectorySample& smp : traj.samples()) {
        os << "[" << cell(smp.s) << "," << cell(smp.t);
        for (int i = 0; i < smp.state.size(); ++i) os << "," << cell(smp.state[i]);
        os << "," << cell(smp.energy) << "," << cell(smp.xi0) << "," << cell(smp.xi1)
           << "]\n";
    }
    return os.str();
}


namespace {

template <typename Chart>
std::string chart_json(const Chart& c, const std::array<const char*, 8>& names) {
    const Vector8d v = c.flat();
    std::ostringstream os;
    os << "{\"format_version\":" << kFormatVersion;
    for (int i = 0; i < 8; ++i) os << ",\"" << names[i] << "\":" << format_double(v[i]);
    os << "}";
    return os.str();
}

template <typename Chart>
Chart chart_from_json(const std::string& text, const std::array<const char*, 8>& names) {
    const nlohmann::json j = nlohmann::json::parse(text);
    Vector8d v;
    for (int i = 0; i < 8; ++i) {
        if (!j.contains(names[i]))
            throw std::invalid_argument(std::string("chart json: missing field ") + names[i]);
        v[i] = j.at(names[i]).get<double>();
    }
    return Chart::from_flat(v);
}

}  // namespace

std::string euler_chart_to_json(const EulerChart& c) {
    return chart_json(c, EulerChart::header());
}

EulerChart euler_chart_from_json(const std::string& text) {
    return chart_from_json<EulerChart>(text, EulerChart::header());
}

std::string andoyer_chart_to_json(const AndoyerChart& c) {
    return chart_json(c, AndoyerChart::header());
}

AndoyerChart andoyer_chart_from_json(const std::string& text) {
    return chart_from_json<AndoyerChart>(text, AndoyerChart::header());
}

}  // namespace ksreg
