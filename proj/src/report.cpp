#include "egfem/bench.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace egfem {

const std::vector<std::string>& report_columns() {
    static const std::vector<std::string> cols = {"problem",   "method",   "level",   "system_size",
                                                  "iterations", "status",  "offline_s", "online_s",
                                                  "total_s",   "speedup_vs_sga", "rel_l2_error"};
    return cols;
}

ReportFormat parse_format(const std::string& s) {
    if (s == "csv") return ReportFormat::Csv;
    if (s == "json") return ReportFormat::Json;
    throw InvalidArgument("unknown report format '" + s + "' (csv or json)");
}

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& s) {
    if (s == "nan" || s == "-nan") return std::numeric_limits<double>::quiet_NaN();
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    EGFEM_REQUIRE(pos == s.size(), InvalidArgument, "bad number '" + s + "' in report");
    return v;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

// JSON has no NaN; failed rows carry null
nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }
double from_num(const nlohmann::json& j) {
    return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

}  // namespace

void emit_report(const BenchReport& report, ReportFormat format, std::ostream& out) {
    if (format == ReportFormat::Csv) {
        const auto& cols = report_columns();
        for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
        out << '\n';
        for (const auto& r : report.rows) {
            out << r.problem << ',' << r.method << ',' << r.level << ',' << r.system_size << ',' << r.iterations << ','
                << to_string(r.status) << ',' << fmt(r.offline_s) << ',' << fmt(r.online_s) << ',' << fmt(r.total_s)
                << ',' << (r.speedup_vs_sga ? fmt(*r.speedup_vs_sga) : "") << ',' << fmt(r.rel_l2_error) << '\n';
        }
        return;
    }
    nlohmann::json j;
    const BenchConfig& c = report.config;
    j["config"] = {{"problem", c.problem}, {"params", c.params},   {"methods", c.methods},
                   {"levels", c.levels},   {"tol", c.tol},         {"max_iter", c.max_iter},
                   {"quad_degree", c.quad_degree}, {"repeats", c.repeats}};
    j["rows"] = nlohmann::json::array();
    for (const auto& r : report.rows) {
        j["rows"].push_back({{"problem", r.problem},
                             {"method", r.method},
                             {"level", r.level},
                             {"system_size", r.system_size},
                             {"iterations", r.iterations},
                             {"status", to_string(r.status)},
                             {"offline_s", num(r.offline_s)},
                             {"online_s", num(r.online_s)},
                             {"total_s", num(r.total_s)},
                             {"speedup_vs_sga", r.speedup_vs_sga ? num(*r.speedup_vs_sga) : nlohmann::json(nullptr)},
                             {"rel_l2_error", num(r.rel_l2_error)}});
    }
    out << j.dump(2) << '\n';
}

void emit_report(const BenchReport& report, ReportFormat format, const std::string& path) {
    std::ofstream f(path);
    EGFEM_REQUIRE(f.good(), InvalidArgument, "cannot write report to '" + path + "'");
    emit_report(report, format, f);
    f.flush();
    EGFEM_REQUIRE(f.good(), InvalidArgument, "writing report to '" + path + "' failed");
}

BenchReport parse_report(std::istream& in, ReportFormat format) {
    BenchReport report;
    if (format == ReportFormat::Csv) {
        std::string line;
        EGFEM_REQUIRE(static_cast<bool>(std::getline(in, line)), InvalidArgument, "report has no header");
        EGFEM_REQUIRE(split_csv(line) == report_columns(), InvalidArgument, "unexpected report header");
        while (std::getline(in, line)) {
            if (line.empty() || line == "\r") continue;
            const auto f = split_csv(line);
            EGFEM_REQUIRE(f.size() == report_columns().size(), InvalidArgument, "report row has the wrong field count");
            BenchRow r;
            r.problem = f[0];
            r.method = f[1];
            r.level = std::stoi(f[2]);
            r.system_size = std::stoi(f[3]);
            r.iterations = std::stoi(f[4]);
            r.status = parse_status(f[5]);
            r.offline_s = parse_double(f[6]);
            r.online_s = parse_double(f[7]);
            r.total_s = parse_double(f[8]);
            if (!f[9].empty()) r.speedup_vs_sga = parse_double(f[9]);
            r.rel_l2_error = parse_double(f[10]);
            report.rows.push_back(r);
        }
        return report;
    }
    const nlohmann::json j = nlohmann::json::parse(in);
    const auto& c = j.at("config");
    report.config.problem = c.at("problem").get<std::string>();
    report.config.params = c.at("params").get<std::map<std::string, double>>();
    report.config.methods = c.at("methods").get<std::vector<std::string>>();
    report.config.levels = c.at("levels").get<std::vector<int>>();
    report.config.tol = c.at("tol").get<double>();
    report.config.max_iter = c.at("max_iter").get<int>();
    report.config.quad_degree = c.at("quad_degree").get<int>();
    report.config.repeats = c.at("repeats").get<int>();
    for (const auto& jr : j.at("rows")) {
        BenchRow r;
        r.problem = jr.at("problem").get<std::string>();
        r.method = jr.at("method").get<std::string>();
        r.level = jr.at("level").get<int>();
        r.system_size = jr.at("system_size").get<int>();
        r.iterations = jr.at("iterations").get<int>();
        r.status = parse_status(jr.at("status").get<std::string>());
        r.offline_s = from_num(jr.at("offline_s"));
        r.online_s = from_num(jr.at("online_s"));
        r.total_s = from_num(jr.at("total_s"));
        if (!jr.at("speedup_vs_sga").is_null()) r.speedup_vs_sga = jr.at("speedup_vs_sga").get<double>();
        r.rel_l2_error = from_num(jr.at("rel_l2_error"));
        report.rows.push_back(r);
    }
    return report;
}

}  // namespace egfem
