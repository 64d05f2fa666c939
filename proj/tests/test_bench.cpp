#include "egfem/bench.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace egfem;

namespace {

std::shared_ptr<const FunctionSpace> square_p1(int n) {
    return build_space(std::make_shared<const Mesh>(generate_unit_square(n)), ElementFamily::P1());
}

BenchRow sample_row() {
    BenchRow r;
    r.problem = "quadratic";
    r.method = "egfem-p2";
    r.level = 4;
    r.system_size = 1378;
    r.iterations = 10;
    r.status = Status::MaxIter;
    r.offline_s = 0.1 + 1e-17;
    r.online_s = 1.0 / 3.0;
    r.total_s = r.offline_s + r.online_s;
    r.speedup_vs_sga = std::numbers::pi;
    r.rel_l2_error = 3.0644e-3;
    return r;
}

}  // namespace

TEST(L2Error, InterpolantOfLinearFunctionIsExact) {
    auto V = square_p1(5);
    auto f = [](const Vec2& x) { return 1.0 + 2.0 * x[0] - x[1]; };
    const L2Error e = compute_l2_error(interpolate(*V, f), *V, f);
    EXPECT_LE(e.absolute, 1e-14);
}

TEST(L2Error, ZeroAgainstOne) {
    auto V = square_p1(3);
    const L2Error e = compute_l2_error(DenseVector::Zero(V->n_dofs()), *V, [](const Vec2&) { return 1.0; });
    EXPECT_NEAR(e.absolute, 1.0, 1e-14);
    EXPECT_NEAR(e.relative, 1.0, 1e-14);
    EXPECT_FALSE(e.relative_is_absolute);
    const L2Error z = compute_l2_error(DenseVector::Ones(V->n_dofs()), *V, [](const Vec2&) { return 0.0; });
    EXPECT_TRUE(z.relative_is_absolute);
    EXPECT_NEAR(z.relative, 1.0, 1e-14);
}

TEST(L2Error, InterpolationErrorIsSecondOrder) {
    auto f = [](const Vec2& x) { return std::sin(2 * std::numbers::pi * x[0]) * std::sin(2 * std::numbers::pi * x[1]); };
    double prev = 0.0;
    for (int level = 3; level <= 6; ++level) {
        auto V = square_p1(1 << level);
        const double e = compute_l2_error(interpolate(*V, f), *V, f).relative;
        if (prev > 0.0) {
            EXPECT_GE(prev / e, 3.6);
            EXPECT_LE(prev / e, 4.4);
        }
        prev = e;
    }
}

TEST(Config, RejectsInapplicableMethods) {
    BenchConfig c;
    c.problem = "plaplace";
    c.methods = {"sga", "egfem-p0"};
    EXPECT_NO_THROW(validate_config(c));
    c.methods = {"gfem"};
    EXPECT_THROW(validate_config(c), InvalidArgument);
    c.problem = "minimal-surface";
    EXPECT_THROW(validate_config(c), InvalidArgument);
    c.problem = "biochemical";
    c.methods = {"tensor-sga"};
    EXPECT_THROW(validate_config(c), InvalidArgument);
    c.methods = {"egfem-x1"};
    EXPECT_THROW(validate_config(c), InvalidArgument);
    c.methods = {"sga"};
    c.repeats = 0;
    EXPECT_THROW(validate_config(c), InvalidArgument);
}

TEST(Report, EmptyReportIsHeaderOnly) {
    std::ostringstream out;
    emit_report(BenchReport{}, ReportFormat::Csv, out);
    EXPECT_EQ(out.str(),
              "problem,method,level,system_size,iterations,status,offline_s,online_s,total_s,speedup_vs_sga,"
              "rel_l2_error\n");
}

TEST(Report, OneRowHasElevenFields) {
    BenchReport r;
    r.rows.push_back(sample_row());
    std::ostringstream out;
    emit_report(r, ReportFormat::Csv, out);
    std::istringstream in(out.str());
    std::string header, line, extra;
    std::getline(in, header);
    std::getline(in, line);
    EXPECT_FALSE(std::getline(in, extra));
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 10);
}

TEST(Report, CsvAndJsonRoundTrip) {
    BenchReport r;
    r.config.problem = "superconductivity-b";
    r.config.params = {{"nu", 1e-3}};
    r.config.methods = {"sga", "egfem-p2"};
    r.config.levels = {3, 6};
    r.rows.push_back(sample_row());
    BenchRow no_baseline = sample_row();
    no_baseline.speedup_vs_sga.reset();
    no_baseline.status = Status::Diverged;
    r.rows.push_back(no_baseline);
    for (ReportFormat f : {ReportFormat::Csv, ReportFormat::Json}) {
        std::stringstream io;
        emit_report(r, f, io);
        const BenchReport back = parse_report(io, f);
        EXPECT_EQ(back.rows, r.rows);
        if (f == ReportFormat::Json) {
            EXPECT_EQ(back.config.problem, r.config.problem);
            EXPECT_EQ(back.config.levels, r.config.levels);
            EXPECT_EQ(back.config.params, r.config.params);
        }
    }
}

TEST(Report, UnwritablePathThrows) {
    EXPECT_THROW(emit_report(BenchReport{}, ReportFormat::Csv, std::string("/nonexistent-dir/x.csv")), InvalidArgument);
    EXPECT_THROW(parse_format("xml"), InvalidArgument);
}

TEST(Benchmark, SpeedupComputedFromSameReport) {
    BenchConfig c;
    c.problem = "quadratic";
    c.methods = {"sga", "egfem-p2", "gfem"};
    c.levels = {2, 3};
    c.repeats = 1;
    const BenchReport r = run_benchmark(c);
    ASSERT_EQ(r.rows.size(), 6u);
    for (std::size_t i = 0; i < r.rows.size(); i += 3) {
        const BenchRow& sga = r.rows[i];
        ASSERT_EQ(sga.method, "sga");
        for (std::size_t k = i; k < i + 3; ++k) {
            ASSERT_TRUE(r.rows[k].speedup_vs_sga.has_value());
            EXPECT_DOUBLE_EQ(*r.rows[k].speedup_vs_sga, sga.online_s / r.rows[k].online_s);
            EXPECT_DOUBLE_EQ(r.rows[k].total_s, r.rows[k].offline_s + r.rows[k].online_s);
        }
        EXPECT_NEAR(r.rows[i + 1].rel_l2_error, sga.rel_l2_error, 1e-10);
    }
    EXPECT_EQ(r.rows[4].system_size, 81 + 289);

    c.methods = {"egfem-p2"};
    for (const auto& row : run_benchmark(c).rows) EXPECT_FALSE(row.speedup_vs_sga.has_value());
}

TEST(Benchmark, FailedRowsAreRecorded) {
    BenchConfig c;
    c.problem = "superconductivity-c";
    c.params = {{"nu", 1e-3}};
    c.methods = {"sga"};
    c.levels = {4};
    c.repeats = 1;
    c.max_iter = 100;
    const BenchReport r = run_benchmark(c);
    ASSERT_EQ(r.rows.size(), 1u);
    EXPECT_NE(r.rows[0].status, Status::Converged);
}
