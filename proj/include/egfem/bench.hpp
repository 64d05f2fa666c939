#pragma once

#include "egfem/problems.hpp"
#include "egfem/solver.hpp"

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace egfem {

struct L2Error {
    double absolute = 0.0;
    double relative = 0.0;
    /// Set when the exact solution has zero norm; `relative` then holds the absolute error.
    bool relative_is_absolute = false;
};

/// ||u_h - exact|| over the mesh and its ratio to ||exact||.
L2Error compute_l2_error(const DenseVector& u, const FunctionSpace& V, const ScalarField& exact,
                         int quad_degree = 6);

struct BenchConfig {
    std::string problem = "quadratic";
    std::map<std::string, double> params;
    std::vector<std::string> methods = {"sga"};
    std::vector<int> levels = {3};
    double tol = 1e-12;
    int max_iter = 500;
    int quad_degree = -1;  // SGA quadrature; -1 keeps the problem default
    int repeats = 5;
};

/// Throws InvalidArgument for unknown problems/methods or combinations the
/// reformulation does not cover (gfem with gradient-dependent coefficients).
void validate_config(const BenchConfig& config);

struct BenchRow {
    std::string problem;
    std::string method;
    int level = 0;
    int system_size = 0;
    int iterations = 0;
    Status status = Status::Converged;
    double offline_s = 0.0;
    double online_s = 0.0;
    double total_s = 0.0;
    std::optional<double> speedup_vs_sga;
    double rel_l2_error = 0.0;

    friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct BenchReport {
    BenchConfig config;
    std::vector<BenchRow> rows;
};

/// Result of a single (method, level) solve, with timings of that one run.
struct MethodRun {
    DenseVector u;
    std::shared_ptr<const FunctionSpace> V;
    int system_size = 0;
    int iterations = 0;
    Status status = Status::Converged;
    double offline_s = 0.0;
    double online_s = 0.0;
    std::uint64_t online_quadrature_evaluations = 0;
    std::string message;
};

/// Offline: mesh, spaces and all precomputable forms. Online: the iteration
/// (or time-stepping) loop.
MethodRun run_method(const ProblemSpec& problem, const std::string& method, int level, const IterOptions& opts = {},
                     int quad_degree = -1);

BenchReport run_benchmark(const BenchConfig& config);

enum class ReportFormat { Csv, Json };
ReportFormat parse_format(const std::string& s);

void emit_report(const BenchReport& report, ReportFormat format, std::ostream& out);
void emit_report(const BenchReport& report, ReportFormat format, const std::string& path);
/// Inverse of emit_report for the row data (CSV) or rows plus config (JSON).
BenchReport parse_report(std::istream& in, ReportFormat format);

/// Column names in output order.
const std::vector<std::string>& report_columns();

}  // namespace egfem
