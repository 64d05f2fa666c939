#include "egfem/bench.hpp"
#include "egfem/verify.hpp"

#include <CLI11.hpp>
#include <Eigen/Core>

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>

using namespace egfem;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
        if (!item.empty()) out.push_back(item);
    return out;
}

// "5" -> {5}, "3-6" -> {3,4,5,6}, "3,5" -> {3,5}
std::vector<int> parse_levels(const std::string& s) {
    std::vector<int> levels;
    for (const auto& part : split(s, ',')) {
        const auto dash = part.find('-');
        if (dash == std::string::npos) {
            levels.push_back(std::stoi(part));
        } else {
            const int lo = std::stoi(part.substr(0, dash)), hi = std::stoi(part.substr(dash + 1));
            if (lo > hi) throw InvalidArgument("empty level range '" + part + "'");
            for (int l = lo; l <= hi; ++l) levels.push_back(l);
        }
    }
    return levels;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* t = std::getenv("EGFEM_THREADS")) Eigen::setNbThreads(std::max(1, std::atoi(t)));

    CLI::App app{"EGFEM benchmark harness"};
    app.require_subcommand(1);

    auto* bench = app.add_subcommand("bench", "run a method x level sweep for one problem");
    BenchConfig cfg;
    std::string methods, levels = "3", out, format = "csv";
    std::vector<std::string> params;
    bench->add_option("--problem", cfg.problem, "problem id")->required();
    bench->add_option("--method", methods, "comma-separated method ids (default: all for the problem)");
    bench->add_option("--levels", levels, "mesh levels, e.g. 6, 3-6 or 3,5");
    bench->add_option("--tol", cfg.tol, "relative update tolerance");
    bench->add_option("--max-iter", cfg.max_iter, "iteration cap");
    bench->add_option("--repeats", cfg.repeats, "timed repeats after one warm-up run");
    bench->add_option("--quad-degree", cfg.quad_degree, "SGA quadrature degree (default: per problem)");
    bench->add_option("--param", params, "problem parameter key=value (nu, sigma, k, p, T, dt)");
    bench->add_option("--out", out, "output file (default stdout)");
    bench->add_option("--format", format, "csv or json");

    auto* mesh_info = app.add_subcommand("mesh-info", "summarize a Gmsh 2.2 mesh");
    std::string msh;
    mesh_info->add_option("--msh", msh, "path to .msh file")->required();

    auto* verify = app.add_subcommand("verify", "run the built-in oracle checks");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bench->parsed()) {
            cfg.levels = parse_levels(levels);
            for (const auto& kv : params) {
                const auto eq = kv.find('=');
                if (eq == std::string::npos) throw InvalidArgument("parameter '" + kv + "' is not key=value");
                cfg.params[kv.substr(0, eq)] = std::stod(kv.substr(eq + 1));
            }
            cfg.methods = methods.empty() ? make_problem(cfg.problem, cfg.params).methods : split(methods, ',');
            const ReportFormat fmt = parse_format(format);
            const BenchReport report = run_benchmark(cfg);
            if (out.empty())
                emit_report(report, fmt, std::cout);
            else
                emit_report(report, fmt, out);
            return 0;
        }
        if (mesh_info->parsed()) {
            const Mesh m = read_msh(msh);
            int neumann = 0;
            for (const auto& e : m.boundary_edges()) neumann += e.tag == BoundaryTag::Neumann;
            std::cout << "vertices " << m.num_vertices() << "\ntriangles " << m.num_triangles() << "\nedges "
                      << m.num_edges() << "\nboundary_edges " << m.boundary_edges().size() << "\nneumann_edges "
                      << neumann << "\narea " << m.total_area() << '\n';
            return 0;
        }
        if (verify->parsed()) {
            int failed = 0;
            for (const auto& c : run_verification()) {
                std::printf("%s  %-60s  %.3e (tol %.0e)\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.value, c.tol);
                failed += !c.pass;
            }
            return failed ? 1 : 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
