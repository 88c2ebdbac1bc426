#include "gptlab/expression.hpp"
#include "gptlab/gptfile.hpp"
#include "gptlab/inversion.hpp"
#include "gptlab/sensitivity.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace gptlab;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

struct Options {
    std::string task;
    std::string sigma = "1";
    std::string grid_file;
    std::string gpt_file;
    std::string truth;
    std::string gamma = "0";
    std::string weights = "default";
    std::string schedule;
    std::string h_spec = "c1=1";
    std::string points_file;
    std::string out_dir = ".";
    int order = 6;
    int mode_m = 1, mode_n = 1;
    double radius = 1.0;
    double step = 0.1;
    long seed = 0;
    bool plot = false;
};

bool uses_theta(const std::string& expr) {
    return expr.find("theta") != std::string::npos;
}

ConductivityField load_sigma(const Options& opt) {
    if (!opt.grid_file.empty()) {
        std::ifstream is(opt.grid_file);
        if (!is) throw InadmissibleError("cannot open grid file '" + opt.grid_file + "'");
        std::string header;
        std::getline(is, header);
        int nr = 0, ntheta = 0;
        char comma = 0;
        std::stringstream hs(header);
        if (!(hs >> nr >> comma >> ntheta) || comma != ',' || nr < 1 || ntheta < 3)
            throw InadmissibleError("grid file: header must be 'nr,ntheta'");
        std::vector<double> values;
        values.reserve((size_t)nr * ntheta);
        std::string cell;
        while (std::getline(is, cell, ','))
            if (!cell.empty() && cell.find_first_not_of(" \t\r\n") != std::string::npos)
                values.push_back(std::stod(cell));
        if ((int)values.size() != nr * ntheta)
            throw InadmissibleError("grid file: expected nr*ntheta values");
        return ConductivityField::gridded_samples(nr, ntheta, opt.radius, values);
    }
    auto fn = parse_expression(opt.sigma);
    if (uses_theta(opt.sigma))
        return ConductivityField::gridded([fn](double r, double t) { return fn(r, t); });
    return ConductivityField::radial([fn](double r) { return fn(r, 0.0); });
}

ContractedGPTTable forward_table(const ConductivityField& sigma, const Options& opt) {
    return contracted_gpts(sigma, opt.order, opt.radius);
}

void cmd_forward(const Options& opt) {
    ConductivityField sigma = load_sigma(opt);
    ContractedGPTTable table = forward_table(sigma, opt);

    GPTFile file;
    file.radius = opt.radius;
    file.table = table;
    std::filesystem::path out(opt.out_dir);
    file.write((out / "gpt.csv").string());

    FirstOrderPT pt = first_order_pt(table);
    HarmonicCoeffs h1 = HarmonicCoeffs::single(1, Parity::cosine, opt.order);
    auto bounds = positivity_bounds(sigma, h1, opt.radius);
    double form = table.quadratic_form(h1);

    std::ofstream summary(out / "summary.txt");
    summary << "task,forward\n";
    summary << "order," << opt.order << "\nradius," << fmt(opt.radius) << "\n";
    summary << "seed," << opt.seed << "\n";
    summary << "first_order_pt," << fmt(pt.M(0, 0)) << ',' << fmt(pt.M(0, 1)) << ','
            << fmt(pt.M(1, 0)) << ',' << fmt(pt.M(1, 1)) << "\n";
    summary << "positivity_lower," << fmt(bounds.first) << "\n";
    summary << "positivity_value," << fmt(form) << "\n";
    summary << "positivity_upper," << fmt(bounds.second) << "\n";
    std::cout << "wrote " << (out / "gpt.csv").string() << "\n";
}

std::vector<StageConfig> parse_schedule(const std::string& text) {
    std::vector<StageConfig> stages;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        StageConfig stage{0, 0, 0, 1e-10};
        int got = std::sscanf(item.c_str(), "%d:%d:%d:%lf", &stage.order, &stage.radial_nodes,
                              &stage.max_iter, &stage.tol);
        if (got < 3) throw InadmissibleError("schedule: items must be order:nodes:max_iter[:tol]");
        stages.push_back(stage);
    }
    if (stages.empty()) throw InadmissibleError("schedule: empty");
    return stages;
}

Eigen::MatrixXd parse_weights_file(const std::string& path, int N) {
    std::ifstream is(path);
    if (!is) throw InadmissibleError("cannot open weights file '" + path + "'");
    Eigen::MatrixXd w(N, N);
    std::string line, cell;
    for (int i = 0; i < N; ++i) {
        if (!std::getline(is, line)) throw InadmissibleError("weights file: too few rows");
        std::stringstream row(line);
        for (int j = 0; j < N; ++j) {
            if (!std::getline(row, cell, ',')) throw InadmissibleError("weights file: short row");
            w(i, j) = std::stod(cell);
        }
    }
    return w;
}

void write_convergence_svg(const std::string& path, const std::vector<IterationRecord>& history) {
    if (history.empty()) return;
    const double W = 640, H = 400, pad = 50;
    double lo = 1e300, hi = -1e300;
    for (const auto& rec : history) {
        double v = std::log10(std::max(rec.eps_M, 1e-300));
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (hi - lo < 1e-12) hi = lo + 1.0;
    std::ofstream os(path);
    os << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H << "'>\n";
    os << "<rect width='100%' height='100%' fill='white'/>\n";
    os << "<text x='" << W / 2 << "' y='20' text-anchor='middle'>log10 eps_M vs iteration</text>\n";
    os << "<polyline fill='none' stroke='black' points='";
    for (size_t i = 0; i < history.size(); ++i) {
        double x = pad + (W - 2 * pad) * i / std::max<size_t>(history.size() - 1, 1);
        double v = std::log10(std::max(history[i].eps_M, 1e-300));
        double yy = H - pad - (H - 2 * pad) * (v - lo) / (hi - lo);
        os << x << ',' << yy << ' ';
    }
    os << "'/>\n</svg>\n";
}

void cmd_reconstruct(const Options& opt) {
    if (opt.gpt_file.empty()) throw InadmissibleError("reconstruct: --gpt-file is required");
    GPTFile file = GPTFile::read(opt.gpt_file);
    if (file.table.max_order() < opt.order)
        throw InadmissibleError("reconstruct: gpt file holds fewer orders than requested");

    ReconstructionConfig config;
    config.max_order = opt.order;
    config.step_size = opt.step;
    if (!opt.schedule.empty()) config.schedule = parse_schedule(opt.schedule);
    if (opt.weights != "default")
        config.weights = parse_weights_file(opt.weights, opt.order);

    std::optional<ConductivityField> truth;
    if (!opt.truth.empty()) {
        auto fn = parse_expression(opt.truth);
        truth = ConductivityField::radial([fn](double r) { return fn(r, 0.0); });
    }

    ReconstructionResult result =
        recursive_reconstruct(file.table, file.radius, config, truth ? &*truth : nullptr);

    std::filesystem::path out(opt.out_dir);
    {
        std::ofstream os(out / "profile.csv");
        os << "r,sigma\n";
        for (size_t i = 0; i < result.profile.nodes.size(); ++i)
            os << fmt(result.profile.nodes[i]) << ',' << fmt(result.profile.values[i]) << '\n';
    }
    {
        std::ofstream os(out / "history.csv");
        os << "k,stage_order,eps_M,eps_sigma\n";
        for (const auto& rec : result.history) {
            os << rec.k << ',' << rec.stage_order << ',' << fmt(rec.eps_M) << ',';
            if (std::isnan(rec.eps_sigma))
                os << "nan";
            else
                os << fmt(rec.eps_sigma);
            os << '\n';
        }
    }
    if (opt.plot) write_convergence_svg((out / "convergence.svg").string(), result.history);
    std::cout << "iterations," << result.iterations << "\n";
    std::cout << "eps_M," << fmt(result.eps_M) << "\n";
    if (truth) std::cout << "eps_sigma," << fmt(result.eps_sigma) << "\n";
}

void cmd_sensitivity(const Options& opt) {
    ConductivityField sigma = load_sigma(opt);
    auto gamma = parse_expression(opt.gamma);
    double value = frechet_derivative(sigma, gamma, opt.mode_m, opt.mode_n, opt.radius);
    std::cout << "frechet_derivative," << fmt(value) << "\n";

    StateCache cache(sigma, opt.radius);
    auto kernel = sensitivity_kernel(cache.state({opt.mode_m, Parity::cosine}),
                                     cache.state({opt.mode_n, Parity::cosine}));
    DiskGrid grid = DiskGrid::make(opt.radius, 32, 4, 64);
    std::filesystem::path out(opt.out_dir);
    std::ofstream os(out / "kernel.csv");
    os << "x,y,kernel\n";
    for (int i = 0; i < grid.r_nodes.size(); ++i)
        for (int j = 0; j < grid.theta_nodes.size(); ++j) {
            double r = grid.r_nodes[i], th = grid.theta_nodes[j];
            os << fmt(r * std::cos(th)) << ',' << fmt(r * std::sin(th)) << ','
               << fmt(kernel(r, th)) << '\n';
        }
}

BoundaryFunction parse_h_spec(const std::string& text, int N) {
    BoundaryFunction h(N);
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        char parity = 0;
        int n = 0;
        double v = 0.0;
        if (std::sscanf(item.c_str(), " %c%d=%lf", &parity, &n, &v) != 3 ||
            (parity != 'c' && parity != 's') || n < 1 || n > N)
            throw InadmissibleError("farfield: --h items must look like c1=1.0 or s2=0.5");
        if (parity == 'c')
            h.cos_coeff(n) = v;
        else
            h.sin_coeff(n) = v;
    }
    return h;
}

void cmd_farfield(const Options& opt) {
    ConductivityField sigma = load_sigma(opt);
    ContractedGPTTable table = forward_table(sigma, opt);
    HarmonicCoeffs h(opt.order);
    {
        BoundaryFunction spec = parse_h_spec(opt.h_spec, opt.order);
        for (int n = 1; n <= opt.order; ++n) {
            h.cos_a[n - 1] = spec.cos_coeff(n) / std::pow(opt.radius, n);
            h.sin_a[n - 1] = spec.sin_coeff(n) / std::pow(opt.radius, n);
        }
    }

    std::vector<std::array<double, 2>> points;
    if (opt.points_file.empty()) throw InadmissibleError("farfield: --points is required");
    std::ifstream is(opt.points_file);
    if (!is) throw InadmissibleError("cannot open points file '" + opt.points_file + "'");
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        double x = 0, y = 0;
        if (std::sscanf(line.c_str(), "%lf,%lf", &x, &y) != 2)
            throw InadmissibleError("points file: rows must be 'x,y'");
        points.push_back({x, y});
    }

    std::filesystem::path out(opt.out_dir);
    std::ofstream os(out / "farfield.csv");
    os << "x,y,perturbation,tail_estimate,status\n";
    for (const auto& p : points) {
        os << fmt(p[0]) << ',' << fmt(p[1]) << ',';
        if (std::hypot(p[0], p[1]) <= opt.radius) {
            os << "nan,nan,interior\n";
            continue;
        }
        FarFieldValue v = far_field_eval(table, h, p[0], p[1], opt.radius);
        os << fmt(v.value) << ',' << fmt(v.tail_estimate) << ",ok\n";
    }
    std::cout << "wrote " << (out / "farfield.csv").string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"gptlab: generalized polarization tensors of conductivity distributions on a disk"};
    app.add_option("--task", opt.task, "forward | reconstruct | sensitivity | farfield")
        ->required()
        ->check(CLI::IsMember({"forward", "reconstruct", "sensitivity", "farfield"}));
    app.add_option("--sigma", opt.sigma, "conductivity expression over r, theta");
    app.add_option("--grid-file", opt.grid_file, "gridded conductivity samples (nr,ntheta header)");
    app.add_option("--order", opt.order, "number of harmonic orders N")->check(CLI::PositiveNumber);
    app.add_option("--radius", opt.radius, "disk radius R")->check(CLI::PositiveNumber);
    app.add_option("--weights", opt.weights, "'default' or path to an NxN CSV of weights");
    app.add_option("--step", opt.step, "initial Landweber step size");
    app.add_option("--schedule", opt.schedule, "stages as order:nodes:max_iter[:tol],...");
    app.add_option("--out", opt.out_dir, "output directory");
    app.add_option("--seed", opt.seed, "seed recorded for reproducibility");
    app.add_flag("--plot", opt.plot, "also render convergence.svg");
    app.add_option("--gpt-file", opt.gpt_file, "input GPT table (reconstruct)");
    app.add_option("--truth", opt.truth, "ground-truth radial expression (reconstruct)");
    app.add_option("--gamma", opt.gamma, "perturbation expression (sensitivity)");
    app.add_option("--m", opt.mode_m, "row mode order (sensitivity)")->check(CLI::PositiveNumber);
    app.add_option("--n", opt.mode_n, "column mode order (sensitivity)")->check(CLI::PositiveNumber);
    app.add_option("--background", opt.h_spec, "background coefficients, e.g. c1=1.0,s2=0.5 (farfield)");
    app.add_option("--points", opt.points_file, "file of exterior x,y points (farfield)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        std::filesystem::create_directories(opt.out_dir);
        if (opt.task == "forward")
            cmd_forward(opt);
        else if (opt.task == "reconstruct")
            cmd_reconstruct(opt);
        else if (opt.task == "sensitivity")
            cmd_sensitivity(opt);
        else
            cmd_farfield(opt);
    } catch (const gptlab::InadmissibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const gptlab::SolveError& e) {
        std::cerr << "solver failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
