#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <stdexcept>

#include "srm/commands.hpp"
#include "srm/simplex.hpp"

namespace {

void add_spectrum_flags(CLI::App* sub, srm::cli::RunConfig& c) {
    sub->add_option("--spectrum", c.spectrum_path, "Spectrum descriptor (JSON)");
    sub->add_option("--alpha", c.alpha, "AVaR level, shorthand for an avar spectrum");
    sub->add_option("--knots", c.knots, "Cells used to discretize continuous spectra")->check(CLI::PositiveNumber);
}

void add_common_flags(CLI::App* sub, srm::cli::RunConfig& c) {
    add_spectrum_flags(sub, c);
    sub->add_flag("--returns", c.returns, "Inputs are returns; losses are their negatives");
    sub->add_option("--tol", c.tol, "Agreement tolerance")->check(CLI::NonNegativeNumber);
    sub->add_option("--seed", c.seed, "Seed for randomized validation");
}

}  // namespace

int main(int argc, char** argv) {
    srm::cli::RunConfig c;
    std::string out;

    CLI::App app{"Spectral risk measures: evaluation, duality checks and portfolio optimization"};
    app.set_version_flag("--version", std::string(srm::cli::kVersion));
    app.require_subcommand(1);
    app.add_option("--out", out, "Write the JSON report here instead of stdout");

    auto* eval = app.add_subcommand("eval", "Evaluate R_sigma by every applicable representation");
    eval->add_option("samples", c.inputs, "Samples CSV")->required()->expected(1);
    add_common_flags(eval, c);

    auto* dual = app.add_subcommand("dual-check", "Check a dual variate and its bound E[YZ]");
    dual->add_option("files", c.inputs, "Samples CSV and Z CSV")->required()->expected(2);
    add_common_flags(dual, c);

    auto* infrep = app.add_subcommand("infrep", "Infimum representation via the optimal convex function");
    infrep->add_option("samples", c.inputs, "Samples CSV")->required()->expected(1);
    add_common_flags(infrep, c);

    auto* convert = app.add_subcommand("convert", "Convert between step spectrum and Kusuoka atoms");
    add_spectrum_flags(convert, c);
    convert->add_option("--tol", c.tol, "Round-trip tolerance")->check(CLI::NonNegativeNumber);

    auto* optimize = app.add_subcommand("optimize", "Minimize spectral risk over long-only portfolios");
    optimize->add_option("scenarios", c.inputs, "Scenario CSV (header of asset names)")->required()->expected(1);
    add_common_flags(optimize, c);
    optimize->add_flag("--oracle", c.oracle, "Also run the grid-search oracle (at most 3 assets)");
    optimize->add_option("--oracle-step", c.oracle_step, "Grid spacing for the oracle")->check(CLI::PositiveNumber);
    optimize->add_option("--lower", c.lower, "Lower weight bounds (one value or one per asset)")->delimiter(',');
    optimize->add_option("--upper", c.upper, "Upper weight bounds (one value or one per asset)")->delimiter(',');
    optimize->add_flag("--order-knots", c.order_knots, "Constrain knots to be nondecreasing");

    for (auto* sub : {eval, dual, infrep, convert, optimize}) sub->add_option("--out", out, "Write the JSON report here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    c.command = app.get_subcommands().front()->get_name();
    if (!out.empty()) c.out = out;

    try {
        const srm::cli::Report r = srm::cli::run(c);
        const std::string text = r.body.dump(2) + "\n";
        if (c.out) {
            std::ofstream f(*c.out, std::ios::binary);
            if (!f) throw std::invalid_argument("cannot write " + *c.out);
            f << text;
        } else {
            std::cout << text;
        }
        std::cerr << c.command << ": " << r.summary << "\n";
        return 0;
    } catch (const srm::SolverError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
