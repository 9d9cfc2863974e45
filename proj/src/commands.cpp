#include "srm/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include "srm/conjugate.hpp"
#include "srm/distribution.hpp"
#include "srm/portfolio.hpp"
#include "srm/risk.hpp"

namespace srm::cli {

using nlohmann::json;

namespace {

io::SampleColumn load_samples(const RunConfig& c, std::size_t index) {
    if (c.inputs.size() <= index) throw std::invalid_argument(c.command + ": missing input file");
    auto samples = io::samples_from_table(io::read_csv_file(c.inputs[index]));
    if (c.returns) {
        for (auto& v : samples.values) v = -v;
    }
    return samples;
}

EmpiricalDistribution to_distribution(const io::SampleColumn& s) {
    if (s.probs) return EmpiricalDistribution::from_samples(s.values, std::span<const double>(*s.probs));
    return EmpiricalDistribution::from_samples(s.values);
}

std::vector<double> scenario_probs(const io::SampleColumn& s) {
    if (s.probs) return *s.probs;
    return std::vector<double>(s.values.size(), 1.0 / static_cast<double>(s.values.size()));
}

json pl_to_json(const PiecewiseLinearConvex& f) {
    json terms = json::array();
    for (const auto& t : f.terms()) terms.push_back({{"knot", t.knot}, {"weight", t.weight}, {"level", t.level}});
    return {{"base_slope", f.base_slope()}, {"offset", f.offset()}, {"terms", terms}};
}

// Values of every applicable representation of R_sigma(d).
json representations(const EmpiricalDistribution& d, const StepSpectrum& s, json& notes) {
    json values = json::object();
    values["quantile"] = spectral_risk(d, s);
    if (d.min() >= 0.0) {
        values["cdf"] = spectral_risk_cdf(d, s);
    } else {
        notes.push_back("cdf representation skipped: support contains negative values");
    }
    const KusuokaMeasure m = to_kusuoka(s);
    values["kusuoka"] = spectral_risk_kusuoka(d, m);
    const PiecewiseLinearConvex f0 = build_f0(d, m);
    values["infrep"] = expectation(f0, d) + conjugate_integral(f0, s);
    return values;
}

double max_discrepancy(const json& values) {
    std::vector<double> v;
    for (const auto& [k, x] : values.items()) v.push_back(x.get<double>());
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi - *lo;
}

void note_majorant(const StepSpectrum& s, double min_loss, json& body, json& notes) {
    body["upper_bound"] = s.is_majorant();
    if (s.is_majorant()) {
        body["excess"] = s.excess();
        if (min_loss < 0.0) notes.push_back("majorant spectrum: upper-bound property holds for nonnegative losses only");
    }
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

json to_json(const RunConfig& c) {
    json j{{"command", c.command},
           {"inputs", c.inputs},
           {"tol", c.tol},
           {"seed", c.seed},
           {"returns", c.returns},
           {"oracle", c.oracle},
           {"oracle_step", c.oracle_step},
           {"knots", c.knots},
           {"order_knots", c.order_knots},
           {"lower", c.lower},
           {"upper", c.upper}};
    j["spectrum_path"] = c.spectrum_path ? json(*c.spectrum_path) : json(nullptr);
    j["alpha"] = c.alpha ? json(*c.alpha) : json(nullptr);
    return j;
}

std::string config_hash(const RunConfig& c) {
    const std::string text = to_json(c).dump();
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

StepSpectrum load_spectrum(const RunConfig& c) {
    if (c.spectrum_path && c.alpha) throw std::invalid_argument("give either --spectrum or --alpha, not both");
    if (c.alpha) return avar_spectrum(*c.alpha);
    if (c.spectrum_path) return io::spectrum_from_json(io::read_json_file(*c.spectrum_path), c.knots);
    throw std::invalid_argument(c.command + ": a spectrum is required (--spectrum PATH or --alpha X)");
}

Report cmd_eval(const RunConfig& c) {
    const auto samples = load_samples(c, 0);
    const auto d = to_distribution(samples);
    const StepSpectrum s = load_spectrum(c);

    json notes = json::array();
    json body;
    body["samples"] = samples.values.size();
    body["spectrum"] = io::to_json(s);
    body["values"] = representations(d, s, notes);
    const double disc = max_discrepancy(body["values"]);
    body["max_discrepancy"] = disc;
    body["consistent"] = disc <= c.tol * std::max(1.0, std::abs(body["values"]["quantile"].get<double>()));
    note_majorant(s, d.min(), body, notes);
    body["notes"] = notes;

    std::string summary = "R_sigma = " + fmt(body["values"]["quantile"].get<double>()) +
                          " (max discrepancy " + fmt(disc) + ")";
    if (s.is_majorant()) summary += " [upper bound]";
    return {body, summary};
}

Report cmd_dual_check(const RunConfig& c) {
    const auto samples = load_samples(c, 0);
    if (c.inputs.size() < 2) throw std::invalid_argument("dual-check: missing Z file");
    const auto ztable = io::read_csv_file(c.inputs[1]);
    const auto zcol = io::samples_from_table(ztable);
    if (zcol.values.size() != samples.values.size()) {
        throw std::invalid_argument("dual-check: " + std::to_string(samples.values.size()) + " samples but " +
                                    std::to_string(zcol.values.size()) + " dual entries");
    }
    const StepSpectrum s = load_spectrum(c);
    const auto probs = scenario_probs(samples);
    const DualVariate zv = DualVariate::make(zcol.values, probs);
    const auto d = to_distribution(samples);

    const FeasibilityReport fr = check_feasible(zv, s, c.tol);
    const double bound = dual_bound(samples.values, zv);
    const double risk = spectral_risk(d, s);

    json violations = json::array();
    for (const auto& v : fr.violations) violations.push_back({{"alpha", v.alpha}, {"slack", v.slack}});
    json body{{"feasible", fr.feasible}, {"mean_residual", fr.mean_residual}, {"violations", violations},
              {"bound", bound},          {"risk", risk},                    {"slack", risk - bound}};
    json notes = json::array();
    note_majorant(s, d.min(), body, notes);
    body["notes"] = notes;

    std::string summary = std::string(fr.feasible ? "feasible" : "infeasible") + ": E[YZ] = " + fmt(bound) +
                          ", R_sigma = " + fmt(risk);
    if (!fr.violations.empty()) summary += ", " + std::to_string(fr.violations.size()) + " violation(s)";
    return {body, summary};
}

Report cmd_infrep(const RunConfig& c) {
    const auto samples = load_samples(c, 0);
    const auto d = to_distribution(samples);
    const StepSpectrum s = load_spectrum(c);
    const KusuokaMeasure m = to_kusuoka(s);
    const PiecewiseLinearConvex f0 = build_f0(d, m);

    const double ef = expectation(f0, d);
    const double ci = conjugate_integral(f0, s);
    const double risk = spectral_risk(d, s);
    const ShiftedFunction shifted = shift(f0, -ci);

    const ConjugateTable table = conjugate(f0);
    json body{{"f0", pl_to_json(f0)},
              {"conjugate", {{"slopes", table.slopes()}, {"values", table.values()}}},
              {"expectation", ef},
              {"conjugate_integral", ci},
              {"objective", ef + ci},
              {"risk", risk},
              {"gap", ef + ci - risk},
              {"constrained",
               {{"shift", -ci},
                {"expectation", expectation(shifted.function, d)},
                {"conjugate_integral", conjugate_integral(shifted.function, s)}}}};
    json notes = json::array();
    note_majorant(s, d.min(), body, notes);
    body["notes"] = notes;
    return {body, "E f0(Y) + int f0*(sigma) = " + fmt(ef + ci) + ", R_sigma = " + fmt(risk)};
}

Report cmd_convert(const RunConfig& c) {
    const StepSpectrum s = load_spectrum(c);
    const KusuokaMeasure m = to_kusuoka(s);
    const StepSpectrum back = from_kusuoka(m);
    const KusuokaMeasure again = to_kusuoka(back);

    double residual = 0.0;
    if (back.cells() != s.cells() || again.size() != m.size()) {
        residual = std::numeric_limits<double>::infinity();
    } else {
        for (std::size_t i = 0; i < s.cells(); ++i) {
            residual = std::max(residual, std::abs(back.levels()[i] - s.levels()[i]));
            residual = std::max(residual, std::abs(back.breaks()[i + 1] - s.breaks()[i + 1]));
        }
        for (std::size_t i = 0; i < m.size(); ++i) {
            residual = std::max(residual, std::abs(again.atoms()[i].location - m.atoms()[i].location));
            residual = std::max(residual, std::abs(again.atoms()[i].mass - m.atoms()[i].mass));
        }
    }
    json body{{"step", io::to_json(s)}, {"atoms", io::to_json(m)}, {"total_mass", m.total_mass()},
              {"roundtrip_residual", std::isfinite(residual) ? json(residual) : json("inf")}};
    return {body, std::to_string(s.cells()) + " cells, " + std::to_string(m.size()) + " atoms, round-trip residual " +
                      fmt(residual)};
}

Report cmd_optimize(const RunConfig& c) {
    if (c.inputs.empty()) throw std::invalid_argument("optimize: missing scenario file");
    auto table = io::scenarios_from_table(io::read_csv_file(c.inputs[0]));
    if (c.returns) table.losses = -table.losses;
    const StepSpectrum s = load_spectrum(c);
    const std::size_t d = table.assets.size();

    auto expand = [d](const std::vector<double>& v, double fallback) {
        if (v.empty()) return std::vector<double>(d, fallback);
        if (v.size() == 1) return std::vector<double>(d, v.front());
        if (v.size() != d) throw std::invalid_argument("bounds must list one value or one per asset");
        return v;
    };
    const ScenarioProblem p =
        ScenarioProblem::make(table.losses, table.probs, s, expand(c.lower, 0.0), expand(c.upper, 1.0));

    SolveOptions opts;
    opts.order_knots = c.order_knots;
    const PortfolioSolution sol = minimize_spectral(p, opts);

    json weights = json::object();
    for (std::size_t j = 0; j < d; ++j) weights[table.assets[j]] = sol.x[j];

    const auto losses = scenario_losses(p, sol.x);
    const auto dist = EmpiricalDistribution::from_samples(losses, std::span<const double>(p.probs()));
    json notes = json::array();
    json check = representations(dist, s, notes);

    // Random feasible dual variates never exceed the solved value.
    std::mt19937_64 rng(c.seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::size_t> order(losses.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const DualVariate best = comonotone_dual(losses, p.probs(), s);
    double max_bound = -std::numeric_limits<double>::infinity();
    constexpr int kDualSamples = 20;
    for (int k = 0; k < kDualSamples; ++k) {
        std::shuffle(order.begin(), order.end(), rng);
        DualVariate z = conditional_spectrum_dual(p.probs(), order, s);
        const double w = unit(rng);
        for (std::size_t i = 0; i < z.z.size(); ++i) z.z[i] = w * z.z[i] + (1.0 - w) * best.z[i];
        max_bound = std::max(max_bound, dual_bound(losses, z));
    }

    json body{{"assets", table.assets},
              {"x", sol.x},
              {"weights", weights},
              {"q", sol.q},
              {"knot_levels", sol.knot_levels},
              {"value", sol.value},
              {"iterations", sol.iterations},
              {"gap", sol.gap},
              {"check", {{"values", check}, {"max_discrepancy", max_discrepancy(check)}}},
              {"dual_samples", {{"count", kDualSamples}, {"max_bound", max_bound},
                                {"dominated", max_bound <= sol.value + 1e-6}}}};
    note_majorant(s, table.losses.minCoeff(), body, notes);

    if (c.oracle) {
        if (d <= 3) {
            const GridResult g = grid_search_oracle(p, c.oracle_step);
            body["oracle"] = {{"x", g.x}, {"value", g.value}, {"step", c.oracle_step}, {"difference", g.value - sol.value}};
        } else {
            notes.push_back("oracle skipped: grid search supports at most 3 assets");
        }
    }
    body["notes"] = notes;

    std::ostringstream summary;
    summary << "optimal value " << fmt(sol.value) << " at x = [";
    for (std::size_t j = 0; j < d; ++j) summary << (j ? ", " : "") << fmt(sol.x[j]);
    summary << "]";
    if (sol.upper_bound) summary << " [upper bound]";
    return {body, summary.str()};
}

Report run(const RunConfig& c) {
    Report r;
    if (c.command == "eval") r = cmd_eval(c);
    else if (c.command == "dual-check") r = cmd_dual_check(c);
    else if (c.command == "infrep") r = cmd_infrep(c);
    else if (c.command == "convert") r = cmd_convert(c);
    else if (c.command == "optimize") r = cmd_optimize(c);
    else throw std::invalid_argument("unknown command '" + c.command + "'");

    json envelope{{"command", c.command}, {"version", kVersion}, {"config_hash", config_hash(c)}, {"config", to_json(c)}};
    envelope["result"] = std::move(r.body);
    r.body = std::move(envelope);
    return r;
}

}  // namespace srm::cli
