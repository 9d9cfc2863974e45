#pragma once

#include <Eigen/Dense>
#include <json.hpp>

#include <cstddef>
#include <istream>
#include <optional>
#include <string>
#include <vector>

#include "srm/spectrum.hpp"

namespace srm::io {

/// Comma-separated numeric table. Lines starting with '#' and blank lines are
/// skipped; the first row is a header if any of its cells is not a number.
struct CsvTable {
    std::vector<std::string> header;  // empty when the file has none
    std::vector<std::vector<double>> rows;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// A sample column with optional probabilities (a column named "prob", or
/// the second column of a header-less two-column file). Probabilities must
/// sum to 1 within 1e-9.
struct SampleColumn {
    std::vector<double> values;
    std::optional<std::vector<double>> probs;
};

SampleColumn samples_from_table(const CsvTable& t);

/// Scenario matrix: one column per asset (header gives asset names), one row
/// per scenario, plus an optional "prob" column.
struct ScenarioTable {
    std::vector<std::string> assets;
    Eigen::MatrixXd losses;
    std::vector<double> probs;  // empty means equally likely
};

ScenarioTable scenarios_from_table(const CsvTable& t);

/// Default cell count used to discretize closed-form spectra.
inline constexpr std::size_t kDefaultKnots = 32;

/// Parses a spectrum descriptor:
///   {"kind":"step","breaks":[...],"levels":[...]}   optional "normalize": true
///   {"kind":"avar","alpha":a}
///   {"kind":"mixture","atoms":[[alpha,mass],...]}
///   {"kind":"power","gamma":g}        sigma(u) = g u^(g-1), g >= 1
///   {"kind":"exponential","k":k}      sigma(u) = k e^(k u) / (e^k - 1), k > 0
/// Closed-form kinds are replaced by their step majorant on `knots` cells.
StepSpectrum spectrum_from_json(const nlohmann::json& j, std::size_t knots = kDefaultKnots);

nlohmann::json read_json_file(const std::string& path);

nlohmann::json to_json(const StepSpectrum& s);
nlohmann::json to_json(const KusuokaMeasure& m);

}  // namespace srm::io
