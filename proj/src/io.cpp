#include "srm/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace srm::io {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::optional<double> parse_number(const std::string& cell) {
    if (cell.empty()) return std::nullopt;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    if (*first == '+') ++first;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last) return std::nullopt;
    return v;
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return s;
}

std::optional<std::size_t> prob_column(const CsvTable& t) {
    for (std::size_t j = 0; j < t.header.size(); ++j) {
        if (lower(t.header[j]) == "prob") return j;
    }
    return std::nullopt;
}

std::vector<double> checked_probs(std::vector<double> probs) {
    double total = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0) || !std::isfinite(p)) throw std::invalid_argument("CSV: negative or non-finite probability");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) {
        throw std::invalid_argument("CSV: probabilities sum to " + std::to_string(total) + ", expected 1");
    }
    for (auto& p : probs) p /= total;
    return probs;
}

double number(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        throw std::invalid_argument(std::string("spectrum descriptor: missing numeric field '") + key + "'");
    }
    return j.at(key).get<double>();
}

std::vector<double> number_array(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || !j.at(key).is_array()) {
        throw std::invalid_argument(std::string("spectrum descriptor: missing array field '") + key + "'");
    }
    std::vector<double> out;
    for (const auto& v : j.at(key)) {
        if (!v.is_number()) throw std::invalid_argument(std::string("spectrum descriptor: non-numeric entry in ") + key);
        out.push_back(v.get<double>());
    }
    return out;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    std::size_t line_no = 0;
    std::size_t width = 0;
    bool first = true;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string body = trim(line);
        if (body.empty() || body.front() == '#') continue;
        const auto cells = split(body);
        std::vector<double> row;
        bool numeric = true;
        for (const auto& c : cells) {
            auto v = parse_number(c);
            if (!v) {
                numeric = false;
                break;
            }
            row.push_back(*v);
        }
        if (first) {
            first = false;
            width = cells.size();
            if (!numeric) {
                t.header = cells;
                continue;
            }
        }
        if (!numeric) throw std::invalid_argument("CSV line " + std::to_string(line_no) + ": non-numeric cell");
        if (cells.size() != width) {
            throw std::invalid_argument("CSV line " + std::to_string(line_no) + ": expected " + std::to_string(width) +
                                        " columns, found " + std::to_string(cells.size()));
        }
        t.rows.push_back(std::move(row));
    }
    if (t.rows.empty()) throw std::invalid_argument("CSV: no data rows");
    return t;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    return read_csv(in);
}

SampleColumn samples_from_table(const CsvTable& t) {
    const std::size_t width = t.rows.front().size();
    const auto pc = prob_column(t);
    std::size_t value_col = 0;
    if (pc && *pc == 0) value_col = 1;
    const bool has_probs = pc.has_value() || (t.header.empty() && width == 2);
    const std::size_t expected = has_probs ? 2 : 1;
    if (width != expected) {
        throw std::invalid_argument("samples CSV: expected one value column and an optional prob column, found " +
                                    std::to_string(width) + " columns");
    }
    SampleColumn out;
    std::vector<double> probs;
    for (const auto& r : t.rows) {
        out.values.push_back(r[value_col]);
        if (has_probs) probs.push_back(r[pc ? *pc : 1]);
    }
    if (has_probs) out.probs = checked_probs(std::move(probs));
    return out;
}

ScenarioTable scenarios_from_table(const CsvTable& t) {
    const std::size_t width = t.rows.front().size();
    const auto pc = prob_column(t);
    ScenarioTable out;
    std::vector<std::size_t> cols;
    for (std::size_t j = 0; j < width; ++j) {
        if (pc && *pc == j) continue;
        cols.push_back(j);
        out.assets.push_back(t.header.empty() ? "asset" + std::to_string(j + 1) : t.header[j]);
    }
    if (cols.empty()) throw std::invalid_argument("scenario CSV: no asset columns");
    out.losses.resize(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(cols.size()));
    std::vector<double> probs;
    for (std::size_t s = 0; s < t.rows.size(); ++s) {
        for (std::size_t k = 0; k < cols.size(); ++k) {
            out.losses(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(k)) = t.rows[s][cols[k]];
        }
        if (pc) probs.push_back(t.rows[s][*pc]);
    }
    if (pc) out.probs = checked_probs(std::move(probs));
    return out;
}

StepSpectrum spectrum_from_json(const nlohmann::json& j, std::size_t knots) {
    if (!j.is_object() || !j.contains("kind") || !j.at("kind").is_string()) {
        throw std::invalid_argument("spectrum descriptor: expected an object with a string 'kind'");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "step") {
        const bool normalize = j.value("normalize", false);
        return StepSpectrum::make(number_array(j, "breaks"), number_array(j, "levels"), normalize);
    }
    if (kind == "avar") return avar_spectrum(number(j, "alpha"));
    if (kind == "mixture") {
        if (!j.contains("atoms") || !j.at("atoms").is_array()) {
            throw std::invalid_argument("spectrum descriptor: mixture needs an 'atoms' array");
        }
        std::vector<KusuokaAtom> atoms;
        for (const auto& a : j.at("atoms")) {
            if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number()) {
                throw std::invalid_argument("spectrum descriptor: atoms must be [alpha, mass] pairs");
            }
            atoms.push_back({a[0].get<double>(), a[1].get<double>()});
        }
        return from_kusuoka(KusuokaMeasure::make(std::move(atoms)));
    }
    if (kind == "power") {
        const double g = number(j, "gamma");
        if (!(g >= 1.0)) throw std::invalid_argument("power spectrum: gamma must be >= 1");
        return discretize_upper([g](double u) { return g * std::pow(u, g - 1.0); }, knots).spectrum;
    }
    if (kind == "exponential") {
        const double k = number(j, "k");
        if (!(k > 0.0)) throw std::invalid_argument("exponential spectrum: k must be > 0");
        const double norm = std::expm1(k);
        return discretize_upper([k, norm](double u) { return k * std::exp(k * u) / norm; }, knots).spectrum;
    }
    throw std::invalid_argument("spectrum descriptor: unknown kind '" + kind + "'");
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

nlohmann::json to_json(const StepSpectrum& s) {
    return {{"breaks", s.breaks()}, {"levels", s.levels()}, {"majorant", s.is_majorant()}, {"excess", s.excess()}};
}

nlohmann::json to_json(const KusuokaMeasure& m) {
    nlohmann::json atoms = nlohmann::json::array();
    for (const auto& a : m.atoms()) atoms.push_back({a.location, a.mass});
    return atoms;
}

}  // namespace srm::io
