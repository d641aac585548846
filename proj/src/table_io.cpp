#include "qrmc/table_io.hpp"

#include <chrono>
#include <fstream>

#include <json.hpp>

#include "qrmc/errors.hpp"

namespace qrmc {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json measure_to_json(const SamplingMeasure& measure) {
    return ordered_json{{"mu", measure.mu()},
                        {"dim", measure.dim()},
                        {"center", measure.center()}};
}

SamplingMeasure measure_from_json(const ordered_json& j) {
    return SamplingMeasure(j.at("mu").get<double>(), j.at("dim").get<int>(),
                           j.at("center").get<std::vector<double>>());
}

ordered_json gamma_to_json(const MultiIndexSet& gamma) {
    return ordered_json{{"kind", to_string(gamma.kind())},
                        {"dim", gamma.dim()},
                        {"degrees", gamma.degrees()}};
}

MultiIndexSet gamma_from_json(const ordered_json& j) {
    const auto kind = index_set_kind_from_string(j.at("kind").get<std::string>());
    const int dim = j.at("dim").get<int>();
    const auto degrees = j.at("degrees").get<std::vector<int>>();
    if (kind == IndexSetKind::Full) return MultiIndexSet::full(degrees);
    if (degrees.size() != 1)
        throw IoError("gamma descriptor: total/hyperbolic take one degree");
    return MultiIndexSet::build(dim, kind, degrees[0]);
}

}  // namespace

std::string table_to_json(const CoefficientTable& table) {
    ordered_json doc;
    doc["schema"] = kCoefficientSchema;
    doc["config"] = ordered_json{{"steps", table.steps},
                                 {"paths", table.paths},
                                 {"damping", table.damping},
                                 {"seed", table.seed},
                                 {"horizon", table.horizon},
                                 {"measure", measure_to_json(table.measure)},
                                 {"gamma", gamma_to_json(table.gamma)}};
    doc["basis_size"] = table.gamma.size();

    ordered_json steps = ordered_json::array();
    for (int i = 0; i < table.steps; ++i) {
        if (!table.has_step(i))
            throw IoError("table_to_json: step " + std::to_string(i) +
                          " has no coefficients");
        const auto& coeffs = table.coefficients[static_cast<std::size_t>(i)];
        ordered_json entries = ordered_json::array();
        for (std::size_t k = 0; k < coeffs.size(); ++k) {
            auto idx = table.gamma[k];
            entries.push_back(ordered_json::array(
                {std::vector<int>(idx.begin(), idx.end()), coeffs[k]}));
        }
        steps.push_back(ordered_json{{"step", i}, {"entries", std::move(entries)}});
    }
    doc["coefficients"] = std::move(steps);
    return doc.dump();
}

void save_table_json(const CoefficientTable& table,
                     const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + file.string());
    out << table_to_json(table) << '\n';
    if (!out) throw IoError("write failed: " + file.string());
}

CoefficientTable table_from_json(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("coefficient artifact: parse error: ") + e.what());
    }
    try {
        if (doc.at("schema").get<std::string>() != kCoefficientSchema)
            throw IoError("coefficient artifact: unknown schema");
        const auto& cfg = doc.at("config");
        CoefficientTable table{.steps = cfg.at("steps").get<int>(),
                               .paths = cfg.at("paths").get<std::int64_t>(),
                               .damping = cfg.at("damping").get<double>(),
                               .seed = cfg.at("seed").get<std::uint64_t>(),
                               .horizon = cfg.at("horizon").get<double>(),
                               .measure = measure_from_json(cfg.at("measure")),
                               .gamma = gamma_from_json(cfg.at("gamma")),
                               .coefficients = {},
                               .truncation = {},
                               .step_wall_seconds = {}};
        table.coefficients.resize(static_cast<std::size_t>(table.steps));
        for (const auto& step : doc.at("coefficients")) {
            const int i = step.at("step").get<int>();
            if (i < 0 || i >= table.steps)
                throw IoError("coefficient artifact: step index out of range");
            const auto& entries = step.at("entries");
            if (entries.size() != table.gamma.size())
                throw IoError("coefficient artifact: entry count != basis size");
            std::vector<double> coeffs(entries.size());
            for (std::size_t k = 0; k < entries.size(); ++k) {
                const auto idx = entries[k].at(0).get<std::vector<int>>();
                auto expected = table.gamma[k];
                if (!std::equal(idx.begin(), idx.end(), expected.begin(),
                                expected.end()))
                    throw IoError("coefficient artifact: index order mismatch");
                coeffs[k] = entries[k].at(1).get<double>();
            }
            table.coefficients[static_cast<std::size_t>(i)] = std::move(coeffs);
        }
        return table;
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("coefficient artifact: malformed document: ") +
                      e.what());
    }
}

CoefficientTable load_table_json(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + file.string());
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return table_from_json(text);
}

void save_run_meta(const CoefficientTable& table, MemoryMode mode, int workers,
                   const std::filesystem::path& file) {
    double total = 0.0;
    for (double s : table.step_wall_seconds) total += s;
    const auto now = std::chrono::system_clock::now();
    ordered_json doc{
        {"schema", kRunMetaSchema},
        {"memory_mode", to_string(mode)},
        {"workers", workers},
        {"wall_seconds_per_step", table.step_wall_seconds},
        {"total_wall_seconds", total},
        {"truncation",
         ordered_json{{"applications", table.truncation.applications},
                      {"clipped", table.truncation.clipped}}},
        {"unix_time",
         std::chrono::duration_cast<std::chrono::seconds>(now.time_since_epoch())
             .count()}};
    std::ofstream out(file, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + file.string());
    out << doc.dump(2) << '\n';
    if (!out) throw IoError("write failed: " + file.string());
}

}  // namespace qrmc
