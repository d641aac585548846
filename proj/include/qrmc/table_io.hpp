#pragma once

#include <filesystem>
#include <string>

#include "qrmc/solver.hpp"

namespace qrmc {

inline constexpr const char* kCoefficientSchema = "qrmc.coefficients.v1";
inline constexpr const char* kRunMetaSchema = "qrmc.run-meta.v1";

/// Serialize the table to a versioned JSON document:
/// result-determining config (steps, paths, damping, seed, horizon, measure,
/// gamma descriptor) and, per step, an array of [multi-index, coefficient]
/// pairs in enumeration order. Identical tables serialize to identical
/// bytes; wall times, worker counts and memory mode are not part of the
/// document (see save_run_meta).
std::string table_to_json(const CoefficientTable& table);
void save_table_json(const CoefficientTable& table, const std::filesystem::path& file);

CoefficientTable table_from_json(const std::string& text);
CoefficientTable load_table_json(const std::filesystem::path& file);

/// Side-channel metadata (never byte-stable): memory mode, workers, wall
/// times, truncation counters, timestamp. Written next to the artifact as
/// <file>.meta.json by the CLI.
void save_run_meta(const CoefficientTable& table, MemoryMode mode, int workers,
                   const std::filesystem::path& file);

}  // namespace qrmc
