#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "optoscatter/oracle.hpp"
#include "optoscatter/resonances.hpp"
#include "optoscatter/spectral.hpp"

namespace optoscatter {

using json = nlohmann::ordered_json;

/// Version tag written into every JSON document.
inline constexpr int kSchemaVersion = 1;

json to_json(const ModelParams& p);
json to_json(const WavepacketParams& wp);
json to_json(const MechanicalInitState& s);
json to_json(const Truncation& t);
json to_json(const TruncationRecord& r);
json to_json(const ResonanceLine& line);
json to_json(const OracleComparison& c);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

/// Header "dp,dq,S", one row per grid point in row-major order.
void write_grid_csv(const std::filesystem::path& path, const SpectrumGrid& grid);
/// Header "delta,S".
void write_diagonal_csv(const std::filesystem::path& path,
                        const std::vector<std::pair<double, double>>& diagonal);
/// Header "m,j,n,s,re,im" for every overlap with indices up to max_index.
void write_fc_table_csv(const std::filesystem::path& path, const FCTable& table, int max_index);

/// Grid document: axes, row-major values, source and the supplied provenance.
json grid_document(const SpectrumGrid& grid, const json& provenance);
json diagonal_document(const std::vector<std::pair<double, double>>& diagonal, const json& provenance);
json resonance_document(const std::vector<ResonanceLine>& lines, const json& provenance);

/// Reads a grid document back; throws DomainError on malformed input.
SpectrumGrid grid_from_document(const json& doc);

void write_json(const std::filesystem::path& path, const json& doc);
json read_json(const std::filesystem::path& path);

}  // namespace optoscatter
