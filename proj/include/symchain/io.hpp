#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "symchain/generator.hpp"
#include "symchain/similarity.hpp"
#include "symchain/symmetry.hpp"
#include "symchain/time_grid.hpp"

namespace symchain::io {

// Parsed chain definition file: either an explicit matrix over a declared
// space, or a bdjump model (with an optional truncation window).
struct ChainDefinition {
    std::optional<GeneratorMatrix> generator;
    std::optional<BDJumpModel> model;
    std::optional<std::pair<int, int>> window;
    std::optional<SimilarityWeights> beta;  // carried alongside when present

    // The generator itself, truncating the model when needed. The override
    // takes precedence over the file's window.
    GeneratorMatrix resolve(std::optional<std::pair<int, int>> window_override = std::nullopt) const;
};

ChainDefinition parse_chain(const nlohmann::json& doc);
ChainDefinition load_chain(const std::filesystem::path& file);

nlohmann::json certificate_to_json(const SymmetryCertificate& cert);
SymmetryCertificate certificate_from_json(const nlohmann::json& doc, const StateSpace& space);

// One column per trace, t first; floats at 17 significant digits with
// '\n' line endings so repeated runs are byte-identical.
struct CsvColumn {
    std::string name;
    const std::vector<double>* values;
};
void write_csv(const std::filesystem::path& file, const TimeGrid& grid, const std::vector<CsvColumn>& columns);

void write_json(const std::filesystem::path& file, const nlohmann::json& doc);

std::string format_double(double v);

}  // namespace symchain::io
