#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmeans/discrete.hpp"
#include "pmeans/partition.hpp"

namespace pmeans {

inline constexpr int kSchemaVersion = 1;

/// {"schema": 1, "weights": [...], "defect": x, "order": "..."}
nlohmann::json to_json(const RandomDiscreteSample& p);

/// Inverse of to_json; validates the result. Throws std::invalid_argument
/// on malformed input or an unsupported schema.
RandomDiscreteSample sample_from_json(const nlohmann::json& j);

/// "1.5,2,0.25" -> {1.5, 2, 0.25}. Throws std::invalid_argument.
std::vector<double> parse_real_list(const std::string& text);

/// "2,1,1" -> Composition{2,1,1}.
Composition parse_composition(const std::string& text);

/// Shortest round-trip decimal form of a double.
std::string format_real(double v);

}  // namespace pmeans
