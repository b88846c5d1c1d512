#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "mrtest/complex_matrix.hpp"
#include "mrtest/conditions.hpp"
#include "mrtest/fine.hpp"
#include "mrtest/measurement.hpp"
#include "mrtest/probability_table.hpp"
#include "mrtest/quantum.hpp"

// JSON forms of the library's value types. Output uses insertion-ordered
// objects so files are byte-stable; time indices are written 1-based.

namespace mrtest {

using Json = nlohmann::ordered_json;

/// Reads and parses a JSON file. ParseError carries the path and the
/// line/column reported by the parser.
Json load_json_file(const std::filesystem::path& path);
Json parse_json(const std::string& text, const std::string& source = "<input>");

/// [[[re, im], ...], ...]
Json to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const Json& j, const std::string& field);

Json to_json(const QuantumModel& model);
/// Validates the schema (ParseError naming the field) and the model
/// invariants (ValidationError / InvalidObservable).
QuantumModel model_from_json(const Json& j);

Json to_json(const ProbabilityTable& t);
ProbabilityTable table_from_json(const Json& j);

Json to_json(const MomentSet& m);
/// Pairs may come in any order; a missing canonical pair raises
/// ValidationError listing every missing pair.
MomentSet moments_from_json(const Json& j);

Json to_json(const ContextualMoments& c);
Json to_json(const ConditionReport& r);
Json to_json(const FeasibilityResult& f);

}  // namespace mrtest
