#pragma once

// Report builders behind the command-line subcommands. Each returns a JSON
// report {command, inputs, <outputs...>, certification}; exact values render as
// {"exact": "p/q", "decimal": ..., "provenance": "exact"}.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"
#include "torsionlab/hamlab/suites.hpp"
#include "torsionlab/polydisk.hpp"
#include "torsionlab/toric.hpp"
#include "torsionlab/valmat.hpp"

namespace torsionlab {

/// Inline JSON ("{...}"), "@path" to a JSON file, or model shorthand.
MomentModel parse_model_argument(std::string_view text);
/// Inline JSON or "@path".
nlohmann::json parse_json_argument(std::string_view text);

nlohmann::json torsion_report(const MomentModel& model, const FiberPoint& fiber,
                              const std::optional<ExtendedRational>& trunc = {},
                              const std::optional<Rational>& hofer = {});

nlohmann::json polydisk_report(const PolydiskSpec& spec, bool extrapolate,
                               const std::optional<ExtendedRational>& trunc = {});

nlohmann::json snf_report(const NovikovMatrix& m);

/// Top-level betti/torsion/threshold are for `degree`, or the direct sum
/// over all degrees when it is empty.
nlohmann::json decompose_report(const ChainComplex& c, const std::optional<std::size_t>& degree = {},
                                const std::optional<Rational>& hofer = {});

nlohmann::json optimize_report(const MomentModel& model, std::size_t resolution, const std::optional<Rational>& cap,
                               const std::optional<ExtendedRational>& trunc = {});

nlohmann::json verify_report(hamlab::Suite suite, const hamlab::SuiteOptions& opts);

}  // namespace torsionlab
