#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "tribes/construction.hpp"
#include "tribes/verify.hpp"

namespace tribes::cli {

using Json = nlohmann::ordered_json;

enum ExitCode : int {
  kSuccessGuaranteed = 0,
  kSuccessUnguaranteed = 1,
  kInfeasible = 2,
  kInputError = 3,
  kVerificationFailure = 4,
};

/// Runs the command line `args` (args[0] is the program name). Documents go
/// to `out` unless --output names a file; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Thrown for malformed input documents; maps to kInputError.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Document pieces, exposed for tests.

Json dyadic_to_json(const Dyadic& d);
/// Reads {"mantissa": "<decimal>", "exponent": <uint>}; InputError if malformed.
Dyadic dyadic_from_json(const Json& j, const std::string& where);

Json report_to_json(const ConstructionReport& report);
Json verification_to_json(const VerificationReport& v);

/// Inserts (or replaces) the "verification" member, keeping it ahead of
/// "diagnostics".
Json with_verification(const Json& doc, Json verification);

struct ParsedReport {
  ConstructionReport report;
  Json document;
};

/// Rebuilds a ConstructionReport from a construct document. Only exact
/// fields are trusted; derived fields are recomputed. InputError when a
/// required field is missing or malformed.
ParsedReport parse_report(const Json& doc);

/// Differences between a parsed report and a fresh construction from the
/// same bounds and mu, plus inconsistent float mirrors and stored flags.
std::vector<std::string> consistency_issues(const ParsedReport& parsed);

}  // namespace tribes::cli
