#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "tribes/boolfn.hpp"
#include "tribes/construction.hpp"

namespace tribes {

enum class VerifyMode { exhaustive, sampled };

inline constexpr std::uint64_t kMinSamples = 1000;
inline constexpr double kDefaultZThreshold = 5.0;

/// One analytic quantity next to its independent recomputation.
///
/// Exhaustive mode fills `oracle` and requires exact equality. Sampled mode
/// fills the estimate fields; `z` is measured against the analytic value
/// with the binomial standard error that value implies.
struct QuantityMatch {
  std::string quantity;
  std::optional<std::size_t> position;        // construction position
  std::optional<std::size_t> original_index;  // variable index in the input
  Dyadic analytic;
  std::optional<Dyadic> oracle;
  double estimate = 0.0;
  double std_error = 0.0;
  double z = 0.0;
  bool match = false;
};

struct VerificationReport {
  VerifyMode mode = VerifyMode::exhaustive;
  QuantityMatch expectation;
  std::vector<QuantityMatch> influences;
  std::vector<Check> checks;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double z_threshold = 0.0;
  double wall_time = 0.0;  // seconds

  bool passed() const noexcept;
};

/// Recomputes expectation and every influence from the truth table and
/// requires bit-for-bit equality with the report. Throws CapacityExceeded if
/// f.relevant() > cap, VerificationFailure on the first mismatch. Theorem
/// checks are re-evaluated from the oracle values.
VerificationReport verify_exact(const TribesFunction& f,
                                const ConstructionReport& report,
                                unsigned cap = kDefaultTruthTableCap);

/// Monte Carlo check of E[f] and one representative position per tribe.
/// Mismatches are flagged, not thrown. std::invalid_argument if
/// samples < kMinSamples.
VerificationReport verify_sampled(const TribesFunction& f,
                                  const ConstructionReport& report,
                                  std::uint64_t samples, std::uint64_t seed,
                                  double z_threshold = kDefaultZThreshold);

/// The five named checks, recomputed from the report's values.
std::vector<Check> check_theorem(const ConstructionReport& report,
                                 const BoundSequence& bounds, const Rational& mu);

}  // namespace tribes
