#pragma once

#include <filesystem>
#include <string>

#include "confhedge/confhedge2.hpp"
#include "confhedge/confidence.hpp"
#include "confhedge/regret.hpp"

namespace confhedge {

/// Segment-structured synthetic loss stream: per-segment per-expert mean
/// losses plus seeded additive Gaussian noise, confidences all 1.
struct SyntheticSpec {
  std::size_t n_experts = 0;
  std::size_t horizon = 0;
  std::vector<Vec> segment_means;  // one Vec of n_experts means per segment
  double noise_std = 1.0;
  std::uint64_t seed = 0;

  void validate() const;
  /// segment index (0-based) covering 1-based round t; segments split the
  /// horizon as evenly as possible, earlier segments take the remainder
  std::size_t segment_of(std::size_t t) const;
};

std::vector<RoundInput> generate_synthetic(const SyntheticSpec& spec);

/// Wide CSV, one row per round: `t,l_<name>...,p_<name>...`. Missing p
/// columns default every confidence to 1.
struct LossStream {
  std::vector<std::string> expert_names;
  std::vector<RoundInput> rounds;
};
LossStream read_loss_stream(const std::filesystem::path& path);

/// Wide CSV: `t[,feature...],c_<name>...,omega[,p_<name>...]`. Columns not
/// matching c_/p_/t/omega are exposed as per-round feature values, for
/// profile-driven confidences.
struct ForecastStream {
  std::vector<std::string> expert_names;
  std::vector<std::string> feature_names;
  std::vector<ForecastRound> rounds;
  std::vector<std::map<std::string, double>> features;  // per round
  bool has_confidences = false;
};
ForecastStream read_forecast_stream(const std::filesystem::path& path);

/// Comparator CSV: `t,q_1..q_N` (or q_<name> matching the stream header).
ComparatorSequence read_comparators(const std::filesystem::path& path, std::size_t n_experts);

/// Per-round record table. `.jsonl` extension switches to JSON Lines with
/// the same field names; numbers are serialized round-trip-safe and eta =
/// +inf as the literal `inf`.
void write_round_records(const std::filesystem::path& path,
                         const std::vector<RoundRecord>& records,
                         const std::vector<WeightDistribution>& posteriors);

struct RoundRecordRow {
  std::size_t t;
  RoundRecord record;
  Vec posterior;
};
std::vector<RoundRecordRow> read_round_records(const std::filesystem::path& path);

void write_loss_stream(const std::filesystem::path& path,
                       const std::vector<std::string>& names,
                       const std::vector<RoundInput>& rounds);

/// Expert confidence profiles from a JSON config:
/// { "experts": { "<name>": [ {"feature": ..., "plateau": [a,b],
///   "slope": s, "period": p? }, ... ] } }
std::map<std::string, ConfidenceProfile> read_profiles(const std::filesystem::path& path);

std::string format_double(double v);

}  // namespace confhedge
