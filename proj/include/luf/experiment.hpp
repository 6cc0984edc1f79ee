#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "luf/engine.hpp"
#include "luf/json_io.hpp"
#include "luf/verify.hpp"

namespace luf {

enum class DecoderChoice { Aluf, Sluf, Both };
DecoderChoice parse_decoder_choice(std::string_view text);

struct ExperimentConfig {
  DecoderChoice decoder = DecoderChoice::Sluf;
  std::vector<int> distances;
  double p = 0.0;
  std::optional<double> q;  // defaults to p
  int samples = 1;
  std::uint64_t seed = 0;
  std::string out;
  bool trace = false;
  int workers = 1;
  std::string format = "csv";

  double q_value() const { return q.value_or(p); }
  /// Throws std::invalid_argument on even or small distances, bad probabilities, samples < 1.
  void validate() const;
};

struct RuntimeRecord {
  std::string decoder;  // "aluf" or "sluf"
  int d = 0;
  double p = 0.0;
  double q = 0.0;
  std::uint64_t sample_index = 0;
  int validation_timesteps = 0;
  int total_timesteps = 0;
  int growth_rounds = 0;
  bool correction_valid = true;
  bool logical_error = false;
  std::vector<TraceRecord> trace;  // filled only when the batch asks for traces

  friend bool operator==(const RuntimeRecord& a, const RuntimeRecord& b) {
    return a.decoder == b.decoder && a.d == b.d && a.p == b.p && a.q == b.q &&
           a.sample_index == b.sample_index && a.validation_timesteps == b.validation_timesteps &&
           a.total_timesteps == b.total_timesteps && a.growth_rounds == b.growth_rounds &&
           a.logical_error == b.logical_error;
  }
};

/// A batch stopped on a failed check or an engine timeout.
class VerificationFailure : public std::runtime_error {
 public:
  explicit VerificationFailure(ViolationReport report, ErrorPattern error = {})
      : std::runtime_error(report.kind + ": " + report.detail),
        report_(std::move(report)),
        error_(std::move(error)) {}
  const ViolationReport& report() const { return report_; }
  /// The sampled error that triggered the failure, for replay files.
  const ErrorPattern& error() const { return error_; }

 private:
  ViolationReport report_;
  ErrorPattern error_;
};

/// Seed of the error stream for distance d; sample k of the batch is sample_error(..., k).
std::uint64_t stream_seed(std::uint64_t seed, int d);

/// Samples, decodes and verifies every (d, sample). Records come back sorted by
/// (decoder, d, sample_index) and do not depend on cfg.workers.
/// Throws VerificationFailure on the first failing task in task order.
std::vector<RuntimeRecord> run_batch(const ExperimentConfig& cfg);

struct FitPoint {
  double d = 0.0;
  double mean = 0.0;
  double stderr_mean = 0.0;
};

struct SlopeFit {
  double m = 0.0;
  double stderr_m = 0.0;
  double intercept = 0.0;
  bool weighted = true;  // false when some point had zero standard error
};

/// Least squares of log(mean) against log(d), weighted by (stderr/mean)^-2.
/// Falls back to an unweighted fit with residual-based error if any stderr is zero.
/// Throws std::invalid_argument for fewer than 3 points or non-positive d or mean.
SlopeFit fit_loglog_slope(const std::vector<FitPoint>& points);

struct HistogramBin {
  long long lo = 0;  // bin covers [lo, lo + width)
  int count = 0;
};

struct Histogram {
  long long width = 1;
  std::vector<HistogramBin> bins;  // contiguous from the first to the last occupied bin
  double mean = 0.0;
  long long max = 0;
  long long min = 0;
  std::size_t total = 0;
};

Histogram histogram(const std::vector<long long>& values, long long width);
/// Validation-timestep histogram with the per-decoder default width unless one is given.
Histogram histogram(const std::vector<RuntimeRecord>& records, long long width = 0);
long long default_bin_width(std::string_view decoder);

/// A run of sorted values with no internal gap wider than the grouping gap.
struct Mode {
  double location = 0.0;  // mean of the values in the group
  long long peak = 0;     // most frequent value in the group
  std::size_t count = 0;
};

/// Splits values at gaps larger than `gap` and keeps groups holding at least
/// `min_fraction` of all values, in increasing order of location.
std::vector<Mode> find_modes(std::vector<long long> values, long long gap, double min_fraction);

struct GroupStats {
  std::string decoder;
  int d = 0;
  double p = 0.0;
  double q = 0.0;
  std::size_t samples = 0;
  double mean = 0.0;
  double stderr_mean = 0.0;
  long long max = 0;
  double logical_error_rate = 0.0;
  Histogram hist;
};

struct SlopeStats {
  std::string decoder;
  double p = 0.0;
  double q = 0.0;
  SlopeFit fit;
};

struct SummaryStats {
  std::vector<GroupStats> groups;  // per (decoder, d, p, q)
  std::vector<SlopeStats> slopes;  // per (decoder, p, q) with at least 3 distances
};

double mean_of(const std::vector<long long>& values);
/// Sample standard deviation over sqrt(n); zero for a single value.
double stderr_of(const std::vector<long long>& values);

SummaryStats summarize(const std::vector<RuntimeRecord>& records, long long bin_width = 0);

inline constexpr std::string_view kCsvHeader =
    "decoder,d,p,q,sample_index,validation_timesteps,total_timesteps,growth_rounds,logical_error";

/// Shortest text that reads back to the same double.
std::string format_double(double x);

std::string records_to_csv(const std::vector<RuntimeRecord>& records);
/// Throws std::invalid_argument on a malformed header or row.
std::vector<RuntimeRecord> records_from_csv(std::string_view text);

json summary_to_json(const SummaryStats& stats);
json records_to_json(const std::vector<RuntimeRecord>& records, const SummaryStats& stats);
std::vector<RuntimeRecord> records_from_json(const json& j);

/// Writes records in the given format ("csv" or "json"). Throws std::runtime_error naming
/// the path if it cannot be written.
void emit(const std::vector<RuntimeRecord>& records, const SummaryStats& stats,
          std::string_view format, const std::string& path);
/// Reads a CSV or JSON records file (decided by its first non-blank character).
std::vector<RuntimeRecord> load_records(const std::string& path);

void write_text_file(const std::string& path, std::string_view text);
std::string read_text_file(const std::string& path);

}  // namespace luf
