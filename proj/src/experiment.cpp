#include "luf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

#include "luf/sluf_engine.hpp"

namespace luf {

DecoderChoice parse_decoder_choice(std::string_view text) {
  if (text == "aluf") return DecoderChoice::Aluf;
  if (text == "sluf") return DecoderChoice::Sluf;
  if (text == "both") return DecoderChoice::Both;
  throw std::invalid_argument("unknown decoder '" + std::string(text) + "'");
}

void ExperimentConfig::validate() const {
  if (distances.empty()) throw std::invalid_argument("no distances given");
  for (int d : distances) {
    if (d < 3 || d % 2 == 0) {
      throw std::invalid_argument("distance " + std::to_string(d) + " is not an odd integer >= 3");
    }
  }
  for (double x : {p, q_value()}) {
    if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("probability outside [0, 1]");
  }
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
  if (format != "csv" && format != "json") {
    throw std::invalid_argument("format must be csv or json");
  }
}

std::uint64_t stream_seed(std::uint64_t seed, int d) {
  return mix_seed(seed, static_cast<std::uint64_t>(d));
}

namespace {

struct TaskFailure {
  std::size_t task = 0;
  ViolationReport report;
  ErrorPattern error;
};

std::string describe(std::string_view decoder, int d, double p, double q, std::uint64_t k) {
  return "decoder=" + std::string(decoder) + " d=" + std::to_string(d) + " p=" + format_double(p) +
         " q=" + format_double(q) + " sample_index=" + std::to_string(k);
}

RuntimeRecord verified_record(const CodeGraph& g, const ErrorPattern& e, const Syndrome& s,
                              const DecodeResult& res, std::string_view decoder, double p,
                              double q, std::uint64_t k, std::uint64_t seed) {
  RuntimeRecord rec;
  rec.decoder = std::string(decoder);
  rec.d = g.distance();
  rec.p = p;
  rec.q = q;
  rec.sample_index = k;
  rec.validation_timesteps = res.validation_timesteps;
  rec.total_timesteps = res.total_timesteps;
  rec.growth_rounds = res.growth_rounds;
  rec.correction_valid = check_correction(g, s, res.correction);
  if (!rec.correction_valid) {
    throw VerificationFailure({seed, "invalid_correction", describe(decoder, rec.d, p, q, k)}, e);
  }
  const LeftoverDecomposition dec = decompose_leftover(g, e, res.correction);
  if (!dec.ok()) {
    throw VerificationFailure(
        {seed, "leftover_violation", describe(decoder, rec.d, p, q, k) + ": " + dec.violations[0]},
        e);
  }
  rec.logical_error = is_logical_error(dec);
  return rec;
}

std::vector<RuntimeRecord> run_task(const ExperimentConfig& cfg, const CodeGraph& g,
                                    std::uint64_t k) {
  const double p = cfg.p;
  const double q = cfg.q_value();
  const ErrorPattern e = sample_error(g, {p, q, stream_seed(cfg.seed, g.distance())}, k);
  const Syndrome s = syndrome_of(g, e);
  DecodeOptions opts;
  opts.trace = cfg.trace;

  std::vector<RuntimeRecord> out;
  std::vector<EdgeId> aluf_correction;
  const auto decode = [&](std::string_view name) {
    try {
      DecodeResult res = name == "aluf" ? run_decode_aluf(g, s, opts) : run_decode_sluf(g, s, opts);
      RuntimeRecord rec = verified_record(g, e, s, res, name, p, q, k, cfg.seed);
      rec.trace = std::move(res.trace);
      if (name == "aluf") aluf_correction = std::move(res.correction);
      if (name == "sluf" && cfg.decoder == DecoderChoice::Both &&
          res.correction != aluf_correction) {
        throw VerificationFailure(
            {cfg.seed, "engine_mismatch", describe("both", g.distance(), p, q, k)}, e);
      }
      out.push_back(std::move(rec));
    } catch (const EngineTimeout& ex) {
      throw VerificationFailure(
          {cfg.seed, "engine_timeout", describe(name, g.distance(), p, q, k) + ": " + ex.what()},
          e);
    }
  };
  if (cfg.decoder != DecoderChoice::Sluf) decode("aluf");
  if (cfg.decoder != DecoderChoice::Aluf) decode("sluf");
  return out;
}

}  // namespace

std::vector<RuntimeRecord> run_batch(const ExperimentConfig& cfg) {
  cfg.validate();
  std::map<int, CodeGraph> graphs;
  for (int d : cfg.distances) {
    if (!graphs.count(d)) graphs.emplace(d, CodeGraph::build(d, true));
  }
  const std::size_t per_d = static_cast<std::size_t>(cfg.samples);
  const std::size_t tasks = cfg.distances.size() * per_d;
  std::vector<std::vector<RuntimeRecord>> results(tasks);

  // Tasks are handed out in increasing order, so every task below a failing one has run
  // to completion and the lowest failure found is the first failure overall.
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex failure_mutex;
  std::vector<TaskFailure> failures;
  const auto worker = [&] {
    while (!stop.load()) {
      const std::size_t t = next.fetch_add(1);
      if (t >= tasks) return;
      const int d = cfg.distances[t / per_d];
      const std::uint64_t k = t % per_d;
      try {
        results[t] = run_task(cfg, graphs.at(d), k);
      } catch (const VerificationFailure& ex) {
        std::lock_guard lock(failure_mutex);
        failures.push_back({t, ex.report(), ex.error()});
        stop = true;
      }
    }
  };
  const int nworkers = std::min<std::size_t>(static_cast<std::size_t>(cfg.workers), tasks);
  if (nworkers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < nworkers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (!failures.empty()) {
    const auto first = std::min_element(
        failures.begin(), failures.end(),
        [](const TaskFailure& a, const TaskFailure& b) { return a.task < b.task; });
    throw VerificationFailure(first->report, first->error);
  }

  std::vector<RuntimeRecord> records;
  records.reserve(tasks * (cfg.decoder == DecoderChoice::Both ? 2 : 1));
  for (auto& r : results) {
    for (auto& rec : r) records.push_back(std::move(rec));
  }
  std::stable_sort(records.begin(), records.end(), [](const RuntimeRecord& a, const RuntimeRecord& b) {
    return std::tie(a.decoder, a.d, a.sample_index) < std::tie(b.decoder, b.d, b.sample_index);
  });
  return records;
}

SlopeFit fit_loglog_slope(const std::vector<FitPoint>& points) {
  if (points.size() < 3) throw std::invalid_argument("slope fit needs at least 3 points");
  SlopeFit fit;
  for (const FitPoint& pt : points) {
    if (!(pt.d > 0.0) || !(pt.mean > 0.0)) {
      throw std::invalid_argument("slope fit needs positive distances and means");
    }
    if (!(pt.stderr_mean > 0.0)) fit.weighted = false;
  }
  double s = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const FitPoint& pt : points) {
    const double x = std::log(pt.d);
    const double y = std::log(pt.mean);
    const double rel = pt.stderr_mean / pt.mean;
    const double w = fit.weighted ? 1.0 / (rel * rel) : 1.0;
    s += w;
    sx += w * x;
    sy += w * y;
    sxx += w * x * x;
    sxy += w * x * y;
  }
  const double delta = s * sxx - sx * sx;
  if (!(delta > 0.0)) throw std::invalid_argument("slope fit needs at least 2 distinct distances");
  fit.m = (s * sxy - sx * sy) / delta;
  fit.intercept = (sxx * sy - sx * sxy) / delta;
  if (fit.weighted) {
    fit.stderr_m = std::sqrt(s / delta);
  } else {
    double rss = 0;
    for (const FitPoint& pt : points) {
      const double r = std::log(pt.mean) - fit.intercept - fit.m * std::log(pt.d);
      rss += r * r;
    }
    const double sigma2 = rss / static_cast<double>(points.size() - 2);
    fit.stderr_m = std::sqrt(sigma2 * s / delta);
  }
  return fit;
}

namespace {

long long floor_div(long long a, long long b) {
  long long q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

double mean_of(const std::vector<long long>& values) {
  if (values.empty()) return 0.0;
  double sum = 0;
  for (long long v : values) sum += static_cast<double>(v);
  return sum / static_cast<double>(values.size());
}

double stderr_of(const std::vector<long long>& values) {
  const std::size_t n = values.size();
  if (n < 2) return 0.0;
  const double mu = mean_of(values);
  double ss = 0;
  for (long long v : values) ss += (static_cast<double>(v) - mu) * (static_cast<double>(v) - mu);
  return std::sqrt(ss / static_cast<double>(n - 1)) / std::sqrt(static_cast<double>(n));
}

Histogram histogram(const std::vector<long long>& values, long long width) {
  if (values.empty()) throw std::invalid_argument("histogram of no values");
  if (width < 1) throw std::invalid_argument("bin width must be positive");
  Histogram h;
  h.width = width;
  h.total = values.size();
  h.min = *std::min_element(values.begin(), values.end());
  h.max = *std::max_element(values.begin(), values.end());
  h.mean = mean_of(values);
  const long long first = floor_div(h.min, width);
  const long long last = floor_div(h.max, width);
  h.bins.resize(static_cast<std::size_t>(last - first + 1));
  for (std::size_t i = 0; i < h.bins.size(); ++i) {
    h.bins[i].lo = (first + static_cast<long long>(i)) * width;
  }
  for (long long v : values) ++h.bins[static_cast<std::size_t>(floor_div(v, width) - first)].count;
  return h;
}

long long default_bin_width(std::string_view decoder) { return decoder == "sluf" ? 21 : 1; }

Histogram histogram(const std::vector<RuntimeRecord>& records, long long width) {
  if (records.empty()) throw std::invalid_argument("histogram of no records");
  std::vector<long long> values;
  values.reserve(records.size());
  for (const RuntimeRecord& r : records) values.push_back(r.validation_timesteps);
  return histogram(values, width > 0 ? width : default_bin_width(records.front().decoder));
}

std::vector<Mode> find_modes(std::vector<long long> values, long long gap, double min_fraction) {
  std::vector<Mode> modes;
  if (values.empty()) return modes;
  std::sort(values.begin(), values.end());
  const double threshold = min_fraction * static_cast<double>(values.size());
  std::size_t start = 0;
  for (std::size_t i = 1; i <= values.size(); ++i) {
    if (i < values.size() && values[i] - values[i - 1] <= gap) continue;
    const std::size_t count = i - start;
    if (static_cast<double>(count) >= threshold) {
      Mode m;
      m.count = count;
      double sum = 0;
      std::size_t best_run = 0;
      for (std::size_t j = start; j < i;) {
        std::size_t k = j;
        while (k < i && values[k] == values[j]) ++k;
        if (k - j > best_run) {
          best_run = k - j;
          m.peak = values[j];
        }
        sum += static_cast<double>(values[j]) * static_cast<double>(k - j);
        j = k;
      }
      m.location = sum / static_cast<double>(count);
      modes.push_back(m);
    }
    start = i;
  }
  return modes;
}

SummaryStats summarize(const std::vector<RuntimeRecord>& records, long long bin_width) {
  using GroupKey = std::tuple<std::string, int, double, double>;
  std::map<GroupKey, std::vector<const RuntimeRecord*>> groups;
  for (const RuntimeRecord& r : records) groups[{r.decoder, r.d, r.p, r.q}].push_back(&r);

  SummaryStats stats;
  using SlopeKey = std::tuple<std::string, double, double>;
  std::map<SlopeKey, std::vector<FitPoint>> series;
  for (const auto& [key, recs] : groups) {
    GroupStats gs;
    std::tie(gs.decoder, gs.d, gs.p, gs.q) = key;
    std::vector<long long> values;
    int logical = 0;
    for (const RuntimeRecord* r : recs) {
      values.push_back(r->validation_timesteps);
      logical += r->logical_error;
    }
    gs.samples = values.size();
    gs.mean = mean_of(values);
    gs.stderr_mean = stderr_of(values);
    gs.max = *std::max_element(values.begin(), values.end());
    gs.logical_error_rate = static_cast<double>(logical) / static_cast<double>(values.size());
    gs.hist = histogram(values, bin_width > 0 ? bin_width : default_bin_width(gs.decoder));
    series[{gs.decoder, gs.p, gs.q}].push_back({static_cast<double>(gs.d), gs.mean, gs.stderr_mean});
    stats.groups.push_back(std::move(gs));
  }
  for (const auto& [key, pts] : series) {
    const bool usable = pts.size() >= 3 && std::all_of(pts.begin(), pts.end(), [](const FitPoint& pt) {
                          return pt.mean > 0.0;
                        });
    if (!usable) continue;
    SlopeStats ss;
    std::tie(ss.decoder, ss.p, ss.q) = key;
    ss.fit = fit_loglog_slope(pts);
    stats.slopes.push_back(std::move(ss));
  }
  return stats;
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string records_to_csv(const std::vector<RuntimeRecord>& records) {
  std::string out(kCsvHeader);
  out += '\n';
  for (const RuntimeRecord& r : records) {
    out += r.decoder;
    out += ',' + std::to_string(r.d);
    out += ',' + format_double(r.p);
    out += ',' + format_double(r.q);
    out += ',' + std::to_string(r.sample_index);
    out += ',' + std::to_string(r.validation_timesteps);
    out += ',' + std::to_string(r.total_timesteps);
    out += ',' + std::to_string(r.growth_rounds);
    out += r.logical_error ? ",1\n" : ",0\n";
  }
  return out;
}

namespace {

template <typename T>
T parse_field(std::string_view field, std::size_t line) {
  T value{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc() || res.ptr != field.data() + field.size()) {
    throw std::invalid_argument("line " + std::to_string(line) + ": bad field '" +
                                std::string(field) + "'");
  }
  return value;
}

}  // namespace

std::vector<RuntimeRecord> records_from_csv(std::string_view text) {
  std::vector<RuntimeRecord> records;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool header_seen = false;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!header_seen) {
      if (line != kCsvHeader) throw std::invalid_argument("unexpected CSV header");
      header_seen = true;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
      if (i == line.size() || line[i] == ',') {
        f.push_back(line.substr(start, i - start));
        start = i + 1;
      }
    }
    if (f.size() != 9) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": expected 9 fields");
    }
    RuntimeRecord r;
    r.decoder = std::string(f[0]);
    r.d = parse_field<int>(f[1], line_no);
    r.p = parse_field<double>(f[2], line_no);
    r.q = parse_field<double>(f[3], line_no);
    r.sample_index = parse_field<std::uint64_t>(f[4], line_no);
    r.validation_timesteps = parse_field<int>(f[5], line_no);
    r.total_timesteps = parse_field<int>(f[6], line_no);
    r.growth_rounds = parse_field<int>(f[7], line_no);
    const int logical = parse_field<int>(f[8], line_no);
    if (logical != 0 && logical != 1) {
      throw std::invalid_argument("line " + std::to_string(line_no) + ": logical_error not 0/1");
    }
    r.logical_error = logical == 1;
    records.push_back(std::move(r));
  }
  if (!header_seen) throw std::invalid_argument("empty CSV");
  return records;
}

namespace {

json histogram_json(const Histogram& h) {
  json bins = json::array();
  for (const HistogramBin& b : h.bins) bins.push_back({{"lo", b.lo}, {"count", b.count}});
  return {{"width", h.width}, {"mean", h.mean}, {"max", h.max}, {"min", h.min}, {"bins", bins}};
}

}  // namespace

json summary_to_json(const SummaryStats& stats) {
  json groups = json::array();
  for (const GroupStats& g : stats.groups) {
    groups.push_back({{"decoder", g.decoder},
                      {"d", g.d},
                      {"p", g.p},
                      {"q", g.q},
                      {"samples", g.samples},
                      {"mean", g.mean},
                      {"stderr", g.stderr_mean},
                      {"max", g.max},
                      {"logical_error_rate", g.logical_error_rate},
                      {"histogram", histogram_json(g.hist)}});
  }
  json slopes = json::array();
  for (const SlopeStats& s : stats.slopes) {
    slopes.push_back({{"decoder", s.decoder},
                      {"p", s.p},
                      {"q", s.q},
                      {"m", s.fit.m},
                      {"stderr_m", s.fit.stderr_m},
                      {"weighted", s.fit.weighted}});
  }
  return {{"groups", groups}, {"slopes", slopes}};
}

json records_to_json(const std::vector<RuntimeRecord>& records, const SummaryStats& stats) {
  json j = summary_to_json(stats);
  json recs = json::array();
  for (const RuntimeRecord& r : records) {
    recs.push_back({{"decoder", r.decoder},
                    {"d", r.d},
                    {"p", r.p},
                    {"q", r.q},
                    {"sample_index", r.sample_index},
                    {"validation_timesteps", r.validation_timesteps},
                    {"total_timesteps", r.total_timesteps},
                    {"growth_rounds", r.growth_rounds},
                    {"logical_error", r.logical_error}});
  }
  j["records"] = std::move(recs);
  return j;
}

std::vector<RuntimeRecord> records_from_json(const json& j) {
  std::vector<RuntimeRecord> records;
  for (const json& r : j.at("records")) {
    RuntimeRecord rec;
    rec.decoder = r.at("decoder").get<std::string>();
    rec.d = r.at("d").get<int>();
    rec.p = r.at("p").get<double>();
    rec.q = r.at("q").get<double>();
    rec.sample_index = r.at("sample_index").get<std::uint64_t>();
    rec.validation_timesteps = r.at("validation_timesteps").get<int>();
    rec.total_timesteps = r.at("total_timesteps").get<int>();
    rec.growth_rounds = r.at("growth_rounds").get<int>();
    rec.logical_error = r.at("logical_error").get<bool>();
    records.push_back(std::move(rec));
  }
  return records;
}

void write_text_file(const std::string& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::vector<RuntimeRecord>& records, const SummaryStats& stats,
          std::string_view format, const std::string& path) {
  if (format == "csv") {
    write_text_file(path, records_to_csv(records));
  } else if (format == "json") {
    write_text_file(path, records_to_json(records, stats).dump(2) + "\n");
  } else {
    throw std::invalid_argument("unknown format '" + std::string(format) + "'");
  }
}

std::vector<RuntimeRecord> load_records(const std::string& path) {
  const std::string text = read_text_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  try {
    if (first != std::string::npos && text[first] == '{') {
      return records_from_json(json::parse(text));
    }
    return records_from_csv(text);
  } catch (const std::exception& ex) {
    throw std::runtime_error("'" + path + "': " + ex.what());
  }
}

}  // namespace luf
