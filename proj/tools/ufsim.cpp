// ufsim: batch decoding, slope fits and histograms for the lockstep Union-Find engines.
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "luf/experiment.hpp"

using namespace luf;

namespace {

void write_traces(const std::vector<RuntimeRecord>& records, const std::string& path) {
  std::string text;
  for (const RuntimeRecord& r : records) {
    for (const TraceRecord& t : r.trace) {
      json line = {{"decoder", r.decoder}, {"d", r.d}, {"sample_index", r.sample_index}};
      line.update(trace_to_json(t));
      text += line.dump();
      text += '\n';
    }
  }
  write_text_file(path, text);
}

int run_decode(const ExperimentConfig& cfg) {
  try {
    const std::vector<RuntimeRecord> records = run_batch(cfg);
    emit(records, summarize(records), cfg.format, cfg.out);
    if (cfg.trace) write_traces(records, cfg.out + ".trace.jsonl");
    return 0;
  } catch (const VerificationFailure& ex) {
    json report = violation_to_json(ex.report());
    report["error"] = error_to_json(ex.error());
    std::cerr << report.dump() << "\n";
    if (!cfg.out.empty()) write_text_file(cfg.out + ".violation.json", report.dump(2) + "\n");
    return 2;
  }
}

int run_fit(const std::string& in) {
  const SummaryStats stats = summarize(load_records(in));
  if (stats.slopes.empty()) {
    std::cerr << "no (decoder, p) series with at least 3 distances\n";
    return 1;
  }
  std::printf("decoder,p,q,m,stderr_m\n");
  for (const SlopeStats& s : stats.slopes) {
    std::printf("%s,%s,%s,%.4f,%.4f\n", s.decoder.c_str(), format_double(s.p).c_str(),
                format_double(s.q).c_str(), s.fit.m, s.fit.stderr_m);
  }
  return 0;
}

int run_hist(const std::string& in, long long width, const std::string& out) {
  const json j = summary_to_json(summarize(load_records(in), width));
  json hists = json::array();
  for (const json& g : j["groups"]) {
    hists.push_back({{"decoder", g["decoder"]},
                     {"d", g["d"]},
                     {"p", g["p"]},
                     {"q", g["q"]},
                     {"histogram", g["histogram"]}});
  }
  const std::string text = hists.dump(2) + "\n";
  if (out.empty()) {
    std::cout << text;
  } else {
    write_text_file(out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lockstep simulator for almost-local and strictly local Union-Find decoding"};
  app.require_subcommand(1);

  ExperimentConfig cfg;
  std::string decoder = "sluf";
  double q = -1.0;
  auto* decode = app.add_subcommand("decode", "Sample, decode and verify a batch of errors");
  decode->add_option("--decoder", decoder, "aluf, sluf or both")
      ->check(CLI::IsMember({"aluf", "sluf", "both"}));
  decode->add_option("--d", cfg.distances, "Code distances (odd, >= 3)")->required()->delimiter(',');
  decode->add_option("--p", cfg.p, "Horizontal edge error probability")->required();
  decode->add_option("--q", q, "Vertical edge error probability (default: p)");
  decode->add_option("--samples", cfg.samples, "Samples per distance")->required();
  decode->add_option("--seed", cfg.seed, "64-bit seed")->required();
  decode->add_flag("--trace", cfg.trace, "Also write per-timestep traces to <out>.trace.jsonl");
  decode->add_option("--workers", cfg.workers, "Worker threads");
  decode->add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  decode->add_option("--out", cfg.out, "Output path")->required();

  std::string in;
  auto* fit = app.add_subcommand("fit", "Fit log-log runtime slopes from a records file");
  fit->add_option("--in", in, "Records file (csv or json)")->required()->check(CLI::ExistingFile);

  long long width = 0;
  std::string hist_out;
  auto* hist = app.add_subcommand("hist", "Histogram validation timesteps from a records file");
  hist->add_option("--in", in, "Records file (csv or json)")->required()->check(CLI::ExistingFile);
  hist->add_option("--bin-width", width, "Bin width (default 1 for aluf, 21 for sluf)");
  hist->add_option("--out", hist_out, "Write JSON here instead of stdout");

  int graph_d = 3;
  bool perfect = false;
  auto* graph = app.add_subcommand("graph", "Dump a syndrome graph as JSON");
  graph->add_option("--d", graph_d, "Code distance")->required();
  graph->add_flag("--perfect", perfect, "Single sheet (perfect measurements)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*decode) {
      cfg.decoder = parse_decoder_choice(decoder);
      if (q >= 0.0) cfg.q = q;
      cfg.validate();
      return run_decode(cfg);
    }
    if (*fit) return run_fit(in);
    if (*hist) return run_hist(in, width, hist_out);
    if (*graph) {
      std::cout << graph_to_json(CodeGraph::build(graph_d, !perfect)).dump(2) << "\n";
      return 0;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
