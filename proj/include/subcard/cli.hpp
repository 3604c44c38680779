//
// subcard - subgraph cardinality estimation
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "subcard/exact.hpp"
#include "subcard/pipeline.hpp"

namespace subcard {

namespace cli_detail {

using nlohmann::json;
namespace fs = std::filesystem;

/// Shortest round-trip decimal form of a double.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

inline std::string csv_field(const std::string &s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

/// RFC-4180 records; quoted fields may hold commas, quotes and newlines.
inline std::vector<std::vector<std::string>> parse_csv(std::istream &in) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false, any = false;
  char ch;
  auto end_row = [&] {
    row.push_back(std::move(field));
    field.clear();
    if (!(row.size() == 1 && row[0].empty())) rows.push_back(std::move(row));
    row.clear();
    any = false;
  };
  while (in.get(ch)) {
    any = true;
    if (quoted) {
      if (ch == '"') {
        if (in.peek() == '"') {
          in.get(ch);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (ch == '\n') {
      end_row();
    } else if (ch != '\r') {
      field += ch;
    }
  }
  if (quoted) throw std::runtime_error("unterminated quoted field");
  if (any) end_row();
  return rows;
}

inline LabeledGraph load(const std::string &path) {
  try {
    return load_graph_file(path);
  } catch (const parse_error &e) {
    throw graph_error(path + ": " + e.what());
  }
}

/// Truth file `query_path,count`; an optional header row is skipped.
inline std::map<std::string, double> load_truths(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw graph_error("cannot open " + path);
  std::map<std::string, double> truths;
  auto rows = parse_csv(in);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto &r = rows[i];
    if (r.size() < 2) throw graph_error(path + ": row " + std::to_string(i + 1) + ": expected query_path,count");
    double value = 0;
    auto [ptr, ec] = std::from_chars(r[1].data(), r[1].data() + r[1].size(), value);
    if (ec != std::errc() || ptr != r[1].data() + r[1].size()) {
      if (i == 0) continue;
      throw graph_error(path + ": row " + std::to_string(i + 1) + ": bad count '" + r[1] + "'");
    }
    truths[r[0]] = value;
  }
  return truths;
}

struct ConfigFlags {
  EstimatorConfig config;
  std::string mode = "auto";
  std::string filter = "full";

  void attach(CLI::App *app) {
    app->add_option("--seed", config.seed, "Random seed")->capture_default_str();
    app->add_option("--alpha", config.alpha, "Failure probability of the interval")->capture_default_str();
    app->add_option("--c", config.c, "Tolerated relative error factor")->capture_default_str();
    app->add_option("--tau", config.tau, "Penalty threshold of the refinement loop")->capture_default_str();
    app->add_option("--R", config.R, "Refinement budget multiplier on |E_q|")->capture_default_str();
    app->add_option("--phi", config.phi, "Initial refinement penalty")->capture_default_str();
    app->add_option("--K", config.K, "Graph sampling scale")->capture_default_str();
    app->add_option("--k", config.k_frac, "Subset divisor of graph sampling")->capture_default_str();
    app->add_option("--tri-cap", config.tri_cap, "Skip the triangle index above this many triangles")
        ->capture_default_str();
    app->add_option("--quad-cap", config.quad_cap, "Skip the 4-cycle index above this many 4-cycles")
        ->capture_default_str();
    app->add_option("--early-fail-trials", config.early_fail_trials, "Trial count at which the early-fail test runs")
        ->capture_default_str();
    app->add_option("--early-fail-successes", config.early_fail_successes,
                    "Tree sampling fails early at or below this many successes")
        ->capture_default_str();
    app->add_option("--trial-cap", config.trial_cap, "Maximum tree sampling trials")->capture_default_str();
    app->add_option("--mode", mode, "Sampler selection")
        ->check(CLI::IsMember({"auto", "tree-only", "graph-only"}))
        ->capture_default_str();
    app->add_option("--filter", filter, "Refinement filter")
        ->check(CLI::IsMember({"full", "neighbor"}))
        ->capture_default_str();
  }

  EstimatorConfig resolve() const {
    EstimatorConfig c = config;
    c.mode = mode == "tree-only"    ? SamplerMode::tree_only
             : mode == "graph-only" ? SamplerMode::graph_only
                                    : SamplerMode::automatic;
    c.filter = filter == "neighbor" ? FilterMode::neighbor_safety : FilterMode::full;
    c.validate();
    return c;
  }
};

inline json timings_json(const StageTimings &t) {
  return {{"filter", t.filter_ms}, {"tree", t.tree_ms}, {"graph", t.graph_ms}, {"total", t.total_ms}};
}

inline json result_json(const std::string &query, const EstimateResult &r) {
  return {{"query", query},
          {"estimate", r.estimate},
          {"method", to_string(r.method)},
          {"tree_trials", r.tree_trials},
          {"tree_successes", r.tree_successes},
          {"tree_early_fail", r.tree_early_fail},
          {"tree_total", r.tree_total},
          {"graph_samples_used", r.graph_samples_used},
          {"refinement_steps", r.refinement_steps},
          {"candidate_vertices", r.candidate_vertices},
          {"candidate_edges", r.candidate_edges},
          {"seed", r.seed},
          {"elapsed_ms", timings_json(r.timings)}};
}

inline json count_json(const BigCount &count) {
  if (count <= std::numeric_limits<std::uint64_t>::max()) return count.convert_to<std::uint64_t>();
  return count.str();
}

struct BenchRecord {
  std::string query;
  std::optional<EstimateResult> result;
  std::string error;
  std::optional<double> truth;
  std::optional<double> q_error;
  std::optional<double> signed_log_q_error;
};

/// Nearest-rank-free linear interpolation quantile of sorted data.
inline double quantile(const std::vector<double> &sorted, double p) {
  if (sorted.empty()) return std::nan("");
  double pos = p * static_cast<double>(sorted.size() - 1);
  auto lo = static_cast<std::size_t>(std::floor(pos));
  auto hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

inline json bench_summary(const std::vector<BenchRecord> &records) {
  std::vector<double> qe;
  std::size_t failed = 0;
  std::map<std::string, std::size_t> methods;
  for (const auto &r : records) {
    if (!r.result) {
      ++failed;
      continue;
    }
    ++methods[to_string(r.result->method)];
    if (r.q_error) qe.push_back(*r.q_error);
  }
  json s = {{"queries", records.size()}, {"failed", failed}, {"with_truth", qe.size()}, {"methods", methods}};
  if (!qe.empty()) {
    std::sort(qe.begin(), qe.end());
    double mean = 0;
    for (double x : qe) mean += x;
    mean /= static_cast<double>(qe.size());
    s["q_error"] = {{"mean", mean},          {"min", qe.front()},          {"p25", quantile(qe, 0.25)},
                    {"median", quantile(qe, 0.5)}, {"p75", quantile(qe, 0.75)}, {"max", qe.back()}};
  }
  return s;
}

inline void write_bench_csv(std::ostream &out, const std::vector<BenchRecord> &records) {
  out << "query,estimate,truth,q_error,signed_log_q_error,method,trials,successes,graph_samples,"
         "filter_ms,tree_ms,graph_ms,total_ms,error\n";
  auto opt = [](const std::optional<double> &x) { return x ? format_number(*x) : std::string(); };
  for (const auto &r : records) {
    out << csv_field(r.query) << ',';
    if (r.result) {
      const auto &e = *r.result;
      out << format_number(e.estimate) << ',' << opt(r.truth) << ',' << opt(r.q_error) << ','
          << opt(r.signed_log_q_error) << ',' << to_string(e.method) << ',' << e.tree_trials << ','
          << e.tree_successes << ',' << e.graph_samples_used << ',' << format_number(e.timings.filter_ms) << ','
          << format_number(e.timings.tree_ms) << ',' << format_number(e.timings.graph_ms) << ','
          << format_number(e.timings.total_ms) << ",\n";
    } else {
      out << ',' << opt(r.truth) << ",,,,,,,,,,," << csv_field(r.error) << '\n';
    }
  }
}

inline void write_bench_jsonl(std::ostream &out, const std::vector<BenchRecord> &records) {
  for (const auto &r : records) {
    json j;
    if (r.result) {
      j = result_json(r.query, *r.result);
    } else {
      j = {{"query", r.query}, {"error", r.error}};
    }
    if (r.truth) j["truth"] = *r.truth;
    if (r.q_error) j["q_error"] = *r.q_error;
    if (r.signed_log_q_error) j["signed_log_q_error"] = *r.signed_log_q_error;
    out << j.dump() << '\n';
  }
}

inline std::optional<double> find_truth(const std::map<std::string, double> &truths, const fs::path &query,
                                        const fs::path &dir) {
  for (const auto &key : {query.string(), query.lexically_relative(dir).string(), query.filename().string()}) {
    auto it = truths.find(key);
    if (it != truths.end()) return it->second;
  }
  return std::nullopt;
}

}  // namespace cli_detail

/// Entry point of the command-line tool. `args` excludes the program name.
/// Returns the process exit code.
inline int run_cli(const std::vector<std::string> &args, std::ostream &out = std::cout,
                   std::ostream &err = std::cerr) {
  using namespace cli_detail;
  CLI::App app{"Subgraph cardinality estimation on labeled graphs", "subcard"};
  app.require_subcommand(1);

  std::string data_path, query_path;

  cli_detail::ConfigFlags est_flags;
  auto *est = app.add_subcommand("estimate", "Estimate the embedding count of one query");
  est->add_option("--data", data_path, "Data graph file")->required();
  est->add_option("--query", query_path, "Query graph file")->required();
  est_flags.attach(est);

  std::optional<std::uint64_t> limit;
  std::optional<std::uint64_t> timeout_ms;
  bool raw = false;
  auto *ex = app.add_subcommand("exact", "Count embeddings exactly by backtracking");
  ex->add_option("--data", data_path, "Data graph file")->required();
  ex->add_option("--query", query_path, "Query graph file")->required();
  ex->add_option("--limit", limit, "Stop after this many embeddings");
  ex->add_option("--timeout-ms", timeout_ms, "Give up after this many milliseconds");
  ex->add_flag("--no-filter", raw, "Backtrack over label candidates instead of the refined space");

  cli_detail::ConfigFlags bench_flags;
  std::string queries_dir, truth_path, format = "csv", output_path, summary_path;
  unsigned jobs = 1;
  auto *bench = app.add_subcommand("bench", "Estimate every query in a directory");
  bench->add_option("--data", data_path, "Data graph file")->required();
  bench->add_option("--queries", queries_dir, "Directory of query graph files")->required();
  bench->add_option("--truth", truth_path, "CSV of query_path,count");
  bench->add_option("--format", format)->check(CLI::IsMember({"csv", "jsonl"}))->capture_default_str();
  bench->add_option("--output", output_path, "Record file (default: standard output)");
  bench->add_option("--summary", summary_path, "Summary JSON file (default: standard error)");
  bench->add_option("--jobs", jobs, "Parallel queries")->check(CLI::PositiveNumber)->capture_default_str();
  bench_flags.attach(bench);

  cli_detail::ConfigFlags inspect_flags;
  bool dump_cs = false;
  auto *inspect = app.add_subcommand("inspect", "Show the refined candidate space and spanning tree");
  inspect->add_option("--data", data_path, "Data graph file")->required();
  inspect->add_option("--query", query_path, "Query graph file")->required();
  inspect->add_flag("--dump-cs", dump_cs, "Append the full candidate space listing");
  inspect_flags.attach(inspect);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError &e) {
    return app.exit(e, out, err);
  }

  try {
    auto g = load(data_path);
    if (*est) {
      auto config = est_flags.resolve();
      auto q = load(query_path);
      auto cycles_g = CycleIndex::build(g, config.tri_cap, config.quad_cap);
      auto r = estimate(q, g, cycles_g, config);
      out << result_json(query_path, r).dump() << '\n';
      return 0;
    }
    if (*ex) {
      auto q = load(query_path);
      if (!q.is_connected()) throw graph_error("query graph is disconnected");
      ExactOptions opts;
      opts.limit = limit;
      if (timeout_ms) opts.timeout = std::chrono::milliseconds(*timeout_ms);
      const auto start = std::chrono::steady_clock::now();
      OracleResult r;
      if (raw) {
        r = exact_count(q, g, nullptr, opts);
      } else {
        auto cycles_q = CycleIndex::build(q);
        auto cycles_g = CycleIndex::build(g);
        auto cs = build_initial_cs(q, g);
        refine_candidate_space(cs, cycles_q, cycles_g, RefineConfig{});
        r = exact_count(q, g, &cs, opts);
      }
      double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
      out << json{{"query", query_path},     {"count", count_json(r.count)},       {"elapsed_ms", ms},
                  {"partial", r.partial}, {"limit_reached", r.limit_reached}}
                 .dump()
          << '\n';
      return 0;
    }
    if (*bench) {
      auto config = bench_flags.resolve();
      std::map<std::string, double> truths;
      if (!truth_path.empty()) truths = load_truths(truth_path);
      std::vector<fs::path> files;
      for (const auto &entry : fs::directory_iterator(queries_dir)) {
        if (entry.is_regular_file()) files.push_back(entry.path());
      }
      std::sort(files.begin(), files.end());
      std::vector<BenchRecord> records(files.size());
      std::vector<LabeledGraph> queries(files.size());
      std::vector<const LabeledGraph *> loaded(files.size(), nullptr);
      for (std::size_t i = 0; i < files.size(); ++i) {
        records[i].query = files[i].string();
        records[i].truth = find_truth(truths, files[i], queries_dir);
        try {
          queries[i] = load(files[i].string());
          loaded[i] = &queries[i];
        } catch (const std::exception &e) {
          records[i].error = e.what();
        }
      }
      auto cycles_g = CycleIndex::build(g, config.tri_cap, config.quad_cap);
      auto items = estimate_batch(loaded, g, cycles_g, config, jobs);
      for (std::size_t i = 0; i < files.size(); ++i) {
        if (!loaded[i]) continue;
        if (items[i].ok()) {
          records[i].result = items[i].result;
        } else {
          records[i].error = items[i].error;
        }
      }
      for (auto &r : records) {
        if (r.result && r.truth) {
          r.q_error = q_error(r.result->estimate, *r.truth);
          r.signed_log_q_error = signed_log_q_error(r.result->estimate, *r.truth);
        }
      }
      std::ofstream file_out;
      std::ostream *sink = &out;
      if (!output_path.empty()) {
        file_out.open(output_path);
        if (!file_out) throw graph_error("cannot write " + output_path);
        sink = &file_out;
      }
      if (format == "csv") {
        write_bench_csv(*sink, records);
      } else {
        write_bench_jsonl(*sink, records);
      }
      auto summary = bench_summary(records).dump(2);
      if (summary_path.empty()) {
        err << summary << '\n';
      } else {
        std::ofstream s(summary_path);
        if (!s) throw graph_error("cannot write " + summary_path);
        s << summary << '\n';
      }
      return 0;
    }
    if (*inspect) {
      auto config = inspect_flags.resolve();
      auto q = load(query_path);
      if (!q.is_connected()) throw graph_error("query graph is disconnected");
      auto cycles_q = CycleIndex::build(q, config.tri_cap, config.quad_cap);
      auto cycles_g = CycleIndex::build(g, config.tri_cap, config.quad_cap);
      auto cs = build_initial_cs(q, g);
      json j;
      json initial = json::array();
      for (VertexId u = 0; u < q.vertex_count(); ++u) initial.push_back(cs.candidate_count(u));
      j["initial_candidates"] = initial;
      auto report = refine_candidate_space(cs, cycles_q, cycles_g, config.refine_config());
      json refined = json::array();
      for (VertexId u = 0; u < q.vertex_count(); ++u) refined.push_back(cs.candidate_count(u));
      j["refined_candidates"] = refined;
      j["refinement_steps"] = report.steps;
      j["candidate_edges"] = cs.total_candidate_edges();
      j["data_triangles"] = cycles_g.total_triangles();
      j["data_four_cycles"] = cycles_g.total_four_cycles();
      if (auto tree = choose_spanning_tree(cs)) {
        json edges = json::array();
        for (VertexId u : tree->bfs_order) {
          if (u == tree->root) continue;
          VertexId p = tree->parent[u];
          edges.push_back({{"parent", p}, {"child", u}, {"density", edge_density(cs, p, u)}});
        }
        json non_tree = json::array();
        for (auto [a, b] : tree->non_tree_edges) non_tree.push_back({{"u", a}, {"v", b}, {"density", edge_density(cs, a, b)}});
        j["tree"] = {{"root", tree->root}, {"edges", edges}, {"non_tree_edges", non_tree}};
        j["tree_total"] = count_candidate_trees<double>(cs, *tree).total;
        j["tree_total_exact"] = count_candidate_trees<BigCount>(cs, *tree).total.str();
      } else {
        j["tree"] = nullptr;
        j["tree_total"] = 0;
      }
      out << j.dump(2) << '\n';
      if (dump_cs) cs.dump(out);
      return 0;
    }
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace subcard
