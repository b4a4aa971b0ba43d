// Command-line driver: neighbourhood-function estimation, exact oracle,
// derived statistics, graph generation and the multi-run harness.
//
// Exit codes: 0 ok, 1 usage, 2 I/O or parse failure, 3 resource guard.

#include <cstdint>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "hyperanf/engine.hpp"
#include "hyperanf/graph.hpp"
#include "hyperanf/io.hpp"
#include "hyperanf/oracle.hpp"
#include "hyperanf/stats.hpp"

namespace {

using nlohmann::json;

struct GraphOptions {
  std::string path;
  bool symmetrise = false;
  std::uint64_t n_override = 0;
};

void add_graph_options(CLI::App* cmd, GraphOptions& opts) {
  cmd->add_option("graph", opts.path, "edge-list file or HBG1 binary cache")
      ->required();
  cmd->add_flag("--symmetrise", opts.symmetrise,
                "add the reverse of every arc (edge-list input only)");
  cmd->add_option("--nodes", opts.n_override,
                  "declared node count (default: 1 + max id)");
}

json graph_manifest(const GraphOptions& opts) {
  json j;
  j["graph"] = opts.path;
  j["symmetrise"] = opts.symmetrise;
  j["nodes"] = opts.n_override;
  return j;
}

void emit_report(json report, const json& manifest, const std::string& output) {
  report["manifest"] = manifest;
  const std::string text = hyperanf::json_to_text(report);
  if (output.empty() || output == "-")
    std::cout << text;
  else
    hyperanf::write_text_file(output, text);
}

unsigned default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

int run(int argc, char** argv) {
  CLI::App app{
      "Neighbourhood-function estimation for large directed graphs: packed "
      "HyperLogLog counters merged with broadword register maxima, plus the "
      "distance statistics derived from the result (cdf, effective diameter, "
      "average distance, spid)."};
  app.require_subcommand(1);

  // --- gen -------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "generate a test graph");
  gen->require_subcommand(1);
  std::string gen_output;
  std::string gen_format = "edges";

  auto* clique = gen->add_subcommand(
      "clique-path", "two k-cliques joined by a one-way path of l nodes");
  std::uint64_t gen_k = 4, gen_l = 3;
  clique->add_option("-k,--clique", gen_k, "clique size")->required();
  clique->add_option("-l,--path", gen_l, "path length")->required();
  clique->add_option("-o,--output", gen_output, "output path")->required();
  clique->add_option("--format", gen_format, "edges or csr")
      ->check(CLI::IsMember({"edges", "csr"}));
  clique->callback([&] {
    const hyperanf::Graph g = hyperanf::gen_clique_path(gen_k, gen_l);
    if (gen_format == "csr")
      hyperanf::save_csr(g, gen_output);
    else
      hyperanf::save_edge_list(g, gen_output);
  });

  auto* random = gen->add_subcommand(
      "random", "uniform random graph with fixed out-degree");
  std::uint64_t gen_n = 1000;
  double gen_d = 8.0;
  std::uint64_t gen_seed = 42;
  random->add_option("-n,--nodes", gen_n, "node count")->required();
  random->add_option("-d,--degree", gen_d, "out-degree")->required();
  random->add_option("--seed", gen_seed, "generator seed");
  random->add_option("-o,--output", gen_output, "output path")->required();
  random->add_option("--format", gen_format, "edges or csr")
      ->check(CLI::IsMember({"edges", "csr"}));
  random->callback([&] {
    const hyperanf::Graph g = hyperanf::gen_uniform_random(gen_n, gen_d, gen_seed);
    if (gen_format == "csr")
      hyperanf::save_csr(g, gen_output);
    else
      hyperanf::save_edge_list(g, gen_output);
  });

  // --- nf --------------------------------------------------------------
  auto* nf = app.add_subcommand(
      "nf", "estimate the neighbourhood function (one run)");
  GraphOptions nf_graph;
  add_graph_options(nf, nf_graph);
  hyperanf::EngineConfig cfg;
  cfg.seed = 42;
  cfg.threads = default_threads();
  std::string nf_termination = "stabilisation";
  bool unsafe_threshold = false;
  std::string nf_output, nf_tsv;
  double nf_eps_inc = 0.001;
  nf->add_option("-b,--bucket-bits", cfg.bucket_bits,
                 "registers per counter = 2^b (default 7)");
  nf->add_option("--register-bits", cfg.register_bits,
                 "register width (default: 5 below 2^32 nodes)");
  nf->add_option("--seed", cfg.seed, "hash seed (default 42)");
  nf->add_option("--threads", cfg.threads, "worker threads (default: cores)");
  nf->add_option("--task-size", cfg.task_size, "nodes per task (default auto)");
  nf->add_option("--max-iterations", cfg.max_iterations,
                 "safety cap (default: n + 1)");
  nf->add_option("--termination", nf_termination,
                 "stabilisation (sound) or threshold (unsound)")
      ->check(CLI::IsMember({"stabilisation", "threshold"}));
  nf->add_option("--eps-inc", nf_eps_inc,
                 "threshold mode: stop when the relative increment drops "
                 "below this (default 0.001)");
  nf->add_flag("--unsafe-threshold", unsafe_threshold,
               "acknowledge that threshold termination can be arbitrarily "
               "wrong; required for --termination threshold");
  nf->add_flag("--spill-to-disk", cfg.spill_to_disk,
               "stream counter updates through a temporary file");
  nf->add_option("-o,--output", nf_output, "report path (default stdout)");
  nf->add_option("--tsv", nf_tsv, "also write (t, value) rows here");
  nf->callback([&] {
    if (nf_termination == "threshold") {
      if (!unsafe_threshold)
        throw CLI::ValidationError(
            "nf",
            "threshold termination is unsound (it can truncate the "
            "neighbourhood function and collapse the effective diameter); "
            "pass --unsafe-threshold to use it anyway");
      cfg.termination = hyperanf::Termination::threshold;
      cfg.eps_inc = nf_eps_inc;
    }
    const hyperanf::Graph g = hyperanf::load_graph(
        nf_graph.path, nf_graph.symmetrise, nf_graph.n_override);
    const hyperanf::NfEstimate est = hyperanf::estimate_nf(g, cfg);
    json manifest = graph_manifest(nf_graph);
    manifest["command"] = "nf";
    manifest["bucket_bits"] = cfg.bucket_bits;
    manifest["register_bits"] = cfg.register_bits;
    manifest["seed"] = cfg.seed;
    manifest["termination"] = nf_termination;
    if (nf_termination == "threshold") manifest["eps_inc"] = nf_eps_inc;
    emit_report(hyperanf::nf_to_json(est), manifest, nf_output);
    if (!nf_tsv.empty())
      hyperanf::write_text_file(nf_tsv, hyperanf::nf_to_tsv(est.values));
  });

  // --- exact -----------------------------------------------------------
  auto* exact = app.add_subcommand(
      "exact", "exact neighbourhood function by all-pairs BFS");
  GraphOptions exact_graph;
  add_graph_options(exact, exact_graph);
  hyperanf::OracleGuard guard;
  unsigned exact_threads = default_threads();
  std::string exact_output, exact_tsv;
  exact->add_option("--threads", exact_threads, "worker threads");
  exact->add_option("--max-nodes", guard.max_nodes, "node-count guard");
  exact->add_option("--max-work", guard.max_work, "n * arcs guard");
  exact->add_option("-o,--output", exact_output, "report path (default stdout)");
  exact->add_option("--tsv", exact_tsv, "also write (t, value) rows here");
  exact->callback([&] {
    const hyperanf::Graph g = hyperanf::load_graph(
        exact_graph.path, exact_graph.symmetrise, exact_graph.n_override);
    const hyperanf::ExactNf nf = hyperanf::exact_nf(g, exact_threads, guard);
    json manifest = graph_manifest(exact_graph);
    manifest["command"] = "exact";
    emit_report(hyperanf::nf_to_json(hyperanf::to_estimate(nf)), manifest,
                exact_output);
    if (!exact_tsv.empty())
      hyperanf::write_text_file(
          exact_tsv, hyperanf::nf_to_tsv(hyperanf::to_estimate(nf).values));
  });

  // --- stats -----------------------------------------------------------
  auto* stats = app.add_subcommand(
      "stats", "distance statistics from a neighbourhood-function report");
  std::string stats_input, stats_output, stats_cdf_tsv;
  double alpha = 0.9, epsilon = 0.0, delta = 0.0;
  stats->add_option("report", stats_input, "nf/exact report (JSON)")->required();
  stats->add_option("--alpha", alpha, "effective-diameter quantile (default 0.9)");
  stats->add_option("--epsilon", epsilon, "relative error for the interval");
  stats->add_option("--delta", delta, "per-point failure probability");
  stats->add_option("-o,--output", stats_output, "report path (default stdout)");
  stats->add_option("--cdf-tsv", stats_cdf_tsv, "write (t, H(t)) rows here");
  stats->callback([&] {
    const hyperanf::NfEstimate est =
        hyperanf::nf_from_json(hyperanf::read_json_file(stats_input));
    const hyperanf::DistanceCdf cdf = hyperanf::cdf_from_nf(est.values);
    const hyperanf::DistanceDistribution dist =
        hyperanf::distribution_from_cdf(cdf);
    json report;
    report["n"] = est.n;
    report["m"] = est.m;
    report["exact"] = est.exact;
    report["iterations"] = est.iterations();
    report["alpha"] = alpha;
    report["effective_diameter"] =
        hyperanf::effective_diameter(est.values, alpha, false);
    report["interpolated_effective_diameter"] =
        hyperanf::effective_diameter(est.values, alpha, true);
    report["avg_distance"] = dist.mean;
    report["distance_variance"] = dist.variance;
    report["spid"] = dist.spid;
    report["interval"] = hyperanf::interval_to_json(
        hyperanf::diameter_interval(est.values, alpha, epsilon, delta));
    report["cdf"] = cdf.values;
    report["density"] = dist.density;
    json manifest;
    manifest["command"] = "stats";
    manifest["report"] = stats_input;
    manifest["alpha"] = alpha;
    manifest["epsilon"] = epsilon;
    manifest["delta"] = delta;
    emit_report(report, manifest, stats_output);
    if (!stats_cdf_tsv.empty())
      hyperanf::write_text_file(stats_cdf_tsv, hyperanf::cdf_to_tsv(cdf));
  });

  // --- multirun ----------------------------------------------------------
  auto* multirun = app.add_subcommand(
      "multirun", "R independent runs with derived per-run statistics");
  GraphOptions multi_graph;
  add_graph_options(multirun, multi_graph);
  std::uint64_t runs = 10;
  hyperanf::EngineConfig multi_cfg;
  multi_cfg.seed = 42;
  multi_cfg.threads = default_threads();
  double multi_alpha = 0.9;
  std::string multi_output;
  multirun->add_option("--runs", runs, "number of runs (default 10)")
      ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1000000}));
  multirun->add_option("-b,--bucket-bits", multi_cfg.bucket_bits,
                       "registers per counter = 2^b (default 7)");
  multirun->add_option("--seed", multi_cfg.seed,
                       "base seed; run i uses seed + i (default 42)");
  multirun->add_option("--threads", multi_cfg.threads, "worker threads");
  multirun->add_option("--alpha", multi_alpha,
                       "effective-diameter quantile (default 0.9)");
  multirun->add_option("-o,--output", multi_output,
                       "report path (default stdout)");
  multirun->callback([&] {
    const hyperanf::Graph g = hyperanf::load_graph(
        multi_graph.path, multi_graph.symmetrise, multi_graph.n_override);
    const std::uint64_t base_seed = multi_cfg.seed;
    std::vector<hyperanf::NfEstimate> estimates;
    estimates.reserve(runs);
    for (std::uint64_t i = 0; i < runs; ++i) {
      hyperanf::EngineConfig run_cfg = multi_cfg;
      run_cfg.seed = base_seed + i;
      estimates.push_back(hyperanf::estimate_nf(g, run_cfg));
    }
    const hyperanf::MultiRunReport report =
        hyperanf::aggregate_runs(estimates, multi_alpha);
    json manifest = graph_manifest(multi_graph);
    manifest["command"] = "multirun";
    manifest["runs"] = runs;
    manifest["bucket_bits"] = multi_cfg.bucket_bits;
    manifest["seed"] = base_seed;
    manifest["alpha"] = multi_alpha;
    emit_report(hyperanf::multirun_to_json(report), manifest, multi_output);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const hyperanf::GuardError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const hyperanf::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const hyperanf::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
