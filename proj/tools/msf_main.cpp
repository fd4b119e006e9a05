#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>

#include "msf/engine.hpp"
#include "msf/graph_io.hpp"
#include "msf/report.hpp"
#include "msf/verify.hpp"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitVerifyFailed = 2;

struct InputOptions {
  std::string path;
  std::string format;  // mm | dimacs | edgelist; inferred from path when empty
  std::string gen;     // rmat | uniform
  std::int64_t scale = 10;
  std::int64_t edge_factor = 8;
  std::int64_t n = 1024;
  double density = 1.0;
  std::uint64_t seed = 1;
  std::string rmat_probs = "0.57,0.19,0.19,0.05";
};

void add_input_flags(CLI::App* cmd, InputOptions& in) {
  auto* input = cmd->add_option("--input", in.path, "Graph file to load");
  cmd->add_option("--format", in.format, "Input format: mm, dimacs, edgelist")
      ->check(CLI::IsMember({"mm", "dimacs", "edgelist"}));
  auto* gen = cmd->add_option("--gen", in.gen, "Generate a graph: rmat or uniform")
                  ->check(CLI::IsMember({"rmat", "uniform"}));
  input->excludes(gen);
  cmd->add_option("--scale", in.scale, "R-MAT scale; vertices = 2^scale");
  cmd->add_option("--edge-factor", in.edge_factor, "R-MAT directed samples per vertex");
  cmd->add_option("--n", in.n, "Uniform generator vertex count");
  cmd->add_option("--density", in.density, "Uniform edge percentage in (0,100]");
  cmd->add_option("--seed", in.seed, "Generator / weight-assignment seed");
  cmd->add_option("--rmat-probs", in.rmat_probs, "R-MAT quadrant probabilities a,b,c,d");
}

std::array<double, 4> parse_probs(const std::string& csv) {
  std::array<double, 4> probs{};
  std::stringstream ss(csv);
  std::string tok;
  std::size_t k = 0;
  while (std::getline(ss, tok, ',')) {
    if (k >= 4) throw std::invalid_argument("--rmat-probs expects four values");
    probs[k++] = std::stod(tok);
  }
  if (k != 4) throw std::invalid_argument("--rmat-probs expects four values");
  return probs;
}

msf::io::Format parse_format(const InputOptions& in) {
  if (in.format == "mm") return msf::io::Format::kMatrixMarket;
  if (in.format == "dimacs") return msf::io::Format::kDimacs;
  if (in.format == "edgelist") return msf::io::Format::kEdgeList;
  return msf::io::format_from_path(in.path);
}

msf::io::GenSpec gen_spec(const InputOptions& in) {
  msf::io::GenSpec spec;
  spec.kind = in.gen == "rmat" ? msf::io::GenSpec::Kind::kRmat
                               : msf::io::GenSpec::Kind::kUniform;
  spec.scale = in.scale;
  spec.edge_factor = in.edge_factor;
  spec.rmat_probs = parse_probs(in.rmat_probs);
  spec.n = in.n;
  spec.density_percent = in.density;
  spec.seed = in.seed;
  return spec;
}

msf::AdjacencyMatrix load_graph(const InputOptions& in, json& descriptor) {
  if (!in.gen.empty()) {
    const auto spec = gen_spec(in);
    msf::AdjacencyMatrix A = msf::io::generate(spec);
    descriptor["source"] = "generated";
    json g;
    g["kind"] = in.gen;
    g["seed"] = in.seed;
    if (spec.kind == msf::io::GenSpec::Kind::kRmat) {
      g["scale"] = in.scale;
      g["edge_factor"] = in.edge_factor;
      g["probs"] = spec.rmat_probs;
    } else {
      g["n"] = in.n;
      g["density_percent"] = in.density;
    }
    descriptor["generator"] = g;
    descriptor["vertices"] = A.vertex_count();
    descriptor["edges"] = A.edge_count();
    descriptor["stored_nonzeros"] = A.stored_nonzeros();
    return A;
  }
  if (in.path.empty()) {
    throw std::invalid_argument("either --input or --gen is required");
  }
  msf::AdjacencyMatrix A = msf::io::load(in.path, parse_format(in), in.seed);
  descriptor["source"] = "file";
  descriptor["path"] = in.path;
  descriptor["vertices"] = A.vertex_count();
  descriptor["edges"] = A.edge_count();
  descriptor["stored_nonzeros"] = A.stored_nonzeros();
  return A;
}

std::string weight_str(msf::Weight w) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), w);
  return std::string(buf, res.ptr);
}

const std::map<std::string, msf::ShortcutMode> kShortcutNames = {
    {"baseline", msf::ShortcutMode::kBaseline},
    {"complete", msf::ShortcutMode::kComplete},
    {"csp", msf::ShortcutMode::kCsp},
    {"auto", msf::ShortcutMode::kAuto}};
const std::map<std::string, msf::TerminationMode> kTerminationNames = {
    {"parent", msf::TerminationMode::kParent},
    {"grandparent", msf::TerminationMode::kGrandparent}};

struct ComputeArgs {
  InputOptions in;
  std::string shortcut = "auto";
  std::string termination = "grandparent";
  std::int64_t threshold = 1'310'000;
  std::int64_t grid = 0;
  bool pairwise = false;
  bool verify = false;
  std::string json_path;
  std::string forest_path;
};

int run_compute(const ComputeArgs& args) {
  msf::RunReport report;
  report.command = "compute";

  const double t0 = omp_get_wtime();
  msf::AdjacencyMatrix A = load_graph(args.in, report.input);
  const double t_load = omp_get_wtime() - t0;

  msf::MsfOptions opts;
  opts.shortcut = kShortcutNames.at(args.shortcut);
  opts.termination = kTerminationNames.at(args.termination);
  opts.csp_threshold = args.threshold;
  opts.grid_ranks = args.grid;
  opts.pairwise_kernel = args.pairwise;

  msf::PhaseTimings phases;
  const double t1 = omp_get_wtime();
  msf::MsfResult result = msf::minimum_spanning_forest(A, opts, &phases);
  const double t_solve = omp_get_wtime() - t1;

  report.options = {{"shortcut", args.shortcut},
                    {"termination", args.termination},
                    {"threshold", args.threshold},
                    {"grid_ranks", args.grid},
                    {"pairwise", args.pairwise},
                    {"verify", args.verify}};
  report.result = {{"total_weight", result.total_weight},
                   {"forest_edge_count", result.forest_edges.size()},
                   {"component_count", result.component_count},
                   {"iterations", result.iterations}};
  report.per_iteration = result.per_iteration;
  report.timings = {{"load_seconds", t_load},
                    {"solve_seconds", t_solve},
                    {"phases",
                     {{"multilinear", phases.multilinear},
                      {"scatter", phases.scatter},
                      {"hook", phases.hook},
                      {"tie_break", phases.tie_break},
                      {"shortcut", phases.shortcut}}}};

  bool verified_ok = true;
  if (args.verify) {
    const msf::MsfResult oracle = msf::kruskal_oracle(A);
    verified_ok = oracle.total_weight == result.total_weight &&
                  oracle.forest_edges == result.forest_edges;
    report.verified = verified_ok;
  }

  std::cout << "vertices:   " << A.vertex_count() << "\n"
            << "edges:      " << A.edge_count() << "\n"
            << "forest:     " << result.forest_edges.size() << " edges, weight "
            << weight_str(result.total_weight) << "\n"
            << "components: " << result.component_count << "\n"
            << "iterations: " << result.iterations << "\n";
  if (args.verify) {
    std::cout << "verify:     " << (verified_ok ? "match" : "MISMATCH") << "\n";
  }

  if (!args.forest_path.empty()) {
    std::ofstream out(args.forest_path);
    if (!out) throw std::runtime_error("cannot open '" + args.forest_path + "'");
    for (const auto& e : result.forest_edges) {
      out << e.key.lo << " " << e.key.hi << " " << weight_str(e.weight) << "\n";
    }
  }
  if (!args.json_path.empty()) report.write(args.json_path);
  return verified_ok ? kExitOk : kExitVerifyFailed;
}

struct CcArgs {
  InputOptions in;
  bool verify = false;
  std::string json_path;
};

int run_cc(const CcArgs& args) {
  msf::RunReport report;
  report.command = "cc";

  const double t0 = omp_get_wtime();
  msf::AdjacencyMatrix A = load_graph(args.in, report.input);
  const double t_load = omp_get_wtime() - t0;

  const double t1 = omp_get_wtime();
  const auto labels = msf::connected_components(A);
  const double t_solve = omp_get_wtime() - t1;

  std::set<msf::VertexId> distinct;
  for (msf::VertexId v = 1; v <= labels.size(); ++v) distinct.insert(labels[v]);

  report.options = {{"verify", args.verify}};
  report.result = {{"component_count", distinct.size()}};
  report.timings = {{"load_seconds", t_load}, {"solve_seconds", t_solve}};

  bool verified_ok = true;
  if (args.verify) {
    verified_ok = msf::verify::same_partition(labels, msf::verify::bfs_component_labels(A));
    report.verified = verified_ok;
  }

  std::cout << "vertices:   " << A.vertex_count() << "\n"
            << "components: " << distinct.size() << "\n";
  if (args.verify) {
    std::cout << "verify:     " << (verified_ok ? "match" : "MISMATCH") << "\n";
  }
  if (!args.json_path.empty()) report.write(args.json_path);
  return verified_ok ? kExitOk : kExitVerifyFailed;
}

struct SsspArgs {
  InputOptions in;
  msf::VertexId source = 1;
  bool verify = false;
  std::string output_path;
  std::string json_path;
};

int run_sssp(const SsspArgs& args) {
  msf::RunReport report;
  report.command = "sssp";

  const double t0 = omp_get_wtime();
  msf::AdjacencyMatrix A = load_graph(args.in, report.input);
  const double t_load = omp_get_wtime() - t0;

  const double t1 = omp_get_wtime();
  const auto dist = msf::sssp_bellman_ford(A, args.source);
  const double t_solve = omp_get_wtime() - t1;

  std::int64_t reachable = 0;
  for (msf::VertexId v = 1; v <= dist.size(); ++v) {
    if (dist[v] < msf::kInfWeight) ++reachable;
  }

  report.options = {{"source", args.source}, {"verify", args.verify}};
  report.result = {{"source", args.source}, {"reachable", reachable}};
  report.timings = {{"load_seconds", t_load}, {"solve_seconds", t_solve}};

  bool verified_ok = true;
  if (args.verify) {
    const auto ref = A.vertex_count() <= 12
                         ? msf::verify::brute_force_sssp(A, args.source)
                         : msf::verify::dijkstra_sssp(A, args.source);
    verified_ok = dist == ref;
    report.verified = verified_ok;
  }

  if (!args.output_path.empty()) {
    std::ofstream out(args.output_path);
    if (!out) throw std::runtime_error("cannot open '" + args.output_path + "'");
    for (msf::VertexId v = 1; v <= dist.size(); ++v) {
      out << v << " " << weight_str(dist[v]) << "\n";
    }
  } else {
    for (msf::VertexId v = 1; v <= dist.size(); ++v) {
      std::cout << v << " " << weight_str(dist[v]) << "\n";
    }
  }
  if (args.verify) {
    std::cout << "verify:     " << (verified_ok ? "match" : "MISMATCH") << "\n";
  }
  if (!args.json_path.empty()) report.write(args.json_path);
  return verified_ok ? kExitOk : kExitVerifyFailed;
}

struct GenArgs {
  InputOptions in;
  std::string output_path;
  std::string format = "mm";
};

int run_gen(const GenArgs& args) {
  if (args.in.gen.empty()) throw std::invalid_argument("gen requires --gen rmat|uniform");
  json descriptor;
  msf::AdjacencyMatrix A = load_graph(args.in, descriptor);
  msf::io::Format fmt = msf::io::Format::kMatrixMarket;
  if (args.format == "dimacs") fmt = msf::io::Format::kDimacs;
  if (args.format == "edgelist") fmt = msf::io::Format::kEdgeList;
  msf::io::save(args.output_path, fmt, A);
  std::cout << "wrote " << A.vertex_count() << " vertices, " << A.edge_count()
            << " edges to " << args.output_path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("MSF_THREADS")) {
    int threads = 0;
    const auto res = std::from_chars(env, env + std::string(env).size(), threads);
    if (res.ec == std::errc{} && threads > 0) omp_set_num_threads(threads);
  }

  CLI::App app{"Minimum spanning forests via semiring sparse kernels"};
  app.require_subcommand(1);

  ComputeArgs compute;
  auto* cmd_compute = app.add_subcommand("compute", "Compute a minimum spanning forest");
  add_input_flags(cmd_compute, compute.in);
  cmd_compute->add_option("--shortcut", compute.shortcut, "baseline, complete, csp, auto")
      ->check(CLI::IsMember({"baseline", "complete", "csp", "auto"}));
  cmd_compute->add_option("--termination", compute.termination, "parent or grandparent")
      ->check(CLI::IsMember({"parent", "grandparent"}));
  cmd_compute->add_option("--threshold", compute.threshold,
                          "Change-map size below which CSP is used");
  cmd_compute->add_option("--grid", compute.grid,
                          "Simulate this many grid ranks (perfect square)");
  cmd_compute->add_flag("--pairwise", compute.pairwise,
                        "Use the pairwise kernel instead of all-at-once");
  cmd_compute->add_flag("--verify", compute.verify, "Check against the sort-based oracle");
  cmd_compute->add_option("--json", compute.json_path, "Write the run report here");
  cmd_compute->add_option("--emit-forest", compute.forest_path,
                          "Write the forest as an edge list");

  CcArgs cc;
  auto* cmd_cc = app.add_subcommand("cc", "Label connected components");
  add_input_flags(cmd_cc, cc.in);
  cmd_cc->add_flag("--verify", cc.verify, "Check against breadth-first search");
  cmd_cc->add_option("--json", cc.json_path, "Write the run report here");

  SsspArgs sssp;
  auto* cmd_sssp = app.add_subcommand("sssp", "Single-source shortest paths");
  add_input_flags(cmd_sssp, sssp.in);
  cmd_sssp->add_option("--source", sssp.source, "Source vertex (1-based)")->required();
  cmd_sssp->add_flag("--verify", sssp.verify, "Check against a classical reference");
  cmd_sssp->add_option("--output", sssp.output_path, "Write distances here instead of stdout");
  cmd_sssp->add_option("--json", sssp.json_path, "Write the run report here");

  GenArgs gen;
  auto* cmd_gen = app.add_subcommand("gen", "Generate a graph file");
  add_input_flags(cmd_gen, gen.in);
  cmd_gen->add_option("--output", gen.output_path, "Output path")->required();
  cmd_gen->add_option("--out-format", gen.format, "mm, dimacs, edgelist")
      ->check(CLI::IsMember({"mm", "dimacs", "edgelist"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInputError;
  }

  try {
    if (cmd_compute->parsed()) return run_compute(compute);
    if (cmd_cc->parsed()) return run_cc(cc);
    if (cmd_sssp->parsed()) return run_sssp(sssp);
    if (cmd_gen->parsed()) return run_gen(gen);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
