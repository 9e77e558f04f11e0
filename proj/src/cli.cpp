#include "sgla/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "sgla/clustering.hpp"
#include "sgla/errors.hpp"
#include "sgla/integrate.hpp"
#include "sgla/io.hpp"
#include "sgla/metrics.hpp"
#include "sgla/parallel.hpp"
#include "sgla/sbm.hpp"

namespace sgla::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

// Reported for bad command lines, as opposed to failures while running.
constexpr int kUsageError = 2;
constexpr int kRunError = 1;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct IntegrateArgs {
  std::string dataset;
  std::string method = "sgla+";
  std::optional<int> k;
  SglaParams params;
  std::string out;
};

BaselineMode parse_single(const std::string& method) {
  const std::string digits = method.substr(std::string("single=").size());
  if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit)) {
    throw UsageError("--method single=<view number> needs a view number counted from 1");
  }
  return {BaselineMode::Kind::single, static_cast<std::size_t>(std::stoul(digits))};
}

IntegrationResult integrate_with(const std::string& method, std::span<const ViewLaplacian> views, int k,
                                 const SglaParams& params) {
  if (method == "sgla") return run_sgla(views, k, params);
  if (method == "sgla+") return run_sgla_plus(views, k, params);
  if (method == "equal") return baseline_weights({BaselineMode::Kind::equal, 0}, views, k, params);
  if (method == "eigengap") return baseline_weights({BaselineMode::Kind::eigengap_only, 0}, views, k, params);
  if (method == "connectivity") {
    return baseline_weights({BaselineMode::Kind::connectivity_only, 0}, views, k, params);
  }
  if (method.rfind("single=", 0) == 0) return baseline_weights(parse_single(method), views, k, params);
  throw UsageError("unknown --method '" + method + "'");
}

std::string trace_csv(const IntegrationResult& res, std::size_t r) {
  std::string s = "iter";
  for (std::size_t i = 1; i <= r; ++i) s += ",w" + std::to_string(i);
  s += ",h,evals\n";
  for (const auto& t : res.trace) {
    s += std::to_string(t.iter);
    for (double w : t.w) s += "," + io::format_double(w);
    s += "," + io::format_double(t.h) + "," + std::to_string(t.evals) + "\n";
  }
  return s;
}

int cmd_integrate(const IntegrateArgs& a, std::ostream& out) {
  if (!a.k) throw UsageError("missing required --k");
  const MvagDataset ds = io::load_dataset(a.dataset);
  const std::vector<ViewLaplacian> views = build_view_laplacians(ds, a.params.knn_k);
  const IntegrationResult res = integrate_with(a.method, views, *a.k, a.params);

  const fs::path dir(a.out);
  fs::create_directories(dir);
  json w;
  w["method"] = a.method;
  w["weights"] = std::vector<double>(res.weights.values().begin(), res.weights.values().end());
  w["evaluations"] = res.evaluations;
  w["converged"] = res.converged;
  for (const auto& t : res.trace) {
    if (std::equal(t.w.begin(), t.w.end(), res.weights.values().begin(), res.weights.values().end())) {
      w["h"] = t.h;
      break;
    }
  }
  io::write_file_atomic(dir / "weights.json", w.dump(2) + "\n");
  io::write_sparse_mtx(dir / "laplacian.mtx", res.laplacian);
  io::write_file_atomic(dir / "trace.csv", trace_csv(res, views.size()));
  out << "weights";
  for (double x : res.weights.values()) out << " " << io::format_double(x);
  out << "\nevaluations " << res.evaluations << "\n";
  return 0;
}

void add_serial(CLI::App* app, bool& serial) {
  app->add_flag("--serial", serial, "Single-threaded, bit-reproducible execution");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spectrum-guided integration of multi-view attributed graphs", "sgla"};
  app.require_subcommand(1);
  bool serial = false;

  IntegrateArgs ia;
  auto* integrate = app.add_subcommand("integrate", "Optimize view weights and write the aggregated Laplacian");
  integrate->add_option("--dataset", ia.dataset, "Dataset manifest (JSON)")->required();
  integrate->add_option("--method", ia.method, "sgla | sgla+ | equal | single=<i> (views counted from 1) | eigengap | connectivity");
  integrate->add_option("--k", ia.k, "Number of clusters");
  integrate->add_option("--gamma", ia.params.gamma, "Weight of the |w|^2 regularizer");
  integrate->add_option("--epsilon", ia.params.epsilon, "Stop when weights move less than this");
  integrate->add_option("--tmax", ia.params.t_max, "Maximum optimizer iterations");
  integrate->add_option("--alpha-r", ia.params.alpha_r, "Ridge penalty of the surrogate fit");
  integrate->add_option("--knn", ia.params.knn_k, "K for attribute KNN graphs");
  integrate->add_option("--seed", ia.params.seed, "Eigensolver start vector seed");
  integrate->add_flag("--safeguard", ia.params.safeguard, "sgla+: evaluate the surrogate minimizer too");
  integrate->add_option("--out", ia.out, "Output directory")->required();
  add_serial(integrate, serial);

  std::string laplacian_path, out_path;
  int k = 0, d = 0;
  std::uint64_t seed = 42;
  auto* cluster = app.add_subcommand("cluster", "Spectral clustering of a Laplacian");
  cluster->add_option("--laplacian", laplacian_path, "Laplacian (Matrix Market)")->required();
  cluster->add_option("--k", k, "Number of clusters")->required();
  cluster->add_option("--seed", seed, "Random seed");
  cluster->add_option("--out", out_path, "Labels file, one per line")->required();
  add_serial(cluster, serial);

  auto* embed = app.add_subcommand("embed", "Spectral embedding of a Laplacian");
  embed->add_option("--laplacian", laplacian_path, "Laplacian (Matrix Market)")->required();
  embed->add_option("--d", d, "Embedding dimension")->required();
  embed->add_option("--seed", seed, "Random seed");
  embed->add_option("--out", out_path, "Embedding CSV")->required();
  add_serial(embed, serial);

  std::string pred_path, truth_path;
  auto* eval = app.add_subcommand("eval", "Score predicted labels against ground truth");
  eval->add_option("--pred", pred_path, "Predicted labels")->required();
  eval->add_option("--truth", truth_path, "True labels")->required();
  eval->add_option("--out", out_path, "Metrics JSON (stdout when omitted)");

  std::string spec_path;
  auto* synth = app.add_subcommand("synth", "Generate a multi-view SBM dataset");
  synth->add_option("--spec", spec_path, "SBM spec (JSON)")->required();
  synth->add_option("--out", out_path, "Dataset directory")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  parallel::set_serial(serial);
  try {
    if (integrate->parsed()) return cmd_integrate(ia, out);

    if (cluster->parsed()) {
      const SparseSymMatrix l = io::read_sparse_mtx(laplacian_path);
      const ClusterAssignment c = spectral_clustering(l, k, seed);
      io::write_labels(out_path, c.labels);
      return 0;
    }

    if (embed->parsed()) {
      const SparseSymMatrix l = io::read_sparse_mtx(laplacian_path);
      const Eigen::MatrixXd e = spectral_embedding(l, d, seed);
      std::string s;
      for (Eigen::Index i = 0; i < e.rows(); ++i) {
        for (Eigen::Index j = 0; j < e.cols(); ++j) {
          if (j > 0) s += ",";
          s += io::format_double(e(i, j));
        }
        s += "\n";
      }
      io::write_file_atomic(out_path, s);
      return 0;
    }

    if (eval->parsed()) {
      const ClusteringScores m = clustering_metrics(io::read_labels(pred_path), io::read_labels(truth_path));
      const json j = {{"acc", m.acc}, {"f1", m.f1}, {"nmi", m.nmi}, {"ari", m.ari}, {"purity", m.purity}};
      if (out_path.empty()) {
        out << j.dump() << "\n";
      } else {
        io::write_file_atomic(out_path, j.dump() + "\n");
      }
      return 0;
    }

    if (synth->parsed()) {
      const SbmSpec spec = parse_sbm_spec(io::read_file(spec_path));
      io::save_dataset(out_path, generate_sbm(spec));
      return 0;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kRunError;
  }
  return kUsageError;
}

}  // namespace sgla::cli
