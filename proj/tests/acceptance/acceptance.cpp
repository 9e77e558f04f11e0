// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion
// numbers as arguments to run a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixture.hpp"
#include "oracles.hpp"
#include "sgla/cli.hpp"
#include "sgla/clustering.hpp"
#include "sgla/eigensolver.hpp"
#include "sgla/graph_cuts.hpp"
#include "sgla/integrate.hpp"
#include "sgla/io.hpp"
#include "sgla/metrics.hpp"
#include "sgla/objective.hpp"
#include "sgla/optimizer.hpp"
#include "sgla/sbm.hpp"
#include "sgla/surrogate.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int uniform_int(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
double uniform_real(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::vector<double> sorted_eigenvalues(const Eigen::MatrixXd& m) {
  const Eigen::VectorXd e = oracle::eigenvalues(m);
  return {e.data(), e.data() + e.size()};
}

double clamp0(double v) { return std::abs(v) < sgla::kZeroClamp ? 0.0 : v; }

double nmi_of(const sgla::SparseSymMatrix& l, int k, const std::vector<int>& truth) {
  const auto c = sgla::spectral_clustering(l, k);
  return sgla::clustering_metrics(c.labels, truth).nmi;
}

double linf(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

// 1. Smallest k+1 eigenvalues against a dense eigendecomposition.
Outcome eigensolver_accuracy() {
  std::mt19937_64 rng(1001);
  double worst = 0.0;
  for (int g = 0; g < 50; ++g) {
    const int n = uniform_int(rng, 20, 200);
    const double density = uniform_real(rng, 0.05, 0.20);
    const int k = uniform_int(rng, 1, 11);
    const Eigen::MatrixXd l = oracle::normalized_laplacian(oracle::random_adjacency(n, density, rng, 0.1, 3.0));
    const auto s = sgla::smallest_eigenvalues(oracle::sparse(l), static_cast<std::size_t>(k + 1));
    const auto ref = sorted_eigenvalues(l);
    for (int i = 0; i <= k; ++i) worst = std::max(worst, std::abs(s.values[i] - ref[i]));
  }
  return {worst <= 1e-8, fmt("max abs error %.3g over 50 graphs (limit 1e-8)", worst)};
}

// 2. lambda_2 / 2 <= conductance <= sqrt(2 lambda_2).
Outcome cheeger_sandwich() {
  std::mt19937_64 rng(1002);
  constexpr double kEigTol = 1e-8;
  int violations = 0;
  double tightest = INFINITY;
  for (int g = 0; g < 100; ++g) {
    const int n = uniform_int(rng, 3, 14);
    const Eigen::MatrixXd a = oracle::random_connected_adjacency(n, uniform_real(rng, 0.1, 0.6), rng, 0.2, 2.0);
    const double l2 = sgla::smallest_eigenvalues(oracle::sparse(oracle::normalized_laplacian(a)), 2).values[1];
    const double phi = sgla::conductance_bruteforce(oracle::graph(a));
    const double lower = phi - (l2 - kEigTol) / 2.0;
    const double upper = std::sqrt(2.0 * (l2 + kEigTol)) - phi;
    tightest = std::min({tightest, lower, upper});
    if (lower < 0.0 || upper < 0.0) ++violations;
  }
  return {violations == 0, fmt("%d violations in 100 graphs, smallest margin %.3g", violations, tightest)};
}

// 3. h = g_k - lambda_2 + gamma |w|^2, internally and against dense algebra.
Outcome objective_identity() {
  std::mt19937_64 rng(1003);
  double worst_identity = 0.0;
  double worst_dense = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int r = uniform_int(rng, 1, 4);
    const int n = uniform_int(rng, 15, 60);
    const int k = uniform_int(rng, 2, 5);
    std::vector<sgla::ViewLaplacian> views;
    std::vector<Eigen::MatrixXd> dense;
    for (int i = 0; i < r; ++i) {
      const auto a = trial % 5 == 0 ? oracle::random_adjacency(n, 0.08, rng, 0.5, 2.0)
                                    : oracle::random_connected_adjacency(n, 0.15, rng, 0.5, 2.0);
      dense.push_back(oracle::normalized_laplacian(a));
      views.push_back({oracle::sparse(dense.back()), {}});
    }
    std::vector<double> raw(r);
    for (auto& x : raw) x = std::exponential_distribution<double>(1.0)(rng);
    double total = 0.0;
    for (double x : raw) total += x;
    for (auto& x : raw) x /= total;
    raw.back() = 1.0;
    for (int i = 0; i + 1 < r; ++i) raw.back() -= raw[i];
    const sgla::WeightVector w(raw);

    sgla::ObjectiveParams p;
    p.k = k;
    p.gamma = uniform_real(rng, 0.0, 1.0);
    sgla::EvaluationCounter counter;
    const auto v = sgla::full_objective(w, views, p, counter);
    double reg = 0.0;
    for (double x : w.values()) reg += x * x;
    worst_identity = std::max(worst_identity, std::abs(v.h - (v.g_k - v.lambda2 + p.gamma * reg)));

    Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < r; ++i) l += w[i] * dense[i];
    const auto e = sorted_eigenvalues(l);
    const double lk = clamp0(e[k - 1]);
    const double lk1 = clamp0(e[k]);
    const double g = lk == 0.0 ? 0.0 : lk / std::max(lk1, p.tau);
    const double h = g - clamp0(e[1]) + p.gamma * reg;
    worst_dense = std::max(worst_dense, std::abs(v.h - h));
  }
  return {worst_identity <= 1e-14 && worst_dense <= 1e-8,
          fmt("identity error %.3g (limit 1e-14), dense error %.3g (limit 1e-8)", worst_identity, worst_dense)};
}

std::vector<sgla::ViewLaplacian> random_views(int r, int n, std::mt19937_64& rng) {
  std::vector<sgla::ViewLaplacian> v;
  for (int i = 0; i < r; ++i) {
    v.push_back(oracle::view_laplacian(oracle::random_connected_adjacency(n, 0.1, rng, 0.5, 2.0)));
  }
  return v;
}

// 4. r+1 evaluations for SGLA+, at most T_max+1 for SGLA.
Outcome evaluation_count() {
  std::mt19937_64 rng(1004);
  std::string bad;
  std::string counts;
  sgla::SglaParams params;
  for (int r = 2; r <= 8; ++r) {
    const auto views = random_views(r, 60, rng);
    const auto plus = sgla::run_sgla_plus(views, 3, params);
    const auto direct = sgla::run_sgla(views, 3, params);
    counts += fmt(" r=%d:%llu/%llu", r, static_cast<unsigned long long>(plus.evaluations),
                  static_cast<unsigned long long>(direct.evaluations));
    if (plus.evaluations != static_cast<std::uint64_t>(r + 1)) bad += fmt(" sgla+ r=%d", r);
    if (direct.evaluations > static_cast<std::uint64_t>(params.t_max + 1)) bad += fmt(" sgla r=%d", r);
  }
  return {bad.empty(), "sgla+/sgla evaluations" + counts + (bad.empty() ? "" : "; wrong:" + bad)};
}

sgla::QuadraticSurrogate random_quadratic(std::size_t r, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXd theta = Eigen::MatrixXd::Zero(r, r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = i; j < r; ++j) theta(i, j) = g(rng);
  }
  return sgla::QuadraticSurrogate(theta);
}

// 5. Exact recovery from r(r+1)/2 nodes; small residuals from r+1 samples.
Outcome surrogate_fidelity() {
  std::mt19937_64 rng(1005);
  double worst_coef = 0.0;
  double worst_ratio = 0.0;
  int planted = 0;
  for (std::size_t r = 2; r <= 6; ++r) {
    for (int rep = 0; rep < 10; ++rep, ++planted) {
      const auto truth = random_quadratic(r, rng);
      // Vertices and edge midpoints of the simplex: the quadratic interpolation nodes.
      std::vector<sgla::WeightVector> nodes;
      for (std::size_t i = 0; i < r; ++i) {
        nodes.push_back(sgla::WeightVector::one_hot(r, i));
        for (std::size_t j = i + 1; j < r; ++j) {
          std::vector<double> w(r, 0.0);
          w[i] = w[j] = 0.5;
          nodes.emplace_back(std::move(w));
        }
      }
      std::vector<double> values;
      for (const auto& w : nodes) values.push_back(sgla::evaluate_surrogate(truth, w));
      const auto fit = sgla::fit_surrogate(nodes, values, 1e-12);
      worst_coef = std::max(worst_coef, (fit.packed() - truth.packed()).cwiseAbs().maxCoeff());

      const auto samples = sgla::sample_weight_vectors(r);
      std::vector<double> h;
      for (const auto& w : samples) h.push_back(sgla::evaluate_surrogate(truth, w));
      const auto few = sgla::fit_surrogate(samples, h, 0.05);
      double sq = 0.0;
      for (std::size_t l = 0; l < samples.size(); ++l) {
        const double d = sgla::evaluate_surrogate(few, samples[l]) - h[l];
        sq += d * d;
      }
      const double range = *std::max_element(h.begin(), h.end()) - *std::min_element(h.begin(), h.end());
      const double rmse = std::sqrt(sq / static_cast<double>(samples.size()));
      worst_ratio = std::max(worst_ratio, range > 0.0 ? rmse / range : 0.0);
    }
  }
  return {worst_coef <= 1e-6 && worst_ratio <= 0.05,
          fmt("%d planted quadratics, r=2..6: coefficient error %.3g (limit 1e-6), worst RMSE/range %.3g "
              "(limit 0.05)",
              planted, worst_coef, worst_ratio)};
}

// 6. Convex quadratics on the simplex within 200 evaluations.
Outcome optimizer_convergence() {
  std::mt19937_64 rng(1006);
  std::normal_distribution<double> g;
  double worst_gap = 0.0;
  double worst_dist = 0.0;
  std::size_t most_evals = 0;
  for (int q = 0; q < 20; ++q) {
    const int dim = uniform_int(rng, 1, 5);  // r = dim + 1 <= 6
    Eigen::MatrixXd b(dim, dim);
    for (int i = 0; i < dim; ++i) {
      for (int j = 0; j < dim; ++j) b(i, j) = g(rng);
    }
    const Eigen::MatrixXd a = b * b.transpose() + 0.5 * Eigen::MatrixXd::Identity(dim, dim);
    Eigen::VectorXd c(dim);
    for (int i = 0; i < dim; ++i) c(i) = uniform_real(rng, -0.3, 0.8);
    auto f = [&](std::span<const double> x) {
      const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(x.data(), dim) - c;
      return d.dot(a * d);
    };
    sgla::CobylaOptions opts;
    opts.maxfun = 200;
    const sgla::SimplexConstraints cons(dim);
    const auto res = sgla::minimize(f, cons.center(), cons, opts);
    const auto best = oracle::zoom_grid_argmin(dim, [&](const std::vector<double>& x) { return f(x); });
    worst_gap = std::max(worst_gap, res.f - f(best));
    worst_dist = std::max(worst_dist, linf(res.x, best));
    most_evals = std::max(most_evals, res.evaluations);
  }
  return {worst_gap <= 1e-3 && worst_dist <= 1e-3 && most_evals <= 200,
          fmt("20 quadratics: value gap %.3g, argmin distance %.3g (limits 1e-3), max %zu evaluations", worst_gap,
              worst_dist, most_evals)};
}

sgla::SbmSpec complementary_spec(std::uint64_t seed, sgla::Index n) {
  sgla::SbmSpec s;
  s.n = n;
  s.k = 4;
  s.seed = seed;
  s.graph_views = {{0.15, 0.02, {0, 1}}, {0.15, 0.02, {2, 3}}};
  s.attribute_views = {{8, 2.0, {0, 1, 2, 3}, std::nullopt}};
  return s;
}

// 7. SGLA lands near the grid minimum; the surrogate argmin near the grid argmin.
Outcome near_global() {
  sgla::SglaParams params;
  int argmin_hits = 0;
  double worst_gap = 0.0;
  std::string dists;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto ds = sgla::generate_sbm(complementary_spec(700 + seed, 200));
    const auto views = sgla::build_view_laplacians(ds, params.knn_k);
    sgla::ObjectiveParams p;
    p.k = 4;
    p.gamma = params.gamma;
    p.eig_tol = params.eig_tol;
    p.seed = params.seed;
    const auto grid = sgla::brute_force_objective_grid(views, p, 0.02);
    const auto best = *std::min_element(grid.begin(), grid.end(),
                                        [](const auto& x, const auto& y) { return x.h < y.h; });

    const auto direct = sgla::run_sgla(views, 4, params);
    sgla::EvaluationCounter counter;
    const double h = sgla::full_objective(direct.weights, views, p, counter).h;
    worst_gap = std::max(worst_gap, h - best.h);

    const auto plus = sgla::run_sgla_plus(views, 4, params);
    const double d = linf(plus.surrogate_argmin->values(), best.w.values());
    dists += fmt(" %.2f", d);
    if (d <= 0.1) ++argmin_hits;
  }
  return {worst_gap <= 0.02 && argmin_hits >= 8,
          fmt("sgla gap to grid min %.3g (limit 0.02); surrogate argmin within 0.1 on %d/10 (need 8), "
              "distances%s",
              worst_gap, argmin_hits, dists.c_str())};
}

constexpr const char* kFixtureSpec = fixture::kComplementarySbm;

// 8. Integration beats every single view and keeps up with equal weights.
Outcome integration_benefit() {
  const auto ds = sgla::generate_sbm(sgla::parse_sbm_spec(kFixtureSpec));
  sgla::SglaParams params;
  const auto views = sgla::build_view_laplacians(ds, params.knn_k);
  const auto& y = *ds.labels;
  const double plus = nmi_of(sgla::run_sgla_plus(views, 4, params).laplacian, 4, y);
  const double equal =
      nmi_of(sgla::baseline_weights({sgla::BaselineMode::Kind::equal, 1}, views, 4, params).laplacian, 4, y);
  double best_single = 0.0;
  std::string singles;
  for (std::size_t v = 1; v <= views.size(); ++v) {
    const double s =
        nmi_of(sgla::baseline_weights({sgla::BaselineMode::Kind::single, v}, views, 4, params).laplacian, 4, y);
    singles += fmt(" %.3f", s);
    best_single = std::max(best_single, s);
  }
  return {plus >= 0.9 && plus - best_single >= 0.1 && plus >= equal - 0.02,
          fmt("sgla+ NMI %.3f, equal %.3f, single views%s", plus, equal, singles.c_str())};
}

// 9. Degenerate inputs complete; identical views are weight-invariant.
Outcome degenerate_inputs() {
  std::mt19937_64 rng(1009);
  sgla::SglaParams params;
  std::string failures;
  auto run_both = [&](const std::string& name, const std::vector<sgla::ViewLaplacian>& views, int k) {
    try {
      for (const auto& res : {sgla::run_sgla(views, k, params), sgla::run_sgla_plus(views, k, params)}) {
        double total = 0.0;
        for (double x : res.weights.values()) total += x;
        if (std::abs(total - 1.0) > 1e-10) failures += " " + name + "(weights)";
      }
    } catch (const std::exception& e) {
      failures += " " + name + "(" + e.what() + ")";
    }
  };

  const auto one = random_views(1, 50, rng);
  run_both("single-view", one, 3);

  const std::vector<sgla::ViewLaplacian> same(3, one[0]);
  run_both("identical", same, 3);
  sgla::ObjectiveParams p;
  p.k = 3;
  p.gamma = 0.0;
  sgla::EvaluationCounter counter;
  const double h0 = sgla::full_objective(sgla::WeightVector::uniform(3), same, p, counter).h;
  double drift = 0.0;
  for (int t = 0; t < 20; ++t) {
    std::vector<double> w{uniform_real(rng, 0.0, 0.5), uniform_real(rng, 0.0, 0.5), 0.0};
    w[2] = 1.0 - w[0] - w[1];
    drift = std::max(drift, std::abs(sgla::full_objective(sgla::WeightVector(w), same, p, counter).h - h0));
  }
  if (drift > 1e-10) failures += fmt(" identical(drift %.3g)", drift);

  std::vector<sgla::ViewLaplacian> with_empty = random_views(1, 50, rng);
  with_empty.push_back(oracle::view_laplacian(Eigen::MatrixXd::Zero(50, 50)));
  run_both("disconnected", with_empty, 3);

  sgla::MvagDataset ds;
  ds.n = 40;
  ds.k = 2;
  ds.graph_views = {oracle::graph(oracle::random_connected_adjacency(40, 0.15, rng))};
  sgla::AttributeView x;
  x.n = 40;
  x.d = 5;
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i) x.values.push_back(i < 50 ? 0.0 : g(rng));  // first 10 rows zero
  ds.attribute_views = {x};
  try {
    run_both("zero-norm-rows", sgla::build_view_laplacians(ds, 5), 2);
  } catch (const std::exception& e) {
    failures += std::string(" zero-norm-rows(") + e.what() + ")";
  }
  return {failures.empty(), failures.empty() ? "r=1, identical views (weight drift " + fmt("%.3g", drift) +
                                                   "), empty view and zero-norm attribute rows all completed"
                                             : "failed:" + failures};
}

// 10. The CLI pipeline is byte-reproducible under --serial.
Outcome determinism() {
  const fs::path dir = oracle::temp_dir("acceptance");
  std::ofstream(dir / "spec.json") << kFixtureSpec;
  std::ostringstream out, err;
  auto call = [&](std::vector<std::string> args) {
    if (sgla::cli::run(args, out, err) != 0) throw std::runtime_error(err.str());
  };
  const std::vector<std::string> files{"data/manifest.json", "data/graph_0.mtx", "data/graph_1.mtx", "data/attributes_0.mtx",
                                       "data/labels.txt",   "plus/weights.json", "plus/laplacian.mtx",
                                       "plus/trace.csv",    "sgla/weights.json", "sgla/laplacian.mtx",
                                       "sgla/trace.csv",    "pred.txt",          "embed.csv",
                                       "metrics.json"};
  Outcome o;
  try {
    for (const char* run : {"a", "b"}) {
      const fs::path d = dir / run;
      call({"synth", "--spec", (dir / "spec.json").string(), "--out", (d / "data").string()});
      const std::string manifest = (d / "data" / "manifest.json").string();
      for (const char* m : {"sgla+", "sgla"}) {
        call({"integrate", "--dataset", manifest, "--method", m, "--k", "4", "--seed", "7", "--serial", "--out",
              (d / (std::string(m) == "sgla+" ? "plus" : "sgla")).string()});
      }
      const std::string lap = (d / "plus" / "laplacian.mtx").string();
      call({"cluster", "--laplacian", lap, "--k", "4", "--seed", "7", "--serial", "--out", (d / "pred.txt").string()});
      call({"embed", "--laplacian", lap, "--d", "8", "--seed", "7", "--serial", "--out", (d / "embed.csv").string()});
      call({"eval", "--pred", (d / "pred.txt").string(), "--truth", (d / "data" / "labels.txt").string(), "--out",
            (d / "metrics.json").string()});
    }
    int differing = 0;
    for (const auto& f : files) {
      if (sgla::io::read_file(dir / "a" / f) != sgla::io::read_file(dir / "b" / f)) {
        ++differing;
        o.detail += " " + f;
      }
    }
    o.pass = differing == 0;
    o.detail = o.pass ? fmt("%zu output files byte-identical across two runs", files.size())
                      : "differing:" + o.detail;
  } catch (const std::exception& e) {
    o = {false, std::string("pipeline error: ") + e.what()};
  }
  fs::remove_all(dir);
  return o;
}

struct Criterion {
  int id;
  const char* name;
  double time_limit;  // seconds, 0 for none
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "eigensolver accuracy", 30.0, eigensolver_accuracy},
      {2, "Cheeger sandwich", 60.0, cheeger_sandwich},
      {3, "objective identity", 0.0, objective_identity},
      {4, "evaluation-count law", 0.0, evaluation_count},
      {5, "surrogate fidelity", 0.0, surrogate_fidelity},
      {6, "optimizer convergence", 0.0, optimizer_convergence},
      {7, "near-global weights", 0.0, near_global},
      {8, "integration benefit", 60.0, integration_benefit},
      {9, "degenerate inputs", 0.0, degenerate_inputs},
      {10, "serial determinism", 0.0, determinism},
  };
  std::vector<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));

  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  int failed = 0;
  for (const auto& c : all) {
    if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
    const auto t0 = clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(clock::now() - t0).count();
    if (c.time_limit > 0.0 && secs >= c.time_limit) {
      o.pass = false;
      o.detail += fmt("; exceeded %.0f s", c.time_limit);
    }
    if (!o.pass) ++failed;
    std::printf("%s %2d %-22s %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  const double total = std::chrono::duration<double>(clock::now() - start).count();
  std::printf("total %.1f s, %d failed\n", total, failed);
  return failed == 0 ? 0 : 1;
}
