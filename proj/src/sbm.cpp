#include "sgla/sbm.hpp"

#include <algorithm>
#include <random>
#include <string>

#include <json.hpp>

#include "sgla/errors.hpp"

namespace sgla {
namespace {

using json = nlohmann::json;

// Community of every block as seen by one view: informative blocks keep
// their own id, the rest share id -1.
std::vector<int> view_communities(Index k, const std::vector<int>& informative) {
  std::vector<int> c(static_cast<std::size_t>(k), -1);
  for (int b : informative) c[b] = b;
  return c;
}

void check_blocks(const std::vector<int>& informative, Index k, const std::string& what) {
  for (int b : informative) {
    if (b < 0 || b >= k) throw InvalidArgument(what + ": block id " + std::to_string(b) + " out of range");
  }
}

std::vector<int> all_blocks(Index k) {
  std::vector<int> v(static_cast<std::size_t>(k));
  for (Index b = 0; b < k; ++b) v[b] = static_cast<int>(b);
  return v;
}

}  // namespace

void SbmSpec::validate() const {
  if (k < 1 || n < k) throw InvalidArgument("sbm needs 1 <= k <= n");
  if (graph_views.empty() && attribute_views.empty()) throw InvalidArgument("sbm needs at least one view");
  std::vector<std::vector<int>> seen;
  for (std::size_t i = 0; i < graph_views.size(); ++i) {
    const auto& g = graph_views[i];
    const std::string what = "graph view " + std::to_string(i);
    if (!(g.p_in >= 0.0 && g.p_in <= 1.0 && g.p_out >= 0.0 && g.p_out <= 1.0)) {
      throw InvalidArgument(what + ": probabilities must lie in [0, 1]");
    }
    check_blocks(g.informative, k, what);
    seen.push_back(view_communities(k, g.informative));
  }
  for (std::size_t i = 0; i < attribute_views.size(); ++i) {
    const auto& a = attribute_views[i];
    const std::string what = "attribute view " + std::to_string(i);
    if (a.dim < 1) throw InvalidArgument(what + ": dim must be >= 1");
    if (!(a.noise >= 0.0)) throw InvalidArgument(what + ": noise must be >= 0");
    if (a.knn_k && *a.knn_k < 1) throw InvalidArgument(what + ": knn_k must be >= 1");
    check_blocks(a.informative, k, what);
    seen.push_back(view_communities(k, a.informative));
  }
  for (Index a = 0; a < k; ++a) {
    for (Index b = a + 1; b < k; ++b) {
      const bool separated = std::any_of(seen.begin(), seen.end(), [&](const auto& c) { return c[a] != c[b]; });
      if (!separated) {
        throw InvalidArgument("blocks " + std::to_string(a) + " and " + std::to_string(b) +
                              " are not separated by any view");
      }
    }
  }
}

SbmSpec parse_sbm_spec(const std::string& json_text) {
  SbmSpec s;
  try {
    const json j = json::parse(json_text);
    s.name = j.value("name", s.name);
    s.n = j.at("n").get<Index>();
    s.k = j.at("k").get<Index>();
    s.seed = j.value("seed", s.seed);
    for (const auto& g : j.value("graph_views", json::array())) {
      SbmGraphViewSpec v;
      v.p_in = g.value("p_in", v.p_in);
      v.p_out = g.value("p_out", v.p_out);
      v.informative = g.contains("informative") ? g.at("informative").get<std::vector<int>>() : all_blocks(s.k);
      s.graph_views.push_back(std::move(v));
    }
    for (const auto& a : j.value("attribute_views", json::array())) {
      SbmAttributeViewSpec v;
      v.dim = a.value("dim", v.dim);
      v.noise = a.value("noise", v.noise);
      v.informative = a.contains("informative") ? a.at("informative").get<std::vector<int>>() : all_blocks(s.k);
      if (a.contains("knn_k")) v.knn_k = a.at("knn_k").get<int>();
      s.attribute_views.push_back(std::move(v));
    }
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("bad sbm spec: ") + e.what());
  }
  s.validate();
  return s;
}

MvagDataset generate_sbm(const SbmSpec& spec) {
  spec.validate();
  const Index n = spec.n;
  const Index k = spec.k;
  std::vector<int> block(static_cast<std::size_t>(n));
  for (Index a = 0; a < n; ++a) {
    block[a] = static_cast<int>(static_cast<std::int64_t>(a) * k / n);
  }

  MvagDataset ds;
  ds.name = spec.name;
  ds.n = n;
  ds.k = k;
  ds.labels = block;

  std::mt19937_64 rng(spec.seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  for (const auto& g : spec.graph_views) {
    const std::vector<int> comm = view_communities(k, g.informative);
    std::vector<Triplet> t;
    for (Index a = 0; a < n; ++a) {
      for (Index b = a + 1; b < n; ++b) {
        const double p = comm[block[a]] == comm[block[b]] ? g.p_in : g.p_out;
        if (unif(rng) < p) {
          t.push_back({a, b, 1.0});
          t.push_back({b, a, 1.0});
        }
      }
    }
    ds.graph_views.push_back({SparseSymMatrix::from_triplets(n, std::move(t))});
  }

  for (const auto& spec_a : spec.attribute_views) {
    const std::vector<int> comm = view_communities(k, spec_a.informative);
    // Row k of `means` holds the merged community's mean.
    std::vector<double> means(static_cast<std::size_t>(k + 1) * spec_a.dim);
    for (auto& m : means) m = normal(rng);
    AttributeView x;
    x.n = n;
    x.d = spec_a.dim;
    x.values.resize(static_cast<std::size_t>(n) * spec_a.dim);
    for (Index a = 0; a < n; ++a) {
      const int c = comm[block[a]] < 0 ? static_cast<int>(k) : comm[block[a]];
      for (int f = 0; f < spec_a.dim; ++f) {
        x.values[static_cast<std::size_t>(a) * spec_a.dim + f] =
            means[static_cast<std::size_t>(c) * spec_a.dim + f] + spec_a.noise * normal(rng);
      }
    }
    if (spec_a.knn_k) x.knn_k = *spec_a.knn_k;
    ds.attribute_views.push_back(std::move(x));
  }
  ds.validate();
  return ds;
}

}  // namespace sgla
