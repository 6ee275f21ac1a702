#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "skilldiag/base_embed.hpp"
#include "skilldiag/error.hpp"
#include "skilldiag/grad_check.hpp"
#include "skilldiag/graph.hpp"

using namespace skilldiag;

namespace {

Tensor identity_matrix(std::size_t n) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  return Tensor::matrix(n, n, std::move(v));
}

EmbeddingTable random_tables(int n, int m, int d, std::uint64_t seed) {
  Rng rng(seed);
  EmbeddingTable t;
  t.candidates = xavier_init(n, d, rng);
  t.jobs = xavier_init(m, d, rng);
  return t;
}

}  // namespace

TEST_CASE("mf lookup returns identical rows for identical ids") {
  EmbeddingTable t = random_tables(4, 3, 5, 1);
  PropagatedTables p = embed_mf(t);
  Tensor a = rows(p.candidates, {2});
  Tensor b = rows(p.candidates, {2});
  CHECK(a.values() == b.values());
  CHECK(p.width == 5);
}

TEST_CASE("mf gradients touch only looked-up rows") {
  EmbeddingTable t = random_tables(4, 3, 2, 2);
  Tensor batch = rows(t.candidates, {1, 1});
  Tensor loss = sum(batch);
  loss.backward();
  const auto& g = t.candidates.grad();
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 2; ++c) {
      CHECK(g[r * 2 + c] == (r == 1 ? 2.0 : 0.0));  // row used twice
    }
  }
}

TEST_CASE("degenerate single-entity tables work") {
  EmbeddingTable t = random_tables(1, 1, 3, 3);
  PropagatedTables p = embed_mf(t);
  CHECK(rows(p.candidates, {0}).size() == 3);
  CHECK_THROWS_AS(rows(p.candidates, {1}), LookupError);
}

TEST_CASE("graph built from match-only records has exactly the match edges") {
  std::vector<InteractionRecord> records{
      {0, 0, kMatch},  {0, 1, kBrowse}, {1, 1, kChat},  {1, 0, kClick},
      {2, 2, kBrowse}, {0, 2, kClick},  {1, 2, kBrowse}, {2, 0, kBrowse},
      {2, 1, kClick},  {0, 0, kBrowse},
  };
  std::vector<Split> splits(records.size(), Split::kTrain);
  InteractionDataset dataset(records, splits, 3, 3);

  BipartiteGraph match_graph =
      BipartiteGraph::build(dataset, EdgeRule::kMatchOnly);
  CHECK(match_graph.num_edges() == 1);
  CHECK(match_graph.candidate_neighbors(0) == std::vector<int>{0});
  CHECK(match_graph.candidate_degree(1) == 0);

  BipartiteGraph all_graph =
      BipartiteGraph::build(dataset, EdgeRule::kAllBehaviors);
  CHECK(all_graph.num_edges() >= match_graph.num_edges());
  // Degrees equal neighbor-list lengths.
  for (int u = 0; u < 3; ++u) {
    CHECK(all_graph.candidate_degree(u) ==
          static_cast<int>(all_graph.candidate_neighbors(u).size()));
  }
  // Symmetric: each edge appears in both directions.
  for (int u = 0; u < 3; ++u) {
    for (int v : all_graph.candidate_neighbors(u)) {
      const auto& back = all_graph.job_neighbors(v);
      CHECK(std::find(back.begin(), back.end(), u) != back.end());
    }
  }
}

TEST_CASE("graph edges come from the train split only") {
  std::vector<InteractionRecord> records(10, {0, 0, kMatch});
  records[3] = {1, 1, kMatch};
  std::vector<Split> splits(10, Split::kTest);
  splits[3] = Split::kTrain;
  InteractionDataset dataset(records, splits, 2, 2);
  BipartiteGraph g = BipartiteGraph::build(dataset, EdgeRule::kMatchOnly);
  CHECK(g.num_edges() == 1);
  CHECK(g.candidate_degree(0) == 0);
}

TEST_CASE("ngcf single edge with identity transforms adds the neighbor") {
  BipartiteGraph g(1, 1);
  g.add_edge(0, 0);
  g.finalize();
  EmbeddingTable t;
  t.candidates = Tensor::matrix(1, 3, {1.0, 2.0, 3.0});
  t.jobs = Tensor::matrix(1, 3, {0.5, -1.0, 2.0});
  NgcfParams params;
  params.w1 = {identity_matrix(3)};
  params.w2 = {Tensor::zeros({3, 3})};
  PropagatedTables p =
      propagate_ngcf(g, t, params, Activation::kIdentity, 0.2);
  CHECK(p.width == 6);  // layers 0 and 1 concatenated
  // Layer-0 block is the raw embedding.
  CHECK(p.candidates.at(0, 0) == 1.0);
  CHECK(p.candidates.at(0, 1) == 2.0);
  CHECK(p.candidates.at(0, 2) == 3.0);
  // Layer-1 block: self + neighbor (degrees are 1).
  CHECK(p.candidates.at(0, 3) == doctest::Approx(1.5));
  CHECK(p.candidates.at(0, 4) == doctest::Approx(1.0));
  CHECK(p.candidates.at(0, 5) == doctest::Approx(5.0));
  CHECK(p.jobs.at(0, 3) == doctest::Approx(1.5));
}

TEST_CASE("ngcf isolated node keeps only its transformed self message") {
  BipartiteGraph g(2, 1);
  g.add_edge(0, 0);
  g.finalize();
  EmbeddingTable t;
  t.candidates = Tensor::matrix(2, 2, {1.0, 2.0, -3.0, 4.0});
  t.jobs = Tensor::matrix(1, 2, {1.0, 1.0});
  Rng rng(4);
  NgcfParams params;
  params.w1 = {xavier_init(2, 2, rng, false)};
  params.w2 = {xavier_init(2, 2, rng, false)};
  PropagatedTables p = propagate_ngcf(g, t, params, Activation::kTanh, 0.2);
  // Candidate 1 is isolated: layer-1 block = tanh(self·W1).
  Tensor expected = tanh(matmul(Tensor::matrix(1, 2, {-3.0, 4.0}), params.w1[0]));
  CHECK(p.candidates.at(1, 2) == doctest::Approx(expected.at(0, 0)));
  CHECK(p.candidates.at(1, 3) == doctest::Approx(expected.at(0, 1)));
}

TEST_CASE("ngcf on an edgeless graph with identity weights repeats the input") {
  BipartiteGraph g(2, 2);
  g.finalize();
  EmbeddingTable t;
  t.candidates = Tensor::matrix(2, 2, {1.0, -2.0, 0.5, 3.0});
  t.jobs = Tensor::matrix(2, 2, {2.0, 2.0, -1.0, 0.0});
  NgcfParams params;
  params.w1 = {identity_matrix(2)};
  params.w2 = {Tensor::zeros({2, 2})};
  PropagatedTables p =
      propagate_ngcf(g, t, params, Activation::kIdentity, 0.2);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(p.candidates.at(i, j) == p.candidates.at(i, j + 2));
      CHECK(p.jobs.at(i, j) == p.jobs.at(i, j + 2));
    }
  }
}

TEST_CASE("ngcf output width grows with the layer count") {
  BipartiteGraph g(2, 2);
  g.add_edge(0, 0);
  g.add_edge(1, 1);
  g.finalize();
  EmbeddingTable t = random_tables(2, 2, 4, 9);
  Rng rng(10);
  NgcfParams params;
  for (int k = 0; k < 3; ++k) {
    params.w1.push_back(xavier_init(4, 4, rng, false));
    params.w2.push_back(xavier_init(4, 4, rng, false));
  }
  PropagatedTables p = propagate_ngcf(g, t, params, Activation::kLeakyRelu, 0.2);
  CHECK(p.width == 16);
  CHECK(p.candidates.cols() == 16);
  CHECK(p.jobs.cols() == 16);
}

TEST_CASE("lightgcn single edge averages the two endpoints") {
  BipartiteGraph g(1, 1);
  g.add_edge(0, 0);
  g.finalize();
  EmbeddingTable t;
  t.candidates = Tensor::matrix(1, 2, {2.0, 4.0});
  t.jobs = Tensor::matrix(1, 2, {-2.0, 0.0});
  PropagatedTables p = propagate_lightgcn(g, t, 1);
  CHECK(p.candidates.at(0, 0) == doctest::Approx(0.0));
  CHECK(p.candidates.at(0, 1) == doctest::Approx(2.0));
  CHECK(p.jobs.at(0, 0) == doctest::Approx(0.0));
  CHECK(p.jobs.at(0, 1) == doctest::Approx(2.0));
}

TEST_CASE("lightgcn with zero layers is the identity") {
  BipartiteGraph g(2, 2);
  g.add_edge(0, 1);
  g.finalize();
  EmbeddingTable t = random_tables(2, 2, 3, 12);
  PropagatedTables p = propagate_lightgcn(g, t, 0);
  CHECK(p.candidates.values() == t.candidates.values());
  CHECK(p.jobs.values() == t.jobs.values());
}

TEST_CASE("lightgcn isolated node sees only its own layer-0 embedding") {
  // With no neighbors the per-layer sums are empty (zero vectors), so the
  // layer mean reduces to the node's own embedding divided by layers+1.
  BipartiteGraph g(2, 1);
  g.add_edge(0, 0);
  g.finalize();
  EmbeddingTable t;
  t.candidates = Tensor::matrix(2, 2, {1.0, 1.0, 5.0, -3.0});
  t.jobs = Tensor::matrix(1, 2, {2.0, 2.0});
  PropagatedTables p = propagate_lightgcn(g, t, 2);
  CHECK(p.candidates.at(1, 0) == doctest::Approx(5.0 / 3.0));
  CHECK(p.candidates.at(1, 1) == doctest::Approx(-1.0));
}

TEST_CASE("lightgcn propagation is linear in the tables") {
  BipartiteGraph g(3, 3);
  g.add_edge(0, 0);
  g.add_edge(0, 1);
  g.add_edge(1, 1);
  g.add_edge(2, 2);
  g.finalize();
  EmbeddingTable t = random_tables(3, 3, 4, 20);
  PropagatedTables p1 = propagate_lightgcn(g, t, 2);

  const double alpha = 1.75;
  EmbeddingTable scaled;
  scaled.candidates = scale(t.candidates, alpha);
  scaled.jobs = scale(t.jobs, alpha);
  PropagatedTables p2 = propagate_lightgcn(g, scaled, 2);
  for (std::size_t i = 0; i < p1.candidates.size(); ++i) {
    CHECK(std::fabs(p2.candidates.values()[i] -
                    alpha * p1.candidates.values()[i]) <= 1e-10);
  }
}

TEST_CASE("symmetric graphs with tied embeddings propagate symmetrically") {
  // Two candidates and two jobs in a 2-cycle; candidate i and job i share
  // the same embedding, so swapping roles must not change the output.
  BipartiteGraph g(2, 2);
  g.add_edge(0, 0);
  g.add_edge(0, 1);
  g.add_edge(1, 0);
  g.add_edge(1, 1);
  g.finalize();
  std::vector<double> shared{0.3, -0.7, 1.1, 0.2, 0.9, -0.1};
  EmbeddingTable t;
  t.candidates = Tensor::matrix(2, 3, shared);
  t.jobs = Tensor::matrix(2, 3, shared);
  PropagatedTables p = propagate_lightgcn(g, t, 3);
  CHECK(p.candidates.values() == p.jobs.values());
}

TEST_CASE("gradients flow through propagation to the tables") {
  BipartiteGraph g(3, 4);
  g.add_edge(0, 0);
  g.add_edge(0, 2);
  g.add_edge(1, 1);
  g.add_edge(2, 3);
  g.add_edge(2, 0);
  g.finalize();
  Rng rng(33);
  EmbeddingTable t;
  t.candidates = xavier_init(3, 3, rng);
  t.jobs = xavier_init(4, 3, rng);
  NgcfParams params;
  params.w1 = {xavier_init(3, 3, rng), xavier_init(3, 3, rng)};
  params.w2 = {xavier_init(3, 3, rng), xavier_init(3, 3, rng)};

  ParameterMap param_map{{"C", t.candidates}, {"J", t.jobs},
                         {"w1.0", params.w1[0]}, {"w1.1", params.w1[1]},
                         {"w2.0", params.w2[0]}, {"w2.1", params.w2[1]}};
  SUBCASE("ngcf") {
    auto forward = [&]() {
      PropagatedTables p =
          propagate_ngcf(g, t, params, Activation::kTanh, 0.2);
      return add(mean(sigmoid(p.candidates)), mean(sigmoid(p.jobs)));
    };
    GradCheckReport report = finite_diff_check(param_map, forward, 1e-4);
    CHECK(report.pass);
  }
  SUBCASE("lightgcn") {
    ParameterMap tables_only{{"C", t.candidates}, {"J", t.jobs}};
    auto forward = [&]() {
      PropagatedTables p = propagate_lightgcn(g, t, 2);
      return add(mean(sigmoid(p.candidates)), mean(sigmoid(p.jobs)));
    };
    GradCheckReport report = finite_diff_check(tables_only, forward, 1e-4);
    CHECK(report.pass);
  }
}
