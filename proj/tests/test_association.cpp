#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "skilldiag/association.hpp"
#include "skilldiag/error.hpp"
#include "skilldiag/warnings.hpp"

using namespace skilldiag;

namespace {

Tensor identity_matrix(std::size_t n) {
  std::vector<double> v(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) v[i * n + i] = 1.0;
  return Tensor::matrix(n, n, std::move(v));
}

AttentionParams identity_attention(std::size_t d_z) {
  return {identity_matrix(d_z), identity_matrix(d_z), identity_matrix(d_z)};
}

}  // namespace

TEST_CASE("single-level attention with identity projections is the identity") {
  Tensor z = Tensor::matrix(3, 4, {0.5, -1, 2, 0, 1, 1, -2, 3, 0.25, 0, 0, -1});
  auto out = level_attention({z}, identity_attention(4));
  REQUIRE(out.size() == 1);
  CHECK(out[0].values() == z.values());  // bitwise
}

TEST_CASE("identical prototypes attend uniformly onto the common vector") {
  Tensor z = Tensor::matrix(2, 3, {1.0, -0.5, 2.0, 0.0, 0.75, -1.0});
  auto out = level_attention({z, z, z}, identity_attention(3));
  REQUIRE(out.size() == 3);
  for (const auto& level : out) {
    for (std::size_t i = 0; i < z.size(); ++i) {
      CHECK(level.values()[i] == doctest::Approx(z.values()[i]).epsilon(1e-12));
    }
  }
}

TEST_CASE("two-level attention matches the hand-evaluated softmax mix") {
  // Orthonormal prototypes make the scores trivial to evaluate by hand.
  Tensor z1 = Tensor::matrix(1, 2, {1.0, 0.0});
  Tensor z2 = Tensor::matrix(1, 2, {0.0, 1.0});
  auto out = level_attention({z1, z2}, identity_attention(2));

  const double s = 1.0 / std::sqrt(2.0);
  const double w_self = std::exp(s) / (std::exp(s) + 1.0);
  const double w_other = 1.0 - w_self;
  CHECK(out[0].at(0, 0) == doctest::Approx(w_self).epsilon(1e-12));
  CHECK(out[0].at(0, 1) == doctest::Approx(w_other).epsilon(1e-12));
  CHECK(out[1].at(0, 0) == doctest::Approx(w_other).epsilon(1e-12));
  CHECK(out[1].at(0, 1) == doctest::Approx(w_self).epsilon(1e-12));
}

TEST_CASE("attention weights per query sum to one") {
  // With all-ones values and an identity value projection, every output
  // component equals the weight sum of its query row.
  Rng rng(21);
  std::vector<Tensor> keys;
  std::vector<Tensor> values;
  for (int l = 0; l < 4; ++l) {
    keys.push_back(xavier_init(5, 6, rng, false));
    values.push_back(Tensor::full({5, 6}, 1.0));
  }
  AttentionParams params{xavier_init(6, 6, rng, false),
                         xavier_init(6, 6, rng, false), identity_matrix(6)};
  auto out = level_attention(keys, values, params);
  for (const auto& level : out) {
    for (double v : level.values()) CHECK(std::fabs(v - 1.0) <= 1e-9);
  }
}

TEST_CASE("noise radius zero returns the input unchanged") {
  Rng rng(1);
  Tensor z = Tensor::matrix(2, 3, {1, -2, 3, -4, 5, -6});
  Tensor out = augment_noise(z, 0.0, rng);
  CHECK(out.values() == z.values());
}

TEST_CASE("noise has the requested norm and shares the prototype signs") {
  Rng rng(2);
  for (int round = 0; round < 20; ++round) {
    std::vector<double> zv(6);
    for (double& v : zv) v = rng.uniform(-2.0, 2.0);
    Tensor z = Tensor::vector(zv);
    Tensor out = augment_noise(z, 0.1, rng);
    double norm_sq = 0.0;
    for (std::size_t i = 0; i < zv.size(); ++i) {
      const double delta = out.values()[i] - zv[i];
      norm_sq += delta * delta;
      if (delta != 0.0) CHECK(delta * zv[i] > 0.0);  // sign-aligned
      if (zv[i] == 0.0) CHECK(delta == 0.0);
    }
    CHECK(std::fabs(std::sqrt(norm_sq) - 0.1) <= 1e-9);
  }
}

TEST_CASE("an all-zero prototype cannot satisfy the norm constraint") {
  warnings::reset();
  Rng rng(3);
  Tensor z = Tensor::matrix(2, 3, {0, 0, 0, 1, 2, 3});
  Tensor out = augment_noise(z, 0.5, rng);
  for (int j = 0; j < 3; ++j) CHECK(out.at(0, j) == 0.0);
  CHECK(warnings::count("noise_zero_prototype") == 1);
  warnings::reset();
}

TEST_CASE("single-level contrastive loss is exactly zero") {
  Rng rng(4);
  Tensor z = Tensor::matrix(3, 5, std::vector<double>(15, 0.7));
  Tensor loss = level_contrastive_loss({z}, {0.2, 0.1, false}, rng);
  CHECK(loss.item() == 0.0);
}

TEST_CASE("equal similarities across two levels give log 2 per entity") {
  // With radius 0 both levels score cosine(x,x), so the softmax is uniform.
  Rng rng(5);
  Tensor z1 = Tensor::matrix(1, 4, {0.3, -1.2, 0.8, 2.0});
  Tensor z2 = Tensor::matrix(1, 4, {-0.5, 0.4, 1.5, -0.9});
  Tensor loss = level_contrastive_loss({z1, z2}, {0.2, 0.0, false}, rng);
  CHECK(std::fabs(loss.item() - std::log(2.0)) <= 1e-9);
}

TEST_CASE("cosine similarity of a vector with itself is one") {
  Rng rng(6);
  std::vector<double> v(7);
  for (double& x : v) x = rng.uniform(-3.0, 3.0);
  Tensor m = Tensor::matrix(1, 7, v);
  Tensor sim = cosine_rows(m, m);
  CHECK(std::fabs(sim.values()[0] - 1.0) <= 1e-12);
}

TEST_CASE("cosine similarity is scale-invariant") {
  Rng rng(7);
  std::vector<double> av(5), bv(5);
  for (double& x : av) x = rng.uniform(-1.0, 1.0);
  for (double& x : bv) x = rng.uniform(-1.0, 1.0);
  Tensor a = Tensor::matrix(1, 5, av);
  Tensor b = Tensor::matrix(1, 5, bv);
  const double base = cosine_rows(a, b).values()[0];
  const double scaled =
      cosine_rows(scale(a, 4.2), scale(b, 0.037)).values()[0];
  CHECK(std::fabs(base - scaled) <= 1e-10);
}

TEST_CASE("zero-norm cosine rows warn and score zero") {
  warnings::reset();
  Tensor a = Tensor::matrix(1, 3, {0, 0, 0});
  Tensor b = Tensor::matrix(1, 3, {1, 2, 3});
  CHECK(cosine_rows(a, b).values()[0] == 0.0);
  CHECK(warnings::count("cosine_zero_norm") == 1);
  warnings::reset();
}

TEST_CASE("contrastive loss respects the softmax bound") {
  Rng rng(8);
  for (int round = 0; round < 10; ++round) {
    const std::size_t batch = 1 + rng.index(6);
    const std::size_t levels = 1 + rng.index(4);
    const double tau = 0.2;
    std::vector<Tensor> enhanced;
    for (std::size_t l = 0; l < levels; ++l) {
      std::vector<double> v(batch * 5);
      for (double& x : v) x = rng.uniform(-1.5, 1.5);
      enhanced.push_back(Tensor::matrix(batch, 5, std::move(v)));
    }
    Tensor loss = level_contrastive_loss(enhanced, {tau, 0.1, false}, rng);
    CHECK(loss.item() >= 0.0);
    const double bound = static_cast<double>(batch) *
                         (std::log(static_cast<double>(levels)) + 2.0 / tau);
    CHECK(loss.item() <= bound);
  }
}

TEST_CASE("double-noise mode contrasts two perturbed views") {
  Rng a(11), b(11);
  Tensor z = Tensor::matrix(2, 4, {0.5, 1.0, -0.5, 2.0, 1.5, -1.0, 0.3, 0.7});
  Tensor single = level_contrastive_loss({z, z}, {0.2, 0.2, false}, a);
  Tensor doubled = level_contrastive_loss({z, z}, {0.2, 0.2, true}, b);
  CHECK(std::isfinite(single.item()));
  CHECK(std::isfinite(doubled.item()));
  CHECK(single.item() != doubled.item());  // different view structure
}

TEST_CASE("combined loss adds the two sides") {
  Tensor zero = Tensor::scalar(0.0);
  CHECK(combined_cl_loss(zero, zero).item() == 0.0);
  Tensor a = Tensor::scalar(0.75);
  Tensor b = Tensor::scalar(1.5);
  CHECK(combined_cl_loss(a, b).item() == doctest::Approx(2.25));
}

TEST_CASE("contrastive loss rejects a non-positive temperature") {
  Rng rng(12);
  Tensor z = Tensor::matrix(1, 3, {1, 2, 3});
  CHECK_THROWS_AS(level_contrastive_loss({z}, {0.0, 0.1, false}, rng),
                  ContractError);
}

TEST_CASE("noise augmentation is deterministic per seed") {
  Tensor z = Tensor::matrix(2, 3, {1, -1, 2, 3, -2, 0.5});
  Rng a(42), b(42);
  CHECK(augment_noise(z, 0.3, a).values() ==
        augment_noise(z, 0.3, b).values());
}
