#include <algorithm>
#include <random>

#include "confext/errors.hpp"
#include "confext/rearrangement.hpp"
#include "doctest.h"

using namespace confext;

namespace {

DiscretizedFunction random_step(int dim, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> len(1, dim == 1 ? 40 : 6);
  std::uniform_int_distribution<int> shift(-10, 10);
  std::exponential_distribution<double> val(1.0);
  std::bernoulli_distribution zero(0.2);
  if (dim == 1) {
    std::vector<double> v(len(rng));
    for (double& x : v) x = zero(rng) ? 0.0 : val(rng);
    return DiscretizedFunction::on_interval(shift(rng), v, 0.5);
  }
  const int nx = len(rng), ny = len(rng);
  std::vector<double> v(nx * ny);
  for (double& x : v) x = zero(rng) ? 0.0 : val(rng);
  return DiscretizedFunction::on_grid(shift(rng), shift(rng), nx, ny, v, 0.5);
}

}  // namespace

TEST_SUITE("rearrangement") {

TEST_CASE("centered cells in one dimension") {
  const auto c = centered_cells(1, 5);
  const int expect[] = {0, -1, 1, -2, 2};
  for (int i = 0; i < 5; ++i) CHECK(c[i][0] == expect[i]);
}

TEST_CASE("rearrangement is equimeasurable and symmetric decreasing") {
  std::mt19937_64 rng(17);
  for (int dim : {1, 2}) {
    for (int trial = 0; trial < 50; ++trial) {
      const DiscretizedFunction f = random_step(dim, rng);
      const DiscretizedFunction g = rearrange(f);
      for (double t : {0.0, 0.1, 0.5, 1.0, 2.0}) CHECK(level_set_measure(g, t) == level_set_measure(f, t));
      for (double p : {1.0, 2.0, 3.5}) CHECK(lp_norm(g, p) == doctest::Approx(lp_norm(f, p)).epsilon(1e-14));
      CHECK(std::is_sorted(g.values.rbegin(), g.values.rend()));
    }
  }
}

TEST_CASE("negative values are rejected") {
  CHECK_THROWS_AS(rearrange(DiscretizedFunction::on_interval(0, {1.0, -0.5})), DomainError);
}

TEST_CASE("Riesz comparison for the extension kernel") {
  std::mt19937_64 rng(29);
  for (auto [n, a] : {std::pair{2, 0.5}, std::pair{2, 0.0}, std::pair{3, -0.5}}) {
    const KernelParams params(n, a);
    for (int trial = 0; trial < 10; ++trial) {
      const DiscretizedFunction f = random_step(n - 1, rng);
      const RieszCheck r = riesz_convolution_check(f, 0.7, params, 2.0 * n / params.eps());
      CHECK(r.holds());
    }
  }
}

TEST_CASE("symmetric decreasing data is its own rearrangement") {
  const KernelParams params(2, 0.5);
  const DiscretizedFunction f = DiscretizedFunction::on_interval(-2, {0.5, 1.5, 3.0, 1.5, 0.5});
  const RieszCheck r = riesz_convolution_check(f, 1.3, params, 4.0);
  CHECK(r.lhs == doctest::Approx(r.rhs).epsilon(1e-12));
}

}
