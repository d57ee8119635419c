#include <sstream>

#include "doctest.h"
#include "ugraphon/error.hpp"
#include "ugraphon/fixtures.hpp"
#include "ugraphon/sampling.hpp"

using namespace ugraphon;

TEST_CASE("grid sizes and node ranges") {
  const Graphon g = make_fixture("example-abc");
  const SampleGrid grid = build_grid(g.tree(), 10);
  CHECK(grid.base == 14);
  CHECK(grid.n == 140);
  CHECK(grid.points[7] == doctest::Approx(7.0 / 140.0));
  const auto [lo, hi] = grid.range(g.tree(), *g.tree().find("C"));
  CHECK(hi - lo == 60);
  CHECK(hi == 140);
  for (std::size_t i = 0; i < grid.n; ++i) {
    CHECK(g.tree().node(grid.finest_assignment[i]).contains(grid.points[i]));
  }
}

TEST_CASE("deterministic sample reads the graphon at grid points") {
  const Graphon g = make_fixture("three-level");
  const SampleGrid grid = build_grid(g.tree(), 3);
  const SampledGraph s = sample_deterministic(g, grid);
  const auto n = static_cast<Eigen::Index>(grid.n);
  for (Eigen::Index i = 0; i < n; ++i) {
    CHECK(s.adjacency(i, i) == 0.0);
    CHECK(s.laplacian.row(i).sum() == doctest::Approx(0.0).epsilon(1e-12));
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i != j) CHECK(s.adjacency(i, j) == evaluate(g, grid.points[i], grid.points[j]));
    }
  }
  SamplingOptions clique;
  clique.clique_atoms = true;
  const SampledGraph c = sample_deterministic(g, grid, clique);
  CHECK(c.adjacency(0, 1) == 1.0);
  CHECK(c.adjacency(0, 0) == 0.0);
}

TEST_CASE("random samples are symmetric, binary and seed-reproducible") {
  const Graphon g = make_fixture("example-abc");
  const SampleGrid grid = build_grid(g.tree(), 5);
  const SampledGraph a = sample_random(g, grid, 11);
  const SampledGraph b = sample_random(g, grid, 11);
  const SampledGraph c = sample_random(g, grid, 12);
  CHECK(a.adjacency == b.adjacency);
  CHECK(a.adjacency != c.adjacency);
  CHECK(a.adjacency == a.adjacency.transpose());
  CHECK((a.adjacency.array() * (1.0 - a.adjacency.array())).abs().maxCoeff() == 0.0);
  CHECK(a.adjacency.diagonal().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("edge density tracks the graphon") {
  const Graphon g = make_fixture("two-block");
  const SampleGrid grid = build_grid(g.tree(), 300);
  const SampledGraph s = sample_random(g, grid, 5);
  const DegreeStats d = degree_stats(s.adjacency);
  // Expected degree 600 * (0.5 * 0.8 + 0.5 * 0.1) minus the self term.
  CHECK(d.mean_degree == doctest::Approx(600 * 0.45 - 0.8).epsilon(0.01));
}

TEST_CASE("coupled draws make samples monotone in the budget") {
  const Graphon g = make_fixture("sis-heterogeneous");
  const SampleGrid grid = build_grid(g.tree(), 1);
  Eigen::MatrixXd prev = sample_random(g, grid, 3).adjacency;
  for (int i = 1; i <= 5; ++i) {
    const Graphon gi = apply_intervention(g, GlobalAtLevel{1}, 0.19 * i);
    const Eigen::MatrixXd a = sample_random(gi, grid, 3).adjacency;
    CHECK((a - prev).maxCoeff() <= 0.0);
    prev = a;
  }
}

TEST_CASE("counter uniforms") {
  CHECK(counter_uniform(1, 2, 3) == counter_uniform(1, 2, 3));
  CHECK(counter_uniform(1, 2, 3) != counter_uniform(2, 2, 3));
  double sum = 0.0;
  for (std::size_t i = 0; i < 10000; ++i) {
    const double u = counter_uniform(9, i, i + 1);
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    sum += u;
  }
  CHECK(sum / 10000 == doctest::Approx(0.5).epsilon(0.02));
}

TEST_CASE("vertex cap") {
  const Graphon g = make_fixture("two-block");
  SamplingOptions opts;
  opts.max_vertices = 100;
  CHECK_THROWS(sample_deterministic(g, build_grid(g.tree(), 60), opts));
}

TEST_CASE("csv writers") {
  Eigen::MatrixXd a(2, 2);
  a << 0, 0.5, 0.5, 0;
  std::ostringstream triples, dense;
  write_triples_csv(triples, a);
  write_dense_csv(dense, a);
  CHECK(triples.str() == "i,j,value\n0,1,0.5\n");
  CHECK(dense.str() == "0,0.5\n0.5,0\n");
}
