// Small worked cases: constant graphons, complete graphs and the shipped fixtures.
#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "ugraphon/config.hpp"
#include "ugraphon/fixtures.hpp"
#include "ugraphon/linalg.hpp"
#include "ugraphon/randomwalk.hpp"
#include "ugraphon/sampling.hpp"
#include "ugraphon/sis.hpp"
#include "ugraphon/spectral.hpp"

using namespace ugraphon;
namespace fs = std::filesystem;

namespace {

Graphon constant_two_block(double w) {
  auto tree = std::make_shared<const UltrametricTree>(
      NodeSpec{0, 1, 1.0, "root", {{0, Rational(1, 2), 0.5, "left", {}}, {Rational(1, 2), 1, 0.5, "right", {}}}});
  return Graphon(tree, Kernel::level_table({{1, w}, {2, w}}));
}

Graphon single_interval(double p) {
  auto tree = std::make_shared<const UltrametricTree>(NodeSpec{0, 1, 1.0, "root", {}});
  return Graphon(tree, Kernel::level_table({{1, p}}));
}

}  // namespace

TEST_CASE("tree examples") {
  const Graphon two = make_fixture("two-block");
  const auto& t = two.tree();
  CHECK(t.lca(0.1, 0.3).label == "left");
  CHECK(t.lca(0.1, 0.9).label == "root");
  CHECK(t.distance(0.1, 0.9) == 1.0);
  CHECK(t.distance(0.3, 0.3) == 0.0);
  CHECK(t.ancestry_chain(t.root().id).size() == 1);

  const Graphon abc = make_fixture("example-abc");
  const auto& a = abc.tree();
  const NodeId a1a = *a.find("A1a");
  const double x = to_double(a.node(a1a).lo) + 0.01, y = to_double(a.node(*a.find("A1b")).lo) + 0.01;
  CHECK(a.lca(x, y).label == "A1");
  std::vector<std::string> labels;
  for (NodeId id : a.ancestry_chain(a1a)) labels.push_back(a.node(id).label);
  CHECK(labels == std::vector<std::string>{"root", "A", "A1", "A1a"});
  const double z = x + 0.02;
  CHECK(a.distance(x, z) == 0.01);
  CHECK(evaluate(abc, x, z) == doctest::Approx(0.904837).epsilon(1e-6));
  CHECK(evaluate(abc, x, x) == 1.0);
  CHECK(evaluate(two, 0.1, 0.9) == 0.1);
}

TEST_CASE("near-balanced splits at large concentration") {
  const UltrametricTree t = random_binary_tree(3, 1e6, 4, 100000);
  for (const auto& node : t.nodes()) {
    if (node.is_finest()) continue;
    const double frac = to_double(t.node(node.children[0]).length() / node.length());
    CHECK(std::abs(frac - 0.5) < 1e-2);
  }
}

TEST_CASE("uniform kernels") {
  const Graphon g = single_interval(0.3);
  CHECK(nu_value(g, g.tree().root().id) == doctest::Approx(0.3));
  const SampleGrid grid = build_grid(g.tree(), 8);
  const auto s = closed_form_spectrum(g, grid).expanded();
  CHECK(s[0] == doctest::Approx(0.0));
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] == doctest::Approx(-8 * 0.3));

  const Graphon c = single_interval(1.0);
  SamplingOptions clique;
  clique.clique_atoms = true;
  const PseudoInverse p = closed_form_pseudo_inverse(c, grid);
  const Eigen::MatrixXd expected =
      -(Eigen::MatrixXd::Identity(8, 8) - Eigen::MatrixXd::Constant(8, 8, 1.0 / 8)) / 8.0;
  CHECK((p.matrix - expected).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((p.matrix - pseudo_inverse(sample_deterministic(c, grid, clique).laplacian).matrix).cwiseAbs().maxCoeff() <
        1e-12);
}

TEST_CASE("constant graphons give complete and empty graphs") {
  const Graphon one = constant_two_block(1.0);
  const SampleGrid grid = build_grid(one.tree(), 3);
  const Eigen::MatrixXd complete = Eigen::MatrixXd::Ones(6, 6) - Eigen::MatrixXd::Identity(6, 6);
  CHECK(sample_deterministic(one, grid).adjacency == complete);
  CHECK(sample_random(one, grid, 4).adjacency == complete);
  const DegreeStats d = degree_stats(complete);
  CHECK(d.max_degree == 5.0);
  CHECK(d.mean_degree == 5.0);
  const Graphon zero = constant_two_block(0.0);
  CHECK(sample_random(zero, grid, 4).adjacency.cwiseAbs().maxCoeff() == 0.0);

  // The unique nonzero eigenvalue of K_n is simple up to multiplicity n - 1 and
  // its eigenprojector is I - J/n.
  const auto eig = empirical_spectrum(laplacian_of(complete));
  const Eigen::MatrixXd proj = empirical_projector(eig, 1, 5);
  CHECK((proj - (Eigen::MatrixXd::Identity(6, 6) - Eigen::MatrixXd::Constant(6, 6, 1.0 / 6))).cwiseAbs().maxCoeff() <
        1e-12);
  const PairingReport r = pairing_experiment(one, {3}, {1, 2});
  CHECK(r.per_k[0].median_max_error == doctest::Approx(0.0).scale(1.0));
}

TEST_CASE("two-block sampled matrices") {
  const Graphon g = make_fixture("two-block");
  const SampleGrid g4 = build_grid(g.tree(), 2);
  CHECK(g4.n == 4);
  CHECK(g4.count(g.tree(), *g.tree().find("left")) == 2);
  const SampledGraph det = sample_deterministic(g, g4);
  Eigen::MatrixXd expected(4, 4);
  expected << 0, .8, .1, .1, .8, 0, .1, .1, .1, .1, 0, .8, .1, .1, .8, 0;
  CHECK((det.adjacency - expected).cwiseAbs().maxCoeff() < 1e-15);
  for (double deg : degree_stats(det.adjacency).degrees) CHECK(deg == doctest::Approx(1.0));
  CHECK(det.laplacian.trace() == doctest::Approx(-expected.sum()));
  const auto s = closed_form_spectrum(g, g4).expanded();
  CHECK(s[0] + s[1] + s[2] + s[3] == doctest::Approx(det.laplacian.trace()));
  const Eigen::MatrixXd e = closed_form_projector(g.tree(), g4, g.tree().root().id);
  CHECK(e(0, 1) == doctest::Approx(0.25));
  CHECK(e(0, 2) == doctest::Approx(-0.25));
  CHECK(e.trace() == doctest::Approx(1.0));

  // Grid refinement doubles every count.
  const SampleGrid g8 = build_grid(g.tree(), 4);
  for (const auto& node : g.tree().nodes()) CHECK(g8.count(g.tree(), node.id) == 2 * g4.count(g.tree(), node.id));

  // Cross-block density at N_k = 400.
  const SampleGrid g400 = build_grid(g.tree(), 200);
  const Eigen::MatrixXd a = sample_random(g, g400, 17).adjacency;
  const double cross = a.block(0, 200, 200, 200).mean();
  CHECK(std::abs(cross - 0.1) < 3.0 * std::sqrt(0.1 * 0.9 / 40000.0));
}

TEST_CASE("mean degree density approaches sum mu nu") {
  const Graphon g = make_fixture("three-level");
  const SampleGrid grid = build_grid(g.tree(), 117);  // N_k = 1404
  std::vector<double> means;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    means.push_back(degree_stats(sample_random(g, grid, seed).adjacency).mean_degree / static_cast<double>(grid.n));
  }
  CHECK(std::abs(median(means) - nu_summary(g).first) < 0.02);
}

TEST_CASE("two-block pairing error at N_k = 400") {
  const Graphon g = make_fixture("two-block");
  const PairingReport r = pairing_experiment(g, {200}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
  // Golden value 0.0624 (10 seeds) with 50% slack.
  CHECK(r.per_k[0].median_max_error < 0.0624 * 1.5);
}

TEST_CASE("projector estimates at N_k = 140 and 1400") {
  const Graphon g = make_fixture("example-abc");
  const NodeId root = g.tree().root().id;
  std::vector<double> small, large;
  int within_bound = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    small.push_back(projector_experiment(g, root, 10, seed).frobenius_error);
    const ProjectorResult r = projector_experiment(g, root, 100, seed);
    large.push_back(r.frobenius_error);
    within_bound += r.frobenius_error <= r.bound ? 1 : 0;
  }
  CHECK(large[0] < 0.15);
  CHECK(median(large) < median(small));
  CHECK(within_bound >= 9);
}

TEST_CASE("threshold examples") {
  const Graphon g = make_fixture("fig9-threshold");
  const auto r = detectability_threshold(g, 10);
  CHECK(r.p_star == doctest::Approx(0.135).epsilon(0.005));
  CHECK(v_root_eigencheck(g, build_grid(g.tree(), 2)).dimension == 2);

  const Graphon blocks = Graphon::one_level(
      g.tree_ptr(), g.kernel(),
      {{IntraKernelSpec::Type::Constant, 0.3}, {IntraKernelSpec::Type::Constant, 0.5}, {IntraKernelSpec::Type::Constant, 0.7}},
      0.05);
  for (int k : {1, 3, 7}) {
    const auto t = detectability_threshold(blocks, k);
    CHECK(t.rho[0] == doctest::Approx(0.3));
    CHECK(t.rho[1] == doctest::Approx(0.5));
    CHECK(t.rho[2] == doctest::Approx(0.7));
  }
  const auto above = detectability_threshold(
      Graphon::one_level(g.tree_ptr(), g.kernel(), blocks.intra_specs(), 0.4), 4);
  CHECK(above.fiedler_support == FiedlerSupport::SingleChild);
  CHECK(above.support_child == std::optional<std::size_t>{0});

  // Two equal children: the +1/-1 vector has eigenvalue -w N_k.
  const Graphon two = make_fixture("two-block");
  const Graphon split = Graphon::one_level(two.tree_ptr(), two.kernel(), {{IntraKernelSpec::Type::Constant, 0.6}}, 0.2);
  const SampleGrid grid = build_grid(split.tree(), 5);
  const Eigen::MatrixXd l = sample_deterministic(split, grid).laplacian;
  Eigen::VectorXd f(10);
  f << 1, 1, 1, 1, 1, -1, -1, -1, -1, -1;
  CHECK((l * f + 0.2 * 10 * f).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("Cheeger examples") {
  Eigen::MatrixXd k2(2, 2);
  k2 << 0, 1, 1, 0;
  const auto r2 = cheeger_bounds(k2);
  CHECK(r2.phi == doctest::Approx(1.0));
  CHECK(r2.lambda2 == doctest::Approx(2.0));
  CHECK(r2.lower == doctest::Approx(0.5));
  CHECK(r2.upper == doctest::Approx(2.0));
  Eigen::MatrixXd bowtie = Eigen::MatrixXd::Zero(6, 6);
  for (auto [i, j] : std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}, {2, 3}}) {
    bowtie(i, j) = bowtie(j, i) = 1.0;
  }
  const auto rb = cheeger_bounds(bowtie);
  CHECK(rb.phi == doctest::Approx(1.0 / 7.0));
  CHECK(rb.holds());
}

TEST_CASE("pseudo-inverse and walk examples") {
  CHECK(pseudo_inverse(Eigen::MatrixXd::Zero(3, 3)).matrix.cwiseAbs().maxCoeff() == 0.0);
  const Graphon g = make_fixture("two-block");
  const Eigen::MatrixXd l = sample_deterministic(g, build_grid(g.tree(), 3)).laplacian;
  const Eigen::MatrixXd x = pseudo_inverse(l).matrix;
  CHECK((l * x * l - l).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((x * l * x - x).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((l * x - (l * x).transpose()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((x * l - (x * l).transpose()).cwiseAbs().maxCoeff() < 1e-12);

  // Coefficient of E_root in -N_k L+ is 1/nu(root).
  const SampleGrid grid = build_grid(g.tree(), 2);
  const Eigen::MatrixXd closed = closed_form_pseudo_inverse(g, grid).matrix * -4.0;
  const Eigen::MatrixXd e_root = closed_form_projector(g.tree(), grid, g.tree().root().id);
  CHECK((e_root * closed * e_root - e_root / 0.1).cwiseAbs().maxCoeff() < 1e-12);

  SamplingOptions clique;
  clique.clique_atoms = true;
  const SampledGraph s = sample_random(g, build_grid(g.tree(), 10), 3, clique);
  const WalkTimes w = walk_times(pseudo_inverse(s.laplacian), 20);
  CHECK(w.hitting.diagonal().cwiseAbs().maxCoeff() < 1e-9);
  CHECK((w.commute - w.commute.transpose()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("deterministic commute error shrinks with k") {
  const Graphon g = make_fixture("two-block");
  const CollapseReport r = collapse_experiment(g, {2, 10, 50}, {1}, 50, true);
  CHECK(r.per_k[0].median_error > r.per_k[1].median_error);
  CHECK(r.per_k[1].median_error > r.per_k[2].median_error);

  // Balanced two-level tree with a level kernel: every degree agrees, so the limit is constant.
  const Graphon bal = make_fixture("three-level");
  auto tree = std::make_shared<const UltrametricTree>(NodeSpec{
      0, 1, 1.0, "root",
      {{0, Rational(1, 2), 0.5, "L", {{0, Rational(1, 4), 0.2, "", {}}, {Rational(1, 4), Rational(1, 2), 0.2, "", {}}}},
       {Rational(1, 2), 1, 0.5, "R", {{Rational(1, 2), Rational(3, 4), 0.2, "", {}}, {Rational(3, 4), 1, 0.2, "", {}}}}}});
  const Graphon regular(tree, bal.kernel());
  std::vector<double> spreads;
  for (int k : {2, 10, 50}) {
    const CollapseReport c = collapse_experiment(regular, {k}, {1}, 100, true);
    double lo = INFINITY, hi = -INFINITY;
    for (const auto& row : c.rows) {
      lo = std::min(lo, row.c_over_n);
      hi = std::max(hi, row.c_over_n);
      CHECK(row.limit == doctest::Approx(c.rows.front().limit));
    }
    spreads.push_back(hi - lo);
  }
  CHECK(spreads[1] < spreads[0]);
  CHECK(spreads[2] < spreads[1]);
}

TEST_CASE("SIS examples") {
  SisModel zero;
  zero.adjacency = Eigen::MatrixXd::Ones(4, 4) - Eigen::MatrixXd::Identity(4, 4);
  zero.beta = 1.0;
  zero.x0 = Eigen::VectorXd::Zero(4);
  CHECK(integrate_sis(zero, 5.0).prevalence.back() == 0.0);

  SisModel k2;
  k2.adjacency = Eigen::MatrixXd(2, 2);
  k2.adjacency << 0, 1, 1, 0;
  k2.beta = 0.5;
  k2.x0 = Eigen::VectorXd::Constant(2, 0.9);
  // x' <= (beta A - delta I) x bounds the state by 0.9 exp(-(1 - beta) t).
  const double tail = integrate_sis(k2, 50.0).final_state.maxCoeff();
  CHECK(tail < 1e-6);
  CHECK(tail <= 0.9 * std::exp(-0.5 * 50.0) * (1 + 1e-6));
  CHECK(equilibrium_prevalence(k2) == 0.0);

  SisModel single;
  single.adjacency = Eigen::MatrixXd::Zero(1, 1);
  single.beta = 10.0;
  single.x0 = Eigen::VectorXd::Constant(1, 0.5);
  CHECK(equilibrium_prevalence(single) == 0.0);

  const Graphon two = make_fixture("two-block");
  const auto [sum_mu_nu, max_nu] = nu_summary(two);
  CHECK(sum_mu_nu == doctest::Approx(0.45));
  CHECK(max_nu == doctest::Approx(0.45));

  const Graphon abc = make_fixture("example-abc");
  double oracle = 0.0;
  for (NodeId f : abc.tree().finest()) oracle = std::max(oracle, degree_density(abc, f));
  CHECK(nu_summary(abc).second == doctest::Approx(oracle).epsilon(1e-12));
}

TEST_CASE("integrator and fixed point agree on an endemic sample") {
  const Graphon g = make_fixture("sis-heterogeneous");
  const SampledGraph s = sample_random(g, build_grid(g.tree(), 1), 2);
  SisModel m;
  m.adjacency = s.adjacency;
  m.beta = 15.0 / static_cast<double>(s.grid.n);
  m.x0 = Eigen::VectorXd::Constant(m.adjacency.rows(), 0.5);
  const double fixed = equilibrium_prevalence(m);
  REQUIRE(fixed > 1e-3);
  CHECK(integrate_sis(m, 400.0).prevalence.back() == doctest::Approx(fixed).epsilon(1e-5));
}

TEST_CASE("sufficient disease-free condition is sound") {
  for (const char* name : {"sis-homogeneous", "sis-heterogeneous"}) {
    const Graphon g = make_fixture(name);
    const SampledGraph s = sample_random(g, build_grid(g.tree(), 1), 1);
    for (double tau = 1.0; tau <= 20.0; tau += 1.0) {
      const double beta = tau / static_cast<double>(s.grid.n);
      const StabilityBounds b = stability_bounds(g, s, beta, 1.0);
      if (b.disease_free_sufficient) CHECK(b.lambda1 * beta < 1.0);
    }
  }
}

TEST_CASE("zero budget matches the untouched graphon") {
  const Graphon g = make_fixture("sis-homogeneous");
  SweepSpec spec;
  spec.level_set = {1};
  spec.taus = {6, 12, 18};
  spec.budgets = {0.0};
  spec.seeds = {2};
  spec.epsilon = 1e-12;
  const SisSweepGrid grid = intervention_sweep(g, spec);
  const SampledGraph s = sample_random(g, build_grid(g.tree(), 1), 2);
  for (const auto& row : grid.rows) {
    SisModel m;
    m.adjacency = s.adjacency;
    m.beta = row.tau / static_cast<double>(s.grid.n);
    m.x0 = Eigen::VectorXd::Constant(m.adjacency.rows(), 0.5);
    CHECK(row.rho_inf == doctest::Approx(equilibrium_prevalence(m)).epsilon(1e-8));
  }
}

TEST_CASE("max community tie-break and movement") {
  CHECK(find_max_community(make_fixture("two-block")) == *make_fixture("two-block").tree().find("left"));
  auto tree = std::make_shared<const UltrametricTree>(
      NodeSpec{0, 1, 1.0, "root", {{0, Rational(2, 5), 0.5, "a", {}}, {Rational(2, 5), 1, 0.5, "b", {}}}});
  const Graphon uneven(tree, Kernel::level_table({{1, 0.1}, {2, 0.8}}));
  CHECK(uneven.tree().node(find_max_community(uneven)).label == "b");

  const Graphon het = make_fixture("sis-heterogeneous");
  const NodeId before = find_max_community(het);
  const Graphon cut = apply_intervention(het, TargetedPath{before, {}}, 0.95);
  CHECK(find_max_community(cut) != before);
}

TEST_CASE("missing tree file fails without writing CSVs") {
  const fs::path dir = fs::temp_directory_path() / "ugraphon_missing_tree";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "cfg.json");
    cfg << R"({"experiment": "spectrum", "tree": {"file": "no-such-tree.json"}, "k": [2], "seeds": [1]})";
  }
  const std::string cmd = std::string(UGRAPHON_CLI) + " spectrum --config " + (dir / "cfg.json").string() +
                          " --out " + (dir / "out").string() + " > /dev/null 2>&1";
  const int raw = std::system(cmd.c_str());
  CHECK(WIFEXITED(raw));
  CHECK(WEXITSTATUS(raw) == 2);
  CHECK(!fs::exists(dir / "out"));
  fs::remove_all(dir);
}
