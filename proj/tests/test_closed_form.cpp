#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "battery.hpp"
#include "qwalk/closed_form.hpp"

using namespace qwalk;

namespace {

std::vector<double> numeric_multiset(const Spectrum& s) {
  std::vector<double> out;
  for (std::size_t j = 0; j < s.distinct(); ++j) out.insert(out.end(), s.multiplicities[j], s.eigenvalues[j]);
  std::sort(out.begin(), out.end(), std::greater<>());
  return out;
}

double max_gap(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return INFINITY;
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

Graph named(GraphFamily f, std::vector<std::int64_t> p) { return build_named_graph(f, std::move(p)); }

}  // namespace

TEST(CoronaEigenvalues, K2WithK1IsP4) {
  const auto spec = uniform_corona(named(GraphFamily::complete, {2}), named(GraphFamily::complete, {1}));
  const auto set = corona_eigenvalues(spec);
  const double r5 = std::sqrt(5.0);
  const std::vector<double> want = {(1 + r5) / 2, (-1 + r5) / 2, (1 - r5) / 2, (-1 - r5) / 2};
  EXPECT_LT(max_gap(set.multiset(), want), 1e-12);
  for (const auto& e : set.all()) {
    EXPECT_TRUE(e.branch == CoronaBranch::base_eigenvalue || e.branch == CoronaBranch::perron);
  }
  EXPECT_EQ(set.total_multiplicity(), 4u);
}

TEST(CoronaEigenvalues, C4WithK2) {
  const auto spec = uniform_corona(named(GraphFamily::cycle, {4}), named(GraphFamily::complete, {2}));
  const auto set = corona_eigenvalues(spec);
  EXPECT_EQ(set.total_multiplicity(), 12u);
  bool saw_minus_one = false;
  for (const auto& e : set.mu_branch) {
    EXPECT_NE(e.branch, CoronaBranch::satellite_degree);
    if (std::abs(e.value + 1.0) < 1e-12) {
      saw_minus_one = true;
      EXPECT_EQ(e.multiplicity, 4u);
    }
  }
  EXPECT_TRUE(saw_minus_one);
  EXPECT_NEAR(set.r_pm.plus, 0.5 * (3 + std::sqrt(73.0)), 1e-12);
  EXPECT_NEAR(set.r_pm.minus, 0.5 * (3 - std::sqrt(73.0)), 1e-12);
  const auto numeric = numeric_multiset(eigendecompose(build_corona(spec).graph.adjacency()));
  EXPECT_LT(max_gap(set.multiset(), numeric), 1e-8);
}

TEST(CoronaEigenvalues, LambdaEqualsKCollapses) {
  // C_6 has eigenvalue 1; K_2 satellites have k = 1.
  const auto spec = uniform_corona(named(GraphFamily::cycle, {6}), named(GraphFamily::complete, {2}));
  const auto set = corona_eigenvalues(spec);
  bool found = false;
  for (const auto& p : set.lambda_pm) {
    if (std::abs(p.lambda - 1.0) > 1e-9) continue;
    found = true;
    EXPECT_NEAR(p.plus, 1.0 + std::sqrt(2.0), 1e-12);
    EXPECT_NEAR(p.minus, 1.0 - std::sqrt(2.0), 1e-12);
  }
  EXPECT_TRUE(found);
}

TEST(CoronaEigenvalues, PairIdentities) {
  for (const auto& inst : battery::instances()) {
    const auto set = corona_eigenvalues(inst.spec);
    const double k = static_cast<double>(set.k);
    const double m = static_cast<double>(set.m);
    const double n1 = static_cast<double>(set.n - 1);
    for (const auto& p : set.lambda_pm) {
      EXPECT_NEAR((p.plus - k) * (p.minus - k), -m, 1e-10) << inst.name;
      EXPECT_NEAR(p.plus + p.minus, p.lambda + k, 1e-10) << inst.name;
      EXPECT_NEAR(p.big_lambda, std::sqrt((p.lambda - k) * (p.lambda - k) + 4 * m), 1e-12);
    }
    EXPECT_NEAR((set.r_pm.plus - k) * (set.r_pm.minus - k), -m * n1 * n1, 1e-8) << inst.name;
    EXPECT_NEAR(set.r_pm.plus + set.r_pm.minus, static_cast<double>(set.r) + k, 1e-10);
    EXPECT_EQ(set.total_multiplicity(), set.n + set.n * set.m) << inst.name;
  }
}

TEST(CoronaEigenvalues, BatteryMatchesNumeric) {
  for (const auto& inst : battery::instances()) {
    const auto set = corona_eigenvalues(inst.spec);
    const auto numeric = numeric_multiset(eigendecompose(build_corona(inst.spec).graph.adjacency()));
    EXPECT_LT(max_gap(set.multiset(), numeric), 1e-8) << inst.name;
  }
}

TEST(CoronaEigenvalues, FromBaseDataOnly) {
  const auto base = named(GraphFamily::petersen, {});
  const auto h = named(GraphFamily::cycle, {3});
  const auto spec = uniform_corona(base, h);
  auto data = base_data_from_spectrum(eigendecompose(base.adjacency()), {{0, 1}});
  const auto a = corona_eigenvalues(data, satellite_spectra(spec), 2, 3);
  const auto b = corona_eigenvalues(spec);
  EXPECT_LT(max_gap(a.multiset(), b.multiset()), 1e-12);
  data.multiplicities.clear();
  EXPECT_THROW(corona_eigenvalues(data, satellite_spectra(spec), 2, 3), DataError);
}

TEST(CoronaEigenvalues, Preconditions) {
  const auto k1 = named(GraphFamily::complete, {1});
  EXPECT_THROW(corona_eigenvalues(CoronaSpec{named(GraphFamily::path, {3}), {k1, k1, k1}}), PreconditionError);
  EXPECT_THROW(corona_eigenvalues(CoronaSpec{k1, {k1}}), PreconditionError);
  const auto c4 = eigendecompose(named(GraphFamily::cycle, {4}).adjacency());
  const auto s = eigendecompose(named(GraphFamily::complete, {2}).adjacency());
  EXPECT_THROW(corona_eigenvalues(c4, {s, s, s, s}, 0, 2), PreconditionError);  // wrong k
  EXPECT_THROW(corona_eigenvalues(c4, {s, s, s}, 1, 2), SpecError);
}

TEST(CoronaProjectors, K2WithK1) {
  const auto spec = uniform_corona(named(GraphFamily::complete, {2}), named(GraphFamily::complete, {1}));
  const auto s = corona_eigenprojectors(spec);
  const auto a = corona_adjacency_blocks(spec);
  EXPECT_LT(spectrum_deviation(s, &a).max(), 1e-12);
  // E_{r+} is rank one along (phi, phi, 1, 1) / norm, phi the golden ratio
  const double phi = 0.5 * (1 + std::sqrt(5.0));
  Eigen::Vector4d x(phi, phi, 1, 1);
  x.normalize();
  EXPECT_LT((s.projectors[0] - x * x.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(CoronaProjectors, EmptySatellitesDegreeBranch) {
  const auto spec = uniform_corona(named(GraphFamily::cycle, {4}), named(GraphFamily::empty, {2}));
  const auto s = corona_eigenprojectors(spec);
  const auto a = corona_adjacency_blocks(spec);
  EXPECT_LT(spectrum_deviation(s, &a).max(), 1e-10);
  const auto zero = s.find(0.0);
  ASSERT_TRUE(zero.has_value());
  const auto numeric = eigendecompose(build_corona(spec).graph.adjacency());
  const auto nz = numeric.find(0.0);
  ASSERT_TRUE(nz.has_value());
  EXPECT_LT((s.projectors[*zero] - numeric.projectors[*nz]).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(CoronaProjectors, BatteryInvariantsAndOracle) {
  for (const auto& inst : battery::instances()) {
    const auto s = corona_eigenprojectors(inst.spec);
    const auto a = corona_adjacency_blocks(inst.spec);
    const auto d = spectrum_deviation(s, &a);
    EXPECT_LT(d.max(), 1e-8) << inst.name;
    const auto numeric = eigendecompose(build_corona(inst.spec).graph.adjacency());
    ASSERT_EQ(s.distinct(), numeric.distinct()) << inst.name;
    for (std::size_t j = 0; j < s.distinct(); ++j) {
      EXPECT_NEAR(s.eigenvalues[j], numeric.eigenvalues[j], 1e-8) << inst.name;
      EXPECT_EQ(s.multiplicities[j], numeric.multiplicities[j]) << inst.name;
      EXPECT_LT((s.projectors[j] - numeric.projectors[j]).cwiseAbs().maxCoeff(), 1e-8) << inst.name;
    }
  }
}

TEST(TransferEntry, TimeZeroIsIdentity) {
  const auto g = named(GraphFamily::cycle, {6});
  const auto data = base_data_from_spectrum(eigendecompose(g.adjacency()), {{0, 3}, {0, 1}});
  EXPECT_NEAR(std::abs(corona_transfer_entry(data, 1, 2, 0.0, 0, 0) - 1.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(corona_transfer_entry(data, 1, 2, 0.0, 0, 3)), 0.0, 1e-12);
}

TEST(TransferEntry, MatchesBuiltCorona) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> time(0.0, 50.0);
  for (const auto& inst : battery::instances()) {
    const auto p = validate_regular_corona(inst.spec, 2);
    const auto n = inst.spec.base.order();
    std::vector<BaseSpectralData::VertexPair> pairs;
    for (std::size_t v = 0; v < n; ++v) pairs.push_back({0, v});
    const auto data = base_data_from_spectrum(eigendecompose(inst.spec.base.adjacency()), pairs);
    const auto full = eigendecompose(build_corona(inst.spec).graph.adjacency());
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
      const double t = time(rng);
      const std::size_t v = static_cast<std::size_t>(i) % n;
      const auto want = transition_entry(full, t, 0, v);
      const auto got = corona_transfer_entry(data, static_cast<std::int64_t>(p.k), p.m, t, 0, v);
      worst = std::max(worst, std::abs(want - got));
    }
    EXPECT_LT(worst, 1e-8) << inst.name;
  }
}

TEST(TransferEntry, MissingEntryNamesEigenvalue) {
  const auto g = named(GraphFamily::cycle, {4});
  auto data = base_data_from_spectrum(eigendecompose(g.adjacency()), {{0, 2}});
  data.projector_entries[BaseSpectralData::key(0, 2)][1].reset();
  try {
    corona_transfer_entry(data, 0, 1, 1.0, 0, 2);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("eigenvalue 0"), std::string::npos) << e.what();
  }
  EXPECT_THROW(corona_transfer_entry(data, 0, 1, 1.0, 0, 1), DataError);
  EXPECT_THROW(corona_transfer_entry(data, 0, 1, 1.0, 0, 4), ParameterError);
}

TEST(BaseData, Validation) {
  const auto g = named(GraphFamily::cycle, {4});
  auto data = base_data_from_spectrum(eigendecompose(g.adjacency()), {{0, 2}});
  EXPECT_NO_THROW(data.validate());
  auto bad = data;
  bad.set_entry(0, 0, 2, 0.9);
  EXPECT_THROW(bad.validate(), DataError);
  bad = data;
  bad.r = 3;
  EXPECT_THROW(bad.validate(), DataError);
  bad = data;
  bad.multiplicities = {1, 1, 1};
  EXPECT_THROW(bad.validate(), DataError);
  bad = data;
  bad.n = 1;
  EXPECT_THROW(bad.validate(), PreconditionError);
  EXPECT_THROW(base_data_from_spectrum(eigendecompose(named(GraphFamily::path, {3}).adjacency()), {{0, 1}}),
               PreconditionError);
}
