// Copyright 2026 The tbvqd Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include <gtest/gtest.h>

#include "tbvqd/tbmodel.hpp"
#include "tbvqd/validate.hpp"
#include "test_util.hpp"

namespace tbvqd {
namespace {

using testing::source_path;

constexpr const char* kChain = R"(
name = "chain"
[lattice]
vectors = [[1.0]]
[[orbitals]]
label = "A"
onsite = 0.0
[[orbitals]]
label = "B"
onsite = 0.0
[[hoppings]]
from = "A"
to = "B"
R = [0]
t = 1.0
[[hoppings]]
from = "A"
to = "B"
R = [-1]
t = 1.0
)";

KVector cart(std::initializer_list<double> c) {
  KVector k;
  k.components = RealVector(static_cast<Eigen::Index>(c.size()));
  Eigen::Index i = 0;
  for (double v : c) k.components(i++) = v;
  return k;
}

// Term-by-term Bloch sum written against the documented convention only:
// H_jl += t e^{i k.R}, H_lj += conj(t) e^{-i k.R}, H_jj = eps_j.
ComplexMatrix brute_force_bloch(const TightBindingModel& m, const RealVector& k) {
  const auto n = static_cast<Eigen::Index>(m.num_orbitals());
  ComplexMatrix h = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) h(j, j) = m.orbitals()[static_cast<std::size_t>(j)].onsite_energy;
  for (const auto& t : m.hoppings()) {
    double kr = 0.0;
    for (std::size_t d = 0; d < t.displacement.size(); ++d) {
      for (Eigen::Index c = 0; c < k.size(); ++c) kr += k(c) * t.displacement[d] * m.lattice_vectors()[d](c);
    }
    const Complex ph = std::polar(1.0, kr);
    const auto j = static_cast<Eigen::Index>(t.from), l = static_cast<Eigen::Index>(t.to);
    h(j, l) += t.amplitude * ph;
    h(l, j) += std::conj(t.amplitude * ph);
  }
  return h;
}

// Characteristic polynomial by Faddeev-LeVerrier, roots by bisection on the
// sign changes of a fine grid inside the Gershgorin interval.
std::vector<double> charpoly_roots(const ComplexMatrix& a) {
  const auto n = a.rows();
  std::vector<Complex> c(static_cast<std::size_t>(n + 1));
  c[static_cast<std::size_t>(n)] = 1.0;
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  const ComplexMatrix id = ComplexMatrix::Identity(n, n);
  for (Eigen::Index k = 1; k <= n; ++k) {
    m = a * m + c[static_cast<std::size_t>(n - k + 1)] * id;
    c[static_cast<std::size_t>(n - k)] = -(a * m).trace() / static_cast<double>(k);
  }
  auto p = [&](double x) {
    Complex v = 0.0;
    for (auto i = static_cast<std::ptrdiff_t>(n); i >= 0; --i) v = v * x + c[static_cast<std::size_t>(i)];
    return v.real();
  };
  double bound = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) bound = std::max(bound, a.row(j).cwiseAbs().sum());
  std::vector<double> roots;
  const int grid = 200000;
  double x0 = -bound - 1.0, p0 = p(x0);
  for (int i = 1; i <= grid; ++i) {
    const double x1 = -bound - 1.0 + (2.0 * bound + 2.0) * i / grid, p1 = p(x1);
    if ((p0 < 0) != (p1 < 0)) {
      double lo = x0, hi = x1;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if ((p(mid) < 0) == (p(lo) < 0)) lo = mid;
        else hi = mid;
      }
      roots.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    p0 = p1;
  }
  return roots;
}

TEST(ParseModel, MinimalChain) {
  const auto m = parse_model(kChain);
  EXPECT_EQ(m.num_orbitals(), 2u);
  EXPECT_EQ(m.hoppings().size(), 2u);
  EXPECT_EQ(m.dimension(), 1u);
}

TEST(ParseModel, MissingLatticeIsParseError) {
  const std::string text = R"(
[[orbitals]]
label = "A"
onsite = 0.0
[[orbitals]]
label = "B"
onsite = 0.0
[[hoppings]]
from = "A"
to = "B"
R = [0]
t = 1.0
)";
  EXPECT_THROW(parse_model(text), ParseError);
}

TEST(ParseModel, MalformedDocumentReportsLine) {
  try {
    parse_model("[lattice]\nvectors = [[1.0]\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_GT(e.line(), 0u);
  }
}

TEST(ParseModel, DuplicateLabelIsValidationError) {
  std::string text = kChain;
  text.replace(text.find("label = \"B\""), 11, "label = \"A\"");
  EXPECT_THROW(parse_model(text), ValidationError);
}

TEST(ParseModel, IndexOutOfRangeIsValidationError) {
  std::string text = kChain;
  text.replace(text.find("to = \"B\""), 8, "to = 7");
  EXPECT_THROW(parse_model(text), ValidationError);
}

TEST(ParseModel, UnknownKeyRejected) {
  std::string text = kChain;
  text.replace(text.find("onsite = 0.0"), 12, "onsite = 0.0\ncolour = 1");
  EXPECT_THROW(parse_model(text), ParseError);
}

TEST(ParseModel, ExplicitHermitianPartnerRejected) {
  std::string text = kChain;
  text += "[[hoppings]]\nfrom = \"B\"\nto = \"A\"\nR = [0]\nt = 1.0\n";
  EXPECT_THROW(parse_model(text), ValidationError);
}

TEST(ParseModel, ComplexAmplitude) {
  std::string text = kChain;
  text.replace(text.find("t = 1.0"), 7, "t = [0.5, -0.25]");
  const auto m = parse_model(text);
  EXPECT_EQ(m.hoppings()[0].amplitude, Complex(0.5, -0.25));
}

TEST(ParseModel, ShippedModels) {
  const auto cuo2 = load_model(source_path("models/cuo2.toml"));
  EXPECT_EQ(cuo2.num_orbitals(), 3u);
  const auto g = load_model(source_path("models/graphene_bilayer.toml"));
  EXPECT_EQ(g.num_orbitals(), 4u);
  EXPECT_THROW(load_model(source_path("models/does_not_exist.toml")), Error);
}

TEST(BlochMatrix, ChainAtGammaAndZoneBoundary) {
  const auto m = parse_model(kChain);
  EXPECT_NEAR(std::abs(bloch_matrix(m, cart({0.0})).entries(0, 1) - Complex(2.0, 0.0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(bloch_matrix(m, cart({kPi})).entries(0, 1)), 0.0, 1e-14);
}

TEST(BlochMatrix, DimensionMismatchThrows) {
  const auto m = parse_model(kChain);
  EXPECT_THROW(bloch_matrix(m, cart({0.1, 0.2})), ValidationError);
}

TEST(BlochMatrix, CuO2MatchesBruteForceSum) {
  const auto m = load_model(source_path("models/cuo2.toml"));
  const auto k = cart({0.3, 0.7});
  const ComplexMatrix h = bloch_matrix(m, k).entries;
  EXPECT_LT((h - brute_force_bloch(m, k.components)).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(BlochMatrix, HermitianPeriodicAndDiagonalOnsite) {
  for (const char* file : {"models/cuo2.toml", "models/graphene_bilayer.toml"}) {
    const auto m = load_model(source_path(file));
    const auto b = m.reciprocal_vectors();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    std::uniform_int_distribution<int> g(-2, 2);
    for (int s = 0; s < 50; ++s) {
      KVector k = cart({u(rng), u(rng)});
      const ComplexMatrix h = bloch_matrix(m, k).entries;
      EXPECT_LT(hermiticity_defect(h), 1e-12);
      for (std::size_t j = 0; j < m.num_orbitals(); ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        EXPECT_NEAR(h(jj, jj).real(), m.orbitals()[j].onsite_energy, 1e-12);
        EXPECT_NEAR(h(jj, jj).imag(), 0.0, 1e-12);
      }
      KVector shifted = k;
      shifted.components += g(rng) * b[0] + g(rng) * b[1];
      EXPECT_LT((bloch_matrix(m, shifted).entries - h).cwiseAbs().maxCoeff(), 1e-10);
      EXPECT_LT((brute_force_bloch(m, k.components) - h).cwiseAbs().maxCoeff(), 1e-12);
    }
  }
}

TEST(ExactBands, PauliXAndDiagonal) {
  const auto x = exact_bands(testing::mat({{0.0, 1.0}, {1.0, 0.0}}));
  ASSERT_EQ(x.size(), 2u);
  EXPECT_NEAR(x[0], -1.0, 1e-14);
  EXPECT_NEAR(x[1], 1.0, 1e-14);
  const auto d = exact_bands(testing::mat({{3.0, 0.0, 0.0}, {0.0, -1.0, 0.0}, {0.0, 0.0, 2.0}}));
  EXPECT_EQ(d, (std::vector<double>{-1.0, 2.0, 3.0}));
}

TEST(ExactBands, MatchesCharacteristicPolynomialRoots) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ComplexMatrix h = random_hermitian(4, 1000 + s);
    const auto ev = exact_bands(h);
    const auto roots = charpoly_roots(h);
    ASSERT_EQ(roots.size(), 4u) << "seed " << s;
    for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(ev[i], roots[i], 1e-9);
  }
}

TEST(ExactBands, NonHermitianRejected) {
  EXPECT_THROW(exact_bands(testing::mat({{0.0, 1.0}, {2.0, 0.0}})), NumericalError);
}

TEST(ExactBands, AscendingAndRelabelInvariant) {
  std::mt19937_64 rng(5);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const ComplexMatrix h = random_hermitian(5, 77 + s);
    const auto ev = exact_bands(h);
    EXPECT_TRUE(std::is_sorted(ev.begin(), ev.end()));
    std::vector<int> perm(5);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    ComplexMatrix p(5, 5);
    for (int j = 0; j < 5; ++j) {
      for (int l = 0; l < 5; ++l) p(j, l) = h(perm[static_cast<std::size_t>(j)], perm[static_cast<std::size_t>(l)]);
    }
    const auto ep = exact_bands(p);
    for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(ev[i], ep[i], 1e-12);
  }
}

TEST(KPath, SingleSegmentInterpolation) {
  const std::vector<LabeledPoint> pts{{"G", {0.0, 0.0}}, {"X", {kPi, 0.0}}};
  const auto path = kpath(pts, 3);
  ASSERT_EQ(path.size(), 3u);
  EXPECT_NEAR(path[1].components(0), kPi / 2, 1e-15);
  EXPECT_NEAR(path[1].path_distance, kPi / 2, 1e-15);
  EXPECT_NEAR(path[2].path_distance, kPi, 1e-15);
  EXPECT_EQ(path[0].label, "G");
  EXPECT_EQ(path[2].label, "X");
}

TEST(KPath, JoinsAreNotDuplicated) {
  const std::vector<LabeledPoint> pts{{"G", {0.0, 0.0}}, {"X", {kPi, 0.0}}, {"M", {kPi, kPi}}};
  const auto path = kpath(pts, 2);
  ASSERT_EQ(path.size(), 3u);
  EXPECT_EQ(path[1].label, "X");
}

TEST(KPath, Errors) {
  const std::vector<LabeledPoint> one{{"G", {0.0}}};
  EXPECT_THROW(kpath(one, 10), ValidationError);
  const std::vector<LabeledPoint> two{{"G", {0.0}}, {"X", {1.0}}};
  EXPECT_THROW(kpath(two, 1), ValidationError);
}

TEST(KPath, CuO2PathHas88StrictlyIncreasingPoints) {
  const auto m = load_model(source_path("models/cuo2.toml"));
  const auto path = model_kpath(m, 30);
  ASSERT_EQ(path.size(), 88u);
  EXPECT_EQ(path.front().path_distance, 0.0);
  for (std::size_t i = 1; i < path.size(); ++i) EXPECT_GT(path[i].path_distance, path[i - 1].path_distance);
}

}  // namespace
}  // namespace tbvqd
