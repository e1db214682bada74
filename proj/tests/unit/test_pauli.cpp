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

#include <random>
#include <set>

#include <gtest/gtest.h>

#include "tbvqd/pauli.hpp"
#include "tbvqd/simulator.hpp"
#include "tbvqd/validate.hpp"
#include "test_util.hpp"

namespace tbvqd {
namespace {

// Independent Kronecker expansion, qubit 0 as the leftmost factor.
ComplexMatrix single(char p) {
  ComplexMatrix m(2, 2);
  const Complex i{0.0, 1.0};
  switch (p) {
    case 'X': m << 0.0, 1.0, 1.0, 0.0; break;
    case 'Y': m << 0.0, -i, i, 0.0; break;
    case 'Z': m << 1.0, 0.0, 0.0, -1.0; break;
    default: m << 1.0, 0.0, 0.0, 1.0; break;
  }
  return m;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

ComplexMatrix kron_oracle(const QubitHamiltonian& h) {
  const auto dim = Eigen::Index{1} << h.n_qubits;
  ComplexMatrix out = h.constant_offset * ComplexMatrix::Identity(dim, dim);
  for (const auto& t : h.terms) {
    ComplexMatrix m = single(t.str()[0]);
    for (std::size_t q = 1; q < h.n_qubits; ++q) m = kron(m, single(t.str()[q]));
    out += t.coefficient * m;
  }
  return out;
}

std::set<std::string> term_set(const QubitHamiltonian& h) {
  std::set<std::string> s;
  for (const auto& t : h.terms) s.insert(std::to_string(t.coefficient.real()) + " " + t.str());
  return s;
}

TEST(PauliString, ParseAndWeight) {
  const auto p = PauliString::parse("XIZY", 0.5);
  EXPECT_EQ(p.num_qubits(), 4u);
  EXPECT_EQ(p.weight(), 3u);
  EXPECT_EQ(p.str(), "XIZY");
  EXPECT_THROW(PauliString::parse("XQ"), ValidationError);
}

TEST(PauliString, QubitwiseCommute) {
  EXPECT_TRUE(qubitwise_commute(PauliString::parse("XXI"), PauliString::parse("XIX")));
  EXPECT_FALSE(qubitwise_commute(PauliString::parse("XYI"), PauliString::parse("YXI")));
  EXPECT_TRUE(qubitwise_commute(PauliString::parse("ZII"), PauliString::parse("IZI")));
}

TEST(QubitHamiltonian, RealHoppingGivesXXPlusYY) {
  const auto q = qubit_hamiltonian(testing::mat({{0.0, 1.0}, {1.0, 0.0}}));
  EXPECT_EQ(q.constant_offset, 0.0);
  EXPECT_EQ(term_set(q), (std::set<std::string>{std::to_string(0.5) + " XX", std::to_string(0.5) + " YY"}));
}

TEST(QubitHamiltonian, ImaginaryHoppingGivesYXMinusXY) {
  const auto q = qubit_hamiltonian(testing::mat({{0.0, Complex(0.0, 1.0)}, {Complex(0.0, -1.0), 0.0}}));
  EXPECT_EQ(term_set(q), (std::set<std::string>{std::to_string(0.5) + " YX", std::to_string(-0.5) + " XY"}));
}

TEST(QubitHamiltonian, OnsiteGivesOffsetAndZ) {
  const auto q = qubit_hamiltonian(testing::mat({{2.0, 0.0}, {0.0, -1.0}}));
  EXPECT_DOUBLE_EQ(q.constant_offset, 0.5);
  EXPECT_EQ(term_set(q), (std::set<std::string>{std::to_string(-1.0) + " ZI", std::to_string(0.5) + " IZ"}));
}

TEST(QubitHamiltonian, NonHermitianRejected) {
  EXPECT_THROW(qubit_hamiltonian(testing::mat({{0.0, 1.0}, {0.0, 0.0}})), NumericalError);
}

TEST(QubitHamiltonian, StructureAndRealCoefficients) {
  for (std::size_t n = 2; n <= 7; ++n) {
    const auto q = qubit_hamiltonian(random_hermitian(n, 40 + n));
    EXPECT_LE(q.terms.size(), n + 4 * n * (n - 1) / 2);
    for (const auto& t : q.terms) {
      EXPECT_EQ(t.coefficient.imag(), 0.0);
      const std::string s = t.str();
      const auto z = std::count(s.begin(), s.end(), 'Z');
      const auto xy = std::count(s.begin(), s.end(), 'X') + std::count(s.begin(), s.end(), 'Y');
      EXPECT_TRUE((z == 1 && xy == 0) || (z == 0 && xy == 2)) << s;
    }
  }
}

TEST(QubitHamiltonian, SingleExcitationBlockIdentity) {
  for (std::size_t n = 2; n <= 8; ++n) {
    for (std::uint64_t s = 0; s < 10; ++s) {
      const ComplexMatrix h = random_hermitian(n, derive_seed(3, {n, s}));
      const ComplexMatrix d = dense_matrix(qubit_hamiltonian(h));
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t l = 0; l < n; ++l) {
          const auto r = static_cast<Eigen::Index>(qubit_mask(n, j)), c = static_cast<Eigen::Index>(qubit_mask(n, l));
          EXPECT_LT(std::abs(d(r, c) - h(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(l))), 1e-12);
        }
      }
    }
  }
}

TEST(DenseMatrix, TextbookExamples) {
  QubitHamiltonian zi{2, {PauliString::parse("ZI")}, 0.0};
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect.diagonal() << 1.0, 1.0, -1.0, -1.0;
  EXPECT_LT((dense_matrix(zi) - expect).cwiseAbs().maxCoeff(), 1e-15);

  QubitHamiltonian hop{2, {PauliString::parse("XX", 0.5), PauliString::parse("YY", 0.5)}, 0.0};
  expect.setZero();
  expect(from_bitstring("01"), from_bitstring("10")) = 1.0;
  expect(from_bitstring("10"), from_bitstring("01")) = 1.0;
  EXPECT_LT((dense_matrix(hop) - expect).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(DenseMatrix, MatchesKroneckerOracleAndIsHermitian) {
  for (std::size_t n = 2; n <= 5; ++n) {
    const auto q = qubit_hamiltonian(random_hermitian(n, 900 + n));
    const ComplexMatrix d = dense_matrix(q);
    EXPECT_LT((d - kron_oracle(q)).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((d - d.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(DenseMatrix, RefusesMoreThan14Qubits) {
  QubitHamiltonian big{15, {}, 0.0};
  EXPECT_THROW(dense_matrix(big), ValidationError);
}

TEST(DenseMatrix, MatrixElementAndExpectationAgree) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> g;
  const std::size_t n = 4;
  std::vector<Complex> psi(16);
  double norm = 0.0;
  for (auto& z : psi) {
    z = {g(rng), g(rng)};
    norm += std::norm(z);
  }
  for (auto& z : psi) z /= std::sqrt(norm);
  for (const char* s : {"XIYZ", "YYII", "IZXX", "XYZI"}) {
    const auto p = PauliString::parse(s, 0.7);
    QubitHamiltonian one{n, {p}, 0.0};
    const ComplexMatrix d = kron_oracle(one);
    Complex e{0.0, 0.0};
    for (int r = 0; r < 16; ++r) {
      for (int c = 0; c < 16; ++c) {
        EXPECT_LT(std::abs(matrix_element(p, static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(c)) - d(r, c)),
                  1e-15);
        e += std::conj(psi[static_cast<std::size_t>(r)]) * d(r, c) * psi[static_cast<std::size_t>(c)];
      }
    }
    EXPECT_LT(std::abs(expectation(p, psi) - e), 1e-12);
  }
}

TEST(QwcGroups, CountsFollow2NPlus1) {
  EXPECT_EQ(qwc_groups_conventional(qubit_hamiltonian(random_hermitian(3, 1))).groups.size(), 7u);
  EXPECT_EQ(qwc_groups_conventional(qubit_hamiltonian(random_hermitian(5, 2))).groups.size(), 11u);
  const auto real2 = qubit_hamiltonian(testing::mat({{0.3, 1.0}, {1.0, -0.2}}));
  EXPECT_EQ(qwc_groups_conventional(real2).groups.size(), 3u);
}

TEST(QwcGroups, PartitionIntoQubitwiseCommutingGroups) {
  for (std::size_t n = 2; n <= 8; ++n) {
    const auto q = qubit_hamiltonian(random_hermitian(n, 60 + n));
    const auto g = qwc_groups_conventional(q);
    EXPECT_EQ(g.groups.size(), 2 * n + 1);
    std::vector<int> seen(q.terms.size(), 0);
    for (const auto& grp : g.groups) {
      for (std::size_t a : grp.members) {
        ++seen[a];
        for (std::size_t b : grp.members) EXPECT_TRUE(qubitwise_commute(q.terms[a], q.terms[b]));
      }
    }
    for (int c : seen) EXPECT_EQ(c, 1);
  }
}

TEST(Dump, StableOrdering) {
  const auto q = qubit_hamiltonian(testing::mat({{1.0, 0.5, 0.0}, {0.5, 0.0, 0.25}, {0.0, 0.25, 0.0}}));
  const std::string d = dump(q);
  EXPECT_NE(d.find("-0.5  ZII"), std::string::npos);
  EXPECT_LT(d.find("ZII"), d.find("XXI"));
  EXPECT_LT(d.find("XXI"), d.find("IXX"));
}

}  // namespace
}  // namespace tbvqd
