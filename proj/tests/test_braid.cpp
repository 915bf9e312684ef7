#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "fibdistill/braid.hpp"

using namespace fibdistill;
using Complex = std::complex<double>;

namespace {

BasisPtr all_tau(int n, Label charge) {
  return enumerate_basis(n, charge,
                         std::vector<Label>(static_cast<std::size_t>(n),
                                            Label::tau));
}

BraidWord word_of(int strands, std::initializer_list<int> signedIndices) {
  BraidWord w;
  w.strandCount = strands;
  for (int s : signedIndices) w.push(std::abs(s), s > 0 ? +1 : -1);
  return w;
}

}  // namespace

TEST_CASE("generator matrices satisfy the braid relations, strands 2..6") {
  for (int n = 2; n <= 6; ++n) {
    for (Label charge : {Label::trivial, Label::tau}) {
      auto basis = all_tau(n, charge);
      if (basis->size() == 0) continue;
      std::vector<Eigen::MatrixXcd> gen;
      for (int i = 1; i < n; ++i)
        gen.push_back(generator_matrix(basis, i, +1).matrix);
      for (int i = 0; i + 1 < n - 1; ++i) {
        double res = (gen[i] * gen[i + 1] * gen[i] -
                      gen[i + 1] * gen[i] * gen[i + 1]).norm();
        CHECK(res <= 1e-12);
      }
      for (int i = 0; i < n - 1; ++i)
        for (int j = i + 2; j < n - 1; ++j)
          CHECK((gen[i] * gen[j] - gen[j] * gen[i]).norm() <= 1e-12);
    }
  }
}

TEST_CASE("two-dot exchange phases in the two channels") {
  auto trivial = all_tau(2, Label::trivial);
  auto tau = all_tau(2, Label::tau);
  REQUIRE(trivial->size() == 1);
  REQUIRE(tau->size() == 1);

  const auto& mc = model_constants();
  CHECK(std::abs(generator_matrix(trivial, 1, +1).matrix(0, 0) -
                 mc.rPhaseCharge1) <= 1e-15);
  CHECK(std::abs(generator_matrix(tau, 1, +1).matrix(0, 0) -
                 mc.rPhaseChargeTau) <= 1e-15);
  CHECK(std::abs(generator_matrix(trivial, 1, -1).matrix(0, 0) -
                 std::conj(mc.rPhaseCharge1)) <= 1e-15);
}

TEST_CASE("middle crossing of four dots is the conjugated phase block") {
  auto basis = all_tau(4, Label::trivial);
  REQUIRE(basis->size() == 2);
  const auto& mc = model_constants();
  Eigen::Matrix2cd phases = Eigen::Matrix2cd::Zero();
  phases(0, 0) = mc.rPhaseCharge1;
  phases(1, 1) = mc.rPhaseChargeTau;
  Eigen::Matrix2cd expected =
      mc.fMatrix.cast<Complex>() * phases * mc.fMatrix.cast<Complex>();
  CHECK((generator_matrix(basis, 2, +1).matrix - expected).norm() <= 1e-12);
}

TEST_CASE("first crossing is diagonal on the three-dot charge-tau space") {
  auto basis = all_tau(3, Label::tau);
  REQUIRE(basis->size() == 2);
  const auto& mc = model_constants();
  Eigen::MatrixXcd u = generator_matrix(basis, 1, +1).matrix;
  CHECK(std::abs(u(0, 0) - mc.rPhaseCharge1) <= 1e-15);
  CHECK(std::abs(u(1, 1) - mc.rPhaseChargeTau) <= 1e-15);
  CHECK(std::abs(u(0, 1)) <= 1e-15);
  CHECK(std::abs(u(1, 0)) <= 1e-15);
}

TEST_CASE("word matrices are unitary and compose right-to-left") {
  auto basis = enumerate_basis(4, Label::trivial);
  BraidWord a = word_of(4, {1, -2, 3, 3, 2});
  BraidWord b = word_of(4, {2, 1, 1, -3});

  SectorUnitary ua = word_unitary(a, basis);
  SectorUnitary ub = word_unitary(b, basis);
  SectorUnitary uab = word_unitary(concat_words(a, b), basis);

  Eigen::MatrixXcd eye =
      Eigen::MatrixXcd::Identity(ua.matrix.rows(), ua.matrix.cols());
  CHECK((ua.matrix.adjoint() * ua.matrix - eye).norm() <= 1e-12);
  CHECK((uab.matrix - ub.matrix * ua.matrix).norm() <= 1e-12);

  SectorUnitary uinv = word_unitary(inverse_word(a), basis);
  CHECK((uinv.matrix - ua.matrix.adjoint()).norm() <= 1e-12);
}

TEST_CASE("threaded and serial word matrices agree") {
  auto basis = enumerate_basis(6, Label::trivial);
  BraidWord w = word_of(6, {1, 2, 3, 4, 5, -4, -3, 2, 2, 1});
  SectorUnitary serial = word_unitary(w, basis, 1);
  SectorUnitary threaded = word_unitary(w, basis, 4);
  CHECK((serial.matrix - threaded.matrix).norm() == 0.0);
}

TEST_CASE("purebraids preserve leaf labelings") {
  auto basis = enumerate_basis(4, Label::trivial);
  // band generator on strands 1 and 3: sigma_2 sigma_1^2 sigma_2^-1
  BraidWord band = word_of(4, {2, 1, 1, -2});
  REQUIRE(is_purebraid(band));
  SectorUnitary u = word_unitary(band, basis);
  for (std::size_t r = 0; r < basis->size(); ++r)
    for (std::size_t c = 0; c < basis->size(); ++c)
      if (basis->path(r).leafLabels != basis->path(c).leafLabels)
        CHECK(std::abs(u.matrix(static_cast<Eigen::Index>(r),
                                static_cast<Eigen::Index>(c))) <= 1e-10);
}

TEST_CASE("projective distance on diagonal phase pairs") {
  Eigen::Matrix2cd eye = Eigen::Matrix2cd::Identity();
  Eigen::Matrix2cd flip = eye;
  flip(1, 1) = -1.0;
  CHECK(projective_distance(eye, flip) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));

  for (double theta : {0.1, 0.5, 1.0, 2.0, 3.0, M_PI}) {
    Eigen::Matrix2cd v = eye;
    v(1, 1) = std::polar(1.0, theta);
    CHECK(projective_distance(eye, v) ==
          doctest::Approx(2.0 * std::sin(theta / 4.0)).epsilon(1e-10));
  }
}

TEST_CASE("projective distance ignores global phase and is symmetric") {
  Eigen::Matrix2cd a;
  a << Complex(0.6, 0.0), Complex(0.0, 0.8), Complex(0.0, 0.8),
      Complex(0.6, 0.0);
  Eigen::Matrix2cd b = std::polar(1.0, 1.234) * a;
  CHECK(projective_distance(a, b) <= 1e-12);

  Eigen::Matrix2cd c = Eigen::Matrix2cd::Identity();
  CHECK(projective_distance(a, c) ==
        doctest::Approx(projective_distance(c, a)).epsilon(1e-12));
}

TEST_CASE("warp trajectories") {
  BraidWord empty = word_of(3, {});
  auto t0 = weave_trajectory(empty, 2);
  REQUIRE(t0.has_value());
  CHECK(*t0 == std::vector<int>{2});

  BraidWord hop = word_of(3, {2});
  auto t1 = weave_trajectory(hop, 3);
  REQUIRE(t1.has_value());
  CHECK(*t1 == std::vector<int>{3, 2});

  BraidWord wobble = word_of(3, {2, 1, 1});
  auto t2 = weave_trajectory(wobble, 3);
  REQUIRE(t2.has_value());
  CHECK(*t2 == std::vector<int>{3, 2, 1, 2});

  BraidWord offWarp = word_of(3, {1});
  CHECK(!weave_trajectory(offWarp, 3).has_value());
}

TEST_CASE("induced permutations and the purebraid test") {
  BraidWord s1 = word_of(3, {1});
  CHECK(induced_permutation(s1) == std::vector<int>{2, 1, 3});
  CHECK_FALSE(is_purebraid(s1));

  BraidWord s1sq = word_of(3, {1, 1});
  CHECK(is_purebraid(s1sq));

  BraidWord cycle = word_of(3, {1, 2});
  CHECK(induced_permutation(cycle) == std::vector<int>{3, 1, 2});
}

TEST_CASE("free reduction cancels adjacent inverse pairs") {
  CHECK(free_reduce(word_of(3, {1, -1})).length() == 0);
  CHECK(free_reduce(word_of(3, {1, 2, -2, -1})).length() == 0);
  BraidWord mixed = free_reduce(word_of(3, {1, 2, -2, 2}));
  CHECK(mixed == word_of(3, {1, 2}));
  BraidWord untouched = word_of(3, {1, 2, 1});
  CHECK(free_reduce(untouched) == untouched);
}

TEST_CASE("malformed words are rejected") {
  BraidWord bad = word_of(3, {1});
  bad.crossings[0].index = 3;
  CHECK_THROWS_AS(check_word(bad), Error);
  bad.crossings[0].index = 0;
  CHECK_THROWS_AS(check_word(bad), Error);
  bad.crossings[0] = {1, 2};
  CHECK_THROWS_AS(check_word(bad), Error);
}

TEST_CASE("applying a crossing outside the basis closure throws") {
  std::vector<Label> mixed{Label::trivial, Label::tau};
  auto basis = enumerate_basis(2, Label::tau, mixed);
  REQUIRE(basis->size() == 1);
  StateVector s{basis, Eigen::VectorXcd::Ones(1)};
  CHECK_THROWS_AS(apply_word(word_of(2, {1}), s), Error);
}
