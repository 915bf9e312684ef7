#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "fibdistill/compile.hpp"

using namespace fibdistill;

namespace {

BasisPtr swap_sector() {
  return enumerate_basis(4, Label::trivial,
                         std::vector<Label>(4, Label::tau));
}

BasisPtr weave_sector() {
  return enumerate_basis(3, Label::tau, std::vector<Label>(3, Label::tau));
}

CompileTarget not_target(const BasisPtr& basis) {
  CompileTarget t;
  t.basis = basis;
  t.target = SectorUnitary{basis, not_target_matrix()};
  t.constraint = ConstraintKind::purebraid;
  t.epsilon = 1e-3;
  return t;
}

double remeasure(const BraidWord& word, const BasisPtr& basis,
                 const Eigen::MatrixXcd& target) {
  SectorUnitary u = word_unitary(word, basis);
  return projective_distance(u.matrix, target);
}

}  // namespace

TEST_CASE("identity target compiles to the empty word") {
  auto basis = swap_sector();
  BraidNet net(basis, NetConstraint::purebraid4, {3, 0.02, 100000});
  CompileTarget t;
  t.basis = basis;
  t.target = SectorUnitary{basis, Eigen::MatrixXcd::Identity(2, 2)};
  t.constraint = ConstraintKind::purebraid;
  for (int depth : {0, 1, 3}) {
    CompileResult r = solovay_kitaev(t, net, depth);
    CHECK(r.wordLength == 0);
    CHECK(r.achievedEpsilon <= 1e-12);
  }
}

TEST_CASE("recursion depth improves the swap approximation monotonically") {
  auto basis = swap_sector();
  BraidNet net(basis, NetConstraint::purebraid4, {5, 0.02, 100000});
  CompileTarget t = not_target(basis);

  double prev = 2.0;
  std::size_t prevLen = 0;
  for (int depth = 0; depth <= 3; ++depth) {
    CompileResult r = solovay_kitaev(t, net, depth);
    CHECK(r.achievedEpsilon < prev);
    // structural growth bound from the commutator construction
    if (depth > 0)
      CHECK(r.wordLength <=
            5 * prevLen + 4 * net.max_entry_crossing_length());
    // the reported error is exactly what independent simulation gives
    CHECK(std::abs(r.achievedEpsilon -
                   remeasure(r.word, basis, not_target_matrix())) <= 1e-12);
    CHECK(is_purebraid(r.word));
    prev = r.achievedEpsilon;
    prevLen = r.wordLength;
  }
  CHECK(prev <= 1e-2);
}

TEST_CASE("identical requests give identical words") {
  auto basis = swap_sector();
  BraidNet net(basis, NetConstraint::purebraid4, {4, 0.02, 100000});
  CompileTarget t = not_target(basis);
  CompileResult a = solovay_kitaev(t, net, 2);
  CompileResult b = solovay_kitaev(t, net, 2);
  CHECK(a.word == b.word);
  CHECK(a.achievedEpsilon == b.achievedEpsilon);
}

TEST_CASE("an identity-only net is reported as too coarse") {
  auto basis = swap_sector();
  BraidNet net(basis, NetConstraint::purebraid4, {0, 0.02, 10});
  CompileTarget t = not_target(basis);
  CHECK_THROWS_AS(solovay_kitaev(t, net, 0), NetTooCoarseError);
  CHECK_THROWS_AS(solovay_kitaev(t, net, 2), NetTooCoarseError);
}

TEST_CASE("unreachable accuracy raises a compile error") {
  CompileOptions options;
  options.maxDepth = 0;
  CHECK_THROWS_AS(compile_not_purebraid(1e-6, options), CompileError);
}

TEST_CASE("compiled swap word meets its contract") {
  CompileResult r = compile_not_purebraid(1e-2);
  CHECK(r.achievedEpsilon <= 1e-2);
  CHECK(r.word.strandCount == 4);
  CHECK(is_purebraid(r.word));
  CHECK(r.wordLength == r.word.length());
  CHECK(std::abs(r.achievedEpsilon -
                 remeasure(r.word, swap_sector(), not_target_matrix())) <=
        1e-12);
}

TEST_CASE("compiled swap word fixes the paired leaf slices up to phase") {
  CompileResult r = compile_not_purebraid(1e-2);
  auto basis = enumerate_basis(4, Label::trivial);
  FusionPath slices[2] = {
      {{Label::tau, Label::tau, Label::trivial, Label::trivial},
       {Label::trivial, Label::tau, Label::trivial, Label::trivial,
        Label::trivial}},
      {{Label::trivial, Label::trivial, Label::tau, Label::tau},
       {Label::trivial, Label::trivial, Label::trivial, Label::tau,
        Label::trivial}}};
  for (const FusionPath& p : slices) {
    auto idx = basis->find(p);
    REQUIRE(idx.has_value());
    StateVector s{basis, Eigen::VectorXcd::Zero(13)};
    s.amplitudes[static_cast<Eigen::Index>(*idx)] = 1.0;
    StateVector out = apply_word(r.word, s);
    std::complex<double> amp = out.amplitudes[static_cast<Eigen::Index>(*idx)];
    CHECK(std::abs(amp) >= 1.0 - 1e-10);
  }
}

TEST_CASE("compiled weave meets its contract") {
  CompileResult r = compile_injection_weave(1e-2);
  CHECK(r.achievedEpsilon <= 1e-2);
  CHECK(r.word.strandCount == 3);
  auto traj = weave_trajectory(r.word, 3);
  REQUIRE(traj.has_value());
  CHECK(traj->back() == 1);
  Eigen::MatrixXcd eye = Eigen::MatrixXcd::Identity(2, 2);
  CHECK(std::abs(r.achievedEpsilon -
                 remeasure(r.word, weave_sector(), eye)) <= 1e-12);
}

TEST_CASE("embedded weave relabels a half-occupied row exactly") {
  // Run the weave on strands 2..4 of a four-dot system prepared with the
  // occupied pair on the right.  The leaf sector is an orbit of
  // one-dimensional slices, so the braid acts as a pure relabeling with a
  // phase: the output sits entirely on the interleaved arrangement.
  CompileResult r = compile_injection_weave(1e-2);
  BraidWord embedded;
  embedded.strandCount = 4;
  for (const Crossing& c : r.word.crossings)
    embedded.push(c.index + 1, c.sign);

  auto basis = enumerate_basis(4, Label::trivial);
  FusionPath in{{Label::trivial, Label::trivial, Label::tau, Label::tau},
                {Label::trivial, Label::trivial, Label::trivial, Label::tau,
                 Label::trivial}};
  FusionPath outPath{{Label::trivial, Label::tau, Label::trivial, Label::tau},
                     {Label::trivial, Label::trivial, Label::tau, Label::tau,
                      Label::trivial}};
  auto inIdx = basis->find(in);
  auto outIdx = basis->find(outPath);
  REQUIRE(inIdx.has_value());
  REQUIRE(outIdx.has_value());

  StateVector s{basis, Eigen::VectorXcd::Zero(13)};
  s.amplitudes[static_cast<Eigen::Index>(*inIdx)] = 1.0;
  StateVector out = apply_word(embedded, s);
  CHECK(std::abs(out.amplitudes[static_cast<Eigen::Index>(*outIdx)]) >=
        1.0 - 1e-12);
}

TEST_CASE("both protocol targets compile at the default settings") {
  for (double eps : {1e-1, 1e-2}) {
    CompileResult b = compile_not_purebraid(eps);
    CHECK(b.achievedEpsilon <= eps);
    CompileResult w = compile_injection_weave(eps);
    CHECK(w.achievedEpsilon <= eps);
    CHECK(w.wordLength == w.word.length());
  }
}
