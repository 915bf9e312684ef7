#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "fibdistill/net.hpp"

using namespace fibdistill;

namespace {

BasisPtr swap_sector() {
  return enumerate_basis(4, Label::trivial,
                         std::vector<Label>(4, Label::tau));
}

BasisPtr weave_sector() {
  return enumerate_basis(3, Label::tau, std::vector<Label>(3, Label::tau));
}

}  // namespace

TEST_CASE("quaternion and matrix pictures agree") {
  Quat qs[] = {{1, 0, 0, 0},
               {0.5, 0.5, 0.5, 0.5},
               {0.8, -0.36, 0.48, 0.0},
               {0.0, 0.6, 0.0, 0.8}};
  for (const Quat& a : qs) {
    Quat an = quat_normalize(a);
    Eigen::Matrix2cd ua = su2_from_quat(an);
    CHECK((ua.adjoint() * ua - Eigen::Matrix2cd::Identity()).norm() <= 1e-12);
    Quat back = quat_from_unitary(ua);
    CHECK(std::abs(std::abs(quat_dot(an, back)) - 1.0) <= 1e-12);

    for (const Quat& b : qs) {
      Quat bn = quat_normalize(b);
      Eigen::Matrix2cd prod = su2_from_quat(quat_mul(an, bn));
      CHECK((prod - ua * su2_from_quat(bn)).norm() <= 1e-12);
      CHECK(quat_proj_distance(an, bn) ==
            doctest::Approx(projective_distance(ua, su2_from_quat(bn)))
                .epsilon(1e-10));
    }
  }
}

TEST_CASE("axis-angle extraction round-trips") {
  double axis[3] = {0.0, 0.0, 1.0};
  Quat q = quat_rotation(axis, 1.2);
  double outAxis[3];
  double angle;
  quat_axis_angle(q, outAxis, angle);
  CHECK(angle == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(outAxis[2] == doctest::Approx(1.0).epsilon(1e-12));

  Quat id{1, 0, 0, 0};
  quat_axis_angle(id, outAxis, angle);
  CHECK(angle == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(outAxis[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("zero base length gives the single identity entry") {
  BraidNet net(swap_sector(), NetConstraint::purebraid4, {0, 0.02, 1000});
  REQUIRE(net.size() == 1);
  CHECK(net.entry_word(0).length() == 0);
  CHECK(quat_proj_distance(net.entry_quat(0), Quat{1, 0, 0, 0}) <= 1e-12);
}

TEST_CASE("symbol list pairs every generator with its adjacent inverse") {
  BraidNet net(swap_sector(), NetConstraint::purebraid4, {1, 0.02, 1000});
  REQUIRE(net.symbols().size() == 12);
  for (std::size_t i = 0; i < net.symbols().size(); ++i) {
    const NetSymbol& s = net.symbols()[i];
    CHECK(s.inverseId == static_cast<int>(i ^ 1));
    const NetSymbol& si = net.symbols()[static_cast<std::size_t>(s.inverseId)];
    CHECK(quat_proj_distance(quat_mul(s.image, si.image), Quat{1, 0, 0, 0}) <=
          1e-12);
    CHECK(is_purebraid(s.word));
  }
}

TEST_CASE("purebraid net reaches the image of the first squared crossing") {
  // sigma_1^2 acts on the 4-dot sector as diag(e^{-8 pi i/5}, e^{6 pi i/5});
  // the corresponding band generator enters the net at level 1, so the
  // nearest entry is essentially exact.
  BraidNet net(swap_sector(), NetConstraint::purebraid4, {2, 0.02, 100000});
  Eigen::Matrix2cd target = Eigen::Matrix2cd::Zero();
  target(0, 0) = std::polar(1.0, -8.0 * M_PI / 5.0);
  target(1, 1) = std::polar(1.0, 6.0 * M_PI / 5.0);
  auto hit = net.nearest(quat_from_unitary(target));
  CHECK(hit.distance < 0.5);
  CHECK(hit.distance <= 1e-10);
  CHECK(net.entry_crossing_length(hit.entryId) == 2);
}

TEST_CASE("net entries satisfy their structural constraints") {
  BraidNet pure(swap_sector(), NetConstraint::purebraid4, {2, 0.02, 100000});
  for (std::size_t i = 0; i < pure.size(); ++i) {
    NetEntry e = pure.materialize(i);
    CHECK(is_purebraid(e.word));
    SectorUnitary direct = word_unitary(e.word, pure.basis());
    CHECK((direct.matrix - e.image.matrix).norm() <= 1e-10);
  }

  BraidNet weave(weave_sector(), NetConstraint::weave3, {4, 0.02, 100000});
  for (std::size_t i = 0; i < weave.size(); ++i) {
    BraidWord w = weave.entry_word(i);
    auto traj = weave_trajectory(w, 2);
    REQUIRE(traj.has_value());
    CHECK(traj->back() == 2);
  }
}

TEST_CASE("entries occupy distinct cells and match their own lookups") {
  BraidNet net(weave_sector(), NetConstraint::weave3, {5, 0.02, 100000});
  std::set<std::uint64_t> keys;
  for (std::size_t i = 0; i < net.size(); ++i)
    CHECK(keys.insert(net.entry_key(i)).second);

  for (std::size_t i = 0; i < net.size(); i += 7) {
    auto hit = net.nearest(net.entry_quat(i));
    CHECK(hit.distance <= 1e-12);
  }
}

TEST_CASE("building twice is deterministic") {
  BraidNet a(swap_sector(), NetConstraint::purebraid4, {3, 0.02, 100000});
  BraidNet b(swap_sector(), NetConstraint::purebraid4, {3, 0.02, 100000});
  REQUIRE(a.size() == b.size());
  CHECK(a.entry_word(0) == b.entry_word(0));
  CHECK(a.entry_word(a.size() - 1) == b.entry_word(b.size() - 1));
  CHECK(a.max_entry_crossing_length() == b.max_entry_crossing_length());
}

TEST_CASE("entry cap stops growth after the current level") {
  BraidNet capped(swap_sector(), NetConstraint::purebraid4, {5, 0.02, 1});
  BraidNet full(swap_sector(), NetConstraint::purebraid4, {5, 0.02, 100000});
  CHECK(capped.size() <= 13);  // identity plus at most one generator level
  CHECK(capped.size() < full.size());
}

TEST_CASE("construction rejects bad inputs") {
  CHECK_THROWS_AS(
      BraidNet(enumerate_basis(4, Label::trivial), NetConstraint::purebraid4,
               {2, 0.02, 1000}),
      Error);
  CHECK_THROWS_AS(
      BraidNet(weave_sector(), NetConstraint::purebraid4, {2, 0.02, 1000}),
      Error);
  CHECK_THROWS_AS(
      BraidNet(swap_sector(), NetConstraint::purebraid4, {17, 0.02, 1000}),
      Error);
  CHECK_THROWS_AS(
      BraidNet(swap_sector(), NetConstraint::purebraid4, {2, 0.0, 1000}),
      Error);
}
