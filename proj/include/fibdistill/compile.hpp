#pragma once

#include <optional>

#include "fibdistill/net.hpp"

namespace fibdistill {

// Raised when the base net cannot seed the recursion: the nearest entry to
// the target sits at or beyond the convergence threshold 1/sqrt(2).
class NetTooCoarseError : public Error {
 public:
  NetTooCoarseError(double distance, std::size_t netSize)
      : Error("net too coarse: nearest base entry at projective distance " +
              std::to_string(distance) + " (threshold 0.7071) over " +
              std::to_string(netSize) + " entries"),
        distance(distance) {}
  double distance;
};

class CompileError : public Error {
 public:
  using Error::Error;
};

enum class ConstraintKind { unconstrained, purebraid, weave };

struct WeaveSpec {
  int warpStart;
  int warpEnd;
};

struct CompileTarget {
  BasisPtr basis;
  SectorUnitary target;
  ConstraintKind constraint = ConstraintKind::unconstrained;
  std::optional<WeaveSpec> weave;
  double epsilon = 0.0;
};

struct CompileResult {
  BraidWord word;
  double achievedEpsilon = 0.0;
  std::size_t wordLength = 0;
  int skDepth = 0;
};

// Recursive approximation at a fixed depth.  Depth 0 returns the nearest
// net entry; depth d approximates the residual as a balanced group
// commutator v w v^-1 w^-1 and recurses on v and w at depth d-1.  The
// returned epsilon is re-measured from the emitted word by simulation,
// never taken from the recursion's own bookkeeping.
CompileResult solovay_kitaev(const CompileTarget& target, const BraidNet& net,
                             int depth);

struct CompileOptions {
  int maxDepth = 8;
  NetParameters purebraidNet{8, 0.02, 4'000'000};
  NetParameters weaveNet{11, 0.02, 4'000'000};
};

// Shared nets for the two protocol targets, built once per parameter set.
const BraidNet& purebraid_net(const NetParameters& params);
const BraidNet& weave_net(const NetParameters& params);

// Purebraid word on 4 strands within epsilon of the swap matrix
// [[0,1],[1,0]] on the 2-dimensional all-tau trivial-charge sector
// (index 0 = both pairs in the trivial channel).
CompileResult compile_not_purebraid(double epsilon,
                                    const CompileOptions& options = {});

// Weave on 3 strands carrying the warp from position 3 to position 1 while
// acting within epsilon of the identity on the all-tau charge-tau sector.
CompileResult compile_injection_weave(double epsilon,
                                      const CompileOptions& options = {});

// The two compile targets' reference matrices.
Eigen::Matrix2cd not_target_matrix();

}  // namespace fibdistill
