#pragma once

#include <cstdint>

#include "fibdistill/braid.hpp"

namespace fibdistill {

// Dot-pair geometry: k regions, each holding m = 2^ell consecutive dot
// pairs; dots are indexed left to right, 0-based.  Each region splits into
// a left and right half of m/2 pairs around its center.
struct RegionLayout {
  int k = 1;
  int m = 2;
  int ell = 1;

  int pair_count() const { return k * m; }
  int dot_count() const { return 2 * m * k; }
  int region_start_dot(int region) const { return region * 2 * m; }
};

RegionLayout make_layout(int k, int m);

// Product noise: each of the k*m dot pairs independently holds a tau-tau
// pair in the trivial channel with probability p, else the vacuum.  Exact
// enumeration for up to 16 dots; seeded sampling beyond (or on request).
class NoisyEnsemble {
 public:
  enum class Mode { exact, sampled };

  struct Member {
    double probability;
    std::uint32_t pattern;  // bit j set = pair j occupied
  };

  RegionLayout layout;
  double p = 0.0;
  Mode mode = Mode::exact;
  std::uint64_t seed = 0;
  std::size_t sampleCount = 0;
  std::vector<Member> members;

  // Weighted fraction of members with at least one occupied pair in every
  // region (the physical-subspace condition, which is diagonal in the
  // occupation patterns).
  double weight_in_physical_subspace() const;

  bool pattern_in_physical_subspace(std::uint32_t pattern) const;

  // The unique basis path of an occupation pattern: occupied pairs carry
  // leaf labels (tau, tau) fusing to the trivial channel.
  FusionPath pattern_path(std::uint32_t pattern) const;

  StateVector member_state(std::size_t i, const BasisPtr& basis) const;
};

NoisyEnsemble pair_creation_ensemble(const RegionLayout& layout, double p,
                                     std::optional<NoisyEnsemble::Mode> mode =
                                         std::nullopt,
                                     std::uint64_t seed = 1,
                                     std::size_t sampleCount = 10'000);

// Level-r projector: the 2^r pairs of level-r objects in every region all
// have trivial pairwise total charge and at least one pair carries
// nontrivial member charges.  In the fusion-path basis this is a diagonal
// condition on the intermediate charges at object boundaries.
struct LevelProjector {
  RegionLayout layout;
  int level;

  // 1 = path satisfies the condition in every region (or in the single
  // given region if region >= 0).
  std::vector<char> mask(const FusionPathBasis& basis, int region = -1) const;
};

struct ProjectionOutcome {
  std::optional<StateVector> projected;  // absent when leakage = 1 (flagged)
  double leakage;
};

ProjectionOutcome level_projector_apply(const StateVector& state,
                                        const RegionLayout& layout, int level);

// One exchange of the adjacent level-r composite objects (pairIndex,
// pairIndex+1), both in the same region, as the standard block
// transposition of their width-c dot bundles: c*c same-sign crossings.
// Levels run from ell (single dots) down to 0 (the distilled bundles,
// two per region).
BraidWord cable_exchange_word(const RegionLayout& layout, int level,
                              int pairIndex, int chirality);

struct ProtocolLevel {
  int level;
  BraidWord word;
  std::size_t compositeCount;
  std::size_t elementaryCount;
  double meanLeakage;
  double maxLeakage;
};

struct ProtocolReport {
  RegionLayout layout;
  double declaredEpsilon = 0.0;
  double epsilonB = 0.0;       // re-measured from the b word
  double epsilonW = 0.0;       // re-measured from the w word
  std::size_t bLength = 0;
  std::size_t wLength = 0;

  std::size_t memberCount = 0;
  double insideWeight = 0.0;           // measured weight in the physical subspace
  double insideWeightAnalytic = 0.0;   // product over regions of 1-(1-p)^m
  double perRegionWeightAnalytic = 0.0;

  std::vector<ProtocolLevel> levels;

  double finalMaxError = 0.0;   // over members starting inside, distance to
  double finalMeanError = 0.0;  // the level-0 target subspace
  std::vector<double> perRegionMaxError;

  double budgetDeltaExact = 0.0;   // 2(eb+ew)(2^ell - 1), per region
  double budgetDeltaBound = 0.0;   // 2^ell * 2(eb+ew)
  double budgetOverall = 0.0;      // k * budgetDeltaExact
  double budgetOverallMaxVariant = 0.0;  // same with max(eb, ew) in place of the sum

  std::size_t compositeTotal = 0;
  std::size_t elementaryTotal = 0;
  std::size_t structuralElementaryFormula = 0;  // k (len b + len w)(4^ell - 2^ell)/2
  std::size_t compositeBudgetFormula = 0;       // k (len b + len w)(2^ell - 1)

  bool withinBudget = false;
};

// Builds the per-level cabled words (b on every group of four level-r
// objects, then w on the three rightmost) without running them.
std::vector<ProtocolLevel> protocol_level_words(const RegionLayout& layout,
                                                const BraidWord& b,
                                                const BraidWord& w);

ProtocolReport run_protocol(const NoisyEnsemble& input,
                            const RegionLayout& layout, const BraidWord& b,
                            const BraidWord& w, double epsilon);

ProtocolReport run_protocol(const StateVector& input, const RegionLayout& layout,
                            const BraidWord& b, const BraidWord& w,
                            double epsilon);

struct ErrorBudget {
  double deltaExact;       // 2 epsilon (2^ell - 1)
  double deltaBound;       // 2^ell * 2 epsilon
  double overall;          // k * deltaExact
  double compositeBraidBound;  // k (2^ell - 1) * wordLengthSum
};

ErrorBudget error_budget(int ell, double epsilon, int k,
                         std::size_t wordLengthSum = 0);

}  // namespace fibdistill
