#include "fibdistill/distill.hpp"

#include <cmath>
#include <map>
#include <random>

#include "fibdistill/compile.hpp"

namespace fibdistill {

RegionLayout make_layout(int k, int m) {
  if (k < 1) throw Error("layout: k must be >= 1");
  if (m < 2 || (m & (m - 1)) != 0)
    throw Error("layout: m must be a power of two >= 2");
  RegionLayout l;
  l.k = k;
  l.m = m;
  l.ell = 0;
  while ((1 << l.ell) < m) ++l.ell;
  if (l.dot_count() > 31)
    throw Error("layout: more than 31 dots is not supported");
  return l;
}

bool NoisyEnsemble::pattern_in_physical_subspace(std::uint32_t pattern) const {
  for (int r = 0; r < layout.k; ++r) {
    const std::uint32_t regionBits =
        (pattern >> (r * layout.m)) & ((1u << layout.m) - 1u);
    if (regionBits == 0) return false;
  }
  return true;
}

double NoisyEnsemble::weight_in_physical_subspace() const {
  double w = 0.0;
  for (const Member& mem : members)
    if (pattern_in_physical_subspace(mem.pattern)) w += mem.probability;
  return w;
}

FusionPath NoisyEnsemble::pattern_path(std::uint32_t pattern) const {
  const int pairs = layout.pair_count();
  FusionPath path;
  path.leafLabels.reserve(2 * pairs);
  path.intermediateCharges.reserve(2 * pairs + 1);
  path.intermediateCharges.push_back(Label::trivial);
  for (int j = 0; j < pairs; ++j) {
    const bool occ = (pattern >> j) & 1u;
    const Label leaf = occ ? Label::tau : Label::trivial;
    path.leafLabels.push_back(leaf);
    path.leafLabels.push_back(leaf);
    path.intermediateCharges.push_back(occ ? Label::tau : Label::trivial);
    path.intermediateCharges.push_back(Label::trivial);
  }
  return path;
}

StateVector NoisyEnsemble::member_state(std::size_t i,
                                        const BasisPtr& basis) const {
  if (!basis || basis->dot_count() != layout.dot_count())
    throw Error("member_state: basis does not match layout");
  const FusionPath path = pattern_path(members.at(i).pattern);
  auto idx = basis->find(path);
  if (!idx) throw Error("member_state: pattern path missing from basis");
  StateVector s{basis, Eigen::VectorXcd::Zero(basis->size())};
  s.amplitudes[*idx] = Complex(1.0);
  return s;
}

NoisyEnsemble pair_creation_ensemble(const RegionLayout& layout, double p,
                                     std::optional<NoisyEnsemble::Mode> mode,
                                     std::uint64_t seed,
                                     std::size_t sampleCount) {
  if (p < 0.0 || p > 1.0)
    throw Error("pair_creation_ensemble: p must lie in [0, 1]");
  NoisyEnsemble e;
  e.layout = layout;
  e.p = p;
  e.seed = seed;
  const int pairs = layout.pair_count();
  e.mode = mode.value_or(layout.dot_count() <= 16
                             ? NoisyEnsemble::Mode::exact
                             : NoisyEnsemble::Mode::sampled);
  if (e.mode == NoisyEnsemble::Mode::exact) {
    e.sampleCount = 0;
    for (std::uint32_t pat = 0; pat < (1u << pairs); ++pat) {
      const int occ = __builtin_popcount(pat);
      const double prob =
          std::pow(p, occ) * std::pow(1.0 - p, pairs - occ);
      if (prob > 0.0) e.members.push_back({prob, pat});
    }
  } else {
    if (sampleCount == 0)
      throw Error("pair_creation_ensemble: sample count must be > 0");
    e.sampleCount = sampleCount;
    std::mt19937_64 rng(seed);
    std::map<std::uint32_t, std::size_t> counts;
    for (std::size_t s = 0; s < sampleCount; ++s) {
      std::uint32_t pat = 0;
      for (int j = 0; j < pairs; ++j) {
        // Top 53 bits as a dyadic rational in [0, 1); identical on every
        // platform, unlike the distribution adaptors.
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < p) pat |= (1u << j);
      }
      ++counts[pat];
    }
    for (const auto& [pat, n] : counts)
      e.members.push_back(
          {static_cast<double>(n) / static_cast<double>(sampleCount), pat});
  }
  return e;
}

std::vector<char> LevelProjector::mask(const FusionPathBasis& basis,
                                       int region) const {
  if (level < 0 || level > layout.ell)
    throw Error("level projector: level out of range");
  if (basis.dot_count() != layout.dot_count())
    throw Error("level projector: basis does not match layout");
  const int c = 1 << (layout.ell - level);     // object width in dots
  const int pairsPerRegion = 1 << level;       // level-r object pairs
  std::vector<char> out(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const FusionPath& path = basis.path(i);
    bool ok = true;
    for (int alpha = 0; alpha < layout.k && ok; ++alpha) {
      if (region >= 0 && alpha != region) continue;
      const int start = layout.region_start_dot(alpha);
      for (int u = 0; u <= pairsPerRegion; ++u) {
        if (path.intermediateCharges[start + u * 2 * c] != Label::trivial) {
          ok = false;
          break;
        }
      }
      if (!ok) break;
      bool occupied = false;
      for (int u = 0; u < pairsPerRegion; ++u) {
        if (path.intermediateCharges[start + (2 * u + 1) * c] == Label::tau) {
          occupied = true;
          break;
        }
      }
      if (!occupied) ok = false;
    }
    out[i] = ok ? 1 : 0;
  }
  return out;
}

ProjectionOutcome level_projector_apply(const StateVector& state,
                                        const RegionLayout& layout,
                                        int level) {
  if (!state.basis) throw Error("level_projector_apply: state has no basis");
  const LevelProjector proj{layout, level};
  const std::vector<char> mask = proj.mask(*state.basis);
  double normSq = 0.0;
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i)
    if (mask[i]) normSq += std::norm(state.amplitudes[i]);
  ProjectionOutcome out;
  out.leakage = std::max(0.0, 1.0 - normSq);
  if (normSq <= 1e-24) return out;  // flagged: nothing to renormalize
  StateVector proj_state{state.basis,
                         Eigen::VectorXcd::Zero(state.amplitudes.size())};
  const double scale = 1.0 / std::sqrt(normSq);
  for (Eigen::Index i = 0; i < state.amplitudes.size(); ++i)
    if (mask[i]) proj_state.amplitudes[i] = state.amplitudes[i] * scale;
  out.projected = std::move(proj_state);
  return out;
}

BraidWord cable_exchange_word(const RegionLayout& layout, int level,
                              int pairIndex, int chirality) {
  if (level < 0 || level > layout.ell)
    throw Error("cable exchange: level out of range");
  if (chirality != 1 && chirality != -1)
    throw Error("cable exchange: chirality must be +1 or -1");
  const int objectsPerRegion = 1 << (level + 1);
  const int totalObjects = layout.k * objectsPerRegion;
  if (pairIndex < 0 || pairIndex + 1 >= totalObjects)
    throw Error("cable exchange: object index out of range");
  if (pairIndex % objectsPerRegion == objectsPerRegion - 1)
    throw Error("cable exchange: objects straddle a region boundary");
  const int c = 1 << (layout.ell - level);
  const int p = pairIndex * c + 1;  // 1-based first strand of the left cable
  BraidWord word;
  word.strandCount = layout.dot_count();
  for (int j = 0; j < c; ++j)
    for (int i = p + c - 1 + j; i >= p + j; --i) word.push(i, 1);
  if (chirality < 0) word = inverse_word(word);
  return word;
}

std::vector<ProtocolLevel> protocol_level_words(const RegionLayout& layout,
                                                const BraidWord& b,
                                                const BraidWord& w) {
  check_word(b);
  check_word(w);
  if (b.strandCount != 4) throw Error("protocol: b must act on 4 strands");
  if (w.strandCount != 3) throw Error("protocol: w must act on 3 strands");
  std::vector<ProtocolLevel> levels;
  for (int r = layout.ell; r >= 1; --r) {
    ProtocolLevel lvl;
    lvl.level = r;
    lvl.word.strandCount = layout.dot_count();
    lvl.compositeCount = 0;
    const int groups = 1 << (r - 1);
    for (int alpha = 0; alpha < layout.k; ++alpha) {
      for (int g = 0; g < groups; ++g) {
        const int baseObj = alpha * (1 << (r + 1)) + 4 * g;
        for (const Crossing& c : b.crossings) {
          const BraidWord cab =
              cable_exchange_word(layout, r, baseObj + c.index - 1, c.sign);
          lvl.word.crossings.insert(lvl.word.crossings.end(),
                                    cab.crossings.begin(),
                                    cab.crossings.end());
          ++lvl.compositeCount;
        }
        for (const Crossing& c : w.crossings) {
          // w rides the three rightmost cables of the group.
          const BraidWord cab =
              cable_exchange_word(layout, r, baseObj + 1 + c.index - 1, c.sign);
          lvl.word.crossings.insert(lvl.word.crossings.end(),
                                    cab.crossings.begin(),
                                    cab.crossings.end());
          ++lvl.compositeCount;
        }
      }
    }
    lvl.elementaryCount = lvl.word.length();
    lvl.meanLeakage = 0.0;
    lvl.maxLeakage = 0.0;
    levels.push_back(std::move(lvl));
  }
  return levels;
}

namespace {

struct WeightedState {
  double probability;
  StateVector state;
  bool inside;
};

ProtocolReport run_protocol_impl(std::vector<WeightedState> states,
                                 const RegionLayout& layout,
                                 const BraidWord& b, const BraidWord& w,
                                 double epsilon, std::size_t memberCount,
                                 double insideWeight, double p) {
  ProtocolReport rep;
  rep.layout = layout;
  rep.declaredEpsilon = epsilon;
  rep.memberCount = memberCount;
  rep.insideWeight = insideWeight;
  rep.perRegionWeightAnalytic = 1.0 - std::pow(1.0 - p, layout.m);
  rep.insideWeightAnalytic = std::pow(rep.perRegionWeightAnalytic, layout.k);

  // Structural checks and re-measured word quality: every reported number
  // comes from the words as given, not from compile-time bookkeeping.
  if (!is_purebraid(b))
    throw Error("protocol: b is not a purebraid (permutation is not identity)");
  auto traj = weave_trajectory(w, 3);
  if (!traj || traj->back() != 1)
    throw Error("protocol: w is not an injection weave (warp 3 -> 1)");
  {
    BasisPtr v4 = enumerate_basis(4, Label::trivial,
                                  std::vector<Label>(4, Label::tau));
    BasisPtr v3 =
        enumerate_basis(3, Label::tau, std::vector<Label>(3, Label::tau));
    rep.epsilonB = projective_distance(word_unitary(b, v4).matrix,
                                       not_target_matrix());
    rep.epsilonW = projective_distance(word_unitary(w, v3).matrix,
                                       Eigen::Matrix2cd::Identity());
  }
  rep.bLength = b.length();
  rep.wLength = w.length();

  rep.levels = protocol_level_words(layout, b, w);

  const double epsSum = rep.epsilonB + rep.epsilonW;
  const double epsMax = std::max(rep.epsilonB, rep.epsilonW);
  const ErrorBudget budget =
      error_budget(layout.ell, epsSum, layout.k, rep.bLength + rep.wLength);
  rep.budgetDeltaExact = budget.deltaExact;
  rep.budgetDeltaBound = budget.deltaBound;
  rep.budgetOverall = budget.overall;
  rep.budgetOverallMaxVariant = error_budget(layout.ell, epsMax, layout.k).overall;
  rep.compositeBudgetFormula = budget.compositeBraidBound;

  const long long cells = (1LL << (2 * layout.ell)) - (1LL << layout.ell);
  rep.structuralElementaryFormula =
      static_cast<std::size_t>(layout.k) * (rep.bLength + rep.wLength) *
      static_cast<std::size_t>(cells / 2);

  double insideNorm = 0.0;
  for (const WeightedState& ws : states)
    if (ws.inside) insideNorm += ws.probability;

  for (ProtocolLevel& lvl : rep.levels) {
    double mean = 0.0, worst = 0.0;
    for (WeightedState& ws : states) {
      ws.state = apply_word(lvl.word, ws.state);
      if (!ws.inside) continue;
      const LevelProjector proj{layout, lvl.level - 1};
      const std::vector<char> mask = proj.mask(*ws.state.basis);
      double normSq = 0.0;
      for (Eigen::Index i = 0; i < ws.state.amplitudes.size(); ++i)
        if (mask[i]) normSq += std::norm(ws.state.amplitudes[i]);
      const double leak = std::max(0.0, 1.0 - normSq);
      mean += ws.probability * leak;
      worst = std::max(worst, leak);
    }
    lvl.meanLeakage = insideNorm > 0.0 ? mean / insideNorm : 0.0;
    lvl.maxLeakage = worst;
    rep.compositeTotal += lvl.compositeCount;
    rep.elementaryTotal += lvl.elementaryCount;
  }

  rep.perRegionMaxError.assign(layout.k, 0.0);
  double meanErr = 0.0, maxErr = 0.0;
  for (const WeightedState& ws : states) {
    if (!ws.inside) continue;
    const LevelProjector proj{layout, 0};
    const std::vector<char> mask = proj.mask(*ws.state.basis);
    double normSq = 0.0;
    for (Eigen::Index i = 0; i < ws.state.amplitudes.size(); ++i)
      if (mask[i]) normSq += std::norm(ws.state.amplitudes[i]);
    const double err = std::sqrt(std::max(0.0, 1.0 - normSq));
    meanErr += ws.probability * err;
    maxErr = std::max(maxErr, err);
    for (int alpha = 0; alpha < layout.k; ++alpha) {
      const std::vector<char> rmask = proj.mask(*ws.state.basis, alpha);
      double rnorm = 0.0;
      for (Eigen::Index i = 0; i < ws.state.amplitudes.size(); ++i)
        if (rmask[i]) rnorm += std::norm(ws.state.amplitudes[i]);
      rep.perRegionMaxError[alpha] =
          std::max(rep.perRegionMaxError[alpha],
                   std::sqrt(std::max(0.0, 1.0 - rnorm)));
    }
  }
  rep.finalMeanError = insideNorm > 0.0 ? meanErr / insideNorm : 0.0;
  rep.finalMaxError = maxErr;
  rep.withinBudget = rep.finalMaxError <= rep.budgetOverall + 1e-12;
  return rep;
}

}  // namespace

ProtocolReport run_protocol(const NoisyEnsemble& input,
                            const RegionLayout& layout, const BraidWord& b,
                            const BraidWord& w, double epsilon) {
  if (input.layout.k != layout.k || input.layout.m != layout.m)
    throw Error("protocol: ensemble layout does not match");
  if (layout.dot_count() > 16)
    throw Error("protocol simulation is limited to 16 dots (the full basis "
                "grows too fast beyond that)");
  BasisPtr basis = enumerate_basis(layout.dot_count(), Label::trivial);
  std::vector<WeightedState> states;
  states.reserve(input.members.size());
  for (std::size_t i = 0; i < input.members.size(); ++i) {
    states.push_back(
        {input.members[i].probability, input.member_state(i, basis),
         input.pattern_in_physical_subspace(input.members[i].pattern)});
  }
  return run_protocol_impl(std::move(states), layout, b, w, epsilon,
                           input.members.size(),
                           input.weight_in_physical_subspace(), input.p);
}

ProtocolReport run_protocol(const StateVector& input,
                            const RegionLayout& layout, const BraidWord& b,
                            const BraidWord& w, double epsilon) {
  if (!input.basis || input.basis->dot_count() != layout.dot_count())
    throw Error("protocol: state basis does not match layout");
  if (layout.dot_count() > 16)
    throw Error("protocol simulation is limited to 16 dots (the full basis "
                "grows too fast beyond that)");
  const LevelProjector top{layout, layout.ell};
  const std::vector<char> mask = top.mask(*input.basis);
  double normSq = 0.0;
  for (Eigen::Index i = 0; i < input.amplitudes.size(); ++i)
    if (mask[i]) normSq += std::norm(input.amplitudes[i]);
  const bool inside = normSq >= 1.0 - 1e-12;
  std::vector<WeightedState> states;
  states.push_back({1.0, input, inside});
  return run_protocol_impl(std::move(states), layout, b, w, epsilon, 1,
                           inside ? 1.0 : 0.0, 0.0);
}

ErrorBudget error_budget(int ell, double epsilon, int k,
                         std::size_t wordLengthSum) {
  if (ell < 1) throw Error("error_budget: ell must be >= 1");
  if (epsilon <= 0.0) throw Error("error_budget: epsilon must be > 0");
  if (k < 1) throw Error("error_budget: k must be >= 1");
  ErrorBudget b;
  b.deltaExact = 2.0 * epsilon * ((1 << ell) - 1);
  b.deltaBound = (1 << ell) * 2.0 * epsilon;
  b.overall = k * b.deltaExact;
  b.compositeBraidBound =
      static_cast<double>(k) * ((1 << ell) - 1) *
      static_cast<double>(wordLengthSum);
  return b;
}

}  // namespace fibdistill
