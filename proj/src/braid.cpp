#include "fibdistill/braid.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace fibdistill {

void check_word(const BraidWord& word) {
  if (word.strandCount < 1) throw Error("braid word: strand count must be >= 1");
  for (const Crossing& c : word.crossings) {
    if (c.index < 1 || c.index >= word.strandCount)
      throw Error("braid word: crossing index " + std::to_string(c.index) +
                  " out of range for " + std::to_string(word.strandCount) +
                  " strands");
    if (c.sign != 1 && c.sign != -1)
      throw Error("braid word: crossing sign must be +1 or -1");
  }
}

BraidWord inverse_word(const BraidWord& word) {
  BraidWord inv;
  inv.strandCount = word.strandCount;
  inv.crossings.reserve(word.crossings.size());
  for (auto it = word.crossings.rbegin(); it != word.crossings.rend(); ++it)
    inv.crossings.push_back({it->index, -it->sign});
  return inv;
}

BraidWord concat_words(const BraidWord& a, const BraidWord& b) {
  if (a.strandCount != b.strandCount)
    throw Error("concat_words: strand counts differ");
  BraidWord out = a;
  out.crossings.insert(out.crossings.end(), b.crossings.begin(),
                       b.crossings.end());
  return out;
}

BraidWord free_reduce(const BraidWord& word) {
  BraidWord out;
  out.strandCount = word.strandCount;
  for (const Crossing& c : word.crossings) {
    if (!out.crossings.empty() && out.crossings.back().index == c.index &&
        out.crossings.back().sign == -c.sign) {
      out.crossings.pop_back();
    } else {
      out.crossings.push_back(c);
    }
  }
  return out;
}

std::vector<int> induced_permutation(const BraidWord& word) {
  check_word(word);
  const int n = word.strandCount;
  std::vector<int> atPos(n);  // atPos[p] = strand currently at position p+1
  for (int p = 0; p < n; ++p) atPos[p] = p + 1;
  for (const Crossing& c : word.crossings)
    std::swap(atPos[c.index - 1], atPos[c.index]);
  std::vector<int> perm(n);
  for (int p = 0; p < n; ++p) perm[atPos[p] - 1] = p + 1;
  return perm;
}

bool is_purebraid(const BraidWord& word) {
  std::vector<int> perm = induced_permutation(word);
  for (int s = 0; s < word.strandCount; ++s)
    if (perm[s] != s + 1) return false;
  return true;
}

std::optional<std::vector<int>> weave_trajectory(const BraidWord& word,
                                                 int warpStart) {
  check_word(word);
  if (warpStart < 1 || warpStart > word.strandCount)
    throw Error("weave_trajectory: warp start out of range");
  std::vector<int> traj;
  traj.reserve(word.crossings.size() + 1);
  int pos = warpStart;
  traj.push_back(pos);
  for (const Crossing& c : word.crossings) {
    if (pos == c.index)
      pos = c.index + 1;
    else if (pos == c.index + 1)
      pos = c.index;
    else
      return std::nullopt;
    traj.push_back(pos);
  }
  return traj;
}

namespace {

// Per-path action of one crossing: amplitudes[src] feeds targetA (always)
// and targetB (only for the two-channel mixing case).
struct PlanEntry {
  std::int32_t targetA;
  std::int32_t targetB;  // -1 if absent
  Complex cA;
  Complex cB;
};

struct GeneratorPlan {
  std::vector<PlanEntry> entries;
};

GeneratorPlan build_plan(const FusionPathBasis& basis, int index, int sign) {
  const int n = basis.dot_count();
  if (index < 1 || index >= n)
    throw Error("generator index " + std::to_string(index) +
                " out of range for " + std::to_string(n) + " strands");
  const ModelConstants& mc = model_constants();
  Complex r1 = mc.rPhaseCharge1;
  Complex rt = mc.rPhaseChargeTau;
  if (sign < 0) {
    r1 = std::conj(r1);
    rt = std::conj(rt);
  }
  // Two-channel block F * diag(r1, rt) * F.
  const Eigen::Matrix2d& f = mc.fMatrix;
  Eigen::Matrix2cd block;
  block.setZero();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      block(a, b) = f(a, 0) * r1 * f(0, b) + f(a, 1) * rt * f(1, b);

  GeneratorPlan plan;
  plan.entries.resize(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    const FusionPath& p = basis.path(k);
    const Label la = p.leafLabels[index - 1];
    const Label lb = p.leafLabels[index];
    const Label xa = p.intermediateCharges[index - 1];
    const Label xm = p.intermediateCharges[index];
    const Label xb = p.intermediateCharges[index + 1];
    PlanEntry e{static_cast<std::int32_t>(k), -1, Complex(0), Complex(0)};
    if (la == Label::trivial || lb == Label::trivial) {
      FusionPath q = p;
      std::swap(q.leafLabels[index - 1], q.leafLabels[index]);
      Label nxm = xm;
      if (lb == Label::trivial) nxm = xa;  // trivial now in the left slot
      if (la == Label::trivial) nxm = xb;  // trivial now in the right slot
      if (la == Label::trivial && lb == Label::trivial) nxm = xm;
      q.intermediateCharges[index] = nxm;
      auto t = basis.find(q);
      if (!t)
        throw Error("generator action leaves the basis: basis is not closed "
                    "under leaf swaps");
      e.targetA = static_cast<std::int32_t>(*t);
      e.cA = Complex(1.0);
    } else if (!(xa == Label::tau && xb == Label::tau)) {
      e.cA = (xa == xb) ? r1 : rt;
    } else {
      const int col = (xm == Label::tau) ? 1 : 0;
      FusionPath q = p;
      q.intermediateCharges[index] =
          (xm == Label::tau) ? Label::trivial : Label::tau;
      auto t = basis.find(q);
      if (!t)
        throw Error("generator action leaves the basis: missing channel "
                    "partner path");
      e.cA = block(col, col);
      e.targetB = static_cast<std::int32_t>(*t);
      e.cB = block(1 - col, col);
    }
    plan.entries[k] = e;
  }
  return plan;
}

void apply_plan(const GeneratorPlan& plan, const Eigen::VectorXcd& in,
                Eigen::VectorXcd& out) {
  out.setZero();
  for (std::size_t k = 0; k < plan.entries.size(); ++k) {
    const PlanEntry& e = plan.entries[k];
    const Complex a = in[k];
    out[e.targetA] += e.cA * a;
    if (e.targetB >= 0) out[e.targetB] += e.cB * a;
  }
}

// Plans for the distinct (index, sign) pairs appearing in a word.
class PlanCache {
 public:
  explicit PlanCache(const FusionPathBasis& basis) : basis_(basis) {}

  const GeneratorPlan& get(int index, int sign) {
    const int key = index * 2 + (sign < 0 ? 1 : 0);
    auto it = cache_.find(key);
    if (it == cache_.end())
      it = cache_.emplace(key, build_plan(basis_, index, sign)).first;
    return it->second;
  }

 private:
  const FusionPathBasis& basis_;
  std::unordered_map<int, GeneratorPlan> cache_;
};

void run_word(const std::vector<const GeneratorPlan*>& plans,
              Eigen::VectorXcd& vec, Eigen::VectorXcd& scratch) {
  for (const GeneratorPlan* plan : plans) {
    apply_plan(*plan, vec, scratch);
    vec.swap(scratch);
  }
}

}  // namespace

SectorUnitary generator_matrix(const BasisPtr& basis, int index, int sign) {
  BraidWord w;
  w.strandCount = basis->dot_count();
  w.push(index, sign);
  return word_unitary(w, basis);
}

StateVector apply_word(const BraidWord& word, const StateVector& state) {
  check_word(word);
  if (!state.basis) throw Error("apply_word: state has no basis");
  if (word.strandCount != state.basis->dot_count())
    throw Error("apply_word: word strand count " +
                std::to_string(word.strandCount) + " != basis dot count " +
                std::to_string(state.basis->dot_count()));
  if (state.amplitudes.size() != static_cast<Eigen::Index>(state.basis->size()))
    throw Error("apply_word: amplitude length does not match basis");
  PlanCache cache(*state.basis);
  std::vector<const GeneratorPlan*> plans;
  plans.reserve(word.crossings.size());
  for (const Crossing& c : word.crossings)
    plans.push_back(&cache.get(c.index, c.sign));
  StateVector out{state.basis, state.amplitudes};
  Eigen::VectorXcd scratch(out.amplitudes.size());
  run_word(plans, out.amplitudes, scratch);
  return out;
}

SectorUnitary word_unitary(const BraidWord& word, const BasisPtr& basis,
                           int jobs) {
  check_word(word);
  if (!basis) throw Error("word_unitary: null basis");
  if (word.strandCount != basis->dot_count())
    throw Error("word_unitary: word strand count does not match basis");
  const Eigen::Index dim = static_cast<Eigen::Index>(basis->size());
  SectorUnitary result{basis, Eigen::MatrixXcd::Zero(dim, dim)};
  if (dim == 0) return result;

  PlanCache cache(*basis);
  std::vector<const GeneratorPlan*> plans;
  plans.reserve(word.crossings.size());
  for (const Crossing& c : word.crossings)
    plans.push_back(&cache.get(c.index, c.sign));

  auto run_columns = [&](Eigen::Index begin, Eigen::Index end) {
    Eigen::VectorXcd col(dim), scratch(dim);
    for (Eigen::Index j = begin; j < end; ++j) {
      col.setZero();
      col[j] = Complex(1.0);
      run_word(plans, col, scratch);
      result.matrix.col(j) = col;
    }
  };

  if (jobs <= 1 || dim < 2 * jobs) {
    run_columns(0, dim);
  } else {
    std::vector<std::thread> workers;
    const Eigen::Index chunk = (dim + jobs - 1) / jobs;
    for (int t = 0; t < jobs; ++t) {
      const Eigen::Index begin = t * chunk;
      const Eigen::Index end = std::min(dim, begin + chunk);
      if (begin >= end) break;
      workers.emplace_back(run_columns, begin, end);
    }
    for (std::thread& w : workers) w.join();
  }
  return result;
}

double projective_distance(const Eigen::MatrixXcd& u,
                           const Eigen::MatrixXcd& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols() || u.rows() != u.cols())
    throw Error("projective_distance: dimension mismatch");
  const Eigen::Index dim = u.rows();
  if (dim == 0) return 0.0;
  Eigen::MatrixXcd w = u.adjoint() * v;
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(w, false);
  std::vector<double> angles(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    angles[i] = std::arg(solver.eigenvalues()[i]);
  std::sort(angles.begin(), angles.end());
  // Width of the smallest arc containing all eigenphases = 2*pi minus the
  // largest gap between consecutive phases on the circle.
  double maxGap = 2.0 * M_PI - (angles.back() - angles.front());
  for (std::size_t i = 1; i < angles.size(); ++i)
    maxGap = std::max(maxGap, angles[i] - angles[i - 1]);
  const double width = 2.0 * M_PI - maxGap;
  return 2.0 * std::sin(std::clamp(width / 4.0, 0.0, M_PI / 2.0));
}

double projective_distance(const SectorUnitary& u, const SectorUnitary& v) {
  if (!u.basis || !v.basis) throw Error("projective_distance: null basis");
  if (!u.basis->same_basis(*v.basis))
    throw Error("projective_distance: operators live on different bases");
  return projective_distance(u.matrix, v.matrix);
}

}  // namespace fibdistill
