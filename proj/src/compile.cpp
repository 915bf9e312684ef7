#include "fibdistill/compile.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace fibdistill {

namespace {

Quat quat_negate(const Quat& q) { return Quat{-q.w, -q.x, -q.y, -q.z}; }

double quat_angle(const Quat& q) {
  const double vn = std::sqrt(q.x * q.x + q.y * q.y + q.z * q.z);
  return 2.0 * std::atan2(vn, std::abs(q.w));
}

Quat commutator_quat(const Quat& a, const Quat& b) {
  return quat_mul(quat_mul(a, b), quat_mul(quat_conj(a), quat_conj(b)));
}

// Rotations by phi about x and y whose group commutator has the given
// rotation angle, aligned so the commutator equals delta exactly.
void balanced_commutator(const Quat& delta, Quat& v, Quat& w) {
  const double theta = quat_angle(delta);
  const double xAxis[3] = {1.0, 0.0, 0.0};
  const double yAxis[3] = {0.0, 1.0, 0.0};
  // The commutator angle grows monotonically in phi up to the phi that
  // realizes a half turn; bisect inside that window.
  const double phiMax = 2.0 * std::asin(std::pow(2.0, -0.25));
  double lo = 0.0, hi = phiMax;
  for (int it = 0; it < 120; ++it) {
    const double mid = 0.5 * (lo + hi);
    const Quat c = commutator_quat(quat_rotation(xAxis, mid),
                                   quat_rotation(yAxis, mid));
    if (quat_angle(c) < theta)
      lo = mid;
    else
      hi = mid;
  }
  const double phi = 0.5 * (lo + hi);
  const Quat rx = quat_rotation(xAxis, phi);
  const Quat ry = quat_rotation(yAxis, phi);
  const Quat comm = commutator_quat(rx, ry);

  double n0[3], n1[3], a0, a1;
  quat_axis_angle(comm, n0, a0);
  quat_axis_angle(delta, n1, a1);
  const double cross[3] = {n0[1] * n1[2] - n0[2] * n1[1],
                           n0[2] * n1[0] - n0[0] * n1[2],
                           n0[0] * n1[1] - n0[1] * n1[0]};
  const double cn =
      std::sqrt(cross[0] * cross[0] + cross[1] * cross[1] + cross[2] * cross[2]);
  const double dot = n0[0] * n1[0] + n0[1] * n1[1] + n0[2] * n1[2];
  Quat s{};  // identity
  if (cn > 1e-12) {
    s = quat_rotation(cross, std::atan2(cn, dot));
  } else if (dot < 0.0) {
    // Antiparallel axes: any axis orthogonal to n0 works; take the cross
    // with the smallest-index coordinate axis that is not parallel.
    for (int j = 0; j < 3; ++j) {
      double e[3] = {0.0, 0.0, 0.0};
      e[j] = 1.0;
      const double c2[3] = {e[1] * n0[2] - e[2] * n0[1],
                            e[2] * n0[0] - e[0] * n0[2],
                            e[0] * n0[1] - e[1] * n0[0]};
      const double c2n =
          std::sqrt(c2[0] * c2[0] + c2[1] * c2[1] + c2[2] * c2[2]);
      if (c2n > 1e-6) {
        s = quat_rotation(c2, M_PI);
        break;
      }
    }
  }
  v = quat_mul(quat_mul(s, rx), quat_conj(s));
  w = quat_mul(quat_mul(s, ry), quat_conj(s));
}

std::vector<int> invert_symbols(const BraidNet& net,
                                const std::vector<int>& syms) {
  std::vector<int> out;
  out.reserve(syms.size());
  for (auto it = syms.rbegin(); it != syms.rend(); ++it)
    out.push_back(net.symbols()[*it].inverseId);
  return out;
}

struct SkInterim {
  std::vector<int> syms;
  Quat q;
};

SkInterim sk_approx(const BraidNet& net, const Quat& target, int depth,
                    bool checkCoarse) {
  if (depth == 0) {
    const BraidNet::Lookup l = net.nearest(target);
    if (checkCoarse && l.distance >= M_SQRT1_2)
      throw NetTooCoarseError(l.distance, net.size());
    return SkInterim{net.entry_symbols(l.entryId), net.entry_quat(l.entryId)};
  }
  SkInterim u = sk_approx(net, target, depth - 1, checkCoarse);
  Quat delta = quat_mul(target, quat_conj(u.q));
  if (delta.w < 0.0) delta = quat_negate(delta);
  if (quat_angle(delta) < 1e-13) return u;

  Quat v, w;
  balanced_commutator(delta, v, w);
  const SkInterim va = sk_approx(net, v, depth - 1, false);
  const SkInterim wa = sk_approx(net, w, depth - 1, false);

  // Word order: previous approximation first, then w~^-1 v~^-1 w~ v~, so
  // the represented element is v~ w~ v~^-1 w~^-1 u~.
  SkInterim out;
  out.syms = u.syms;
  const std::vector<int> wi = invert_symbols(net, wa.syms);
  const std::vector<int> vi = invert_symbols(net, va.syms);
  out.syms.insert(out.syms.end(), wi.begin(), wi.end());
  out.syms.insert(out.syms.end(), vi.begin(), vi.end());
  out.syms.insert(out.syms.end(), wa.syms.begin(), wa.syms.end());
  out.syms.insert(out.syms.end(), va.syms.begin(), va.syms.end());
  out.q = quat_mul(va.q, quat_mul(wa.q, quat_mul(quat_conj(va.q),
                                                 quat_mul(quat_conj(wa.q), u.q))));
  return out;
}

void check_structural(const BraidWord& word, const BraidNet& net) {
  if (net.constraint() == NetConstraint::purebraid4) {
    if (!is_purebraid(word))
      throw Error("compiled word lost the purebraid property");
  } else {
    auto traj = weave_trajectory(word, 2);
    if (!traj || traj->back() != 2)
      throw Error("compiled word lost the closed-weave property");
  }
}

}  // namespace

CompileResult solovay_kitaev(const CompileTarget& target, const BraidNet& net,
                             int depth) {
  if (depth < 0) throw CompileError("solovay_kitaev: depth must be >= 0");
  if (!target.basis || !net.basis()->same_basis(*target.basis))
    throw CompileError("solovay_kitaev: net was built for a different basis");
  if (target.constraint == ConstraintKind::purebraid &&
      net.constraint() != NetConstraint::purebraid4)
    throw CompileError("solovay_kitaev: purebraid target needs a purebraid net");
  if (target.constraint == ConstraintKind::weave &&
      net.constraint() != NetConstraint::weave3)
    throw CompileError("solovay_kitaev: weave target needs a weave net");
  if (target.target.matrix.rows() != 2 || target.target.matrix.cols() != 2)
    throw CompileError("solovay_kitaev: target must be 2x2");

  const Quat q = quat_from_unitary(target.target.matrix);
  const SkInterim interim = sk_approx(net, q, depth, true);
  CompileResult result;
  result.word = free_reduce(net.expand_symbols(interim.syms));
  check_structural(result.word, net);
  const SectorUnitary u = word_unitary(result.word, net.basis());
  result.achievedEpsilon = projective_distance(u.matrix, target.target.matrix);
  result.wordLength = result.word.length();
  result.skDepth = depth;
  return result;
}

namespace {

const BraidNet& cached_net(NetConstraint c, const NetParameters& p) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, double, std::size_t>,
                  std::unique_ptr<BraidNet>>
      cache;
  std::lock_guard<std::mutex> lock(mu);
  const auto key = std::make_tuple(static_cast<int>(c), p.maxBaseLength,
                                   p.cellSize, p.entryCap);
  auto it = cache.find(key);
  if (it == cache.end()) {
    BasisPtr basis =
        c == NetConstraint::purebraid4
            ? enumerate_basis(4, Label::trivial,
                              std::vector<Label>(4, Label::tau))
            : enumerate_basis(3, Label::tau, std::vector<Label>(3, Label::tau));
    it = cache.emplace(key, std::make_unique<BraidNet>(basis, c, p)).first;
  }
  return *it->second;
}

}  // namespace

const BraidNet& purebraid_net(const NetParameters& params) {
  return cached_net(NetConstraint::purebraid4, params);
}

const BraidNet& weave_net(const NetParameters& params) {
  return cached_net(NetConstraint::weave3, params);
}

Eigen::Matrix2cd not_target_matrix() {
  Eigen::Matrix2cd m;
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

CompileResult compile_not_purebraid(double epsilon,
                                    const CompileOptions& options) {
  if (epsilon <= 0.0) throw CompileError("epsilon must be > 0");
  const BraidNet& net = purebraid_net(options.purebraidNet);
  CompileTarget t;
  t.basis = net.basis();
  t.target = SectorUnitary{net.basis(), not_target_matrix()};
  t.constraint = ConstraintKind::purebraid;
  t.epsilon = epsilon;
  double best = 2.0;
  for (int depth = 0; depth <= options.maxDepth; ++depth) {
    CompileResult r = solovay_kitaev(t, net, depth);
    best = std::min(best, r.achievedEpsilon);
    if (r.achievedEpsilon <= epsilon) return r;
  }
  throw CompileError("compile_not_purebraid: epsilon " + std::to_string(epsilon) +
                     " not reached within depth " +
                     std::to_string(options.maxDepth) + " (best " +
                     std::to_string(best) + ")");
}

CompileResult compile_injection_weave(double epsilon,
                                      const CompileOptions& options) {
  if (epsilon <= 0.0) throw CompileError("epsilon must be > 0");
  const BraidNet& net = weave_net(options.weaveNet);
  const BasisPtr& basis = net.basis();

  // Carrier crossings take the warp 3 -> 2 before and 2 -> 1 after the
  // position-2 correction word; the correction must then cancel their
  // sector action.
  Quat qs1[2], qs2[2];  // index 0: sign +1, index 1: sign -1
  for (int i = 0; i < 2; ++i) {
    const int sign = i == 0 ? 1 : -1;
    qs1[i] = quat_from_unitary(generator_matrix(basis, 1, sign).matrix);
    qs2[i] = quat_from_unitary(generator_matrix(basis, 2, sign).matrix);
  }
  const Eigen::Matrix2cd identity = Eigen::Matrix2cd::Identity();
  static const int carriers[4][2] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};

  double best = 2.0;
  for (int depth = 0; depth <= options.maxDepth; ++depth) {
    std::optional<CompileResult> pick;
    for (const auto& ef : carriers) {
      const int e = ef[0], f = ef[1];
      const Quat target = quat_mul(quat_conj(qs1[f > 0 ? 0 : 1]),
                                   quat_conj(qs2[e > 0 ? 0 : 1]));
      const SkInterim interim = sk_approx(net, target, depth, true);
      BraidWord full;
      full.strandCount = 3;
      full.push(2, e);
      const BraidWord mid = net.expand_symbols(interim.syms);
      full.crossings.insert(full.crossings.end(), mid.crossings.begin(),
                            mid.crossings.end());
      full.push(1, f);
      full = free_reduce(full);
      const SectorUnitary u = word_unitary(full, basis);
      const double achieved = projective_distance(u.matrix, identity);
      best = std::min(best, achieved);
      if (achieved > epsilon) continue;
      if (!pick || full.length() < pick->wordLength)
        pick = CompileResult{full, achieved, full.length(), depth};
    }
    if (pick) {
      auto traj = weave_trajectory(pick->word, 3);
      if (!traj || traj->back() != 1)
        throw Error("compiled weave lost its 3 -> 1 trajectory");
      return *pick;
    }
  }
  throw CompileError("compile_injection_weave: epsilon " +
                     std::to_string(epsilon) + " not reached within depth " +
                     std::to_string(options.maxDepth) + " (best " +
                     std::to_string(best) + ")");
}

}  // namespace fibdistill
