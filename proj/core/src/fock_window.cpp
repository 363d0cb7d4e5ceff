#include "ladder/fock_window.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>

#include "ladder/dressed.hpp"
#include "ladder/errors.hpp"
#include "ladder/oscillator.hpp"
#include "ladder/parallel.hpp"
#include "ladder/trilevel.hpp"
#include "adiabatic_states.hpp"
#include "lapack_support.hpp"

namespace ladder {
namespace {

constexpr std::size_t kDenseFallbackLimit = 6000;
constexpr std::int64_t kProjectionReach = detail::kAdiabaticReach;
constexpr std::int64_t kMaxProjectionReach = detail::kMaxAdiabaticReach;
constexpr double kLostWeight = 1e-8;
constexpr int kMaxRefinements = 20;
constexpr double kAmbiguityMargin = 1e-3;

std::string label_text(int level, std::int64_t n) {
  return "(" + std::to_string(level) + ", " + std::to_string(n) + ")";
}

bool in_sector(Parity sector, int level, std::int64_t n) {
  return sector == Parity::both || parity_of(level, n) == sector;
}

Eigen::VectorXd multiply(const FockWindowHamiltonian& h, const Eigen::VectorXd& x) {
  const std::size_t dim = h.dimension();
  const std::size_t kd = h.bandwidth();
  const std::vector<double>& band = h.band();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
  for (std::size_t c = 0; c < dim; ++c) {
    const auto ci = static_cast<Eigen::Index>(c);
    y[ci] += band[c * (kd + 1)] * x[ci];
    for (std::size_t k = 1; k <= kd && c + k < dim; ++k) {
      const double a = band[k + c * (kd + 1)];
      if (a == 0.0) continue;
      const auto ri = static_cast<Eigen::Index>(c + k);
      y[ri] += a * x[ci];
      y[ci] += a * x[ri];
    }
  }
  return y;
}

std::vector<EigenPair> to_pairs(const detail::Eigensystem& es) {
  std::vector<EigenPair> out(es.values.size());
  const auto n = static_cast<Eigen::Index>(es.n);
  for (std::size_t i = 0; i < es.values.size(); ++i) {
    out[i].value = es.values[i];
    out[i].vector = Eigen::Map<const Eigen::VectorXd>(es.vectors.data() + i * es.n, n);
  }
  return out;
}

// Rotated-frame states Phi_{j,n} = e_j u_{j,n}(y) mapped back to the lab
// frame. u_{j,n} is the eigenfunction of (1/2)(-d2/dy2 + y2) + E_j(y) whose
// mean occupation is nearest n, solved on a local DVR that is widened until
// the state no longer touches its edges.
class StateProjector {
 public:
  explicit StateProjector(std::int64_t n) : n_(n) {}

  std::int64_t n() const noexcept { return n_; }

  Eigen::VectorXd vector(const FockWindowHamiltonian& h, int level) const {
    check_level(level);
    if (!in_sector(h.parity(), level, n_)) {
      throw InvalidArgument("state " + label_text(level, n_) + " is outside the parity sector");
    }
    if (!h.index_of({level, n_})) {
      throw InvalidArgument("state " + label_text(level, n_) + " is outside the Fock window");
    }
    for (std::int64_t reach = kProjectionReach; reach <= kMaxProjectionReach; reach *= 2) {
      if (std::optional<Eigen::VectorXd> psi = attempt(h, level, reach)) return std::move(*psi);
    }
    throw ConvergenceError("rotated-frame state " + label_text(level, n_) +
                           " does not fit the largest projection window");
  }

 private:
  std::optional<Eigen::VectorXd> attempt(const FockWindowHamiltonian& h, int level,
                                         std::int64_t reach) const {
    auto cached = dvrs_.find(reach);
    if (cached == dvrs_.end()) {
      cached = dvrs_.emplace(reach, FockDvr(std::max<std::int64_t>(0, n_ - reach), n_ + reach)).first;
    }
    const FockDvr& dvr = cached->second;
    const std::vector<AdiabaticPoint> basis = continuous_eigenbasis(h.params(), dvr.nodes());
    const auto size = static_cast<Eigen::Index>(dvr.size());
    std::vector<double> f(basis.size());
    for (std::size_t q = 0; q < basis.size(); ++q) {
      f[q] = basis[q].levels[static_cast<std::size_t>(level - 1)];
    }
    const std::optional<Eigen::VectorXd> u = detail::adiabatic_oscillator_state(dvr, f, n_);
    if (!u) return std::nullopt;

    // Components on number states: S diag(U_{i,level}(nodes)) S^T u.
    const Eigen::VectorXd at_nodes = dvr.transform().transpose() * *u;
    Eigen::VectorXd psi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(h.dimension()));
    double captured = 0.0;
    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
      Eigen::VectorXd weighted(size);
      for (Eigen::Index q = 0; q < size; ++q) {
        weighted[q] = basis[static_cast<std::size_t>(q)].basis(i, level - 1) * at_nodes[q];
      }
      const Eigen::VectorXd component = dvr.transform() * weighted;
      for (Eigen::Index r = 0; r < size; ++r) {
        const double c2 = component[r] * component[r];
        total += c2;
        const auto idx = h.index_of({i + 1, dvr.first() + r});
        if (!idx) continue;
        psi[static_cast<Eigen::Index>(*idx)] = component[r];
        captured += c2;
      }
    }
    if (total - captured > kLostWeight * total) {
      throw InvalidArgument("Fock window too narrow for state " + label_text(level, n_));
    }
    return psi / psi.norm();
  }

  std::int64_t n_;
  // The local DVR depends only on n and the reach, so it is built once.
  mutable std::map<std::int64_t, FockDvr> dvrs_;
};

void check_window(std::int64_t center, std::int64_t half_width) {
  if (half_width < 8) throw InvalidArgument("Fock window half-width must be >= 8");
  if (center - half_width < 0) {
    throw InvalidArgument("Fock window [" + std::to_string(center - half_width) + ", " +
                          std::to_string(center + half_width) + "] reaches below n = 0");
  }
}

struct Identified {
  std::size_t index = 0;
  double overlap = 0.0;
};

Identified best_overlap(const std::vector<EigenPair>& pairs, const Eigen::VectorXd& psi) {
  Identified best;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const double w = std::pow(pairs[i].vector.dot(psi), 2);
    if (w > best.overlap) best = {i, w};
  }
  return best;
}

}  // namespace

Parity parity_of(int level, std::int64_t n) {
  return ((static_cast<std::int64_t>(level) + n) % 2 == 0) ? Parity::even : Parity::odd;
}

FockWindowHamiltonian::FockWindowHamiltonian(const ModelParams& params, std::int64_t center,
                                             std::int64_t half_width, Parity parity)
    : params_(params), center_(center), half_width_(half_width), parity_(parity) {
  check_window(center, half_width);
  const std::int64_t first = center - half_width;
  const std::int64_t last = center + half_width;
  for (std::int64_t n = first; n <= last; ++n) {
    for (int level = 1; level <= 3; ++level) {
      if (in_sector(parity, level, n)) labels_.push_back({level, n});
    }
  }

  struct Entry {
    std::size_t row, col;
    double value;
  };
  std::vector<Entry> couplings;
  for (std::size_t c = 0; c < labels_.size(); ++c) {
    const BasisLabel& b = labels_[c];
    // Lower partner (level + 1, n +- 1) only, so each pair is visited once.
    if (b.level == 3) continue;
    const double strength = b.level == 1 ? params.u() : params.v();
    for (std::int64_t dn : {-1, 1}) {
      const auto r = index_of({b.level + 1, b.n + dn});
      if (!r) continue;
      const double amplitude = std::sqrt(static_cast<double>(std::max(b.n, b.n + dn)));
      couplings.push_back({std::max(*r, c), std::min(*r, c), strength * amplitude});
    }
  }
  for (const Entry& e : couplings) bandwidth_ = std::max(bandwidth_, e.row - e.col);

  band_.assign((bandwidth_ + 1) * labels_.size(), 0.0);
  for (std::size_t c = 0; c < labels_.size(); ++c) {
    const BasisLabel& b = labels_[c];
    band_[c * (bandwidth_ + 1)] = params.bare(b.level) + static_cast<double>(b.n - center);
  }
  for (const Entry& e : couplings) band_[(e.row - e.col) + e.col * (bandwidth_ + 1)] = e.value;
}

std::optional<std::size_t> FockWindowHamiltonian::index_of(BasisLabel label) const {
  if (label.level < 1 || label.level > 3) return std::nullopt;
  if (std::abs(label.n - center_) > half_width_) return std::nullopt;
  if (!in_sector(parity_, label.level, label.n)) return std::nullopt;
  const std::int64_t first = center_ - half_width_;
  const std::int64_t slot = 3 * (label.n - first) + (label.level - 1);
  if (parity_ == Parity::both) return static_cast<std::size_t>(slot);
  // In a sector exactly one or two of the three levels survive per n, in an
  // alternating pattern; count the admitted slots before this one.
  auto lower = labels_.begin();
  auto upper = labels_.end();
  const auto it = std::lower_bound(lower, upper, label, [](const BasisLabel& a, const BasisLabel& b) {
    return a.n != b.n ? a.n < b.n : a.level < b.level;
  });
  if (it == upper || !(*it == label)) return std::nullopt;
  return static_cast<std::size_t>(it - lower);
}

double FockWindowHamiltonian::element(std::size_t row, std::size_t col) const {
  const std::size_t r = std::max(row, col);
  const std::size_t c = std::min(row, col);
  if (r >= labels_.size() || r - c > bandwidth_) return 0.0;
  return band_[(r - c) + c * (bandwidth_ + 1)];
}

Eigen::MatrixXd FockWindowHamiltonian::dense() const {
  const auto n = static_cast<Eigen::Index>(labels_.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index r = c; r < n && static_cast<std::size_t>(r - c) <= bandwidth_; ++r) {
      const double a = element(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      m(r, c) = a;
      m(c, r) = a;
    }
  }
  for (const auto& [row, col, delta] : asymmetry_) {
    m(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += delta;
  }
  return m;
}

double FockWindowHamiltonian::norm() const {
  std::vector<double> rows(labels_.size(), 0.0);
  for (std::size_t c = 0; c < labels_.size(); ++c) {
    rows[c] += std::abs(band_[c * (bandwidth_ + 1)]);
    for (std::size_t k = 1; k <= bandwidth_ && c + k < labels_.size(); ++k) {
      const double a = std::abs(band_[k + c * (bandwidth_ + 1)]);
      rows[c] += a;
      rows[c + k] += a;
    }
  }
  return rows.empty() ? 0.0 : *std::max_element(rows.begin(), rows.end());
}

void FockWindowHamiltonian::inject_asymmetry(std::size_t row, std::size_t col, double delta) {
  if (row >= labels_.size() || col >= labels_.size()) {
    throw InvalidArgument("asymmetry target outside the matrix");
  }
  asymmetry_.push_back({static_cast<double>(row), static_cast<double>(col), delta});
}

FockWindowHamiltonian build_hamiltonian(const ModelParams& params, std::int64_t center,
                                        std::int64_t half_width, Parity parity) {
  return FockWindowHamiltonian(params, center, half_width, parity);
}

std::vector<EigenPair> eigen_in_range(const FockWindowHamiltonian& h, double lower,
                                      double upper) {
  if (!(upper > lower)) throw InvalidArgument("empty eigenvalue range");
  try {
    return to_pairs(
        detail::band_eigenpairs_in_range(h.band(), h.dimension(), h.bandwidth(), lower, upper));
  } catch (const ConvergenceError&) {
    if (h.dimension() > kDenseFallbackLimit) throw;
  }
  const Eigen::MatrixXd m = h.dense();
  const detail::Eigensystem all = detail::dense_eigensystem(
      std::vector<double>(m.data(), m.data() + m.size()), h.dimension());
  std::vector<EigenPair> pairs = to_pairs(all);
  std::erase_if(pairs, [&](const EigenPair& p) { return p.value <= lower || p.value > upper; });
  return pairs;
}

std::vector<EigenPair> eigen_near(const FockWindowHamiltonian& h, double target,
                                  std::size_t count) {
  if (count == 0 || count > h.dimension()) {
    throw InvalidArgument("requested eigenpair count must be in [1, dimension]");
  }
  const double reach = h.norm() + std::abs(target) + 1.0;
  double delta = 0.5 * static_cast<double>(count) + 1.0;
  std::vector<EigenPair> pairs;
  while (true) {
    pairs = eigen_in_range(h, target - delta, target + delta);
    if (pairs.size() >= count || delta > reach) break;
    delta *= 2.0;
  }
  if (pairs.size() < count) throw InternalError("eigen_near: spectrum smaller than expected");
  std::sort(pairs.begin(), pairs.end(), [&](const EigenPair& a, const EigenPair& b) {
    return std::abs(a.value - target) < std::abs(b.value - target);
  });
  pairs.resize(count);
  std::sort(pairs.begin(), pairs.end(),
            [](const EigenPair& a, const EigenPair& b) { return a.value < b.value; });
  return pairs;
}

Eigen::VectorXd dressed_state_vector(const FockWindowHamiltonian& h, int level, std::int64_t n) {
  return StateProjector(n).vector(h, level);
}

ExactLevel exact_level(const ModelParams& params, std::int64_t center, std::int64_t half_width,
                       int level, std::optional<std::int64_t> n) {
  check_level(level);
  const std::int64_t occupation = n.value_or(center);
  const FockWindowHamiltonian h(params, center, half_width, parity_of(level, occupation));
  const Eigen::VectorXd psi = dressed_state_vector(h, level, occupation);
  const double target = psi.dot(multiply(h, psi));
  const std::vector<EigenPair> pairs = eigen_near(h, target, std::min<std::size_t>(7, h.dimension()));
  Identified best = best_overlap(pairs, psi);
  // A degenerate eigenspace (e.g. an exact crossing at zero coupling) has no
  // preferred basis; use the weight on the whole eigenspace.
  const double degenerate = 1e-10 * std::max(1.0, h.norm());
  double cluster = 0.0;
  for (const EigenPair& pair : pairs) {
    if (std::abs(pair.value - pairs[best.index].value) <= degenerate) {
      cluster += std::pow(pair.vector.dot(psi), 2);
    }
  }
  best.overlap = cluster;
  if (best.overlap < kMinLabelOverlap) {
    throw ConvergenceError("no eigenstate overlaps " + label_text(level, occupation) +
                           " by more than " + std::to_string(kMinLabelOverlap) +
                           " (best " + std::to_string(best.overlap) + ")");
  }
  ExactLevel out;
  out.level = level;
  out.n = occupation;
  out.energy = pairs[best.index].value - static_cast<double>(occupation - center);
  out.overlap = best.overlap;
  return out;
}

std::array<ExactLevel, 3> exact_dressed_levels(const ModelParams& params, std::int64_t center,
                                               std::int64_t half_width) {
  return {exact_level(params, center, half_width, 1), exact_level(params, center, half_width, 2),
          exact_level(params, center, half_width, 3)};
}

double window_convergence(const ModelParams& params, std::int64_t center, std::int64_t half_width,
                          std::size_t count) {
  double change = 0.0;
  for (Parity sector : {Parity::even, Parity::odd}) {
    const FockWindowHamiltonian narrow(params, center, half_width, sector);
    const FockWindowHamiltonian wide(params, center, std::min(2 * half_width, center), sector);
    const std::vector<EigenPair> a = eigen_near(narrow, 0.0, count);
    const std::vector<EigenPair> b = eigen_near(wide, 0.0, count);
    for (std::size_t i = 0; i < count; ++i) change = std::max(change, std::abs(a[i].value - b[i].value));
  }
  return change;
}

// ---------------------------------------------------------------------------
// Level tracking

namespace {

struct TrackState {
  double t = 0.0;
  std::vector<Eigen::VectorXd> vectors;
  std::vector<double> values;  // offset-relative
};

// Injective assignment labels -> candidates maximising the total squared
// overlap (labels are few, so exhaustive search is cheap).
std::vector<std::size_t> best_assignment(const Eigen::MatrixXd& w) {
  const auto labels = static_cast<std::size_t>(w.rows());
  const auto cands = static_cast<std::size_t>(w.cols());
  std::vector<std::size_t> current(labels), best(labels);
  std::vector<bool> used(cands, false);
  double best_score = -1.0;
  const auto search = [&](auto&& self, std::size_t a, double score) -> void {
    if (a == labels) {
      if (score > best_score) {
        best_score = score;
        best = current;
      }
      return;
    }
    for (std::size_t c = 0; c < cands; ++c) {
      if (used[c]) continue;
      used[c] = true;
      current[a] = c;
      self(self, a + 1, score + w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)));
      used[c] = false;
    }
  };
  search(search, 0, 0.0);
  return best;
}

class Tracker {
 public:
  Tracker(const ModelParams& templ, const CouplingSegment& segment, std::int64_t center,
          std::int64_t half_width, Parity sector, const std::vector<BasisLabel>& labels)
      : templ_(templ), segment_(segment), center_(center), half_width_(half_width),
        sector_(sector), labels_(labels) {}

  FockWindowHamiltonian hamiltonian(double t) const {
    const auto g = segment_.at(t);
    return FockWindowHamiltonian(templ_.with_couplings(g[0], g[1]), center_, half_width_, sector_);
  }

  TrackState start() const {
    const FockWindowHamiltonian h = hamiltonian(0.0);
    TrackState s;
    s.t = 0.0;
    std::vector<std::size_t> taken;
    for (const BasisLabel& label : labels_) {
      const Eigen::VectorXd psi = dressed_state_vector(h, label.level, label.n);
      const double target = psi.dot(multiply(h, psi));
      const std::vector<EigenPair> pairs = eigen_near(h, target, std::min<std::size_t>(7, h.dimension()));
      const Identified best = best_overlap(pairs, psi);
      if (best.overlap < kMinLabelOverlap) {
        throw ConvergenceError("cannot identify " + label_text(label.level, label.n) +
                               " at the segment start");
      }
      Eigen::VectorXd v = pairs[best.index].vector;
      if (v.dot(psi) < 0.0) v = -v;
      for (const Eigen::VectorXd& other : s.vectors) {
        if (std::abs(other.dot(v)) > 0.5) {
          throw ConvergenceError("two labels identify the same eigenstate at the segment start");
        }
      }
      s.vectors.push_back(std::move(v));
      s.values.push_back(pairs[best.index].value);
    }
    return s;
  }

  // One step from `from` to t; nullopt when the assignment is unreliable.
  std::optional<TrackState> step(const TrackState& from, double t, Eigen::MatrixXd& overlaps) const {
    const FockWindowHamiltonian h = hamiltonian(t);
    const auto [lo, hi] = std::minmax_element(from.values.begin(), from.values.end());
    const double reach = 2.0 + std::abs(t - from.t) * 1e3;
    std::vector<EigenPair> cands = eigen_in_range(h, *lo - reach, *hi + reach);
    if (cands.size() < labels_.size()) return std::nullopt;
    const auto nl = static_cast<Eigen::Index>(labels_.size());
    const auto nc = static_cast<Eigen::Index>(cands.size());
    Eigen::MatrixXd w(nl, nc);
    for (Eigen::Index a = 0; a < nl; ++a) {
      for (Eigen::Index c = 0; c < nc; ++c) {
        w(a, c) = std::pow(from.vectors[static_cast<std::size_t>(a)].dot(
                               cands[static_cast<std::size_t>(c)].vector), 2);
      }
    }
    const std::vector<std::size_t> assign = best_assignment(w);
    TrackState next;
    next.t = t;
    overlaps.resize(nl, nl);
    for (Eigen::Index a = 0; a < nl; ++a) {
      const auto chosen = static_cast<Eigen::Index>(assign[static_cast<std::size_t>(a)]);
      const double best = w(a, chosen);
      if (best < kMinLabelOverlap) return std::nullopt;
      for (Eigen::Index c = 0; c < nc; ++c) {
        if (c != chosen && best - w(a, c) < kAmbiguityMargin) return std::nullopt;
      }
      Eigen::VectorXd v = cands[static_cast<std::size_t>(chosen)].vector;
      if (v.dot(from.vectors[static_cast<std::size_t>(a)]) < 0.0) v = -v;
      next.vectors.push_back(std::move(v));
      next.values.push_back(cands[static_cast<std::size_t>(chosen)].value);
    }
    for (Eigen::Index a = 0; a < nl; ++a) {
      for (Eigen::Index b = 0; b < nl; ++b) {
        overlaps(a, b) = std::abs(from.vectors[static_cast<std::size_t>(a)].dot(
            next.vectors[static_cast<std::size_t>(b)]));
      }
    }
    return next;
  }

  TrackedPoint record(const TrackState& s) const {
    TrackedPoint p;
    p.t = s.t;
    const auto g = segment_.at(s.t);
    p.g1 = g[0];
    p.g2 = g[1];
    for (std::size_t a = 0; a < labels_.size(); ++a) {
      p.energies.push_back(s.values[a] - static_cast<double>(labels_[a].n - center_));
    }
    return p;
  }

  // Advances from `from` to t, halving the step while the assignment fails.
  TrackState advance(const TrackState& from, double t, int depth, TrackedLevels& out) const {
    Eigen::MatrixXd overlaps;
    if (std::optional<TrackState> next = step(from, t, overlaps)) {
      out.points.push_back(record(*next));
      out.overlaps.push_back(std::move(overlaps));
      return std::move(*next);
    }
    if (depth >= kMaxRefinements) {
      throw ConvergenceError("irrecoverable label ambiguity near t = " + std::to_string(t));
    }
    const double mid = 0.5 * (from.t + t);
    out.events.push_back("refined step [" + std::to_string(from.t) + ", " + std::to_string(t) + "]");
    const TrackState half = advance(from, mid, depth + 1, out);
    return advance(half, t, depth + 1, out);
  }

 private:
  const ModelParams& templ_;
  CouplingSegment segment_;
  std::int64_t center_;
  std::int64_t half_width_;
  Parity sector_;
  std::vector<BasisLabel> labels_;
};

}  // namespace

TrackedLevels track_levels(const ModelParams& templ, const CouplingSegment& segment, int steps,
                           std::int64_t center, std::int64_t half_width,
                           const std::vector<BasisLabel>& labels) {
  if (steps < 1) throw InvalidArgument("tracking needs at least one step");
  if (labels.empty()) throw InvalidArgument("no labels to track");
  check_window(center, half_width);
  const Parity sector = parity_of(labels.front().level, labels.front().n);
  for (const BasisLabel& label : labels) {
    check_level(label.level);
    if (parity_of(label.level, label.n) != sector) {
      throw InvalidArgument("tracked labels must share one parity sector");
    }
  }
  const Tracker tracker(templ, segment, center, half_width, sector, labels);
  TrackedLevels out;
  out.labels = labels;
  TrackState state = tracker.start();
  out.points.push_back(tracker.record(state));
  for (int s = 1; s <= steps; ++s) {
    state = tracker.advance(state, static_cast<double>(s) / steps, 0, out);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Anticrossings

namespace {

struct GapSetup {
  BasisLabel upper;
  BasisLabel lower;
  Parity sector = Parity::even;
};

GapSetup gap_setup(int quanta, int j, int k, std::int64_t center, std::int64_t half_width) {
  check_level(j);
  check_level(k);
  if (j == k) throw InvalidArgument("an anticrossing needs two distinct levels");
  if (quanta <= 0 || quanta % 2 == 0) {
    throw InvalidArgument("resonances exchange an odd, positive number of quanta");
  }
  check_window(center, half_width);
  GapSetup s;
  s.upper = {j, center + (quanta + 1) / 2};
  s.lower = {k, s.upper.n - quanta};
  s.sector = parity_of(j, s.upper.n);
  if (parity_of(k, s.lower.n) != s.sector) {
    throw InvalidArgument("states " + label_text(j, s.upper.n) + " and " +
                          label_text(k, s.lower.n) + " lie in different parity sectors");
  }
  return s;
}

class GapFunction {
 public:
  GapFunction(const GapSetup& setup, std::int64_t center, std::int64_t half_width,
              double partner_weight)
      : setup_(setup), center_(center), half_width_(half_width), weight_(partner_weight),
        upper_(setup.upper.n), lower_(setup.lower.n) {}

  double operator()(const ModelParams& params) const { return evaluate(params).gap; }

  struct Sample {
    double gap = std::numeric_limits<double>::infinity();
    double mixing = 0.0;
  };

  Sample evaluate(const ModelParams& params) const {
    const FockWindowHamiltonian h(params, center_, half_width_, setup_.sector);
    const Eigen::VectorXd a = upper_.vector(h, setup_.upper.level);
    const Eigen::VectorXd b = lower_.vector(h, setup_.lower.level);
    const double ea = a.dot(multiply(h, a));
    const double eb = b.dot(multiply(h, b));
    const std::vector<EigenPair> pairs =
        eigen_in_range(h, std::min(ea, eb) - 1.5, std::max(ea, eb) + 1.5);
    if (pairs.empty()) return {};
    std::size_t ia = 0;
    double wa = -1.0;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      const double w = std::pow(pairs[i].vector.dot(a), 2);
      if (w > wa) {
        wa = w;
        ia = i;
      }
    }
    double gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (i == ia || std::pow(pairs[i].vector.dot(b), 2) < weight_) continue;
      gap = std::min(gap, std::abs(pairs[i].value - pairs[ia].value));
    }
    return {gap, 1.0 - wa};
  }

 private:
  GapSetup setup_;
  std::int64_t center_;
  std::int64_t half_width_;
  double weight_;
  StateProjector upper_;
  StateProjector lower_;
};

}  // namespace

double anticrossing_gap_at(const ModelParams& params, int quanta, int j, int k,
                           std::int64_t center, std::int64_t half_width, double partner_weight) {
  const GapSetup setup = gap_setup(quanta, j, k, center, half_width);
  return GapFunction(setup, center, half_width, partner_weight)(params);
}

AnticrossingResult anticrossing_gap(const ModelParams& templ, double ratio, int quanta, int j,
                                    int k, std::int64_t center, std::int64_t half_width,
                                    const GapOptions& options) {
  if (!(ratio >= 0.0)) throw InvalidArgument("coupling ratio must be >= 0");
  if (options.scan_points < 5) throw InvalidArgument("gap scan needs at least 5 points");
  const GapSetup setup = gap_setup(quanta, j, k, center, half_width);
  const GapFunction gap(setup, center, half_width, options.partner_weight);

  const std::vector<double> roots =
      resonance_on_line(templ, j, k, quanta, ratio, options.g1_max);
  if (roots.empty()) {
    throw ConvergenceError("no dressed-model resonance " + std::to_string(quanta) +
                           " on the line g2 = " + std::to_string(ratio) + " g1");
  }

  AnticrossingResult result;
  result.j = j;
  result.k = k;
  result.quanta = quanta;
  result.ratio = ratio;
  result.g1_contour = roots.front();
  result.upper = setup.upper;
  result.lower = setup.lower;

  const auto at = [&](double g1) { return gap(templ.with_couplings(g1, ratio * g1)); };
  const double lo = result.g1_contour * (1.0 - options.scan_fraction);
  const double hi = result.g1_contour * (1.0 + options.scan_fraction);
  const int points = options.scan_points;
  for (int i = 0; i < points; ++i) {
    const double g1 = lo + (hi - lo) * i / (points - 1);
    result.scan.push_back({g1, at(g1)});
  }

  const double golden = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 1; i + 1 < points; ++i) {
    const double left = result.scan[static_cast<std::size_t>(i - 1)][1];
    const double here = result.scan[static_cast<std::size_t>(i)][1];
    const double right = result.scan[static_cast<std::size_t>(i + 1)][1];
    if (!std::isfinite(here) || !(here < left) || !(here <= right)) continue;

    double a = result.scan[static_cast<std::size_t>(i - 1)][0];
    double b = result.scan[static_cast<std::size_t>(i + 1)][0];
    double best_g = result.scan[static_cast<std::size_t>(i)][0];
    double best = here;
    double x1 = b - golden * (b - a);
    double x2 = a + golden * (b - a);
    double f1 = at(x1);
    double f2 = at(x2);
    // The gap near a minimum behaves like sqrt(gap^2 + (slope * dg)^2); once the
    // bracket is well inside the flat bottom the minimum is resolved.
    const double step = result.scan[1][0] - result.scan[0][0];
    const double neighbour = std::max(std::isfinite(left) ? left : 0.0,
                                      std::isfinite(right) ? right : 0.0);
    const double slope = neighbour / step;
    const auto resolved = [&] { return slope * (b - a) < 1e-2 * best; };
    while (b - a > options.g_tolerance * std::max(1.0, best_g) && !resolved()) {
      if (f1 <= f2) {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - golden * (b - a);
        f1 = at(x1);
      } else {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + golden * (b - a);
        f2 = at(x2);
      }
      if (f1 < best) {
        best = f1;
        best_g = x1;
      }
      if (f2 < best) {
        best = f2;
        best_g = x2;
      }
    }
    const double mixing = gap.evaluate(templ.with_couplings(best_g, ratio * best_g)).mixing;
    result.minima.push_back(
        {best_g, ratio * best_g, best, neighbour > 0.0 ? best / neighbour : 1.0, mixing});
  }
  if (result.minima.empty()) {
    throw ConvergenceError("no gap minimum inside the scan around g1 = " +
                           std::to_string(result.g1_contour));
  }
  std::sort(result.minima.begin(), result.minima.end(),
            [](const GapMinimum& a, const GapMinimum& b) { return a.gap < b.gap; });

  const GapMinimum& best = result.minima.front();
  const GapFunction wide(setup, center, std::min(2 * half_width, center), options.partner_weight);
  const double recheck = wide(templ.with_couplings(best.g1, best.g2));
  result.window_change = std::abs(recheck - best.gap) / best.gap;
  if (result.window_change > options.window_tolerance) {
    throw ConvergenceError("anticrossing gap changes by " + std::to_string(result.window_change) +
                           " (relative) when the Fock window is doubled");
  }
  return result;
}

// ---------------------------------------------------------------------------
// Sharpness map

int nearest_odd(double x) { return 2 * static_cast<int>(std::floor(0.5 * x)) + 1; }

std::vector<SharpnessPoint> resonance_sharpness_map(const ModelParams& templ,
                                                    const std::vector<double>& g1_values,
                                                    const std::vector<double>& g2_values, int j,
                                                    int k, std::int64_t center,
                                                    std::int64_t half_width, unsigned threads) {
  check_level(j);
  check_level(k);
  if (j == k) throw InvalidArgument("a transition needs two distinct levels");
  check_window(center, half_width);
  std::vector<SharpnessPoint> out(g1_values.size() * g2_values.size());
  parallel_for(out.size(), threads, [&](std::size_t idx) {
    SharpnessPoint& p = out[idx];
    p.g1 = g1_values[idx % g1_values.size()];
    p.g2 = g2_values[idx / g1_values.size()];
    try {
      const ModelParams params = templ.with_couplings(p.g1, p.g2);
      const ExactLevel a = exact_level(params, center, half_width, j);
      const ExactLevel b = exact_level(params, center, half_width, k);
      p.transition = b.energy - a.energy;
      p.nearest_odd = nearest_odd(p.transition);
      p.detuning = p.transition - p.nearest_odd;
      p.inverse = std::abs(p.detuning) > 1.0 / kSharpnessCap ? 1.0 / std::abs(p.detuning)
                                                             : kSharpnessCap;
      p.valid = true;
    } catch (const std::exception& e) {
      p.valid = false;
      p.error = e.what();
    }
  });
  return out;
}

}  // namespace ladder
