#include "reclab/chain.hpp"

#include <map>
#include <string>
#include <utility>

namespace reclab {

namespace {

// Phases must be known to better than a micro-radian for a snapshot to mean
// anything.
constexpr double kMaxPhaseLog10Uncertainty = -6;

void check_phase(const HPReal& phase) {
  if (phase.log10_uncertainty() > kMaxPhaseLog10Uncertainty) {
    throw InsufficientPrecision(
        "mode phase is not resolvable mod 2 pi; raise the model or time precision");
  }
}

void check_state(const ChainModel& model, const ChainState& state) {
  const auto n = static_cast<std::size_t>(model.size());
  if (state.x.size() != n || state.p.size() != n) {
    throw DimensionMismatch("state size does not match the chain");
  }
}

// y_i = sum_j U_ji v_j; U is symmetric so the same routine maps both ways.
std::vector<HPReal> apply_modes(const ChainModel& model, const std::vector<HPReal>& v) {
  const auto& u = model.mode_matrix();
  const std::size_t n = v.size();
  std::vector<HPReal> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    HPReal sum(BigInt(0), model.digits());
    for (std::size_t j = 0; j < n; ++j) {
      if (v[j].is_zero() && v[j].exact()) continue;
      sum += u[j][i] * v[j];
    }
    out.push_back(std::move(sum));
  }
  return out;
}

// Rotates every mode by its phase advance and maps back to sites.
ChainState rotate_modes(const ChainModel& model, const ChainState& state,
                        const std::vector<HPReal>& advance) {
  std::vector<HPReal> X = apply_modes(model, state.x);
  std::vector<HPReal> P = apply_modes(model, state.p);
  const auto& w = model.frequencies();
  for (std::size_t i = 0; i < X.size(); ++i) {
    check_phase(advance[i]);
    const auto [s, c] = sin_cos(advance[i]);
    const HPReal mw = model.mass() * w[i];
    const HPReal x_new = X[i] * c + P[i] / mw * s;
    const HPReal p_new = P[i] * c - mw * X[i] * s;
    X[i] = x_new;
    P[i] = p_new;
  }
  return {apply_modes(model, X), apply_modes(model, P)};
}

}  // namespace

std::vector<HPReal> chain_frequencies(int N, int digits) {
  if (N < 2) throw InvalidArgument("chain needs N >= 2");
  std::vector<HPReal> w;
  w.reserve(static_cast<std::size_t>(N));
  const HPReal two(BigInt(2), digits + 10);
  for (int i = 1; i <= N; ++i) {
    w.push_back(two * sin_pi_rational(i, 2L * (N + 1), digits + 10));
  }
  return w;
}

std::vector<HPReal> chain_ratios(int N, int digits) {
  const std::vector<HPReal> w = chain_frequencies(N, digits);
  std::vector<HPReal> alpha;
  alpha.reserve(w.size() - 1);
  for (std::size_t i = 0; i + 1 < w.size(); ++i) alpha.push_back(w[i] / w.back());
  return alpha;
}

std::vector<HPReal> ChainModel::ratios() const {
  std::vector<HPReal> alpha;
  alpha.reserve(frequencies_.size() - 1);
  for (std::size_t i = 0; i + 1 < frequencies_.size(); ++i) {
    alpha.push_back(frequencies_[i] / frequencies_.back());
  }
  return alpha;
}

ChainModel make_model(int N, int digits, const HPReal& mass, const HPReal& stiffness) {
  if (N < 2) throw InvalidArgument("chain needs N >= 2");
  if (digits < 1) throw InvalidArgument("chain precision must be positive");
  if (mass.sign() <= 0 || stiffness.sign() <= 0) {
    throw InvalidArgument("mass and stiffness must be positive");
  }
  const int working = digits + 10;
  ChainModel model;
  model.digits_ = working;
  model.mass_ = mass.with_working_digits(working);
  model.stiffness_ = stiffness.with_working_digits(working);
  model.omega_ = sqrt(model.stiffness_ / model.mass_);

  const std::vector<HPReal> w_unit = chain_frequencies(N, digits);
  for (const auto& w : w_unit) model.frequencies_.push_back(model.omega_ * w);

  const long period = 2L * (N + 1);
  std::map<long, HPReal> sines;
  auto sine = [&](long r) -> const HPReal& {
    r %= period;
    auto it = sines.find(r);
    if (it == sines.end()) {
      HPReal v = r == 0 ? HPReal(BigInt(0), working)
                        : sin_pi_rational(r, N + 1, working);
      it = sines.emplace(r, std::move(v)).first;
    }
    return it->second;
  };
  const HPReal norm = sqrt(HPReal(BigInt(2), working) / HPReal(BigInt(N + 1), working));
  model.modes_.assign(static_cast<std::size_t>(N), {});
  for (int i = 1; i <= N; ++i) {
    auto& row = model.modes_[static_cast<std::size_t>(i - 1)];
    row.reserve(static_cast<std::size_t>(N));
    for (int j = 1; j <= N; ++j) {
      const HPReal& s = sine(static_cast<long>(i) * j);
      row.push_back(s.is_zero() && s.exact() ? s : norm * s);
    }
  }
  return model;
}

ChainState localized_initial_state(const ChainModel& model, int k) {
  if (k < 1 || k > model.size()) {
    throw IndexOutOfRange("site " + std::to_string(k) + " outside 1.." +
                          std::to_string(model.size()));
  }
  const auto n = static_cast<std::size_t>(model.size());
  ChainState s;
  s.x.assign(n, HPReal(BigInt(0), model.digits()));
  s.p.assign(n, HPReal(BigInt(0), model.digits()));
  s.x[static_cast<std::size_t>(k - 1)] = HPReal(BigInt(1), model.digits());
  s.p[static_cast<std::size_t>(k - 1)] = HPReal(BigInt(1), model.digits());
  return s;
}

NormalModeState to_normal(const ChainModel& model, const ChainState& state) {
  check_state(model, state);
  const std::vector<HPReal> X = apply_modes(model, state.x);
  const std::vector<HPReal> P = apply_modes(model, state.p);
  const HPReal two_pi = pi(model.digits()) * HPReal(BigInt(2), model.digits());
  NormalModeState out;
  for (std::size_t i = 0; i < X.size(); ++i) {
    const HPReal scaled_p = P[i] / (model.mass() * model.frequencies()[i]);
    HPReal amp = sqrt(X[i] * X[i] + scaled_p * scaled_p);
    HPReal phase(BigInt(0), model.digits());
    if (!amp.is_zero()) {
      try {
        phase = atan2(X[i], scaled_p);
        if (phase.sign() < 0) phase += two_pi;
      } catch (const InsufficientPrecision&) {
        // amplitude below its own uncertainty: the phase is arbitrary
      }
    }
    out.amplitude.push_back(std::move(amp));
    out.phase.push_back(std::move(phase));
  }
  return out;
}

ChainState from_normal(const ChainModel& model, const NormalModeState& modes) {
  const auto n = static_cast<std::size_t>(model.size());
  if (modes.amplitude.size() != n || modes.phase.size() != n) {
    throw DimensionMismatch("normal-mode state size does not match the chain");
  }
  std::vector<HPReal> X, P;
  for (std::size_t i = 0; i < n; ++i) {
    const auto [s, c] = sin_cos(modes.phase[i]);
    X.push_back(modes.amplitude[i] * s);
    P.push_back(model.mass() * model.frequencies()[i] * modes.amplitude[i] * c);
  }
  return {apply_modes(model, X), apply_modes(model, P)};
}

HPReal energy(const ChainModel& model, const ChainState& state) {
  check_state(model, state);
  const std::size_t n = state.x.size();
  HPReal kinetic(BigInt(0), model.digits());
  HPReal coupling(BigInt(0), model.digits());
  for (std::size_t i = 0; i < n; ++i) {
    kinetic += state.p[i] * state.p[i];
    coupling += HPReal(BigInt(2), model.digits()) * state.x[i] * state.x[i];
    if (i + 1 < n) {
      coupling -= HPReal(BigInt(2), model.digits()) * state.x[i] * state.x[i + 1];
    }
  }
  const HPReal two(BigInt(2), model.digits());
  return kinetic / (two * model.mass()) + model.stiffness() * coupling / two;
}

ChainState evolve(const ChainModel& model, const ChainState& state, const HPReal& t) {
  check_state(model, state);
  std::vector<HPReal> advance;
  for (const auto& w : model.frequencies()) advance.push_back(w * t);
  return rotate_modes(model, state, advance);
}

ChainState evolve_from_recurrence(const ChainModel& model, const ChainState& state,
                                  const BigInt& q, const HPReal& offset) {
  check_state(model, state);
  const int working = model.digits();
  const HPReal two_pi = pi(working) * HPReal(BigInt(2), working);
  const auto& w = model.frequencies();
  const HPReal q_real(q, working);
  std::vector<HPReal> advance;
  for (std::size_t i = 0; i < w.size(); ++i) {
    HPReal turns = q_real * (w[i] / w.back());
    turns -= HPReal(round_nearest(turns), working);
    advance.push_back(two_pi * turns + w[i] * offset);
  }
  return rotate_modes(model, state, advance);
}

HPReal recurrence_time(const ChainModel& model, const BigInt& q) {
  if (q < 1) throw InvalidArgument("recurrence_time needs q >= 1");
  const int working = model.digits() + digits10(q);
  const HPReal two_pi = pi(working) * HPReal(BigInt(2), working);
  return two_pi * HPReal(q, working) / model.frequencies().back();
}

HPReal deviation(const ChainState& a, const ChainState& b) {
  if (a.x.size() != b.x.size() || a.p.size() != b.p.size() ||
      a.x.size() != a.p.size()) {
    throw DimensionMismatch("states have different sizes");
  }
  HPReal worst(0L);
  for (std::size_t i = 0; i < a.x.size(); ++i) {
    HPReal dx = abs(a.x[i] - b.x[i]);
    HPReal dp = abs(a.p[i] - b.p[i]);
    if (i == 0 || dx > worst) worst = std::move(dx);
    if (dp > worst) worst = std::move(dp);
  }
  return worst;
}

HPReal recurrence_deviation_bound(const ChainModel& model, const ChainState& state,
                                  const HPReal& error) {
  const NormalModeState modes = to_normal(model, state);
  const int working = model.digits();
  const auto& u = model.mode_matrix();
  const HPReal one(BigInt(1), working);
  HPReal sum(BigInt(0), working);
  for (std::size_t i = 0; i < modes.amplitude.size(); ++i) {
    HPReal max_u(BigInt(0), working);
    for (std::size_t j = 0; j < u.size(); ++j) {
      HPReal a = abs(u[j][i]);
      if (a > max_u) max_u = std::move(a);
    }
    HPReal mw = model.mass() * model.frequencies()[i];
    const HPReal& factor = mw > one ? mw : one;
    sum += modes.amplitude[i] * factor * max_u;
  }
  return pi(working) * HPReal(BigInt(2), working) * error * sum;
}

}  // namespace reclab
