#pragma once

#include <vector>

#include "reclab/hpreal.hpp"

namespace reclab {

inline constexpr int kChainDigits = 60;

// A chain of N equal masses joined by equal springs, fixed walls at both
// ends. Normal mode i (1-based) has frequency 2 w sin(i pi / (2(N+1))) with
// w = sqrt(k/m), and the mode matrix U_ij = sqrt(2/(N+1)) sin(i j pi/(N+1))
// diagonalizes the coupling matrix tridiag(-1, 2, -1).
//
// Containers are 0-based: frequencies()[i] is mode i+1.
class ChainModel {
 public:
  int size() const { return static_cast<int>(frequencies_.size()); }
  int digits() const { return digits_; }
  const HPReal& mass() const { return mass_; }
  const HPReal& stiffness() const { return stiffness_; }
  const HPReal& omega() const { return omega_; }
  const std::vector<HPReal>& frequencies() const { return frequencies_; }
  // mode_matrix()[i][j] = U_(i+1)(j+1); symmetric and orthogonal.
  const std::vector<std::vector<HPReal>>& mode_matrix() const { return modes_; }

  // alpha_i = w_i / w_N for i < N.
  std::vector<HPReal> ratios() const;

  friend ChainModel make_model(int N, int digits, const HPReal& mass,
                               const HPReal& stiffness);

 private:
  int digits_ = kChainDigits;
  HPReal mass_;
  HPReal stiffness_;
  HPReal omega_;
  std::vector<HPReal> frequencies_;
  std::vector<std::vector<HPReal>> modes_;
};

ChainModel make_model(int N, int digits = kChainDigits,
                      const HPReal& mass = HPReal(1L),
                      const HPReal& stiffness = HPReal(1L));

// Chain frequencies without building the mode matrix.
std::vector<HPReal> chain_frequencies(int N, int digits);
// alpha_i = sin(i pi/(2(N+1))) / sin(N pi/(2(N+1))), i = 1..N-1.
std::vector<HPReal> chain_ratios(int N, int digits);

struct ChainState {
  std::vector<HPReal> x;
  std::vector<HPReal> p;
};

// Mode i moves as X_i = A_i sin(w_i t + phi_i), P_i = m w_i A_i cos(w_i t + phi_i):
// momentum leads with cos, coordinate with sin.
struct NormalModeState {
  std::vector<HPReal> amplitude;
  std::vector<HPReal> phase;  // in [0, 2 pi)
};

// x_k = p_k = 1 at the 1-based site k, zero elsewhere.
ChainState localized_initial_state(const ChainModel& model, int k);

NormalModeState to_normal(const ChainModel& model, const ChainState& state);
ChainState from_normal(const ChainModel& model, const NormalModeState& modes);

HPReal energy(const ChainModel& model, const ChainState& state);

ChainState evolve(const ChainModel& model, const ChainState& state,
                  const HPReal& t);

// Evolves to t = 2 pi q / w_N + offset. Mode phases are reduced exactly as
// 2 pi (q a_i - round(q a_i)) + w_i offset, so the size of q never enters
// a floating multiplication.
ChainState evolve_from_recurrence(const ChainModel& model, const ChainState& state,
                                  const BigInt& q, const HPReal& offset);

// 2 pi q / w_N
HPReal recurrence_time(const ChainModel& model, const BigInt& q);

// max over all 2N coordinates of |a - b|.
HPReal deviation(const ChainState& a, const ChainState& b);

// Uniform recurrence bound at a q with max_i <q a_i> = error:
// 2 pi error sum_i A_i max(1, m w_i) max_j |U_ji|.
HPReal recurrence_deviation_bound(const ChainModel& model, const ChainState& state,
                                  const HPReal& error);

}  // namespace reclab
