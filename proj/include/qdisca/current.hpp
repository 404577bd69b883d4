// Electrical activity model.
//
// Every gate transition charges or discharges its output node, moving
// Q = C * Vdd of charge over a window dt = tau0 + k * C. The window is
// rendered as a triangular current pulse whose area is exactly Q; sampled
// waveforms store the average current per sampling bin, so integrating the
// samples reproduces the deposited charge to rounding error. Pulse polarity
// records the transition direction, but both directions contribute positive
// supply-activity current to the trace.
#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qdisca/graph.hpp"
#include "qdisca/netlist.hpp"

namespace qdisca {

struct ElectricalParams {
  double vdd = 1.2;              // supply voltage, volts
  double eta = 1.0;              // switching-activity ratio in [0,1]
  double tau0_ps = 5.0;          // intrinsic delay offset
  double k_ps_per_fF = 2.0;      // delay slope per fF of total capacitance
  double sample_period_ps = 1.0; // trace sampling step

  void check() const {
    if (!(vdd > 0)) throw std::domain_error("vdd must be > 0");
    if (!(eta >= 0 && eta <= 1)) throw std::domain_error("eta must be in [0,1]");
    if (!(tau0_ps >= 0)) throw std::domain_error("tau0_ps must be >= 0");
    if (!(k_ps_per_fF > 0)) throw std::domain_error("k_ps_per_fF must be > 0");
    if (!(sample_period_ps > 0))
      throw std::domain_error("sample_period_ps must be > 0");
  }
  double delay_ps(double c_total_fF) const {
    return tau0_ps + k_ps_per_fF * c_total_fF;
  }
};

enum class Polarity { Charge, Discharge };

struct CurrentPulse {
  double t_start_ps = 0.0;
  double width_ps = 0.0;
  double charge_fC = 0.0;
  Polarity polarity = Polarity::Charge;

  double t_end_ps() const { return t_start_ps + width_ps; }
  // Apex of the triangle; area under it equals charge_fC by construction.
  double peak_fC_per_ps() const { return 2.0 * charge_fC / width_ps; }
  double peak_uA() const { return peak_fC_per_ps() * 1000.0; }

  // Charge deposited in [t_start_ps, t]; piecewise quadratic.
  double cumulative_charge(double t) const {
    double x = t - t_start_ps;
    if (x <= 0.0) return 0.0;
    if (x >= width_ps) return charge_fC;
    double h = peak_fC_per_ps();
    double half = width_ps / 2.0;
    if (x <= half) return h * x * x / width_ps;
    double r = width_ps - x;
    return charge_fC - h * r * r / width_ps;
  }
};

inline double total_capacitance(const Net& n) { return n.total_fF(); }

inline CurrentPulse gate_pulse(double c_total_fF, double t_start_ps,
                               Polarity polarity,
                               const ElectricalParams& params) {
  if (!(c_total_fF > 0.0))
    throw std::domain_error("gate_pulse: total capacitance must be > 0 fF");
  CurrentPulse p;
  p.t_start_ps = t_start_ps;
  p.width_ps = params.delay_ps(c_total_fF);
  p.charge_fC = c_total_fF * params.vdd;
  p.polarity = polarity;
  return p;
}

// Uniformly sampled current trace. samples[k] is the average current in µA
// over [t0 + k*dt, t0 + (k+1)*dt).
struct Waveform {
  double t0_ps = 0.0;
  double sample_period_ps = 1.0;
  std::vector<double> samples;

  double t_at(std::size_t k) const { return t0_ps + k * sample_period_ps; }
  // Total charge in fC represented by the samples (µA * ps = 1e-3 fC).
  double integral_charge_fC() const {
    double s = 0.0;
    for (double v : samples) s += v;
    return s * sample_period_ps / 1000.0;
  }
};

namespace detail {

inline void deposit_pulse(Waveform& w, const CurrentPulse& p) {
  double dt = w.sample_period_ps;
  double rel_start = p.t_start_ps - w.t0_ps;
  double rel_end = p.t_end_ps() - w.t0_ps;
  auto first = static_cast<std::int64_t>(std::floor(rel_start / dt));
  auto last = static_cast<std::int64_t>(std::ceil(rel_end / dt));
  first = std::max<std::int64_t>(first, 0);
  last = std::min<std::int64_t>(last, static_cast<std::int64_t>(w.samples.size()));
  for (std::int64_t k = first; k < last; ++k) {
    double a = w.t0_ps + k * dt;
    double q = p.cumulative_charge(a + dt) - p.cumulative_charge(a);
    w.samples[static_cast<std::size_t>(k)] += q / dt * 1000.0;  // fC/ps -> µA
  }
}

}  // namespace detail

// Superposition of pulses on a uniform grid, plus additive zero-mean
// Gaussian noise of the given std per sample. Deterministic for a seed.
// n_samples may be forced so that runs of different natural length share a
// grid; otherwise the grid covers every pulse plus one trailing bin.
inline Waveform block_current(const std::vector<CurrentPulse>& pulses,
                              double noise_sigma_uA, std::uint64_t seed,
                              const ElectricalParams& params,
                              std::optional<std::size_t> n_samples = {}) {
  Waveform w;
  w.t0_ps = 0.0;
  w.sample_period_ps = params.sample_period_ps;
  double t_end = 0.0;
  for (const auto& p : pulses) t_end = std::max(t_end, p.t_end_ps());
  std::size_t n = n_samples
      ? *n_samples
      : static_cast<std::size_t>(std::ceil(t_end / w.sample_period_ps)) + 1;
  w.samples.assign(std::max<std::size_t>(n, 1), 0.0);
  for (const auto& p : pulses) detail::deposit_pulse(w, p);
  if (noise_sigma_uA > 0.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, noise_sigma_uA);
    for (double& s : w.samples) s += dist(rng);
  }
  return w;
}

// Block dynamic power for one switching profile at acknowledge frequency
// f_a: eta * f_a * Vdd^2 * sum of switching-gate output capacitances.
inline double dynamic_power_estimate(const Netlist& nl,
                                     const SwitchingProfile& profile,
                                     double f_a_hz,
                                     const ElectricalParams& params) {
  double c_sum_fF = 0.0;
  for (const auto& [lvl, gates] : profile.levels) {
    for (const auto& gid : gates) {
      const Gate* g = nl.find_gate(gid);
      if (!g) throw NetlistError("profile names unknown gate " + gid);
      const Net* n = nl.find_net(g->output);
      if (!n) throw NetlistError("gate " + gid + " drives unknown net");
      c_sum_fF += n->total_fF();
    }
  }
  return params.eta * f_a_hz * c_sum_fF * 1e-15 * params.vdd * params.vdd;
}

// ---------------------------------------------------------------------------
// Closed-form dual-rail XOR bias signature.
//
// Position (i, j) holds the total output capacitance of the j-th gate of
// level i in the XOR data path: level 1 the four minterm C-elements (j=1,2
// on the rail-0 side, j=3,4 on rail-1), level 2 the per-rail OR stage,
// level 3 the per-rail output stage. Positions (4,1) and (4,2) carry the
// shared completion and acknowledge stages: the same physical gate fires in
// every trace, so their contributions cancel exactly in the set difference
// and only the three rail-specific levels are rendered.
//
// The bias is the difference of the two averaged pulse trains. Each trace's
// train accumulates its own path delays, which is what makes an inner-level
// imbalance reappear downstream as a time shift.
// ---------------------------------------------------------------------------

using XorCapMap = std::map<std::pair<int, int>, double>;

inline XorCapMap uniform_xor_caps(double c_total_fF) {
  XorCapMap m;
  for (int j = 1; j <= 4; ++j) m[{1, j}] = c_total_fF;
  for (int j = 1; j <= 2; ++j) m[{2, j}] = c_total_fF;
  for (int j = 1; j <= 2; ++j) m[{3, j}] = c_total_fF;
  m[{4, 1}] = c_total_fF;
  m[{4, 2}] = c_total_fF;
  return m;
}

namespace detail {

inline double xor_cap_at(const XorCapMap& caps, int i, int j) {
  auto it = caps.find({i, j});
  if (it == caps.end())
    throw NetlistError("xor signature: missing capacitance for position (" +
                       std::to_string(i) + "," + std::to_string(j) + ")");
  return it->second;
}

// Pulse train of a single trace: minterm element j at level 1, then the
// rail's level-2 and level-3 gates, evaluation phase at t=0 and the
// return-to-zero mirror at rtz_offset.
inline void xor_trace_train(const XorCapMap& caps, int minterm_j, int rail_j,
                            const ElectricalParams& p, double rtz_offset_ps,
                            double weight,
                            std::vector<std::pair<CurrentPulse, double>>& out) {
  double c1 = xor_cap_at(caps, 1, minterm_j);
  double c2 = xor_cap_at(caps, 2, rail_j);
  double c3 = xor_cap_at(caps, 3, rail_j);
  for (double base : {0.0, rtz_offset_ps}) {
    Polarity pol = base == 0.0 ? Polarity::Charge : Polarity::Discharge;
    double t = base;
    CurrentPulse l1 = gate_pulse(c1, t, pol, p);
    t += l1.width_ps;
    CurrentPulse l2 = gate_pulse(c2, t, pol, p);
    t += l2.width_ps;
    CurrentPulse l3 = gate_pulse(c3, t, pol, p);
    out.push_back({l1, weight});
    out.push_back({l2, weight});
    out.push_back({l3, weight});
  }
}

}  // namespace detail

// Longest per-trace path end for the evaluation phase; used as the default
// return-to-zero offset (plus the environment response delay).
inline double xor_worst_path_ps(const XorCapMap& caps,
                                const ElectricalParams& p) {
  double worst = 0.0;
  const int rail_of_minterm[5] = {0, 1, 1, 2, 2};
  for (int j = 1; j <= 4; ++j) {
    int rail = rail_of_minterm[j];
    double t = p.delay_ps(detail::xor_cap_at(caps, 1, j)) +
               p.delay_ps(detail::xor_cap_at(caps, 2, rail)) +
               p.delay_ps(detail::xor_cap_at(caps, 3, rail));
    worst = std::max(worst, t);
  }
  return worst;
}

// Bias waveform of the exhaustive-input XOR experiment: average of the two
// result-0 traces minus the average of the two result-1 traces.
inline Waveform analytic_xor_signature(const XorCapMap& caps,
                                       const ElectricalParams& params,
                                       double rtz_offset_ps = -1.0,
                                       double env_ack_delay_ps = 10.0) {
  params.check();
  // Validate all ten positions up front, shared stages included.
  for (auto [i, j] : {std::pair{1, 1}, {1, 2}, {1, 3}, {1, 4}, {2, 1}, {2, 2},
                      {3, 1}, {3, 2}, {4, 1}, {4, 2}})
    detail::xor_cap_at(caps, i, j);

  if (rtz_offset_ps < 0.0)
    rtz_offset_ps = xor_worst_path_ps(caps, params) + env_ack_delay_ps;

  std::vector<std::pair<CurrentPulse, double>> weighted;
  // Result-0 traces: inputs (0,0) via minterm 1 and (1,1) via minterm 2.
  detail::xor_trace_train(caps, 1, 1, params, rtz_offset_ps, +0.5, weighted);
  detail::xor_trace_train(caps, 2, 1, params, rtz_offset_ps, +0.5, weighted);
  // Result-1 traces: (0,1) via minterm 3 and (1,0) via minterm 4.
  detail::xor_trace_train(caps, 3, 2, params, rtz_offset_ps, -0.5, weighted);
  detail::xor_trace_train(caps, 4, 2, params, rtz_offset_ps, -0.5, weighted);

  double t_end = 0.0;
  for (const auto& [p, wgt] : weighted) t_end = std::max(t_end, p.t_end_ps());

  Waveform w;
  w.t0_ps = 0.0;
  w.sample_period_ps = params.sample_period_ps;
  w.samples.assign(
      static_cast<std::size_t>(std::ceil(t_end / w.sample_period_ps)) + 1, 0.0);
  for (const auto& [p, wgt] : weighted) {
    Waveform tmp;
    tmp.t0_ps = 0.0;
    tmp.sample_period_ps = w.sample_period_ps;
    tmp.samples.assign(w.samples.size(), 0.0);
    detail::deposit_pulse(tmp, p);
    for (std::size_t k = 0; k < w.samples.size(); ++k)
      w.samples[k] += wgt * tmp.samples[k];
  }
  return w;
}

}  // namespace qdisca
