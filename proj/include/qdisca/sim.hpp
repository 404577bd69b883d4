// Event-driven behavioral simulator for the four-phase handshake over a
// dual-rail netlist.
//
// A cycle starts from the block's quiescent state (all channels invalid,
// MULLER state low, completion logic settled). Phase 1 drives the input
// rails to a valid codeword at t = 0 and lets transitions propagate, each
// gate firing one delay after its inputs change and emitting one current
// pulse per output transition. Phase 2 is the block raising its completion
// output; the environment answers after a fixed delay (or at a fixed
// schedule), which starts phase 3: inputs return to zero and the
// down-transitions propagate, phase 4 being the completion release. The
// trace is the superposition of every pulse plus optional Gaussian noise.
#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <thread>
#include <unordered_map>
#include <vector>

#include "qdisca/current.hpp"
#include "qdisca/designs.hpp"
#include "qdisca/graph.hpp"
#include "qdisca/logic.hpp"
#include "qdisca/netlist.hpp"

namespace qdisca {

class SimError : public NetlistError {
public:
  explicit SimError(const std::string& what) : NetlistError(what) {}
};

struct EnvParams {
  double ack_delay_ps = 10.0;       // environment response after completion
  std::optional<double> rtz_at_ps;  // fixed return-to-zero time, overrides
                                    // completion-triggered response
  double horizon_ps = 1e6;          // deadlock / livelock guard
};

enum class Direction { Rise, Fall };

struct TransitionEvent {
  double time_ps = 0.0;  // transition completion time
  std::string net;
  Direction direction = Direction::Rise;
  std::string gate;  // driving gate id
  int level = 0;     // logical level of the driving gate

  bool operator==(const TransitionEvent&) const = default;
};

struct CycleResult {
  Waveform waveform;
  std::vector<TransitionEvent> events;
  std::vector<CurrentPulse> pulses;
  double t_complete_ps = 0.0;  // all output channels valid
  double t_rtz_ps = 0.0;       // inputs driven back to invalid
  double t_end_ps = 0.0;       // last transition
  bool returned_to_rest = true;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Precomputes connectivity and levels once so trace collection can reuse
// them across runs. run() itself is const and safe to call concurrently.
class Simulator {
public:
  Simulator(const Netlist& nl, const ElectricalParams& params,
            const EnvParams& env = {})
      : params_(params), env_(env) {
    params_.check();
    validate_or_throw(nl);
    graph_ = levelize(build_graph(nl));
    const Netlist& net = graph_.netlist;

    for (std::size_t i = 0; i < net.nets.size(); ++i)
      net_index_[net.nets[i].id] = static_cast<int>(i);
    driver_.assign(net.nets.size(), -1);
    sinks_.assign(net.nets.size(), {});
    delay_.assign(net.nets.size(), 0.0);
    for (std::size_t gi = 0; gi < net.gates.size(); ++gi) {
      const Gate& g = net.gates[gi];
      int out = net_index_.at(g.output);
      driver_[out] = static_cast<int>(gi);
      for (const auto& in : g.inputs)
        sinks_[net_index_.at(in)].push_back(static_cast<int>(gi));
    }
    for (std::size_t ni = 0; ni < net.nets.size(); ++ni) {
      if (driver_[ni] < 0) continue;
      double c = net.nets[ni].total_fF();
      if (!(c > 0.0))
        throw SimError("driven net " + net.nets[ni].id +
                       " has non-positive capacitance");
      delay_[ni] = params_.delay_ps(c);
    }
    // Channel membership per net, for illegal-state checks.
    chan_of_net_.assign(net.nets.size(), -1);
    for (std::size_t ci = 0; ci < net.channels.size(); ++ci)
      for (const auto& r : net.channels[ci].rails)
        chan_of_net_[net_index_.at(r)] = static_cast<int>(ci);

    // Quiescent reference state: all inputs invalid, everything settled.
    auto q = detail::quiescent_state(graph_);
    rest_.assign(net.nets.size(), false);
    for (const auto& [id, v] : q) rest_[net_index_.at(id)] = v;
  }

  const CircuitGraph& graph() const { return graph_; }
  const Netlist& netlist() const { return graph_.netlist; }
  const ElectricalParams& params() const { return params_; }

  struct RunOutput {
    std::vector<CurrentPulse> pulses;
    std::vector<TransitionEvent> events;
    double t_complete_ps = 0.0;
    double t_rtz_ps = 0.0;
    double t_end_ps = 0.0;
    bool returned_to_rest = true;
  };

  // One noiseless four-phase cycle. Deterministic: simultaneous events are
  // ordered by net id.
  RunOutput run(const InputAssignment& inputs) const {
    const Netlist& net = graph_.netlist;
    for (const auto& name : net.inputs) {
      auto it = inputs.find(name);
      if (it == inputs.end())
        throw InputError("no value for input channel " + name);
      check_codeword(*net.find_channel(name), it->second);
      if (!it->second.is_valid_one_hot())
        throw InputError("channel " + name + ": cycle needs a valid codeword");
    }

    std::vector<bool> value = rest_;
    RunOutput out;

    struct QItem {
      double time;
      int kind;  // 0 = gate evaluation, 1 = environment return-to-zero
      int net;   // target net for kind 0
      const std::string* net_id;
    };
    auto later = [](const QItem& a, const QItem& b) {
      if (a.time != b.time) return a.time > b.time;
      if (a.kind != b.kind) return a.kind > b.kind;
      if (a.kind == 0) return *a.net_id > *b.net_id;
      return false;
    };
    std::priority_queue<QItem, std::vector<QItem>, decltype(later)> queue(later);

    auto schedule_sinks = [&](int net_idx, double t) {
      for (int gi : sinks_[net_idx]) {
        int out_net = net_index_.at(net.gates[gi].output);
        queue.push({t + delay_[out_net], 0, out_net,
                    &net.nets[out_net].id});
      }
    };

    auto check_channel_state = [&](int net_idx) {
      int ci = chan_of_net_[net_idx];
      if (ci < 0) return;
      const Channel& ch = net.channels[ci];
      int high = 0;
      for (const auto& r : ch.rails)
        high += value[net_index_.at(r)] ? 1 : 0;
      if (high > 1)
        throw SimError("channel " + ch.name +
                       " reached an illegal multi-rail-high state");
    };

    // The block has completed phase 1 + 2 once every output channel holds a
    // valid codeword and every declared acknowledge has risen; only then may
    // the environment start the return-to-zero phase.
    auto outputs_valid = [&]() {
      if (net.outputs.empty()) return false;
      for (const auto& name : net.outputs) {
        const Channel* ch = net.find_channel(name);
        int high = 0;
        for (const auto& r : ch->rails) high += value[net_index_.at(r)] ? 1 : 0;
        if (high != 1) return false;
        if (!ch->ack.empty() && !value[net_index_.at(ch->ack)]) return false;
      }
      return true;
    };

    // Phase 1 stimulus: input rails to the codeword at t = 0. Environment
    // transitions carry no pulse; the block's supply does not see them.
    for (const auto& name : net.inputs) {
      const Channel* ch = net.find_channel(name);
      const Codeword& cw = inputs.at(name);
      for (std::size_t r = 0; r < ch->rails.size(); ++r) {
        int ni = net_index_.at(ch->rails[r]);
        bool v = (cw.rail_mask >> r) & 1u;
        if (value[ni] != v) {
          value[ni] = v;
          schedule_sinks(ni, 0.0);
        }
      }
      check_codeword(*ch, cw);
    }

    bool completed = false;
    bool rtz_scheduled = false;
    bool rtz_done = false;
    if (env_.rtz_at_ps) {
      queue.push({*env_.rtz_at_ps, 1, -1, nullptr});
      rtz_scheduled = true;
    }

    while (!queue.empty()) {
      QItem item = queue.top();
      queue.pop();
      if (item.time > env_.horizon_ps)
        throw SimError("no quiescence before horizon; deadlock or livelock");

      if (item.kind == 1) {
        // Environment acknowledges: drive every input channel invalid.
        if (!completed)
          throw SimError("return-to-zero scheduled before completion");
        out.t_rtz_ps = item.time;
        rtz_done = true;
        for (const auto& name : net.inputs) {
          const Channel* ch = net.find_channel(name);
          for (const auto& r : ch->rails) {
            int ni = net_index_.at(r);
            if (value[ni]) {
              value[ni] = false;
              schedule_sinks(ni, item.time);
            }
          }
        }
        continue;
      }

      int ni = item.net;
      const Gate& g = net.gates[driver_[ni]];
      std::vector<bool> ins;
      ins.reserve(g.inputs.size());
      for (const auto& in : g.inputs) ins.push_back(value[net_index_.at(in)]);
      bool next = eval_gate(g.kind, ins, value[ni]);
      if (next == value[ni]) continue;  // absorbed or duplicate

      value[ni] = next;
      double t = item.time;
      out.events.push_back({t, net.nets[ni].id,
                            next ? Direction::Rise : Direction::Fall, g.id,
                            graph_.levels[driver_[ni]]});
      out.pulses.push_back(gate_pulse(net.nets[ni].total_fF(), t - delay_[ni],
                                      next ? Polarity::Charge
                                           : Polarity::Discharge,
                                      params_));
      out.t_end_ps = std::max(out.t_end_ps, t);
      check_channel_state(ni);
      schedule_sinks(ni, t);

      if (!completed && outputs_valid()) {
        completed = true;
        out.t_complete_ps = t;
        if (!rtz_scheduled) {
          queue.push({t + env_.ack_delay_ps, 1, -1, nullptr});
          rtz_scheduled = true;
        }
      }
    }

    // Blocks without output channels complete when activity stops.
    if (!completed && net.outputs.empty()) completed = true;
    if (!completed)
      throw SimError("outputs never became valid; block did not complete");
    if (!rtz_done && !net.inputs.empty())
      throw SimError("return-to-zero never ran");

    out.returned_to_rest = (value == rest_);
    return out;
  }

  const std::vector<bool>& rest_state() const { return rest_; }

private:
  ElectricalParams params_;
  EnvParams env_;
  CircuitGraph graph_;
  std::unordered_map<std::string, int> net_index_;
  std::vector<int> driver_;
  std::vector<std::vector<int>> sinks_;
  std::vector<double> delay_;
  std::vector<int> chan_of_net_;
  std::vector<bool> rest_;
};

// One cycle with sampled, optionally noisy, output trace.
inline CycleResult run_cycle(const Netlist& nl, const InputAssignment& inputs,
                             const ElectricalParams& params,
                             double noise_sigma_uA, std::uint64_t seed,
                             const EnvParams& env = {},
                             std::optional<std::size_t> n_samples = {}) {
  Simulator sim(nl, params, env);
  auto r = sim.run(inputs);
  CycleResult res;
  res.waveform = block_current(r.pulses, noise_sigma_uA, seed, params, n_samples);
  res.events = std::move(r.events);
  res.pulses = std::move(r.pulses);
  res.t_complete_ps = r.t_complete_ps;
  res.t_rtz_ps = r.t_rtz_ps;
  res.t_end_ps = r.t_end_ps;
  res.returned_to_rest = r.returned_to_rest;
  return res;
}

struct TraceMatrix {
  double t0_ps = 0.0;
  double sample_period_ps = 1.0;
  std::vector<std::uint64_t> plaintexts;         // run i's input word
  std::vector<std::vector<double>> rows;         // N x T samples, µA

  std::size_t runs() const { return rows.size(); }
  std::size_t samples() const { return rows.empty() ? 0 : rows[0].size(); }
};

namespace detail {

inline InputAssignment binding_assignment(const Netlist& nl,
                                          const DesignBinding& binding,
                                          std::uint64_t plaintext) {
  InputAssignment a;
  for (std::size_t i = 0; i < binding.plaintext_channels.size(); ++i)
    a[binding.plaintext_channels[i]] =
        Codeword::of_value((plaintext >> i) & 1u);
  for (std::size_t i = 0; i < binding.key_channels.size(); ++i)
    a[binding.key_channels[i]] = Codeword::of_value((binding.key >> i) & 1u);
  // Any remaining input channel is driven with value 0 so the block can
  // complete; bindings normally cover everything.
  for (const auto& name : nl.inputs)
    if (!a.count(name)) a[name] = Codeword::of_value(0);
  return a;
}

}  // namespace detail

// One cycle per plaintext on the key-specialized design. Rows share a
// common grid with t = 0 at the phase-1 input rise. Per-run noise is
// derived from (seed, run index), so results are independent of execution
// order and thread count; runs may execute concurrently.
inline TraceMatrix collect_traces(const Netlist& nl,
                                  const DesignBinding& binding,
                                  const std::vector<std::uint64_t>& plaintexts,
                                  const ElectricalParams& params,
                                  double noise_sigma_uA, std::uint64_t seed,
                                  const EnvParams& env = {}, int threads = 1) {
  if (plaintexts.empty())
    throw InputError("collect_traces: plaintext list is empty");

  Simulator sim(nl, params, env);
  std::vector<Simulator::RunOutput> runs(plaintexts.size());

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i)
      runs[i] = sim.run(detail::binding_assignment(nl, binding, plaintexts[i]));
  };
  if (threads <= 1 || plaintexts.size() < 2) {
    work(0, plaintexts.size());
  } else {
    std::size_t n = plaintexts.size();
    std::size_t nt = std::min<std::size_t>(threads, n);
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < nt; ++t) {
      std::size_t b = n * t / nt, e = n * (t + 1) / nt;
      pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }

  double t_end = 0.0;
  for (const auto& r : runs)
    for (const auto& p : r.pulses) t_end = std::max(t_end, p.t_end_ps());
  auto n_samples =
      static_cast<std::size_t>(std::ceil(t_end / params.sample_period_ps)) + 1;

  TraceMatrix tm;
  tm.sample_period_ps = params.sample_period_ps;
  tm.plaintexts = plaintexts;
  tm.rows.resize(plaintexts.size());
  for (std::size_t i = 0; i < runs.size(); ++i) {
    std::uint64_t run_seed = splitmix64(seed ^ splitmix64(i + 1));
    tm.rows[i] = block_current(runs[i].pulses, noise_sigma_uA, run_seed,
                               params, n_samples)
                     .samples;
  }
  return tm;
}

}  // namespace qdisca
