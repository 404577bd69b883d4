// Annotated directed graph over a validated netlist: gates are vertices,
// net-mediated driver->sink connections are edges carrying the net id and
// its total capacitance. Levelization yields the number of logical levels
// along the critical path, and the switching profile counts gate
// transitions per level for one evaluation of a concrete input.
#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "qdisca/logic.hpp"
#include "qdisca/netlist.hpp"

namespace qdisca {

class GraphError : public NetlistError {
public:
  explicit GraphError(const std::string& what) : NetlistError(what) {}
};

struct GraphEdge {
  int from = -1;  // gate index
  int to = -1;    // gate index
  std::string net;
  double c_total_fF = 0.0;
};

struct CircuitGraph {
  Netlist netlist;  // immutable snapshot the graph was built from
  std::vector<GraphEdge> edges;
  std::vector<int> levels;  // per gate, 1-based; empty before levelize
  int n_c = 0;              // levels on the critical path

  // Boundary annotations: nets driven by the environment (channel rails of
  // input channels plus any gate input with no driver) and nets exposed by
  // output channels. Rendered as dotted pseudo-vertices in exports.
  std::vector<std::string> boundary_inputs;
  std::vector<std::string> boundary_outputs;

  int gate_index(const std::string& id) const {
    for (std::size_t i = 0; i < netlist.gates.size(); ++i)
      if (netlist.gates[i].id == id) return static_cast<int>(i);
    return -1;
  }
  bool levelized() const { return !levels.empty(); }
};

// Transition counts for one evaluation phase of one input: which gates
// switch, grouped by logical level.
struct SwitchingProfile {
  int n_c = 0;                                  // critical-path level count
  int n_i = 0;                                  // total gate transitions
  std::map<int, std::set<std::string>> levels;  // level -> switching gates
};

inline CircuitGraph build_graph(const Netlist& nl) {
  CircuitGraph g;
  g.netlist = nl;

  std::unordered_map<std::string, int> driver;  // net -> gate index
  for (std::size_t i = 0; i < nl.gates.size(); ++i)
    driver[nl.gates[i].output] = static_cast<int>(i);

  for (std::size_t i = 0; i < nl.gates.size(); ++i) {
    for (const auto& in : nl.gates[i].inputs) {
      auto it = driver.find(in);
      if (it == driver.end()) continue;
      const Net* n = nl.find_net(in);
      g.edges.push_back({it->second, static_cast<int>(i), in,
                         n ? n->total_fF() : 0.0});
    }
  }

  std::set<std::string> env_driven;
  for (const auto& gate : nl.gates)
    for (const auto& in : gate.inputs)
      if (!driver.count(in)) env_driven.insert(in);
  g.boundary_inputs.assign(env_driven.begin(), env_driven.end());
  for (const auto& name : nl.outputs) {
    const Channel* ch = nl.find_channel(name);
    if (!ch) continue;
    for (const auto& r : ch->rails) g.boundary_outputs.push_back(r);
    if (!ch->ack.empty()) g.boundary_outputs.push_back(ch->ack);
  }

  if (detail::has_combinational_cycle(nl, nullptr))
    throw GraphError("netlist has a combinational cycle; cannot build graph");
  return g;
}

// level(g) = 1 + max(level of predecessors); gates fed only by the
// environment sit at level 1. MULLER gates levelize like any other vertex:
// within one phase each fires at most once, its state only matters across
// phases.
inline CircuitGraph levelize(CircuitGraph g) {
  const auto& gates = g.netlist.gates;
  std::vector<std::vector<int>> preds(gates.size());
  std::vector<int> indeg(gates.size(), 0);
  std::vector<std::vector<int>> succs(gates.size());
  for (const auto& e : g.edges) {
    preds[e.to].push_back(e.from);
    succs[e.from].push_back(e.to);
    ++indeg[e.to];
  }

  g.levels.assign(gates.size(), 1);
  std::vector<int> ready;
  for (std::size_t i = 0; i < gates.size(); ++i)
    if (indeg[i] == 0) ready.push_back(static_cast<int>(i));
  std::size_t processed = 0;
  while (!ready.empty()) {
    int v = ready.back();
    ready.pop_back();
    ++processed;
    for (int s : succs[v]) {
      g.levels[s] = std::max(g.levels[s], g.levels[v] + 1);
      if (--indeg[s] == 0) ready.push_back(s);
    }
  }
  if (processed != gates.size())
    throw GraphError("levelize: graph is not acyclic");

  g.n_c = 0;
  for (int l : g.levels) g.n_c = std::max(g.n_c, l);
  return g;
}

namespace detail {

// Steady state with every channel invalid: all environment-driven nets low,
// MULLER state low, combinational gates settled. Evaluating in level order
// reaches the fixpoint in one pass on an acyclic graph.
inline std::unordered_map<std::string, bool> quiescent_state(
    const CircuitGraph& g) {
  std::unordered_map<std::string, bool> state;
  for (const auto& n : g.netlist.nets) state[n.id] = false;

  std::vector<int> order(g.netlist.gates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (g.levels[a] != g.levels[b]) return g.levels[a] < g.levels[b];
    return g.netlist.gates[a].id < g.netlist.gates[b].id;
  });
  for (int gi : order) {
    const Gate& gate = g.netlist.gates[gi];
    std::vector<bool> ins;
    for (const auto& in : gate.inputs) ins.push_back(state[in]);
    state[gate.output] = eval_gate(gate.kind, ins, state[gate.output]);
  }
  return state;
}

}  // namespace detail

// Gates that transition during one evaluation phase for the given input,
// grouped by level. The graph must be levelized and the assignment must
// cover every input channel with a valid one-hot codeword.
inline SwitchingProfile switching_profile(const CircuitGraph& g,
                                          const InputAssignment& input) {
  if (!g.levelized()) throw GraphError("switching_profile needs a levelized graph");

  for (const auto& name : g.netlist.inputs) {
    const Channel* ch = g.netlist.find_channel(name);
    auto it = input.find(name);
    if (it == input.end())
      throw InputError("no value for input channel " + name);
    check_codeword(*ch, it->second);
    if (!it->second.is_valid_one_hot())
      throw InputError("channel " + name + ": evaluation needs a valid codeword");
  }

  auto quiescent = detail::quiescent_state(g);
  auto state = quiescent;
  for (const auto& name : g.netlist.inputs) {
    const Channel* ch = g.netlist.find_channel(name);
    const Codeword& cw = input.at(name);
    for (std::size_t r = 0; r < ch->rails.size(); ++r)
      state[ch->rails[r]] = (cw.rail_mask >> r) & 1u;
  }

  std::vector<int> order(g.netlist.gates.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (g.levels[a] != g.levels[b]) return g.levels[a] < g.levels[b];
    return g.netlist.gates[a].id < g.netlist.gates[b].id;
  });

  SwitchingProfile prof;
  prof.n_c = g.n_c;
  for (int gi : order) {
    const Gate& gate = g.netlist.gates[gi];
    std::vector<bool> ins;
    for (const auto& in : gate.inputs) ins.push_back(state[in]);
    bool out = eval_gate(gate.kind, ins, quiescent.at(gate.output));
    state[gate.output] = out;
    if (out != quiescent.at(gate.output)) {
      prof.levels[g.levels[gi]].insert(gate.id);
      ++prof.n_i;
    }
  }
  return prof;
}

struct BalanceReport {
  bool balanced = true;
  int n_i = 0;  // common transition count when balanced (or the first seen)
  std::map<int, int> per_level;              // common per-level counts
  std::vector<std::string> offending_inputs; // rendered "a=0 b=1" forms
  int inputs_checked = 0;
};

class CapacityError : public NetlistError {
public:
  explicit CapacityError(const std::string& what) : NetlistError(what) {}
};

// Exhaustively enumerates all input codeword combinations and checks that
// N_i and every per-level N_ij are identical across them.
inline BalanceReport verify_balance(const CircuitGraph& g,
                                    std::uint64_t enumeration_cap = 1u << 16) {
  if (!g.levelized()) throw GraphError("verify_balance needs a levelized graph");

  std::vector<const Channel*> ins;
  std::uint64_t combos = 1;
  for (const auto& name : g.netlist.inputs) {
    const Channel* ch = g.netlist.find_channel(name);
    ins.push_back(ch);
    combos *= ch->rails.size();
    if (combos > enumeration_cap)
      throw CapacityError("input space exceeds enumeration cap of " +
                          std::to_string(enumeration_cap));
  }

  BalanceReport rep;
  bool first = true;
  for (std::uint64_t it = 0; it < combos; ++it) {
    std::uint64_t v = it;
    InputAssignment assign;
    std::string label;
    for (std::size_t i = 0; i < ins.size(); ++i) {
      unsigned val = static_cast<unsigned>(v % ins[i]->rails.size());
      v /= ins[i]->rails.size();
      assign[ins[i]->name] = Codeword::of_value(val);
      if (!label.empty()) label += " ";
      label += ins[i]->name + "=" + std::to_string(val);
    }
    SwitchingProfile prof = switching_profile(g, assign);
    std::map<int, int> counts;
    for (const auto& [lvl, set] : prof.levels)
      counts[lvl] = static_cast<int>(set.size());
    if (first) {
      rep.n_i = prof.n_i;
      rep.per_level = counts;
      first = false;
    } else if (prof.n_i != rep.n_i || counts != rep.per_level) {
      rep.balanced = false;
      rep.offending_inputs.push_back(label);
    }
    ++rep.inputs_checked;
  }
  return rep;
}

}  // namespace qdisca
