// Gate-level netlist representation for dual-rail / 1-of-N asynchronous
// blocks: gates, capacitance-annotated nets, channel declarations, and the
// structural validation rules every downstream analysis relies on.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace qdisca {

class NetlistError : public std::runtime_error {
public:
  explicit NetlistError(const std::string& what) : std::runtime_error(what) {}
};

enum class GateKind { MULLER, NOR, OR, AND, INV, BUF };

inline const char* to_string(GateKind k) {
  switch (k) {
    case GateKind::MULLER: return "MULLER";
    case GateKind::NOR: return "NOR";
    case GateKind::OR: return "OR";
    case GateKind::AND: return "AND";
    case GateKind::INV: return "INV";
    case GateKind::BUF: return "BUF";
  }
  return "?";
}

inline std::optional<GateKind> gate_kind_from_string(const std::string& s) {
  if (s == "MULLER") return GateKind::MULLER;
  if (s == "NOR") return GateKind::NOR;
  if (s == "OR") return GateKind::OR;
  if (s == "AND") return GateKind::AND;
  if (s == "INV") return GateKind::INV;
  if (s == "BUF") return GateKind::BUF;
  return std::nullopt;
}

// MULLER is the only stateful kind; everything else is combinational.
inline bool is_stateful(GateKind k) { return k == GateKind::MULLER; }

// INV and BUF take exactly one input, all other kinds at least two.
inline bool arity_ok(GateKind k, std::size_t n_inputs) {
  if (k == GateKind::INV || k == GateKind::BUF) return n_inputs == 1;
  return n_inputs >= 2;
}

struct Gate {
  std::string id;
  GateKind kind = GateKind::BUF;
  std::vector<std::string> inputs;  // ordered net ids
  std::string output;               // exactly one driven net
  bool has_reset = false;           // MULLER only

  bool operator==(const Gate&) const = default;
};

// Net capacitance is carried as the three components of the total charge
// seen by the driving gate: load (gate + routing), parasitic, and the
// lumped short-circuit equivalent.
struct Net {
  std::string id;
  double c_load_fF = 0.0;
  double c_par_fF = 0.0;
  double c_sc_fF = 0.0;

  double total_fF() const { return c_load_fF + c_par_fF + c_sc_fF; }
  bool operator==(const Net&) const = default;
};

// A 1-of-N channel: one rail per value, optional acknowledge net.
struct Channel {
  std::string name;
  std::vector<std::string> rails;  // ordered, N >= 2
  std::string ack;                 // empty = no ack net declared

  bool operator==(const Channel&) const = default;
};

struct Netlist {
  std::vector<Gate> gates;
  std::vector<Net> nets;
  std::vector<Channel> channels;
  std::vector<std::string> inputs;   // input channel names
  std::vector<std::string> outputs;  // output channel names
  std::string reset_net;             // empty = none

  bool operator==(const Netlist&) const = default;

  const Net* find_net(const std::string& id) const {
    for (const auto& n : nets)
      if (n.id == id) return &n;
    return nullptr;
  }
  Net* find_net(const std::string& id) {
    for (auto& n : nets)
      if (n.id == id) return &n;
    return nullptr;
  }
  const Gate* find_gate(const std::string& id) const {
    for (const auto& g : gates)
      if (g.id == id) return &g;
    return nullptr;
  }
  const Channel* find_channel(const std::string& name) const {
    for (const auto& c : channels)
      if (c.name == name) return &c;
    return nullptr;
  }
  // Driving gate of a net, or nullptr for environment-driven nets.
  const Gate* driver_of(const std::string& net_id) const {
    for (const auto& g : gates)
      if (g.output == net_id) return &g;
    return nullptr;
  }
};

struct Violation {
  std::string code;     // stable machine-readable tag
  std::string subject;  // offending id / name
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> items;

  bool ok() const { return items.empty(); }
  void add(std::string code, std::string subject, std::string message) {
    items.push_back({std::move(code), std::move(subject), std::move(message)});
  }
  bool has(const std::string& code) const {
    return std::any_of(items.begin(), items.end(),
                       [&](const Violation& v) { return v.code == code; });
  }
};

namespace detail {

// Cycle check over explicit gate->gate connectivity. The MULLER state
// feedback is implicit in the gate equation and never appears as an edge,
// so any explicit cycle is an error regardless of gate kinds.
inline bool has_combinational_cycle(const Netlist& nl,
                                    std::vector<std::string>* cycle_members) {
  std::unordered_map<std::string, const Gate*> driver;
  for (const auto& g : nl.gates) driver[g.output] = &g;

  // 0 = unvisited, 1 = on stack, 2 = done
  std::unordered_map<const Gate*, int> state;
  bool found = false;

  // Iterative DFS over gate predecessors.
  for (const auto& root : nl.gates) {
    if (state[&root]) continue;
    std::vector<std::pair<const Gate*, std::size_t>> stack;
    stack.push_back({&root, 0});
    state[&root] = 1;
    while (!stack.empty()) {
      auto& [g, idx] = stack.back();
      if (idx >= g->inputs.size()) {
        state[g] = 2;
        stack.pop_back();
        continue;
      }
      const std::string& in = g->inputs[idx++];
      auto it = driver.find(in);
      if (it == driver.end()) continue;
      const Gate* pred = it->second;
      if (state[pred] == 1) {
        found = true;
        if (cycle_members)
          for (auto& [sg, si] : stack) cycle_members->push_back(sg->id);
        return true;
      }
      if (state[pred] == 0) {
        state[pred] = 1;
        stack.push_back({pred, 0});
      }
    }
  }
  return found;
}

}  // namespace detail

// Full structural validation. Violations come back as report entries; an
// empty report means the netlist satisfies every invariant.
inline ValidationReport validate(const Netlist& nl) {
  ValidationReport rep;

  std::unordered_set<std::string> net_ids;
  for (const auto& n : nl.nets) {
    if (!net_ids.insert(n.id).second)
      rep.add("duplicate-net", n.id, "net id declared more than once");
    for (double c : {n.c_load_fF, n.c_par_fF, n.c_sc_fF}) {
      if (!std::isfinite(c) || c < 0.0) {
        rep.add("bad-capacitance", n.id,
                "capacitance components must be finite and non-negative");
        break;
      }
    }
  }

  std::unordered_set<std::string> gate_ids;
  std::unordered_map<std::string, std::vector<std::string>> drivers;
  for (const auto& g : nl.gates) {
    if (!gate_ids.insert(g.id).second)
      rep.add("duplicate-gate", g.id, "gate id declared more than once");
    if (!arity_ok(g.kind, g.inputs.size()))
      rep.add("arity", g.id,
              std::string(to_string(g.kind)) + " gate has " +
                  std::to_string(g.inputs.size()) + " inputs");
    if (g.has_reset && g.kind != GateKind::MULLER)
      rep.add("reset-on-combinational", g.id,
              "has_reset is only meaningful on MULLER gates");
    for (const auto& in : g.inputs)
      if (!net_ids.count(in))
        rep.add("unknown-net", in, "gate " + g.id + " reads undeclared net");
    if (!net_ids.count(g.output))
      rep.add("unknown-net", g.output,
              "gate " + g.id + " drives undeclared net");
    else
      drivers[g.output].push_back(g.id);
  }

  for (const auto& [net, who] : drivers) {
    if (who.size() > 1)
      rep.add("multiple-drivers", net,
              "net driven by " + std::to_string(who.size()) + " gates");
    const Net* n = nl.find_net(net);
    if (n && n->total_fF() <= 0.0)
      rep.add("zero-capacitance", net,
              "driven net must have total capacitance > 0");
  }

  std::unordered_set<std::string> channel_names;
  for (const auto& ch : nl.channels) {
    if (!channel_names.insert(ch.name).second)
      rep.add("duplicate-channel", ch.name, "channel declared more than once");
    if (ch.rails.size() < 2)
      rep.add("rail-count", ch.name, "1-of-N channel needs N >= 2 rails");
    std::unordered_set<std::string> seen;
    for (const auto& r : ch.rails) {
      if (!net_ids.count(r))
        rep.add("unknown-net", r, "channel " + ch.name + " lists undeclared rail");
      if (!seen.insert(r).second)
        rep.add("duplicate-rail", ch.name, "net " + r + " appears twice as a rail");
    }
    if (!ch.ack.empty() && !net_ids.count(ch.ack))
      rep.add("unknown-net", ch.ack,
              "channel " + ch.name + " names undeclared ack net");
  }

  for (const auto& name : nl.inputs)
    if (!channel_names.count(name))
      rep.add("unknown-channel", name, "inputs list names undeclared channel");
  for (const auto& name : nl.outputs)
    if (!channel_names.count(name))
      rep.add("unknown-channel", name, "outputs list names undeclared channel");
  if (!nl.reset_net.empty() && !net_ids.count(nl.reset_net))
    rep.add("unknown-net", nl.reset_net, "reset_net is undeclared");

  if (detail::has_combinational_cycle(nl, nullptr))
    rep.add("cycle", "", "gate connectivity contains a combinational cycle");

  return rep;
}

// Validate and throw on the first problem; used by the strict parse path.
inline void validate_or_throw(const Netlist& nl) {
  ValidationReport rep = validate(nl);
  if (!rep.ok()) {
    std::string msg = "invalid netlist:";
    for (const auto& v : rep.items)
      msg += "\n  [" + v.code + "] " + v.subject + ": " + v.message;
    throw NetlistError(msg);
  }
}

}  // namespace qdisca
