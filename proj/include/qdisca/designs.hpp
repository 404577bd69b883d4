// Built-in reference designs.
//
// dims_xor        — canonical dual-rail XOR with completion detection and an
//                   active-high acknowledge: one minterm C-element per input
//                   pair, an OR per output rail, then NOR + INV. Exactly one
//                   gate switches at each of the four logical levels per
//                   phase, for any input.
// dims_xor_open   — the same data path with buffered output rails and no
//                   completion stage in the block; acknowledge handling is
//                   left to the environment. This is the bench used for
//                   rail-capacitance leakage studies, where every level of
//                   the measured block is rail-specific.
// xor_bank        — N parallel dual-rail XOR slices combining a plaintext
//                   operand with a key operand, the classic first-round
//                   key-mixing target of a differential power attack.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "qdisca/netlist.hpp"

namespace qdisca {

struct DesignDefaults {
  double c_load_fF = 8.0;
  double c_par_fF = 1.0;
  double c_sc_fF = 0.5;
};

namespace detail {

inline void add_net(Netlist& nl, const std::string& id, const DesignDefaults& d) {
  nl.nets.push_back({id, d.c_load_fF, d.c_par_fF, d.c_sc_fF});
}

inline void add_gate(Netlist& nl, const std::string& id, GateKind kind,
                     std::vector<std::string> inputs, const std::string& out) {
  nl.gates.push_back({id, kind, std::move(inputs), out, false});
}

// One dual-rail XOR data path: minterm C-elements feeding per-rail ORs.
// Net/gate ids are prefixed so slices can be instantiated side by side.
// or0/or1 drive the nets named by rail0/rail1.
inline void emit_xor_core(Netlist& nl, const std::string& p,
                          const std::string& a0, const std::string& a1,
                          const std::string& b0, const std::string& b1,
                          const std::string& rail0, const std::string& rail1,
                          const DesignDefaults& d) {
  add_net(nl, p + "m1", d);
  add_net(nl, p + "m2", d);
  add_net(nl, p + "m3", d);
  add_net(nl, p + "m4", d);
  // m1/m2 cover the equal-input minterms (result 0), m3/m4 the mixed ones.
  add_gate(nl, p + "M1", GateKind::MULLER, {a0, b0}, p + "m1");
  add_gate(nl, p + "M2", GateKind::MULLER, {a1, b1}, p + "m2");
  add_gate(nl, p + "M3", GateKind::MULLER, {a0, b1}, p + "m3");
  add_gate(nl, p + "M4", GateKind::MULLER, {a1, b0}, p + "m4");
  add_gate(nl, p + "OR_c0", GateKind::OR, {p + "m1", p + "m2"}, rail0);
  add_gate(nl, p + "OR_c1", GateKind::OR, {p + "m3", p + "m4"}, rail1);
}

inline void add_dual_rail_channel(Netlist& nl, const std::string& name,
                                  const std::string& r0, const std::string& r1,
                                  const std::string& ack = "") {
  nl.channels.push_back({name, {r0, r1}, ack});
}

}  // namespace detail

inline Netlist builtin_dims_xor(const DesignDefaults& d = {}) {
  Netlist nl;
  for (const char* id : {"a0", "a1", "b0", "b1"}) detail::add_net(nl, id, d);
  detail::add_net(nl, "c0", d);
  detail::add_net(nl, "c1", d);
  detail::emit_xor_core(nl, "", "a0", "a1", "b0", "b1", "c0", "c1", d);
  detail::add_net(nl, "nack", d);
  detail::add_net(nl, "ack", d);
  detail::add_gate(nl, "NOR_cd", GateKind::NOR, {"c0", "c1"}, "nack");
  detail::add_gate(nl, "INV_ack", GateKind::INV, {"nack"}, "ack");
  detail::add_dual_rail_channel(nl, "a", "a0", "a1");
  detail::add_dual_rail_channel(nl, "b", "b0", "b1");
  detail::add_dual_rail_channel(nl, "c", "c0", "c1", "ack");
  nl.inputs = {"a", "b"};
  nl.outputs = {"c"};
  return nl;
}

// Data path only: OR outputs feed per-rail output buffers, the environment
// senses output validity itself. Three levels, all rail-specific.
inline Netlist builtin_dims_xor_open(const DesignDefaults& d = {}) {
  Netlist nl;
  for (const char* id : {"a0", "a1", "b0", "b1"}) detail::add_net(nl, id, d);
  detail::add_net(nl, "o0", d);
  detail::add_net(nl, "o1", d);
  detail::emit_xor_core(nl, "", "a0", "a1", "b0", "b1", "o0", "o1", d);
  detail::add_net(nl, "c0", d);
  detail::add_net(nl, "c1", d);
  detail::add_gate(nl, "BUF_c0", GateKind::BUF, {"o0"}, "c0");
  detail::add_gate(nl, "BUF_c1", GateKind::BUF, {"o1"}, "c1");
  detail::add_dual_rail_channel(nl, "a", "a0", "a1");
  detail::add_dual_rail_channel(nl, "b", "b0", "b1");
  detail::add_dual_rail_channel(nl, "c", "c0", "c1");
  nl.inputs = {"a", "b"};
  nl.outputs = {"c"};
  return nl;
}

// N parallel XOR slices; slice i mixes plaintext channel p<i> with key
// channel k<i> into output channel c<i>, each with its own completion stage.
inline Netlist builtin_xor_bank(int width = 8, const DesignDefaults& d = {}) {
  Netlist nl;
  for (int i = 0; i < width; ++i) {
    std::string s = "s" + std::to_string(i) + "_";
    std::string p0 = s + "p0", p1 = s + "p1", k0 = s + "k0", k1 = s + "k1";
    for (const auto& id : {p0, p1, k0, k1}) detail::add_net(nl, id, d);
    std::string c0 = s + "c0", c1 = s + "c1";
    detail::add_net(nl, c0, d);
    detail::add_net(nl, c1, d);
    detail::emit_xor_core(nl, s, p0, p1, k0, k1, c0, c1, d);
    detail::add_net(nl, s + "nack", d);
    detail::add_net(nl, s + "ack", d);
    detail::add_gate(nl, s + "NOR_cd", GateKind::NOR, {c0, c1}, s + "nack");
    detail::add_gate(nl, s + "INV_ack", GateKind::INV, {s + "nack"}, s + "ack");
    std::string idx = std::to_string(i);
    detail::add_dual_rail_channel(nl, "p" + idx, p0, p1);
    detail::add_dual_rail_channel(nl, "k" + idx, k0, k1);
    detail::add_dual_rail_channel(nl, "c" + idx, c0, c1, s + "ack");
    nl.inputs.push_back("p" + idx);
    nl.inputs.push_back("k" + idx);
    nl.outputs.push_back("c" + idx);
  }
  return nl;
}

// Maps the (level, index) coordinates used by the closed-form XOR bias model
// onto concrete nets of a built-in XOR design, so perturbation experiments
// can be phrased either way. Index within a level follows the rail-0-first
// convention: level 1 is m1..m4, level 2 the rail-0 / rail-1 stage, level 3
// (open variant) the output buffers.
inline std::map<std::pair<int, int>, std::string> xor_position_nets(
    bool open_variant) {
  std::map<std::pair<int, int>, std::string> pos;
  pos[{1, 1}] = "m1";
  pos[{1, 2}] = "m2";
  pos[{1, 3}] = "m3";
  pos[{1, 4}] = "m4";
  if (open_variant) {
    pos[{2, 1}] = "o0";
    pos[{2, 2}] = "o1";
    pos[{3, 1}] = "c0";
    pos[{3, 2}] = "c1";
  } else {
    pos[{2, 1}] = "c0";
    pos[{2, 2}] = "c1";
    pos[{3, 1}] = "nack";
    pos[{4, 1}] = "ack";
  }
  return pos;
}

// Scales the c_load of one net in place.
inline void perturb_net_load(Netlist& nl, const std::string& net_id,
                             double factor) {
  Net* n = nl.find_net(net_id);
  if (!n) throw NetlistError("perturb: unknown net " + net_id);
  n->c_load_fF *= factor;
}

// How the attack harness binds run data onto input channels: bit i of the
// plaintext drives plaintext_channels[i], bit i of the fixed key drives
// key_channels[i]. Designs without a key operand leave key_channels empty.
struct DesignBinding {
  std::vector<std::string> plaintext_channels;
  std::vector<std::string> key_channels;
  std::uint64_t key = 0;
};

inline DesignBinding xor_bank_binding(int width, std::uint64_t key) {
  DesignBinding b;
  for (int i = 0; i < width; ++i) {
    b.plaintext_channels.push_back("p" + std::to_string(i));
    b.key_channels.push_back("k" + std::to_string(i));
  }
  b.key = key;
  return b;
}

// For the single XOR benches: plaintext bit 0 -> channel a, bit 1 -> channel b.
inline DesignBinding xor_pair_binding() {
  DesignBinding b;
  b.plaintext_channels = {"a", "b"};
  return b;
}

}  // namespace qdisca
