// Gate evaluation and 1-of-N codeword helpers shared by the static graph
// analysis and the event-driven simulator.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qdisca/netlist.hpp"

namespace qdisca {

class InputError : public NetlistError {
public:
  explicit InputError(const std::string& what) : NetlistError(what) {}
};

// Single-gate transfer function. MULLER keeps its previous output unless all
// inputs agree (z = xy + z(x+y) for two inputs, generalized to n); all other
// kinds are memoryless.
inline bool eval_gate(GateKind kind, const std::vector<bool>& inputs,
                      bool prev_out) {
  switch (kind) {
    case GateKind::MULLER: {
      bool all1 = true, all0 = true;
      for (bool b : inputs) {
        all1 = all1 && b;
        all0 = all0 && !b;
      }
      if (all1) return true;
      if (all0) return false;
      return prev_out;
    }
    case GateKind::OR:
    case GateKind::NOR: {
      bool any = false;
      for (bool b : inputs) any = any || b;
      return kind == GateKind::OR ? any : !any;
    }
    case GateKind::AND: {
      bool all = true;
      for (bool b : inputs) all = all && b;
      return all;
    }
    case GateKind::INV:
      return !inputs.at(0);
    case GateKind::BUF:
      return inputs.at(0);
  }
  return false;
}

// A 1-of-N codeword as a rail mask. Mask 0 is the invalid (return-to-zero)
// state; exactly one set bit is a valid datum; anything else is illegal.
struct Codeword {
  std::uint32_t rail_mask = 0;

  static Codeword invalid() { return {0}; }
  static Codeword of_value(unsigned value) { return {1u << value}; }

  bool is_invalid() const { return rail_mask == 0; }
  bool is_valid_one_hot() const {
    return rail_mask != 0 && (rail_mask & (rail_mask - 1)) == 0;
  }
  // Rail index of a valid codeword.
  unsigned value() const {
    unsigned v = 0;
    std::uint32_t m = rail_mask;
    while (m > 1) {
      m >>= 1;
      ++v;
    }
    return v;
  }
  bool operator==(const Codeword&) const = default;
};

// Dual-rail encoding of one bit: value 0 drives rail 0, value 1 drives
// rail 1, invalid drives neither. Returned as (rail0, rail1).
inline std::pair<bool, bool> encode_dual_rail(const Codeword& cw) {
  return {(cw.rail_mask & 1u) != 0, (cw.rail_mask & 2u) != 0};
}

// One concrete value (or the invalid state) per channel name.
using InputAssignment = std::map<std::string, Codeword>;

// Checks that the codeword fits the channel's rail count and is either
// invalid or one-hot. The all-ones "unused" state lands here too.
inline void check_codeword(const Channel& ch, const Codeword& cw) {
  if (cw.rail_mask >> ch.rails.size())
    throw InputError("channel " + ch.name + ": codeword uses rail >= " +
                     std::to_string(ch.rails.size()));
  if (!cw.is_invalid() && !cw.is_valid_one_hot())
    throw InputError("channel " + ch.name +
                     ": illegal codeword (not one-hot), rail mask " +
                     std::to_string(cw.rail_mask));
}

}  // namespace qdisca
