// JSON netlist file format.
//
// Top-level keys: gates, nets, channels, inputs, outputs, reset_net (optional).
// Capacitances are JSON numbers in femtofarads. Unknown keys are rejected so
// typos fail loudly instead of silently dropping annotations.
#pragma once

#include <string>

#include <json.hpp>

#include "qdisca/netlist.hpp"

namespace qdisca {

using json = nlohmann::ordered_json;

class ParseError : public NetlistError {
public:
  explicit ParseError(const std::string& what) : NetlistError(what) {}
};

namespace detail {

inline void reject_unknown_keys(const json& obj, const char* what,
                                std::initializer_list<const char*> allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : allowed)
      if (it.key() == k) { known = true; break; }
    if (!known)
      throw ParseError(std::string(what) + ": unknown key \"" + it.key() + "\"");
  }
}

inline const json& require(const json& obj, const char* key, const char* what) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ParseError(std::string(what) + ": missing key \"" + key + "\"");
  return *it;
}

inline std::string as_string(const json& v, const char* what) {
  if (!v.is_string()) throw ParseError(std::string(what) + ": expected a string");
  return v.get<std::string>();
}

inline double as_number(const json& v, const char* what) {
  if (!v.is_number()) throw ParseError(std::string(what) + ": expected a number");
  return v.get<double>();
}

inline std::vector<std::string> as_string_array(const json& v, const char* what) {
  if (!v.is_array()) throw ParseError(std::string(what) + ": expected an array");
  std::vector<std::string> out;
  for (const auto& e : v) out.push_back(as_string(e, what));
  return out;
}

}  // namespace detail

// Structural parse: JSON syntax (with byte position on error), schema shape,
// and types. Semantic rules live in validate().
inline Netlist netlist_from_json_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("syntax error at byte " + std::to_string(e.byte) + ": " +
                     e.what());
  }
  if (!doc.is_object()) throw ParseError("netlist document must be a JSON object");
  detail::reject_unknown_keys(doc, "netlist",
      {"gates", "nets", "channels", "inputs", "outputs", "reset_net"});

  Netlist nl;

  const json& nets = detail::require(doc, "nets", "netlist");
  if (!nets.is_array()) throw ParseError("nets: expected an array");
  for (const auto& jn : nets) {
    detail::reject_unknown_keys(jn, "net", {"id", "c_load_fF", "c_par_fF", "c_sc_fF"});
    Net n;
    n.id = detail::as_string(detail::require(jn, "id", "net"), "net.id");
    n.c_load_fF = detail::as_number(detail::require(jn, "c_load_fF", "net"), "net.c_load_fF");
    n.c_par_fF = detail::as_number(detail::require(jn, "c_par_fF", "net"), "net.c_par_fF");
    n.c_sc_fF = detail::as_number(detail::require(jn, "c_sc_fF", "net"), "net.c_sc_fF");
    nl.nets.push_back(std::move(n));
  }

  const json& gates = detail::require(doc, "gates", "netlist");
  if (!gates.is_array()) throw ParseError("gates: expected an array");
  for (const auto& jg : gates) {
    detail::reject_unknown_keys(jg, "gate", {"id", "kind", "inputs", "output", "has_reset"});
    Gate g;
    g.id = detail::as_string(detail::require(jg, "id", "gate"), "gate.id");
    std::string kind = detail::as_string(detail::require(jg, "kind", "gate"), "gate.kind");
    auto k = gate_kind_from_string(kind);
    if (!k) throw ParseError("gate " + g.id + ": unknown kind \"" + kind + "\"");
    g.kind = *k;
    g.inputs = detail::as_string_array(detail::require(jg, "inputs", "gate"), "gate.inputs");
    g.output = detail::as_string(detail::require(jg, "output", "gate"), "gate.output");
    if (auto it = jg.find("has_reset"); it != jg.end()) {
      if (!it->is_boolean()) throw ParseError("gate " + g.id + ": has_reset must be a boolean");
      g.has_reset = it->get<bool>();
    }
    nl.gates.push_back(std::move(g));
  }

  const json& channels = detail::require(doc, "channels", "netlist");
  if (!channels.is_array()) throw ParseError("channels: expected an array");
  for (const auto& jc : channels) {
    detail::reject_unknown_keys(jc, "channel", {"name", "rails", "ack"});
    Channel c;
    c.name = detail::as_string(detail::require(jc, "name", "channel"), "channel.name");
    c.rails = detail::as_string_array(detail::require(jc, "rails", "channel"), "channel.rails");
    if (auto it = jc.find("ack"); it != jc.end())
      c.ack = detail::as_string(*it, "channel.ack");
    nl.channels.push_back(std::move(c));
  }

  nl.inputs = detail::as_string_array(detail::require(doc, "inputs", "netlist"), "inputs");
  nl.outputs = detail::as_string_array(detail::require(doc, "outputs", "netlist"), "outputs");
  if (auto it = doc.find("reset_net"); it != doc.end())
    nl.reset_net = detail::as_string(*it, "reset_net");

  return nl;
}

// Strict parse: structure plus every semantic invariant. Throws NetlistError
// naming the offending id on any violation.
inline Netlist parse_netlist(const std::string& text) {
  Netlist nl = netlist_from_json_text(text);
  validate_or_throw(nl);
  return nl;
}

inline json netlist_to_json(const Netlist& nl) {
  json doc = json::object();
  doc["gates"] = json::array();
  for (const auto& g : nl.gates) {
    json jg = {{"id", g.id},
               {"kind", to_string(g.kind)},
               {"inputs", g.inputs},
               {"output", g.output}};
    if (g.has_reset) jg["has_reset"] = true;
    doc["gates"].push_back(std::move(jg));
  }
  doc["nets"] = json::array();
  for (const auto& n : nl.nets)
    doc["nets"].push_back({{"id", n.id},
                           {"c_load_fF", n.c_load_fF},
                           {"c_par_fF", n.c_par_fF},
                           {"c_sc_fF", n.c_sc_fF}});
  doc["channels"] = json::array();
  for (const auto& c : nl.channels) {
    json jc = {{"name", c.name}, {"rails", c.rails}};
    if (!c.ack.empty()) jc["ack"] = c.ack;
    doc["channels"].push_back(std::move(jc));
  }
  doc["inputs"] = nl.inputs;
  doc["outputs"] = nl.outputs;
  if (!nl.reset_net.empty()) doc["reset_net"] = nl.reset_net;
  return doc;
}

inline std::string serialize_netlist(const Netlist& nl) {
  return netlist_to_json(nl).dump(2) + "\n";
}

}  // namespace qdisca
