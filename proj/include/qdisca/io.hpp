// Report and trace serialization: waveform / trace-matrix CSV, JSON reports
// with a schema_version field, DOT export of the circuit graph, and the
// fixed-width dissymmetry table.
#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qdisca/dissym.hpp"
#include "qdisca/dpa.hpp"
#include "qdisca/graph.hpp"
#include "qdisca/netlist_json.hpp"
#include "qdisca/sim.hpp"

namespace qdisca {

inline constexpr int kSchemaVersion = 1;

class IoError : public NetlistError {
public:
  explicit IoError(const std::string& what) : NetlistError(what) {}
};

// 9 significant digits; enough to round-trip every quantity we report.
inline std::string fmt_sig(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
}

// --------------------------------------------------------------------------
// Waveform CSV: header `t_ps,i_uA`, one row per sample.
// --------------------------------------------------------------------------

inline std::string waveform_to_csv(const Waveform& w) {
  std::string out = "t_ps,i_uA\n";
  for (std::size_t k = 0; k < w.samples.size(); ++k)
    out += fmt_sig(w.t_at(k)) + "," + fmt_sig(w.samples[k]) + "\n";
  return out;
}

inline Waveform waveform_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("waveform CSV: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "t_ps,i_uA")
    throw IoError("waveform CSV: expected header \"t_ps,i_uA\", got \"" +
                  line + "\"");
  Waveform w;
  std::vector<double> times;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos)
      throw IoError("waveform CSV: malformed row \"" + line + "\"");
    times.push_back(std::stod(line.substr(0, comma)));
    w.samples.push_back(std::stod(line.substr(comma + 1)));
  }
  if (w.samples.empty()) throw IoError("waveform CSV: no samples");
  w.t0_ps = times.front();
  w.sample_period_ps =
      times.size() > 1 ? times[1] - times[0] : 1.0;
  return w;
}

// --------------------------------------------------------------------------
// Trace matrix CSV: columns run, plaintext (hex), then one column per sample.
// A JSON sidecar carries grid and acquisition parameters.
// --------------------------------------------------------------------------

inline std::string trace_matrix_to_csv(const TraceMatrix& tm) {
  std::string out = "run,plaintext";
  for (std::size_t j = 0; j < tm.samples(); ++j)
    out += ",s" + std::to_string(j);
  out += "\n";
  char hexbuf[32];
  for (std::size_t i = 0; i < tm.runs(); ++i) {
    std::snprintf(hexbuf, sizeof hexbuf, "0x%02llx",
                  static_cast<unsigned long long>(tm.plaintexts[i]));
    out += std::to_string(i);
    out += ",";
    out += hexbuf;
    for (double v : tm.rows[i]) {
      out += ",";
      out += fmt_sig(v);
    }
    out += "\n";
  }
  return out;
}

inline TraceMatrix trace_matrix_from_csv(const std::string& text,
                                         double sample_period_ps = 1.0) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw IoError("trace CSV: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  std::vector<std::string> header;
  {
    std::istringstream hs(line);
    std::string col;
    while (std::getline(hs, col, ',')) header.push_back(col);
  }
  if (header.size() < 3 || header[0] != "run" || header[1] != "plaintext")
    throw IoError("trace CSV: expected columns \"run,plaintext,s0,...\"; got "
                  "first column \"" +
                  (header.empty() ? std::string("<none>") : header[0]) + "\"");
  for (std::size_t j = 2; j < header.size(); ++j) {
    std::string want = "s" + std::to_string(j - 2);
    if (header[j] != want)
      throw IoError("trace CSV: bad sample column \"" + header[j] +
                    "\" (expected \"" + want + "\")");
  }
  TraceMatrix tm;
  tm.sample_period_ps = sample_period_ps;
  std::size_t n_samples = header.size() - 2;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    if (!std::getline(ls, cell, ','))
      throw IoError("trace CSV: malformed row");
    if (!std::getline(ls, cell, ','))
      throw IoError("trace CSV: row missing plaintext column");
    tm.plaintexts.push_back(std::stoull(cell, nullptr, 0));
    std::vector<double> row;
    row.reserve(n_samples);
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    if (row.size() != n_samples)
      throw IoError("trace CSV: row has " + std::to_string(row.size()) +
                    " samples, header declares " + std::to_string(n_samples));
    tm.rows.push_back(std::move(row));
  }
  if (tm.rows.empty()) throw IoError("trace CSV: no rows");
  return tm;
}

inline json trace_sidecar_json(const TraceMatrix& tm,
                               const ElectricalParams& params,
                               double noise_sigma_uA, std::uint64_t seed) {
  return json{{"schema_version", kSchemaVersion},
              {"t0_ps", tm.t0_ps},
              {"sample_period_ps", tm.sample_period_ps},
              {"runs", tm.runs()},
              {"samples", tm.samples()},
              {"noise_sigma_uA", noise_sigma_uA},
              {"seed", seed},
              {"params",
               {{"vdd", params.vdd},
                {"eta", params.eta},
                {"tau0_ps", params.tau0_ps},
                {"k_ps_per_fF", params.k_ps_per_fF},
                {"sample_period_ps", params.sample_period_ps}}}};
}

// --------------------------------------------------------------------------
// Graph / balance reports and DOT export.
// --------------------------------------------------------------------------

inline json graph_to_json(const CircuitGraph& g) {
  json doc{{"schema_version", kSchemaVersion}};
  doc["n_c"] = g.n_c;
  doc["vertices"] = json::array();
  for (std::size_t i = 0; i < g.netlist.gates.size(); ++i) {
    const Gate& gate = g.netlist.gates[i];
    doc["vertices"].push_back(
        {{"id", gate.id},
         {"kind", to_string(gate.kind)},
         {"level", g.levelized() ? g.levels[i] : 0}});
  }
  doc["edges"] = json::array();
  for (const auto& e : g.edges)
    doc["edges"].push_back({{"from", g.netlist.gates[e.from].id},
                            {"to", g.netlist.gates[e.to].id},
                            {"net", e.net},
                            {"c_fF", e.c_total_fF}});
  doc["boundary_inputs"] = g.boundary_inputs;
  doc["boundary_outputs"] = g.boundary_outputs;
  return doc;
}

inline json balance_to_json(const BalanceReport& b) {
  json per_level = json::object();
  for (const auto& [lvl, n] : b.per_level)
    per_level[std::to_string(lvl)] = n;
  return json{{"schema_version", kSchemaVersion},
              {"balanced", b.balanced},
              {"n_i", b.n_i},
              {"per_level", per_level},
              {"offending_inputs", b.offending_inputs},
              {"inputs_checked", b.inputs_checked}};
}

inline std::string graph_to_dot(const CircuitGraph& g) {
  std::string out = "digraph circuit {\n  rankdir=LR;\n  node [shape=box];\n";
  for (std::size_t i = 0; i < g.netlist.gates.size(); ++i) {
    const Gate& gate = g.netlist.gates[i];
    out += "  \"" + gate.id + "\" [label=\"" + gate.id + "\\n" +
           to_string(gate.kind);
    if (g.levelized()) out += "\\nL" + std::to_string(g.levels[i]);
    out += "\"];\n";
  }
  for (const auto& n : g.boundary_inputs)
    out += "  \"in:" + n + "\" [style=dashed, label=\"" + n + "\"];\n";
  for (const auto& n : g.boundary_outputs)
    out += "  \"out:" + n + "\" [style=dashed, label=\"" + n + "\"];\n";
  for (const auto& e : g.edges)
    out += "  \"" + g.netlist.gates[e.from].id + "\" -> \"" +
           g.netlist.gates[e.to].id + "\" [label=\"" + e.net + " " +
           fmt_sig(e.c_total_fF) + "fF\"];\n";
  for (const auto& n : g.boundary_inputs) {
    for (std::size_t i = 0; i < g.netlist.gates.size(); ++i) {
      const Gate& gate = g.netlist.gates[i];
      for (const auto& in : gate.inputs)
        if (in == n)
          out += "  \"in:" + n + "\" -> \"" + gate.id + "\";\n";
    }
  }
  for (const auto& n : g.boundary_outputs) {
    const Gate* d = g.netlist.driver_of(n);
    if (d) out += "  \"" + d->id + "\" -> \"out:" + n + "\";\n";
  }
  out += "}\n";
  return out;
}

// --------------------------------------------------------------------------
// Dissymmetry and flow-comparison reports.
// --------------------------------------------------------------------------

inline json dissymmetry_to_json(const DissymmetryReport& rep) {
  json doc{{"schema_version", kSchemaVersion}};
  doc["entries"] = json::array();
  for (const auto& e : rep.entries)
    doc["entries"].push_back({{"channel", e.channel},
                              {"rail_caps_fF", e.rail_caps_fF},
                              {"d_A", e.d_a}});
  doc["max_d_A"] = rep.max_d_a;
  doc["mean_d_A"] = rep.mean_d_a;
  return doc;
}

// Fixed-width table: channel, per-rail capacitance, dissymmetry.
inline std::string dissymmetry_to_table(const DissymmetryReport& rep) {
  char buf[160];
  std::string out;
  std::snprintf(buf, sizeof buf, "%-16s %-24s %8s\n", "channel", "rails_fF",
                "d_A");
  out += buf;
  out += std::string(50, '-') + "\n";
  for (const auto& e : rep.entries) {
    std::string rails;
    for (double c : e.rail_caps_fF) {
      char cbuf[32];
      std::snprintf(cbuf, sizeof cbuf, "%s%.2f", rails.empty() ? "" : " ", c);
      rails += cbuf;
    }
    std::snprintf(buf, sizeof buf, "%-16s %-24s %8.2f\n", e.channel.c_str(),
                  rails.c_str(), e.d_a);
    out += buf;
  }
  return out;
}

inline json comparison_to_json(const ComparisonReport& rep) {
  auto flow = [](const FlowStats& f) {
    return json{{"max_d_A_per_seed", f.max_d_a},
                {"median_max_d_A", f.median_max_d_a},
                {"area_proxy", f.area_proxy}};
  };
  return json{{"schema_version", kSchemaVersion},
              {"n_seeds", rep.n_seeds},
              {"flat", flow(rep.flat)},
              {"hierarchical", flow(rep.hierarchical)},
              {"area_ratio", rep.area_ratio}};
}

// --------------------------------------------------------------------------
// Attack result report.
// --------------------------------------------------------------------------

inline json dpa_result_to_json(const DpaResult& res,
                               const SelectionFunction& sel,
                               double inconclusive_threshold_uA = 1e-9) {
  json doc{{"schema_version", kSchemaVersion}};
  doc["algorithm"] =
      sel.algorithm == SelectionAlgorithm::AesXor ? "AES-XOR" : "DES-SBOX1";
  doc["target_bit"] = sel.target_bit;
  doc["ranking"] = json::array();
  char hexbuf[16];
  for (const auto& e : res.ranking) {
    std::snprintf(hexbuf, sizeof hexbuf, "0x%02x", e.guess);
    json je{{"guess_hex", hexbuf}, {"n0", e.n0}, {"n1", e.n1}};
    if (e.peak)
      je["peak_uA"] = *e.peak;
    else
      je["peak_uA"] = nullptr;
    doc["ranking"].push_back(std::move(je));
  }
  bool weak = res.inconclusive || res.top_peak() < inconclusive_threshold_uA;
  doc["inconclusive"] = weak;
  if (!res.ranking.empty()) {
    std::snprintf(hexbuf, sizeof hexbuf, "0x%02x", res.ranking.front().guess);
    doc["top_guess_hex"] = hexbuf;
  }
  return doc;
}

}  // namespace qdisca
