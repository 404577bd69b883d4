// Per-channel capacitance dissymmetry and the flat-vs-hierarchical
// capacitance-assignment study. The dissymmetry of a channel is the relative
// imbalance between its rails' total capacitances; the lower it is, the less
// the channel leaks under a differential attack.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "qdisca/netlist.hpp"
#include "qdisca/sim.hpp"

namespace qdisca {

class DissymmetryError : public NetlistError {
public:
  explicit DissymmetryError(const std::string& what) : NetlistError(what) {}
};

// Dual-rail: |C0 - C1| / min(C0, C1). For 1-of-N channels this generalizes
// to (max - min) / min, which reduces to the dual-rail form at N = 2.
inline double channel_dissymmetry(const std::vector<double>& rail_caps_fF) {
  if (rail_caps_fF.size() < 2)
    throw DissymmetryError("dissymmetry needs at least 2 rails");
  double lo = rail_caps_fF[0], hi = rail_caps_fF[0];
  for (double c : rail_caps_fF) {
    if (!(c > 0.0))
      throw DissymmetryError("rail capacitance must be > 0 fF");
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  return (hi - lo) / lo;
}

struct DissymmetryEntry {
  std::string channel;
  std::vector<double> rail_caps_fF;
  double d_a = 0.0;
};

struct DissymmetryReport {
  std::vector<DissymmetryEntry> entries;  // sorted by d_a descending
  double max_d_a = 0.0;
  double mean_d_a = 0.0;
};

inline DissymmetryReport dissymmetry_report(const Netlist& nl) {
  DissymmetryReport rep;
  for (const auto& ch : nl.channels) {
    DissymmetryEntry e;
    e.channel = ch.name;
    for (const auto& r : ch.rails) {
      const Net* n = nl.find_net(r);
      if (!n) throw DissymmetryError("channel " + ch.name + " rail " + r +
                                     " is undeclared");
      e.rail_caps_fF.push_back(n->total_fF());
    }
    e.d_a = channel_dissymmetry(e.rail_caps_fF);
    rep.entries.push_back(std::move(e));
  }
  std::stable_sort(rep.entries.begin(), rep.entries.end(),
                   [](const DissymmetryEntry& a, const DissymmetryEntry& b) {
                     if (a.d_a != b.d_a) return a.d_a > b.d_a;
                     return a.channel < b.channel;
                   });
  for (const auto& e : rep.entries) {
    rep.max_d_a = std::max(rep.max_d_a, e.d_a);
    rep.mean_d_a += e.d_a;
  }
  if (!rep.entries.empty()) rep.mean_d_a /= static_cast<double>(rep.entries.size());
  return rep;
}

enum class PlacementMode { Flat, Hierarchical };

// Statistical stand-in for a place-and-route run. A flat flow leaves routing
// capacitance to the tool's random optimization passes (wide dispersion); a
// hierarchical flow constrains each block to a small region, bounding net
// length at some area cost.
struct PlacementParams {
  PlacementMode mode = PlacementMode::Flat;
  double base_fF = 4.0;        // routing capacitance baseline per net
  double dispersion = 0.8;     // relative spread of the routing draw
  double area_overhead = 1.0;  // reported area multiplier
  std::uint64_t seed = 0;

  static PlacementParams flat_defaults(std::uint64_t seed = 0) {
    return {PlacementMode::Flat, 4.0, 0.8, 1.0, seed};
  }
  static PlacementParams hierarchical_defaults(std::uint64_t seed = 0) {
    return {PlacementMode::Hierarchical, 4.0, 0.05, 1.20, seed};
  }
  void check() const {
    if (!(base_fF > 0)) throw DissymmetryError("base_fF must be > 0");
    if (!(dispersion >= 0)) throw DissymmetryError("dispersion must be >= 0");
  }
};

// Redraws the routing part of every net's load capacitance as
// base * (1 + u), u ~ Uniform(-dispersion, +dispersion), seeded and
// deterministic. The gate-pin part of the load (anything above the baseline)
// is kept. Nets are drawn in declaration order.
inline Netlist assign_capacitances(const Netlist& nl,
                                   const PlacementParams& params) {
  params.check();
  Netlist out = nl;
  std::mt19937_64 rng(splitmix64(params.seed));
  std::uniform_real_distribution<double> u(-params.dispersion,
                                           params.dispersion);
  for (auto& n : out.nets) {
    double pin_fF = std::max(n.c_load_fF - params.base_fF, 0.0);
    double routing_fF = params.base_fF * (1.0 + u(rng));
    n.c_load_fF = pin_fF + routing_fF;
  }
  return out;
}

struct FlowStats {
  std::vector<double> max_d_a;  // one value per seed
  double median_max_d_a = 0.0;
  double area_proxy = 1.0;
};

struct ComparisonReport {
  FlowStats flat;
  FlowStats hierarchical;
  double area_ratio = 1.0;  // hierarchical area over flat area
  int n_seeds = 0;
};

namespace detail {

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace detail

// Monte-Carlo over placement seeds: distribution of the worst channel
// dissymmetry under each flow, plus the declared area cost.
inline ComparisonReport compare_flows(const Netlist& nl,
                                      const PlacementParams& flat,
                                      const PlacementParams& hier,
                                      int n_seeds) {
  if (n_seeds < 1) throw DissymmetryError("compare_flows needs n_seeds >= 1");
  ComparisonReport rep;
  rep.n_seeds = n_seeds;
  for (int s = 0; s < n_seeds; ++s) {
    PlacementParams f = flat;
    f.seed = flat.seed + static_cast<std::uint64_t>(s);
    PlacementParams h = hier;
    h.seed = hier.seed + static_cast<std::uint64_t>(s);
    rep.flat.max_d_a.push_back(
        dissymmetry_report(assign_capacitances(nl, f)).max_d_a);
    rep.hierarchical.max_d_a.push_back(
        dissymmetry_report(assign_capacitances(nl, h)).max_d_a);
  }
  rep.flat.median_max_d_a = detail::median(rep.flat.max_d_a);
  rep.hierarchical.median_max_d_a = detail::median(rep.hierarchical.max_d_a);
  rep.flat.area_proxy = flat.area_overhead;
  rep.hierarchical.area_proxy = hier.area_overhead;
  rep.area_ratio = hier.area_overhead / flat.area_overhead;
  return rep;
}

}  // namespace qdisca
