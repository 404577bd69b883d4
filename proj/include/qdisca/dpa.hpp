// Differential power analysis over collected trace matrices: selection
// functions, trace partitioning, set averaging, bias computation, and key
// ranking. Works on any TraceMatrix regardless of how it was acquired.
#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qdisca/netlist.hpp"
#include "qdisca/sim.hpp"

namespace qdisca {

class DpaError : public NetlistError {
public:
  explicit DpaError(const std::string& what) : NetlistError(what) {}
};

enum class SelectionAlgorithm { DesSbox1, AesXor };

struct SelectionFunction {
  SelectionAlgorithm algorithm = SelectionAlgorithm::AesXor;
  int target_bit = 0;  // 0..7 for AES (LSB first), 0..3 for DES (MSB first)

  int guess_space() const {
    return algorithm == SelectionAlgorithm::AesXor ? 256 : 64;
  }
  void check() const {
    int max_bit = algorithm == SelectionAlgorithm::AesXor ? 7 : 3;
    if (target_bit < 0 || target_bit > max_bit)
      throw DpaError("target bit out of range for selection function");
  }
};

// First substitution box of DES; row from the outer input bits, column from
// the inner four.
inline const int kDesSbox1[4][16] = {
    {14, 4, 13, 1, 2, 15, 11, 8, 3, 10, 6, 12, 5, 9, 0, 7},
    {0, 15, 7, 4, 14, 2, 13, 1, 10, 6, 12, 11, 9, 5, 3, 8},
    {4, 1, 14, 8, 13, 6, 2, 11, 15, 12, 9, 7, 3, 10, 5, 0},
    {15, 12, 8, 2, 4, 9, 1, 7, 5, 11, 3, 14, 10, 0, 6, 13}};

// Predicted state bit of the first-round key mixing: bit `bit` of
// pti XOR guess, bit 0 being the least significant.
inline int d_aes(std::uint8_t pti, std::uint8_t key_guess, int bit) {
  return (static_cast<unsigned>(pti ^ key_guess) >> bit) & 1u;
}

// Predicted output bit of DES S-box 1 for a 6-bit plaintext and key guess.
// Output bit 0 is the most significant of the 4-bit substitution value.
inline int d_des(unsigned p6, unsigned k0, int bit) {
  if (p6 >= 64 || k0 >= 64) throw DpaError("d_des: inputs must be < 64");
  if (bit < 0 || bit > 3) throw DpaError("d_des: bit must be in 0..3");
  unsigned x = p6 ^ k0;
  unsigned row = ((x >> 4) & 2u) | (x & 1u);
  unsigned col = (x >> 1) & 0xfu;
  int s = kDesSbox1[row][col];
  return (s >> (3 - bit)) & 1;
}

inline int d_select(const SelectionFunction& sel, std::uint64_t pti,
                    unsigned guess) {
  if (sel.algorithm == SelectionAlgorithm::AesXor)
    return d_aes(static_cast<std::uint8_t>(pti),
                 static_cast<std::uint8_t>(guess), sel.target_bit);
  return d_des(static_cast<unsigned>(pti & 63u), guess, sel.target_bit);
}

// Row indices of the two sets; traces are referenced, never copied.
struct Partition {
  std::vector<std::size_t> set0;
  std::vector<std::size_t> set1;
};

inline Partition partition(const TraceMatrix& traces,
                           const std::vector<int>& d_bits) {
  if (d_bits.size() != traces.runs())
    throw DpaError("partition: d_bits length does not match trace count");
  Partition p;
  for (std::size_t i = 0; i < d_bits.size(); ++i)
    (d_bits[i] ? p.set1 : p.set0).push_back(i);
  return p;
}

// Samplewise mean of the referenced rows.
inline std::vector<double> average(const TraceMatrix& traces,
                                   const std::vector<std::size_t>& rows) {
  if (rows.empty()) throw DpaError("average: set is empty");
  std::vector<double> a(traces.samples(), 0.0);
  for (std::size_t r : rows)
    for (std::size_t j = 0; j < a.size(); ++j) a[j] += traces.rows[r][j];
  for (double& v : a) v /= static_cast<double>(rows.size());
  return a;
}

// Samplewise difference of the two set averages.
inline std::vector<double> bias(const std::vector<double>& a0,
                                const std::vector<double>& a1) {
  if (a0.size() != a1.size()) throw DpaError("bias: length mismatch");
  std::vector<double> t(a0.size());
  for (std::size_t j = 0; j < t.size(); ++j) t[j] = a0[j] - a1[j];
  return t;
}

struct GuessEntry {
  unsigned guess = 0;
  std::optional<double> peak;  // max_j |T[j]|; empty if a set was empty
  std::size_t n0 = 0;
  std::size_t n1 = 0;
};

struct DpaResult {
  std::vector<GuessEntry> ranking;  // descending by peak; inconclusive last
  bool inconclusive = false;        // no guess produced a usable bias

  // 1-based rank counting only strictly larger peaks, so tied guesses share
  // a rank.
  std::size_t rank_of(unsigned guess) const {
    std::optional<double> mine;
    for (const auto& e : ranking)
      if (e.guess == guess) mine = e.peak;
    if (!mine) return ranking.size();
    std::size_t better = 0;
    for (const auto& e : ranking)
      if (e.peak && *e.peak > *mine) ++better;
    return better + 1;
  }
  double top_peak() const {
    for (const auto& e : ranking)
      if (e.peak) return *e.peak;
    return 0.0;
  }
};

inline std::vector<int> selection_bits(const TraceMatrix& traces,
                                       const SelectionFunction& sel,
                                       unsigned guess) {
  std::vector<int> d(traces.runs());
  for (std::size_t i = 0; i < d.size(); ++i)
    d[i] = d_select(sel, traces.plaintexts[i], guess);
  return d;
}

// Bias signal for one key guess, or nothing if a partition side is empty.
inline std::optional<std::vector<double>> guess_bias(
    const TraceMatrix& traces, const SelectionFunction& sel, unsigned guess) {
  Partition p = partition(traces, selection_bits(traces, sel, guess));
  if (p.set0.empty() || p.set1.empty()) return std::nullopt;
  return bias(average(traces, p.set0), average(traces, p.set1));
}

// Full attack: every guess is partitioned, averaged, and ranked by peak
// bias magnitude. Guesses that produce identical partitions share one
// averaging pass. A guess with an empty set side has no defined average and
// ranks last.
inline DpaResult attack(const TraceMatrix& traces,
                        const SelectionFunction& sel) {
  sel.check();
  DpaResult res;

  std::map<std::vector<int>, std::optional<double>> peak_cache;
  for (int g = 0; g < sel.guess_space(); ++g) {
    std::vector<int> d = selection_bits(traces, sel, static_cast<unsigned>(g));
    Partition p = partition(traces, d);
    GuessEntry e;
    e.guess = static_cast<unsigned>(g);
    e.n0 = p.set0.size();
    e.n1 = p.set1.size();
    auto it = peak_cache.find(d);
    if (it == peak_cache.end()) {
      std::optional<double> peak;
      if (!p.set0.empty() && !p.set1.empty()) {
        auto t = bias(average(traces, p.set0), average(traces, p.set1));
        double m = 0.0;
        for (double v : t) m = std::max(m, std::abs(v));
        peak = m;
      }
      it = peak_cache.emplace(std::move(d), peak).first;
    }
    e.peak = it->second;
    res.ranking.push_back(e);
  }

  std::stable_sort(res.ranking.begin(), res.ranking.end(),
                   [](const GuessEntry& a, const GuessEntry& b) {
                     if (a.peak.has_value() != b.peak.has_value())
                       return a.peak.has_value();
                     if (a.peak && b.peak && *a.peak != *b.peak)
                       return *a.peak > *b.peak;
                     return a.guess < b.guess;
                   });
  res.inconclusive = std::none_of(res.ranking.begin(), res.ranking.end(),
                                  [](const GuessEntry& e) {
                                    return e.peak.has_value();
                                  });
  return res;
}

}  // namespace qdisca
