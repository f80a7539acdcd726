#pragma once

// Radio KPI arithmetic: SINR, throughput, power efficiency, availability and
// Jain fairness, plus the modulation-and-coding table.

#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "femtosim/units.hpp"

namespace femtosim {

struct McsEntry {
  int index = 0;
  double min_sinr_db = -std::numeric_limits<double>::infinity();
  std::string modulation;
  double code_rate = 0.0;
  double efficiency = 0.0; // bits per symbol
};

class McsTable {
 public:
  explicit McsTable(std::vector<McsEntry> entries) : entries_(std::move(entries)) { validate(); }

  static McsTable lte_default() {
    const double inf = std::numeric_limits<double>::infinity();
    return McsTable({
        {0, -inf, "None", 0.0, 0.0},
        {1, -6.0, "QPSK", 0.076, 0.1523},
        {2, -5.0, "QPSK", 0.12, 0.2344},
        {3, -3.0, "QPSK", 0.19, 0.3770},
        {4, -1.0, "QPSK", 0.3, 0.6016},
        {5, 1.0, "QPSK", 0.44, 0.8770},
        {6, 3.0, "QPSK", 0.59, 1.1758},
        {7, 5.0, "16QAM", 0.37, 1.4766},
        {8, 8.0, "16QAM", 0.48, 1.9141},
        {9, 9.0, "16QAM", 0.6, 2.4063},
        {10, 11.0, "64QAM", 0.45, 2.7305},
        {11, 12.0, "64QAM", 0.55, 3.3223},
        {12, 14.0, "64QAM", 0.65, 3.9023},
        {13, 16.0, "64QAM", 0.75, 4.5234},
        {14, 18.0, "64QAM", 0.85, 5.1152},
        {15, 20.0, "64QAM", 0.93, 5.5547},
    });
  }

  // CSV columns: index,min_sinr_db,modulation,code_rate,efficiency.
  // Index 0 accepts an empty min-SINR field (no threshold).
  static McsTable from_csv(std::istream& in) {
    std::vector<McsEntry> entries;
    std::string line;
    bool header_skipped = false;
    while (std::getline(in, line)) {
      if (line.empty()) continue;
      if (!header_skipped && line.find("index") != std::string::npos) {
        header_skipped = true;
        continue;
      }
      std::stringstream ss(line);
      std::string field;
      McsEntry e;
      std::getline(ss, field, ',');
      e.index = std::stoi(field);
      std::getline(ss, field, ',');
      e.min_sinr_db =
          field.empty() ? -std::numeric_limits<double>::infinity() : std::stod(field);
      std::getline(ss, e.modulation, ',');
      std::getline(ss, field, ',');
      e.code_rate = field.empty() ? 0.0 : std::stod(field);
      std::getline(ss, field, ',');
      e.efficiency = field.empty() ? 0.0 : std::stod(field);
      entries.push_back(std::move(e));
    }
    return McsTable(std::move(entries));
  }

  const McsEntry& entry(int index) const { return entries_.at(static_cast<std::size_t>(index)); }
  double efficiency(int index) const { return entry(index).efficiency; }
  double min_sinr_db(int index) const { return entry(index).min_sinr_db; }
  int size() const { return static_cast<int>(entries_.size()); }
  int max_index() const { return size() - 1; }

 private:
  void validate() const {
    if (entries_.size() < 2) throw std::invalid_argument("MCS table needs at least two entries");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (entries_[i].index != static_cast<int>(i))
        throw std::invalid_argument("MCS table indices must be 0..N-1 in order");
      if (i >= 2 && !(entries_[i].efficiency > entries_[i - 1].efficiency))
        throw std::invalid_argument("MCS efficiencies must be strictly increasing for index >= 1");
      if (i >= 1 && entries_[i].min_sinr_db < entries_[i - 1].min_sinr_db)
        throw std::invalid_argument("MCS min-SINR must be nondecreasing");
    }
    if (entries_[0].efficiency != 0.0)
      throw std::invalid_argument("MCS index 0 must have zero efficiency");
  }

  std::vector<McsEntry> entries_;
};

struct NoiseModel {
  double density_dbm_hz = -174.0;
  double rb_bandwidth_hz = 180e3;

  double noise_w() const { return dbm_to_watt(density_dbm_hz) * rb_bandwidth_hz; }
  double noise_dbm() const { return watt_to_dbm(noise_w()); }
};

// gamma = S / (I + eta), all linear watts.
inline double sinr(double signal_w, double interference_w, double noise_w) {
  return signal_w / (interference_w + noise_w);
}

// Number of RBs whose SINR meets the target (linear compare).
inline int count_achieving(std::span<const double> sinr_lin, double target_lin) {
  int n = 0;
  for (double g : sinr_lin)
    if (g >= target_lin) ++n;
  return n;
}

inline double user_throughput(int achieved_rbs, int k_sc, double s_sc, double efficiency) {
  return achieved_rbs * k_sc * s_sc * efficiency;
}

inline double user_throughput(std::span<const double> sinr_lin, double target_lin, int k_sc,
                              double s_sc, double efficiency) {
  return user_throughput(count_achieving(sinr_lin, target_lin), k_sc, s_sc, efficiency);
}

// bits/J; zero power with zero allocation counts as zero efficiency.
inline double power_efficiency(double throughput_bps, double total_power_w) {
  if (total_power_w <= 0.0) return 0.0;
  return throughput_bps / total_power_w;
}

inline double availability(std::span<const double> achieved_bps,
                           std::span<const double> desired_bps) {
  if (achieved_bps.size() != desired_bps.size() || achieved_bps.empty())
    throw std::invalid_argument("availability: mismatched or empty rate vectors");
  int satisfied = 0;
  for (std::size_t i = 0; i < achieved_bps.size(); ++i)
    if (achieved_bps[i] >= desired_bps[i]) ++satisfied;
  return static_cast<double>(satisfied) / static_cast<double>(achieved_bps.size());
}

// Canonical Jain index with the 1/n divisor; an all-zero vector is treated as
// vacuously fair (1.0) instead of NaN.
inline double jain_fairness(std::span<const double> throughput_bps) {
  if (throughput_bps.empty()) throw std::invalid_argument("jain_fairness: empty vector");
  double sum = 0.0, sum_sq = 0.0;
  for (double c : throughput_bps) {
    sum += c;
    sum_sq += c * c;
  }
  if (sum_sq == 0.0) return 1.0;
  return sum * sum / (static_cast<double>(throughput_bps.size()) * sum_sq);
}

struct UserSlotMetrics {
  double throughput_bps = 0.0;
  int achieved_rbs = 0;
  double tx_power_w = 0.0;
  double energy_eff = 0.0; // bits/J
  bool satisfied = false;
};

struct SlotMetrics {
  std::vector<UserSlotMetrics> users;
  double system_throughput_bps = 0.0;
  double mean_energy_eff = 0.0;
  double availability = 0.0;
  double fairness = 1.0;
};

} // namespace femtosim
