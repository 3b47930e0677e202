#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "specmux/system.hpp"

namespace specmux::engine {

struct EngineConfig {
  model::SystemModel model;
  std::uint64_t bins = 0;
  std::uint64_t batch_bins = 1ull << 22;
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = hardware concurrency

  /// Direct mode: offsets (in bins) at which accidental coincidences are
  /// tallied; empty selects a default comb away from the peak.
  std::vector<std::int64_t> accidental_offsets;

  /// HBT mode: correlation histograms cover delays [-g2_max_delay,
  /// +g2_max_delay].
  int g2_max_delay = 32;
};

/// Integer tallies of one run; merging is plain addition, so partial tallies
/// from parallel batches combine associatively.
struct Tallies {
  std::uint64_t bins = 0;
  std::uint64_t herald_singles = 0;  // combined selected stream
  std::array<std::uint64_t, 3> herald_per_mode{};
  std::uint64_t signal_singles = 0;
  std::uint64_t coincidences = 0;  // herald & signal, same bin
  std::array<std::uint64_t, 3> coincidences_per_mode{};
  std::uint64_t accidentals = 0;        // summed over all offsets
  std::uint64_t accidental_windows = 0; // number of offsets (set by run())

  // HBT histograms, index tau + g2_max_delay.
  std::uint64_t a_singles = 0;
  std::uint64_t b_singles = 0;
  std::vector<std::uint64_t> c_abh;  // herald & A at t, B at t + tau
  std::vector<std::uint64_t> c_ah;   // herald at t, A at t + tau
  std::vector<std::uint64_t> c_bh;   // herald at t, B at t + tau

  std::uint64_t shifts_attempted = 0;
  std::uint64_t shifts_applied = 0;

  void merge(const Tallies& other);
};

struct EngineResult {
  Tallies tallies;
  double wall_seconds = 0.0;
  double bins_per_second_throughput = 0.0;
};

/// Runs the sparse Monte-Carlo kernel: occupied bins of every photon and
/// dark-count process are generated by geometric gap jumping, merged, and
/// processed bin by bin, so cost scales with event rate rather than with the
/// bin count. Batches carry seeds derived from (seed, batch index) and merge
/// in index order; output is independent of the thread count.
EngineResult run(const EngineConfig& config);

}  // namespace specmux::engine
