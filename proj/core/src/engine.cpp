#include "specmux/engine.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "specmux/rng.hpp"

namespace specmux::engine {

namespace {

// Stream ids within a batch.
enum SourceId : std::uint32_t {
  kPairMode0 = 0,
  kPairMode1,
  kPairMode2,
  kBackground0,
  kBackground1,
  kBackground2,
  kDarkHerald0,
  kDarkHerald1,
  kDarkHerald2,
  kDarkSignalA,  // signal detector (direct) or branch A (HBT)
  kDarkSignalB,
  kSourceCount,
  kProcessStream = 64,
};

struct Event {
  std::uint64_t bin;
  std::uint32_t source;
  std::uint32_t count;

  bool operator<(const Event& other) const {
    return bin != other.bin ? bin < other.bin : source < other.source;
  }
};

/// Occupied bins of one thermal process: gap-jump to the next bin with
/// n >= 1, then draw the surplus, which is again thermal.
void generate_thermal(std::vector<Event>& events, std::uint64_t bins,
                      std::uint32_t source, double mu, Rng& rng) {
  if (mu <= 0.0) return;
  const double occupancy = mu / (1.0 + mu);
  std::uint64_t bin = rng.geometric_gap(occupancy);
  while (bin < bins) {
    events.push_back({bin, source, 1u + rng.thermal(mu)});
    const std::uint64_t gap = rng.geometric_gap(occupancy);
    if (gap >= bins - bin - 1) break;
    bin += gap + 1;
  }
}

void generate_bernoulli(std::vector<Event>& events, std::uint64_t bins,
                        std::uint32_t source, double p, Rng& rng) {
  if (p <= 0.0) return;
  std::uint64_t bin = rng.geometric_gap(p);
  while (bin < bins) {
    events.push_back({bin, source, 1u});
    const std::uint64_t gap = rng.geometric_gap(p);
    if (gap >= bins - bin - 1) break;
    bin += gap + 1;
  }
}

struct BatchContext {
  const EngineConfig* config;
  std::vector<std::int64_t> offsets;
  int histogram_span;  // HBT delay half-width
};

/// Click lists of one batch (bin indices local to the batch).
struct BatchClicks {
  std::vector<std::uint64_t> herald;
  std::vector<std::uint64_t> signal;  // direct
  std::vector<std::uint64_t> a, b, herald_and_a;  // HBT
};

std::uint64_t count_pairs_at_offset(const std::vector<std::uint64_t>& left,
                                    const std::vector<std::uint64_t>& right,
                                    std::int64_t offset) {
  std::uint64_t count = 0;
  std::size_t j = 0;
  for (const std::uint64_t t : left) {
    const std::int64_t want = static_cast<std::int64_t>(t) + offset;
    if (want < 0) continue;
    const std::uint64_t target = static_cast<std::uint64_t>(want);
    while (j < right.size() && right[j] < target) ++j;
    if (j < right.size() && right[j] == target) ++count;
  }
  return count;
}

Tallies process_batch(const BatchContext& ctx, std::uint64_t batch_index,
                      std::uint64_t batch_bins) {
  const model::SystemModel& m = ctx.config->model;
  const std::uint64_t batch_seed = derive_seed(ctx.config->seed, batch_index);

  std::vector<Event> events;
  for (std::uint32_t mode = 0; mode < 3; ++mode) {
    Rng rng(derive_seed(batch_seed, kPairMode0 + mode));
    generate_thermal(events, batch_bins, kPairMode0 + mode, m.mu[mode], rng);
  }
  if (m.background_ratio > 0.0) {
    for (std::uint32_t mode = 0; mode < 3; ++mode) {
      Rng rng(derive_seed(batch_seed, kBackground0 + mode));
      generate_thermal(events, batch_bins, kBackground0 + mode,
                       m.background_ratio * m.mu[mode], rng);
    }
  }
  for (std::uint32_t mode = 0; mode < 3; ++mode) {
    Rng rng(derive_seed(batch_seed, kDarkHerald0 + mode));
    generate_bernoulli(events, batch_bins, kDarkHerald0 + mode,
                       m.dark_prob_herald, rng);
  }
  {
    Rng rng(derive_seed(batch_seed, kDarkSignalA));
    generate_bernoulli(events, batch_bins, kDarkSignalA, m.dark_prob_signal, rng);
    if (m.hbt) {
      Rng rng_b(derive_seed(batch_seed, kDarkSignalB));
      generate_bernoulli(events, batch_bins, kDarkSignalB, m.dark_prob_signal,
                         rng_b);
    }
  }
  std::sort(events.begin(), events.end());

  Rng rng(derive_seed(batch_seed, kProcessStream));
  Tallies t;
  t.bins = batch_bins;
  const int span = ctx.histogram_span;
  if (m.hbt) {
    t.c_abh.assign(2 * span + 1, 0);
    t.c_ah.assign(2 * span + 1, 0);
    t.c_bh.assign(2 * span + 1, 0);
  }

  BatchClicks clicks;
  std::size_t i = 0;
  while (i < events.size()) {
    const std::uint64_t bin = events[i].bin;
    std::uint32_t pairs[3] = {0, 0, 0};
    std::uint32_t background[3] = {0, 0, 0};
    bool dark_herald[3] = {false, false, false};
    bool dark_a = false, dark_b = false;
    for (; i < events.size() && events[i].bin == bin; ++i) {
      const Event& e = events[i];
      if (e.source <= kPairMode2)
        pairs[e.source - kPairMode0] = e.count;
      else if (e.source <= kBackground2)
        background[e.source - kBackground0] = e.count;
      else if (e.source <= kDarkHerald2)
        dark_herald[e.source - kDarkHerald0] = true;
      else if (e.source == kDarkSignalA)
        dark_a = true;
      else
        dark_b = true;
    }

    // Heralding detectors: threshold click per channel.
    bool herald_click[3];
    bool herald_any = false;
    for (std::size_t mode = 0; mode < 3; ++mode) {
      bool click = dark_herald[mode];
      if (!click && pairs[mode] > 0) {
        const double eta = m.herald_eta[mode];
        const double p = pairs[mode] == 1
                             ? eta
                             : 1.0 - std::pow(1.0 - eta, pairs[mode]);
        click = rng.bernoulli(p);
      }
      herald_click[mode] = click;
      if (click) {
        t.herald_per_mode[mode] += 1;
        if (m.herald_select[mode]) herald_any = true;
      }
    }

    // Feed-forward: a side-channel click fires the ramp; the ramp is common
    // mode, displacing every photon in the bin by one spacing when it lands.
    bool ramp_ok[3] = {false, false, false};
    if (m.multiplexing) {
      for (std::size_t mode = 0; mode < 3; mode += 2) {
        if (!herald_click[mode]) continue;
        t.shifts_attempted += 1;
        // shift_success = efficiency x survival; one Bernoulli per trigger.
        if (rng.bernoulli(m.shift_success)) {
          t.shifts_applied += 1;
          ramp_ok[mode] = true;
        }
      }
    }
    const int net =
        model::SystemModel::net_displacement(ramp_ok[0], ramp_ok[2]);

    if (herald_any) {
      t.herald_singles += 1;
      clicks.herald.push_back(bin);
    }

    if (!m.hbt) {
      // Single output detector: combine the no-click probabilities of every
      // photon group present in the bin.
      double no_click = 1.0;
      for (int mode = 0; mode < 3; ++mode) {
        if (pairs[mode] > 0)
          no_click *= std::pow(1.0 - m.signal_q(mode + net), pairs[mode]);
        if (background[mode] > 0)
          no_click *=
              std::pow(1.0 - m.background_q(mode + net), background[mode]);
      }
      const bool signal_click =
          dark_a || (no_click < 1.0 && rng.bernoulli(1.0 - no_click));
      if (signal_click) {
        t.signal_singles += 1;
        clicks.signal.push_back(bin);
        if (herald_any) t.coincidences += 1;
        for (std::size_t mode = 0; mode < 3; ++mode)
          if (herald_click[mode]) t.coincidences_per_mode[mode] += 1;
      }
    } else {
      // Balanced splitter: route and detect photon by photon.
      bool click_a = dark_a, click_b = dark_b;
      auto route_group = [&](std::uint32_t n, double qa, double qb) {
        for (std::uint32_t k = 0; k < n; ++k) {
          const double u = rng.uniform();
          if (u <= qa)
            click_a = true;
          else if (u <= qa + qb)
            click_b = true;
        }
      };
      for (int mode = 0; mode < 3; ++mode) {
        if (pairs[mode] > 0)
          route_group(pairs[mode], m.hbt_qa(mode + net), m.hbt_qb(mode + net));
        if (background[mode] > 0)
          route_group(background[mode], m.background_qa(mode + net),
                      m.background_qb(mode + net));
      }
      if (click_a) {
        t.a_singles += 1;
        clicks.a.push_back(bin);
      }
      if (click_b) {
        t.b_singles += 1;
        clicks.b.push_back(bin);
      }
      if (herald_any && click_a) clicks.herald_and_a.push_back(bin);
    }
  }

  // Cross-bin tallies from the batch click lists. Pairs spanning a batch
  // boundary are dropped; the bias is offsets/batch_bins and cancels between
  // numerator and normalization of every ratio built from them.
  if (!m.hbt) {
    for (const std::int64_t offset : ctx.offsets)
      t.accidentals += count_pairs_at_offset(clicks.herald, clicks.signal, offset);
  } else {
    for (int tau = -span; tau <= span; ++tau) {
      const std::size_t idx = static_cast<std::size_t>(tau + span);
      t.c_abh[idx] = count_pairs_at_offset(clicks.herald_and_a, clicks.b, tau);
      t.c_ah[idx] = count_pairs_at_offset(clicks.herald, clicks.a, tau);
      t.c_bh[idx] = count_pairs_at_offset(clicks.herald, clicks.b, tau);
    }
  }
  return t;
}

}  // namespace

void Tallies::merge(const Tallies& other) {
  bins += other.bins;
  herald_singles += other.herald_singles;
  for (std::size_t i = 0; i < 3; ++i) {
    herald_per_mode[i] += other.herald_per_mode[i];
    coincidences_per_mode[i] += other.coincidences_per_mode[i];
  }
  signal_singles += other.signal_singles;
  coincidences += other.coincidences;
  accidentals += other.accidentals;
  a_singles += other.a_singles;
  b_singles += other.b_singles;
  auto merge_hist = [](std::vector<std::uint64_t>& into,
                       const std::vector<std::uint64_t>& from) {
    if (into.empty()) {
      into = from;
      return;
    }
    for (std::size_t i = 0; i < from.size(); ++i) into[i] += from[i];
  };
  merge_hist(c_abh, other.c_abh);
  merge_hist(c_ah, other.c_ah);
  merge_hist(c_bh, other.c_bh);
  shifts_attempted += other.shifts_attempted;
  shifts_applied += other.shifts_applied;
}

EngineResult run(const EngineConfig& config) {
  if (config.bins == 0) throw std::invalid_argument("engine: bins must be > 0");
  if (config.batch_bins == 0)
    throw std::invalid_argument("engine: batch size must be > 0");

  EngineConfig local = config;
  local.model.finalize();

  BatchContext ctx;
  ctx.config = &local;
  ctx.histogram_span = config.g2_max_delay;
  ctx.offsets = config.accidental_offsets;
  if (ctx.offsets.empty() && !config.model.hbt) {
    // Default accidental comb: both sides, well clear of the peak.
    for (std::int64_t k = 1; k <= 16; ++k) {
      ctx.offsets.push_back(16 * k);
      ctx.offsets.push_back(-16 * k);
    }
  }
  for (const std::int64_t offset : ctx.offsets)
    if (offset == 0)
      throw std::invalid_argument("engine: accidental offset on the peak");

  const std::uint64_t batch_count =
      (config.bins + config.batch_bins - 1) / config.batch_bins;
  int threads = config.threads > 0
                    ? config.threads
                    : static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  if (static_cast<std::uint64_t>(threads) > batch_count)
    threads = static_cast<int>(batch_count);

  const auto start = std::chrono::steady_clock::now();
  std::vector<Tallies> partial(threads);
  auto worker = [&](int worker_index) {
    for (std::uint64_t batch = worker_index; batch < batch_count;
         batch += static_cast<std::uint64_t>(threads)) {
      const std::uint64_t begin = batch * config.batch_bins;
      const std::uint64_t size = std::min(config.batch_bins, config.bins - begin);
      partial[worker_index].merge(process_batch(ctx, batch, size));
    }
  };
  if (threads == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
    for (auto& th : pool) th.join();
  }

  EngineResult result;
  for (const auto& p : partial) result.tallies.merge(p);
  result.tallies.accidental_windows = ctx.offsets.size();
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  result.bins_per_second_throughput =
      result.wall_seconds > 0.0
          ? static_cast<double>(config.bins) / result.wall_seconds
          : 0.0;
  return result;
}

}  // namespace specmux::engine
