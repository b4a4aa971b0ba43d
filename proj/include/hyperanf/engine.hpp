#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "hyperanf/errors.hpp"
#include "hyperanf/graph.hpp"
#include "hyperanf/hll.hpp"
#include "hyperanf/parallel.hpp"

// The neighbourhood-function estimator. One HyperLogLog counter per node;
// iteration t replaces each counter with the union of itself and its
// successors' counters, so after t iterations counter v is in the state of
// a counter fed the ball B(v, t). The sum of all estimates approximates
// N(t), the number of ordered pairs within distance t.

namespace hyperanf {

enum class Termination { stabilisation, threshold };

inline const char* to_string(Termination t) {
  return t == Termination::stabilisation ? "stabilisation" : "threshold";
}

struct EngineConfig {
  unsigned bucket_bits = 7;    // m = 2^b registers per counter
  unsigned register_bits = 0;  // 0: 5 below 2^32 nodes, 6 otherwise
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::uint64_t task_size = 0;  // 0: auto, targeting thousands of tasks
  double systolic_threshold = 0.25;
  Termination termination = Termination::stabilisation;
  double eps_inc = 0.0;            // threshold mode: relative increment floor
  std::uint64_t max_iterations = 0;  // 0: auto (n + 1)
  bool spill_to_disk = false;
  // Optimisation toggles; turning them off changes time, never output bits.
  bool track_modified = true;
  bool use_systolic = true;
};

struct IterationReport {
  double sum = 0.0;
  std::uint64_t modified = 0;
};

struct NfEstimate {
  std::uint64_t n = 0;
  unsigned m = 0;
  std::uint64_t seed = 0;
  Termination termination = Termination::stabilisation;
  std::vector<double> values;          // clamped non-decreasing, values[0] = N(0)
  std::vector<std::uint64_t> modified;  // modified[0] = n (all counters seeded)
  double wall_seconds = 0.0;            // not serialised
  bool exact = false;

  std::uint64_t iterations() const noexcept {
    return values.empty() ? 0 : values.size() - 1;
  }
};

class NfEngine {
 public:
  NfEngine(const Graph& graph, EngineConfig cfg) : graph_(&graph), cfg_(cfg) {
    if (cfg_.systolic_threshold <= 0.0 || cfg_.systolic_threshold > 1.0)
      throw std::invalid_argument("systolic threshold must be in (0, 1]");
    if (cfg_.termination == Termination::threshold && cfg_.eps_inc <= 0.0)
      throw std::invalid_argument("threshold termination needs eps_inc > 0");
    if (cfg_.threads == 0) cfg_.threads = 1;
    const std::uint64_t n = graph.num_nodes();
    if (cfg_.task_size == 0) cfg_.task_size = std::max<std::uint64_t>(1, n / 4096);
    if (cfg_.max_iterations == 0) cfg_.max_iterations = n + 1;
    unsigned r = cfg_.register_bits;
    if (r == 0) r = n < (1ULL << 32) ? 5 : 6;
    params_ = SketchParams::make(cfg_.bucket_bits, cfg_.seed, r);
    kernel_ = PackedMax(params_.register_bits, params_.registers);

    current_ = CounterArray(params_, n);
    for (std::uint64_t v = 0; v < n; ++v) current_.add(v, v);
    modified_.assign(n, 1);
    const std::uint64_t blocks = (n + kBlock - 1) / kBlock;
    block_sums_.assign(blocks, 0.0);
    block_dirty_.assign(blocks, 1);
  }

  const SketchParams& params() const noexcept { return params_; }
  const EngineConfig& config() const noexcept { return cfg_; }
  const CounterArray& counters() const noexcept { return current_; }
  std::uint64_t iteration() const noexcept { return t_; }
  bool systolic_active() const noexcept { return systolic_; }

  // Sum of all counter estimates, reusing cached per-block partial sums for
  // blocks whose counters did not change.
  double sum_estimates() {
    const std::uint64_t blocks = block_sums_.size();
    parallel_chunks(blocks, cfg_.threads, 16,
                    [&](std::uint64_t lo, std::uint64_t hi, unsigned) {
      for (std::uint64_t b = lo; b < hi; ++b) {
        if (!block_dirty_[b]) continue;
        const std::uint64_t first = b * kBlock;
        const std::uint64_t last =
            std::min<std::uint64_t>(first + kBlock, current_.size());
        double sum = 0.0;
        for (std::uint64_t i = first; i < last; ++i) sum += current_.estimate(i);
        block_sums_[b] = sum;
      }
    });
    std::fill(block_dirty_.begin(), block_dirty_.end(), 0);
    double total = 0.0;
    for (double s : block_sums_) total += s;
    return total;
  }

  // One full iteration: unions over successor lists into the next buffer
  // (or through a spill file), modified tracking, systolic bookkeeping.
  IterationReport step() {
    const std::uint64_t n = graph_->num_nodes();
    if (n == 0) return {0.0, 0};
    const unsigned words = params_.words_per_counter();
    if (!cfg_.spill_to_disk && next_.size() != n) next_ = CounterArray(params_, n);
    if (next_modified_.size() != n) next_modified_.assign(n, 0);

    struct Worker {
      std::vector<std::uint64_t> scratch;   // PackedMax temporary
      std::vector<std::uint64_t> counter;   // spill mode: updated counter
      std::vector<std::uint64_t> pending;   // spill mode: buffered records
    };
    std::vector<Worker> workers(cfg_.threads);
    for (auto& w : workers) {
      w.scratch.resize(words);
      if (cfg_.spill_to_disk) {
        w.counter.resize(words);
        w.pending.reserve(kSpillFlush * (words + 1));
      }
    }

    std::FILE* spill = nullptr;
    std::mutex spill_mutex;
    if (cfg_.spill_to_disk) {
      spill = std::tmpfile();
      if (!spill) throw IoError("cannot create spill file");
    }
    auto flush_pending = [&](Worker& w) {
      if (w.pending.empty()) return;
      std::lock_guard<std::mutex> lock(spill_mutex);
      std::fwrite(w.pending.data(), sizeof(std::uint64_t), w.pending.size(),
                  spill);
      w.pending.clear();
    };

    parallel_chunks(n, cfg_.threads, cfg_.task_size,
                    [&](std::uint64_t lo, std::uint64_t hi, unsigned id) {
      Worker& w = workers[id];
      for (std::uint64_t v = lo; v < hi; ++v) {
        const bool compute = !systolic_ || signalled_[v];
        std::uint64_t* dst;
        if (cfg_.spill_to_disk) {
          dst = w.counter.data();
        } else {
          dst = next_.counter(v).data();
        }
        std::memcpy(dst, current_.counter(v).data(),
                    words * sizeof(std::uint64_t));
        bool changed = false;
        if (compute) {
          for (std::uint32_t succ : graph_->successors(v)) {
            if (cfg_.track_modified && !modified_[succ]) continue;
            changed |= kernel_.max_into(dst, current_.counter(succ).data(),
                                        w.scratch.data());
          }
        }
        next_modified_[v] = changed ? 1 : 0;
        if (cfg_.spill_to_disk && changed) {
          w.pending.push_back(v);
          w.pending.insert(w.pending.end(), dst, dst + words);
          if (w.pending.size() >= kSpillFlush * (words + 1)) flush_pending(w);
        }
      }
    });

    if (cfg_.spill_to_disk) {
      for (auto& w : workers) flush_pending(w);
      std::rewind(spill);
      std::vector<std::uint64_t> record(words + 1);
      while (std::fread(record.data(), sizeof(std::uint64_t), record.size(),
                        spill) == record.size()) {
        std::memcpy(current_.counter(record[0]).data(), record.data() + 1,
                    words * sizeof(std::uint64_t));
      }
      std::fclose(spill);
    } else {
      std::swap(current_, next_);
    }
    modified_.swap(next_modified_);

    std::uint64_t count = 0;
    for (std::uint64_t v = 0; v < n; ++v) {
      if (modified_[v]) {
        ++count;
        block_dirty_[v / kBlock] = 1;
      }
    }

    if (cfg_.use_systolic) {
      if (!systolic_ && count > 0 &&
          static_cast<double>(count) < cfg_.systolic_threshold * static_cast<double>(n)) {
        systolic_ = true;
        if (!transpose_) transpose_.emplace(transpose(*graph_));
        if (signalled_.size() != n) signalled_.assign(n, 0);
      }
      if (systolic_) {
        std::fill(signalled_.begin(), signalled_.end(), 0);
        for (std::uint64_t v = 0; v < n; ++v)
          if (modified_[v])
            for (std::uint32_t pred : transpose_->successors(v))
              signalled_[pred] = 1;
      }
    }

    ++t_;
    return {sum_estimates(), count};
  }

  // Iterates until no counter changes (or, in threshold mode, until the
  // relative increment drops below eps_inc). Reported values are clamped to
  // be non-decreasing; the stabilising no-change iteration is not recorded.
  NfEstimate run_to_stabilisation() {
    const auto start = std::chrono::steady_clock::now();
    NfEstimate est;
    est.n = graph_->num_nodes();
    est.m = params_.registers;
    est.seed = params_.seed;
    est.termination = cfg_.termination;
    if (est.n == 0) return est;

    if (cfg_.termination == Termination::threshold) {
      std::cerr
          << "warning: threshold termination can stop before the counters "
             "stabilise and truncate the neighbourhood function; on graphs "
             "where large components hang off a narrow path (two cliques "
             "joined by a one-way path) the resulting cdf and effective "
             "diameter are arbitrarily wrong. Use stabilisation for "
             "trustworthy results.\n";
    }

    est.values.push_back(sum_estimates());
    est.modified.push_back(est.n);
    for (;;) {
      if (est.iterations() >= cfg_.max_iterations)
        throw GuardError("engine: iteration cap " +
                         std::to_string(cfg_.max_iterations) +
                         " exceeded; pathological input or bug");
      const IterationReport rep = step();
      if (rep.modified == 0) break;
      const double prev = est.values.back();
      est.values.push_back(rep.sum);
      est.modified.push_back(rep.modified);
      if (cfg_.termination == Termination::threshold && prev > 0.0) {
        const double rel = (rep.sum - prev) / prev;
        if (rel < cfg_.eps_inc) break;
      }
    }
    for (std::size_t t = 1; t < est.values.size(); ++t)
      est.values[t] = std::max(est.values[t], est.values[t - 1]);
    est.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return est;
  }

 private:
  static constexpr std::uint64_t kBlock = 64;       // counters per cached sum
  static constexpr std::size_t kSpillFlush = 1024;  // records per flush

  const Graph* graph_;
  EngineConfig cfg_;
  SketchParams params_;
  PackedMax kernel_;
  CounterArray current_, next_;
  std::optional<Graph> transpose_;
  std::vector<std::uint8_t> modified_, next_modified_, signalled_;
  std::vector<double> block_sums_;
  std::vector<std::uint8_t> block_dirty_;
  std::uint64_t t_ = 0;
  bool systolic_ = false;
};

// Convenience wrapper: seed counters, run, return the estimate.
inline NfEstimate estimate_nf(const Graph& g, const EngineConfig& cfg) {
  NfEngine engine(g, cfg);
  return engine.run_to_stabilisation();
}

}  // namespace hyperanf
