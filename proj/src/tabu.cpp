#include "commex/tabu.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <thread>

#include "commex/error.hpp"

namespace commex {

std::size_t TabuConfig::tenure_for(std::size_t n) const {
  return tenure ? tenure : std::max<std::size_t>(5, n / 50);
}

std::size_t TabuConfig::iterations_for(std::size_t n) const {
  return max_iters ? max_iters : 50 * n;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

StartPoint random_start(std::size_t n, std::size_t min_side, std::uint64_t seed) {
  if (n < 2 * min_side) throw InfeasibleError("graph too small for the minimum side size");
  std::mt19937_64 rng(seed);
  StartPoint sp{TwoWayLabeling(n), std::vector<NodeId>(n)};
  for (;;) {
    std::size_t inside = 0;
    for (NodeId i = 0; i < n; ++i) {
      const bool in = (rng() >> 63) != 0;
      sp.init.set(i, in);
      inside += in;
    }
    if (inside >= min_side && n - inside >= min_side) break;
  }
  std::iota(sp.order.begin(), sp.order.end(), NodeId{0});
  std::shuffle(sp.order.begin(), sp.order.end(), rng);
  return sp;
}

namespace detail {
namespace {

/// Mutable state of one search run. `to_s[i]` caches sum_{j in S} A_ij so that the
/// score after any single switch is an O(1) update, and applying a switch costs the
/// node's degree.
class SearchState {
 public:
  SearchState(const Graph& g, Criterion c, const SplitReference* split, const TwoWayLabeling& s)
      : g_(g), criterion_(c), labels_(s), to_s_(g.size(), 0.0) {
    if (split) {
      ref_degrees_ = split->degrees;
      ref_total_ = split->total;
    } else {
      ref_degrees_.assign(g.degrees().begin(), g.degrees().end());
      ref_total_ = g.total_weight();
    }
    community_volume_ = std::accumulate(ref_degrees_.begin(), ref_degrees_.end(), 0.0);
    if (criterion_ == Criterion::modularity2 && ref_total_ <= 0.0) {
      throw UndefinedScoreError("modularity undefined on an edgeless graph");
    }
    for (NodeId i = 0; i < g.size(); ++i) {
      if (!labels_.in_s(i)) continue;
      ++stats_.size;
      volume_ += ref_degrees_[i];
      auto nb = g.neighbors(i);
      auto ws = g.weights(i);
      for (std::size_t t = 0; t < nb.size(); ++t) {
        to_s_[nb[t]] += ws[t];
        if (labels_.in_s(nb[t]))
          stats_.o += ws[t];
        else
          stats_.b += ws[t];
      }
    }
    score_ = score_of(stats_, volume_);
    refresh_factors();
  }

  double score() const { return score_; }
  const SubsetStats& stats() const { return stats_; }
  const TwoWayLabeling& labels() const { return labels_; }

  bool feasible(NodeId v, std::size_t min_side) const {
    const std::size_t n = g_.size();
    return labels_.in_s(v) ? stats_.size > min_side : n - stats_.size > min_side;
  }

  double score_after(NodeId v) const {
    if (criterion_ == Criterion::modularity2) {
      auto [st, vol] = stats_after(v);
      return score_of(st, vol);
    }
    // O(1) scan path: the post-switch size takes only two values, so the criterion
    // reduces to o' * fo - b' * fb with factors cached per side.
    const double in = to_s_[v];
    const double out = g_.degree(v) - in;
    if (labels_.in_s(v)) {
      return (stats_.o - 2.0 * in) * leave_o_ - (stats_.b + in - out) * leave_b_;
    }
    return (stats_.o + 2.0 * in) * enter_o_ - (stats_.b + out - in) * enter_b_;
  }

  void apply(NodeId v) {
    auto [st, vol] = stats_after(v);
    const bool entering = !labels_.in_s(v);
    stats_ = st;
    volume_ = vol;
    labels_.flip(v);
    auto nb = g_.neighbors(v);
    auto ws = g_.weights(v);
    for (std::size_t t = 0; t < nb.size(); ++t) to_s_[nb[t]] += entering ? ws[t] : -ws[t];
    score_ = score_of(stats_, volume_);
    refresh_factors();
  }

  double score_of(const SubsetStats& st, double vol) const {
    if (criterion_ != Criterion::modularity2) return criterion_score(criterion_, st, g_.size(), 0);
    // Modularity gain of splitting the community into S and the rest; on a whole
    // graph this is the two-way modularity.
    const double rest = community_volume_ - vol;
    return (-2.0 * st.b + 2.0 * vol * rest / ref_total_) / ref_total_;
  }

 private:
  void refresh_factors() {
    const double n = static_cast<double>(g_.size());
    auto factors = [&](double size, double& fo, double& fb) {
      if (size <= 0.0 || size >= n) {
        fo = fb = std::numeric_limits<double>::quiet_NaN();
      } else if (criterion_ == Criterion::original) {
        fo = 1.0 / (size * size);
        fb = 1.0 / (size * (n - size));
      } else {
        fo = (n - size) / size;
        fb = 1.0;
      }
    };
    const double size = static_cast<double>(stats_.size);
    factors(size + 1.0, enter_o_, enter_b_);
    factors(size - 1.0, leave_o_, leave_b_);
  }

  std::pair<SubsetStats, double> stats_after(NodeId v) const {
    SubsetStats st = stats_;
    const double in = to_s_[v];
    const double out = g_.degree(v) - in;
    double vol = volume_;
    if (labels_.in_s(v)) {
      st.size -= 1;
      st.o -= 2.0 * in;
      st.b += in - out;
      vol -= ref_degrees_[v];
    } else {
      st.size += 1;
      st.o += 2.0 * in;
      st.b += out - in;
      vol += ref_degrees_[v];
    }
    return {st, vol};
  }

  const Graph& g_;
  Criterion criterion_;
  TwoWayLabeling labels_;
  std::vector<double> to_s_;
  std::vector<double> ref_degrees_;
  double ref_total_ = 0.0;
  double community_volume_ = 0.0;
  SubsetStats stats_;
  double volume_ = 0.0;
  double score_ = 0.0;
  double enter_o_ = 0.0, enter_b_ = 0.0, leave_o_ = 0.0, leave_b_ = 0.0;
};

bool beats(double candidate, double incumbent) {
  return candidate > incumbent + 1e-12 * std::max(1.0, std::abs(incumbent));
}

void validate(const Graph& g, const TwoWayLabeling& init, std::span<const NodeId> order,
              const TabuConfig& cfg) {
  const std::size_t n = g.size();
  if (cfg.min_side == 0) throw DomainError("min_side must be at least 1");
  if (n < 2 * cfg.min_side) throw InfeasibleError("graph too small for the minimum side size");
  if (init.size() != n) throw DomainError("initial labeling size does not match graph");
  const std::size_t inside = init.count();
  if (inside < cfg.min_side || n - inside < cfg.min_side) {
    throw InfeasibleError("initial labeling violates the minimum side size");
  }
  if (order.size() != n) throw DomainError("node order is not a permutation");
  std::vector<unsigned char> seen(n, 0);
  for (NodeId v : order) {
    if (v >= n || seen[v]) throw DomainError("node order is not a permutation");
    seen[v] = 1;
  }
}

}  // namespace

double evaluate(const Graph& g, Criterion criterion, const SplitReference* split,
                const TwoWayLabeling& s) {
  return SearchState(g, criterion, split, s).score();
}

SearchResult tabu_run(const Graph& g, Criterion criterion, const SplitReference* split,
                      const TwoWayLabeling& init, std::span<const NodeId> order,
                      const TabuConfig& cfg) {
  validate(g, init, order, cfg);
  const std::size_t n = g.size();
  const std::size_t tenure = cfg.tenure_for(n);
  const std::size_t iterations = cfg.iterations_for(n);

  SearchState state(g, criterion, split, init);
  SearchResult result;
  result.best_labeling = init;
  result.best_score = state.score();
  if (cfg.record_trace) result.trace.reserve(iterations);
  if (cfg.record_moves) result.moves.reserve(iterations);

  // Node v is tabu while iteration <= tabu_until[v].
  std::vector<std::size_t> tabu_until(n, 0);

  for (std::size_t iter = 1; iter <= iterations; ++iter) {
    std::optional<NodeId> chosen;
    std::optional<NodeId> best_move;
    double best_move_score = -std::numeric_limits<double>::infinity();
    for (NodeId v : order) {
      if (iter <= tabu_until[v] || !state.feasible(v, cfg.min_side)) continue;
      const double after = state.score_after(v);
      if (beats(after, result.best_score)) {
        chosen = v;
        break;
      }
      if (after > best_move_score) {
        best_move_score = after;
        best_move = v;
      }
    }
    if (!chosen) chosen = best_move;
    if (!chosen) {
      // Everything feasible is tabu: release the node that has been tabu longest.
      for (NodeId v : order) {
        if (!state.feasible(v, cfg.min_side)) continue;
        if (!chosen || tabu_until[v] < tabu_until[*chosen]) chosen = v;
      }
      if (!chosen) break;  // no feasible switch exists at all
    }

    state.apply(*chosen);
    tabu_until[*chosen] = iter + tenure;
    if (beats(state.score(), result.best_score)) {
      result.best_score = state.score();
      result.best_labeling = state.labels();
    }
    if (cfg.record_trace) result.trace.push_back(result.best_score);
    if (cfg.record_moves) result.moves.push_back(*chosen);
  }

  // Report the best labeling's score recomputed from scratch, free of update drift.
  SearchState final_state(g, criterion, split, result.best_labeling);
  result.best_score = final_state.score();
  result.best_stats = final_state.stats();
  return result;
}

SearchResult multi_start(const Graph& g, Criterion criterion, const SplitReference* split,
                         std::span<const TwoWayLabeling> seeded, const TabuConfig& cfg) {
  if (cfg.restarts == 0 && seeded.empty()) throw DomainError("restarts must be at least 1");
  const std::size_t n = g.size();
  if (cfg.min_side == 0) throw DomainError("min_side must be at least 1");
  if (n < 2 * cfg.min_side) throw InfeasibleError("graph too small for the minimum side size");

  const std::size_t runs = seeded.size() + cfg.restarts;
  std::vector<SearchResult> results(runs);
  auto do_run = [&](std::size_t r) {
    if (r < seeded.size()) {
      auto sp = random_start(n, cfg.min_side, derive_seed(cfg.seed, runs + r));
      results[r] = tabu_run(g, criterion, split, seeded[r], sp.order, cfg);
    } else {
      const std::size_t index = r - seeded.size();
      auto sp = random_start(n, cfg.min_side, derive_seed(cfg.seed, index));
      results[r] = tabu_run(g, criterion, split, sp.init, sp.order, cfg);
    }
    results[r].run = r;
  };

  const std::size_t workers = std::min(std::max<std::size_t>(1, cfg.threads), runs);
  if (workers == 1) {
    for (std::size_t r = 0; r < runs; ++r) do_run(r);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t r; (r = next.fetch_add(1)) < runs;) do_run(r);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  std::size_t best = 0;
  for (std::size_t r = 1; r < runs; ++r)
    if (results[r].best_score > results[best].best_score) best = r;
  return std::move(results[best]);
}

}  // namespace detail

SearchResult tabu_maximize(const Graph& g, Criterion criterion, const TwoWayLabeling& init,
                           std::span<const NodeId> order, const TabuConfig& cfg) {
  return detail::tabu_run(g, criterion, nullptr, init, order, cfg);
}

SearchResult multi_start(const Graph& g, Criterion criterion, const TabuConfig& cfg) {
  return detail::multi_start(g, criterion, nullptr, {}, cfg);
}

}  // namespace commex
