#pragma once

// Column-by-column transfer DP over convex polyominoes. A polyomino is a
// sequence of column intervals [b, t]; consecutive intervals overlap, the
// tops rise then fall and the bottoms fall then rise. Two phase bits record
// whether the top has started falling and the bottom has started rising,
// which together with overlap characterizes HV-convexity exactly.

#include <algorithm>
#include <array>
#include <atomic>
#include <bit>
#include <exception>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <thread>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "polyldp/combinatorics.hpp"
#include "polyldp/error.hpp"

namespace polyldp {

// ---------------------------------------------------------------------------
// Count types.

/// Thrown by CheckedCount on overflow; callers retry with BigCount.
struct CountOverflow {};

/// 128-bit signed counter that refuses to wrap.
struct CheckedCount {
  __int128 v = 0;

  CheckedCount() = default;
  CheckedCount(long long x) : v(x) {}  // NOLINT(google-explicit-constructor)

  CheckedCount& operator+=(const CheckedCount& o) {
    if (__builtin_add_overflow(v, o.v, &v)) throw CountOverflow{};
    return *this;
  }
  friend CheckedCount operator+(CheckedCount a, const CheckedCount& b) { return a += b; }
  friend bool operator==(const CheckedCount&, const CheckedCount&) = default;
  bool is_zero() const { return v == 0; }

  BigCount big() const {
    BigCount hi = static_cast<std::int64_t>(v >> 64);
    BigCount lo = static_cast<std::uint64_t>(v);
    return (hi << 64) + lo;
  }
};

inline BigCount to_big(const CheckedCount& c) { return c.big(); }
inline BigCount to_big(const BigCount& c) { return c; }
inline bool is_zero(const CheckedCount& c) { return c.is_zero(); }
inline bool is_zero(const BigCount& c) { return c.is_zero(); }

// ---------------------------------------------------------------------------
// Open-addressing hash map from packed states to counts.

template <class V>
class FlatStateMap {
 public:
  static constexpr std::uint64_t kEmpty = ~std::uint64_t{0};

  explicit FlatStateMap(std::size_t expected = 16) { rehash(capacity_for(expected)); }

  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }

  void add(std::uint64_t key, const V& value) {
    if (2 * (size_ + 1) > keys_.size()) rehash(keys_.size() * 2);
    std::size_t i = slot(key);
    while (keys_[i] != kEmpty && keys_[i] != key) i = (i + 1) & mask_;
    if (keys_[i] == kEmpty) {
      keys_[i] = key;
      vals_[i] = value;
      ++size_;
    } else {
      vals_[i] += value;
    }
  }

  const V* find(std::uint64_t key) const {
    std::size_t i = slot(key);
    while (keys_[i] != kEmpty) {
      if (keys_[i] == key) return &vals_[i];
      i = (i + 1) & mask_;
    }
    return nullptr;
  }

  template <class Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < keys_.size(); ++i) {
      if (keys_[i] != kEmpty) fn(keys_[i], vals_[i]);
    }
  }

  /// Entries as a vector, in slot order.
  std::vector<std::pair<std::uint64_t, V>> entries() const {
    std::vector<std::pair<std::uint64_t, V>> out;
    out.reserve(size_);
    for_each([&](std::uint64_t k, const V& v) { out.emplace_back(k, v); });
    return out;
  }

 private:
  static std::size_t capacity_for(std::size_t n) { return std::bit_ceil(std::max<std::size_t>(16, 2 * n)); }

  std::size_t slot(std::uint64_t key) const {
    // splitmix64 finalizer
    key ^= key >> 30;
    key *= 0xbf58476d1ce4e5b9ULL;
    key ^= key >> 27;
    key *= 0x94d049bb133111ebULL;
    key ^= key >> 31;
    return static_cast<std::size_t>(key) & mask_;
  }

  void rehash(std::size_t capacity) {
    std::vector<std::uint64_t> old_keys = std::move(keys_);
    std::vector<V> old_vals = std::move(vals_);
    keys_.assign(capacity, kEmpty);
    vals_.assign(capacity, V{});
    mask_ = capacity - 1;
    size_ = 0;
    for (std::size_t i = 0; i < old_keys.size(); ++i) {
      if (old_keys[i] == kEmpty) continue;
      std::size_t j = slot(old_keys[i]);
      while (keys_[j] != kEmpty) j = (j + 1) & mask_;
      keys_[j] = old_keys[i];
      vals_[j] = std::move(old_vals[i]);
      ++size_;
    }
  }

  std::vector<std::uint64_t> keys_;
  std::vector<V> vals_;
  std::size_t mask_ = 0;
  std::size_t size_ = 0;
};

// ---------------------------------------------------------------------------
// State encoding.

enum PhaseBits : int { kTopFalling = 1, kBottomRising = 2 };

struct ProfileState {
  int b = 0;
  int t = 0;
  int phase = 0;
  int area = 0;
  int perimeter = 0;
  int units = 0;

  friend bool operator==(const ProfileState&, const ProfileState&) = default;
};

/// Bit layout sized to the run; fields that are not tracked take no bits.
class StateLayout {
 public:
  StateLayout() = default;
  StateLayout(int rows, int max_area, int max_perimeter, int max_units) {
    row_bits_ = bits_for(rows - 1);
    area_bits_ = max_area >= 0 ? bits_for(max_area) : 0;
    perim_bits_ = max_perimeter >= 0 ? bits_for(max_perimeter) : 0;
    unit_bits_ = max_units >= 0 ? bits_for(max_units) : 0;
    const int total = 2 * row_bits_ + 2 + area_bits_ + perim_bits_ + unit_bits_;
    if (total > 63) {
      fail(ErrorKind::kOverflow, "column DP: state needs " + std::to_string(total) +
                                     " bits (rows " + std::to_string(rows) + ", area " +
                                     std::to_string(max_area) + ", perimeter " +
                                     std::to_string(max_perimeter) + ", units " +
                                     std::to_string(max_units) + "); limit is 63");
    }
    sh_t_ = row_bits_;
    sh_phase_ = sh_t_ + row_bits_;
    sh_area_ = sh_phase_ + 2;
    sh_perim_ = sh_area_ + area_bits_;
    sh_units_ = sh_perim_ + perim_bits_;
  }

  std::uint64_t pack(const ProfileState& s) const {
    return static_cast<std::uint64_t>(s.b) | static_cast<std::uint64_t>(s.t) << sh_t_ |
           static_cast<std::uint64_t>(s.phase) << sh_phase_ |
           static_cast<std::uint64_t>(s.area) << sh_area_ |
           static_cast<std::uint64_t>(s.perimeter) << sh_perim_ |
           static_cast<std::uint64_t>(s.units) << sh_units_;
  }

  ProfileState unpack(std::uint64_t k) const {
    ProfileState s;
    s.b = static_cast<int>(k & mask(row_bits_));
    s.t = static_cast<int>(k >> sh_t_ & mask(row_bits_));
    s.phase = static_cast<int>(k >> sh_phase_ & 3u);
    s.area = static_cast<int>(k >> sh_area_ & mask(area_bits_));
    s.perimeter = static_cast<int>(k >> sh_perim_ & mask(perim_bits_));
    s.units = static_cast<int>(k >> sh_units_ & mask(unit_bits_));
    return s;
  }

 private:
  static int bits_for(int max_value) { return max_value <= 0 ? 1 : std::bit_width(static_cast<unsigned>(max_value)); }
  static std::uint64_t mask(int bits) { return bits == 0 ? 0 : (std::uint64_t{1} << bits) - 1; }

  int row_bits_ = 1, area_bits_ = 0, perim_bits_ = 0, unit_bits_ = 0;
  int sh_t_ = 0, sh_phase_ = 0, sh_area_ = 0, sh_perim_ = 0, sh_units_ = 0;
};

/// Applies the convexity rules for appending column [b2, t2] after the
/// column in `s`. Returns false when the result would not be convex.
/// Area and perimeter are updated; units are left to the caller.
inline bool profile_step(const ProfileState& s, int b2, int t2, ProfileState& out) {
  if (b2 > s.t || t2 < s.b) return false;  // columns must share a row
  int phase = s.phase;
  if (t2 > s.t) {
    if (phase & kTopFalling) return false;
  } else if (t2 < s.t) {
    phase |= kTopFalling;
  }
  if (b2 < s.b) {
    if (phase & kBottomRising) return false;
  } else if (b2 > s.b) {
    phase |= kBottomRising;
  }
  out.b = b2;
  out.t = t2;
  out.phase = phase;
  out.area = s.area + (t2 - b2 + 1);
  out.perimeter = s.perimeter + 2 + std::abs(t2 - s.t) + std::abs(b2 - s.b);
  out.units = s.units;
  return true;
}

/// State for a polyomino whose first column is [b, t].
inline ProfileState profile_start(int b, int t) {
  return {b, t, 0, t - b + 1, 2 + (t - b + 1), 0};
}

// ---------------------------------------------------------------------------
// Tube costs.

/// Per-column costs, in integer units, of the symmetric difference between
/// a polyomino column and the region's slab. A run counts polyominoes whose
/// total units stay within `budget`.
struct TubeCosts {
  int budget = 0;
  /// cost[k][b * rows + t] for b <= t; values are capped at budget + 1.
  std::vector<std::vector<int>> pair_cost;
  /// Units charged for column k when the polyomino leaves it empty.
  std::vector<int> empty_cost;
  /// Region area per column, in cells.
  std::vector<double> region_cells;
  /// Units per cell of area mismatch, and whether costs were rounded down.
  double units_per_cell = 0.0;
  bool floor_mode = true;
};

// ---------------------------------------------------------------------------
// The engine.

struct ProfileDpSpec {
  int rows = 1;
  int columns = 1;
  /// Translation mode starts every polyomino at column 0 with its bottom on
  /// anchor_row; otherwise polyominoes may start at any column and row.
  bool translation = true;
  int anchor_row = 0;
  int max_area = -1;  // -1: area not tracked
  int target_area = -1;
  int max_perimeter = -1;  // -1: perimeter not tracked
  int target_perimeter = -1;
  const TubeCosts* tube = nullptr;
  int workers = 1;
  bool keep_layers = false;
};

template <class Count>
struct ProfileDpResult {
  /// Finished polyominoes keyed by (area, perimeter); untracked fields are -1.
  std::map<std::pair<int, int>, Count> finished;
  /// Layer k holds the states whose last column is window column k.
  std::vector<FlatStateMap<Count>> layers;
  std::size_t peak_states = 0;
  std::size_t transitions = 0;
};

template <class Count>
class ProfileDp {
 public:
  explicit ProfileDp(ProfileDpSpec spec) : spec_(std::move(spec)) {
    require(spec_.rows >= 1 && spec_.rows <= 4096, ErrorKind::kPrecondition, "column DP: bad row count");
    require(spec_.columns >= 1, ErrorKind::kPrecondition, "column DP: bad column count");
    require(spec_.workers >= 1, ErrorKind::kPrecondition, "column DP: workers must be positive");
    const int units = spec_.tube ? spec_.tube->budget : -1;
    layout_ = StateLayout(spec_.rows, spec_.max_area, spec_.max_perimeter, units);
    if (spec_.tube) prepare_tube();
  }

  const StateLayout& layout() const { return layout_; }
  const ProfileDpSpec& spec() const { return spec_; }

  ProfileDpResult<Count> run() const {
    ProfileDpResult<Count> result;
    FlatStateMap<Count> current;
    for (int k = 0; k < spec_.columns; ++k) {
      FlatStateMap<Count> next = k == 0 ? FlatStateMap<Count>() : advance(current, k, result.transitions);
      add_starts(next, k);
      result.peak_states = std::max(result.peak_states, next.size());
      collect_finished(next, k, result.finished);
      if (spec_.keep_layers) result.layers.push_back(next);
      if (spec_.translation && next.empty()) break;
      current = std::move(next);
    }
    return result;
  }

  /// Whether `s` can end the polyomino after window column k.
  bool can_finish(const ProfileState& s, int k) const {
    if (spec_.target_area >= 0 && s.area != spec_.target_area) return false;
    if (spec_.target_perimeter >= 0 && s.perimeter + (s.t - s.b + 1) != spec_.target_perimeter) return false;
    if (spec_.max_perimeter >= 0 && s.perimeter + (s.t - s.b + 1) > spec_.max_perimeter) return false;
    if (spec_.tube && s.units + empty_suffix_[k + 1] > spec_.tube->budget) return false;
    return true;
  }

  /// Whether `s` is a legal first column at window column k.
  bool is_start(const ProfileState& s, int k) const {
    if (s.phase != 0) return false;
    const ProfileState fresh = profile_start(s.b, s.t);
    if (s.area != (spec_.max_area >= 0 ? fresh.area : 0)) return false;
    if (s.perimeter != (spec_.max_perimeter >= 0 ? fresh.perimeter : 0)) return false;
    if (spec_.translation) return k == 0 && s.b == spec_.anchor_row;
    if (spec_.tube) {
      const int u = empty_prefix_[k] + spec_.tube->pair_cost[k][s.b * spec_.rows + s.t];
      return s.units == u;
    }
    return true;
  }

  /// The state reached from `s` by appending [b2, t2] at window column k,
  /// or nullopt when the step is illegal or pruned.
  std::optional<ProfileState> successor(const ProfileState& s, int k, int b2, int t2) const {
    ProfileState out;
    if (!profile_step(s, b2, t2, out)) return std::nullopt;
    if (spec_.tube) out.units = s.units + spec_.tube->pair_cost[k][b2 * spec_.rows + t2];
    if (!admissible(out, k)) return std::nullopt;
    return normalized(out);
  }

  /// Removes untracked fields so that equal profiles share one key.
  ProfileState normalized(ProfileState s) const {
    if (spec_.max_area < 0) s.area = 0;
    if (spec_.max_perimeter < 0) s.perimeter = 0;
    if (!spec_.tube) s.units = 0;
    return s;
  }

 private:
  /// Pruning shared by starts and transitions; `s` ends at window column k.
  bool admissible(const ProfileState& s, int k) const {
    if (spec_.max_area >= 0 && s.area > spec_.max_area) return false;
    if (spec_.max_perimeter >= 0 && s.perimeter + (s.t - s.b + 1) > spec_.max_perimeter) return false;
    if (spec_.tube) {
      const TubeCosts& tube = *spec_.tube;
      if (s.units > tube.budget) return false;
      int lower = rest_lower_[k + 1];
      if (spec_.target_area >= 0) {
        const int remaining_columns = spec_.columns - (k + 1);
        double mismatch = std::fabs((spec_.target_area - s.area) - region_suffix_[k + 1]) * tube.units_per_cell;
        if (tube.floor_mode) mismatch -= remaining_columns;
        lower = std::max(lower, static_cast<int>(std::ceil(mismatch - 1e-9)));
      }
      if (s.units + lower > tube.budget) return false;
    }
    return true;
  }

  void prepare_tube() {
    const TubeCosts& tube = *spec_.tube;
    const int cols = spec_.columns;
    require(static_cast<int>(tube.pair_cost.size()) == cols &&
                static_cast<int>(tube.empty_cost.size()) == cols &&
                static_cast<int>(tube.region_cells.size()) == cols,
            ErrorKind::kPrecondition, "column DP: tube tables do not match the window");
    empty_prefix_.assign(cols + 1, 0);
    empty_suffix_.assign(cols + 2, 0);
    rest_lower_.assign(cols + 2, 0);
    region_suffix_.assign(cols + 2, 0.0);
    auto sat = [&](long long v) { return static_cast<int>(std::min<long long>(v, tube.budget + 1)); };
    for (int k = 0; k < cols; ++k) empty_prefix_[k + 1] = sat(static_cast<long long>(empty_prefix_[k]) + tube.empty_cost[k]);
    sorted_pairs_.resize(cols);
    for (int k = cols - 1; k >= 0; --k) {
      empty_suffix_[k] = sat(static_cast<long long>(empty_suffix_[k + 1]) + tube.empty_cost[k]);
      region_suffix_[k] = region_suffix_[k + 1] + tube.region_cells[k];
      int best = tube.empty_cost[k];
      auto& pairs = sorted_pairs_[k];
      for (int b = 0; b < spec_.rows; ++b) {
        for (int t = b; t < spec_.rows; ++t) {
          const int c = tube.pair_cost[k][b * spec_.rows + t];
          if (c <= tube.budget) pairs.push_back({c, b, t});
          best = std::min(best, c);
        }
      }
      std::sort(pairs.begin(), pairs.end());
      rest_lower_[k] = sat(static_cast<long long>(rest_lower_[k + 1]) + best);
    }
  }

  void add_starts(FlatStateMap<Count>& layer, int k) const {
    if (spec_.translation) {
      if (k != 0) return;
      const int b = spec_.anchor_row;
      for (int t = b; t < spec_.rows; ++t) {
        ProfileState s = profile_start(b, t);
        if (!admissible(s, k)) break;
        layer.add(layout_.pack(normalized(s)), Count(1));
      }
      return;
    }
    if (spec_.tube) {
      if (empty_prefix_[k] > spec_.tube->budget) return;
      for (const auto& [c, b, t] : sorted_pairs_[k]) {
        if (empty_prefix_[k] + c > spec_.tube->budget) break;
        ProfileState s = profile_start(b, t);
        s.units = empty_prefix_[k] + c;
        if (admissible(s, k)) layer.add(layout_.pack(normalized(s)), Count(1));
      }
      return;
    }
    for (int b = 0; b < spec_.rows; ++b) {
      for (int t = b; t < spec_.rows; ++t) {
        ProfileState s = profile_start(b, t);
        if (!admissible(s, k)) break;
        layer.add(layout_.pack(normalized(s)), Count(1));
      }
    }
  }

  void collect_finished(const FlatStateMap<Count>& layer, int k,
                        std::map<std::pair<int, int>, Count>& finished) const {
    layer.for_each([&](std::uint64_t key, const Count& count) {
      const ProfileState s = layout_.unpack(key);
      if (!can_finish(s, k)) return;
      const int area = spec_.max_area >= 0 ? s.area : -1;
      const int perimeter = spec_.max_perimeter >= 0 ? s.perimeter + (s.t - s.b + 1) : -1;
      finished[{area, perimeter}] += count;
    });
  }

  /// Expands the sources in [begin, end) into `out`; returns transitions made.
  std::size_t expand(const std::vector<std::pair<std::uint64_t, Count>>& sources, std::size_t begin,
                     std::size_t end, int k, FlatStateMap<Count>& out) const {
    std::size_t made = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const ProfileState s = layout_.unpack(sources[i].first);
      const Count& count = sources[i].second;
      auto emit = [&](ProfileState next) {
        out.add(layout_.pack(normalized(next)), count);
        ++made;
      };
      if (spec_.tube) {
        // Pairs are sorted by cost, so the budget check ends the scan.
        const int room = spec_.tube->budget - s.units - rest_lower_[k + 1];
        for (const auto& [c, b2, t2] : sorted_pairs_[k]) {
          if (c > room) break;
          ProfileState next;
          if (!profile_step(s, b2, t2, next)) continue;
          next.units = s.units + c;
          if (admissible(next, k)) emit(next);
        }
        continue;
      }
      // Without costs, enumerate the legal tops and bottoms directly.
      const int t_lo = s.b;
      const int t_hi = (s.phase & kTopFalling) ? s.t : spec_.rows - 1;
      for (int t2 = t_lo; t2 <= t_hi; ++t2) {
        const int b_lo = (s.phase & kBottomRising) ? s.b : 0;
        const int b_hi = std::min(s.t, t2);
        // Larger b2 gives a shorter column, so scan from the top down and
        // stop once the area cap is exceeded.
        for (int b2 = b_hi; b2 >= b_lo; --b2) {
          ProfileState next;
          if (!profile_step(s, b2, t2, next)) continue;
          if (spec_.max_area >= 0 && next.area > spec_.max_area) break;
          if (admissible(next, k)) emit(next);
        }
      }
    }
    return made;
  }

  FlatStateMap<Count> advance(const FlatStateMap<Count>& current, int k, std::size_t& transitions) const {
    const auto sources = current.entries();
    const int workers = std::max(1, std::min<int>(spec_.workers, static_cast<int>(sources.size() / 64) + 1));
    if (workers == 1) {
      FlatStateMap<Count> out(current.size());
      transitions += expand(sources, 0, sources.size(), k, out);
      return out;
    }
    std::vector<FlatStateMap<Count>> locals(workers);
    std::vector<std::size_t> made(workers, 0);
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    for (int w = 0; w < workers; ++w) {
      const std::size_t begin = sources.size() * w / workers;
      const std::size_t end = sources.size() * (w + 1) / workers;
      pool.emplace_back([&, w, begin, end] {
        try {
          made[w] = expand(sources, begin, end, k, locals[w]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
    FlatStateMap<Count> out(locals.front().size());
    for (int w = 0; w < workers; ++w) {
      transitions += made[w];
      locals[w].for_each([&](std::uint64_t key, const Count& c) { out.add(key, c); });
      locals[w] = FlatStateMap<Count>();
    }
    return out;
  }

  struct CostPair {
    int cost, b, t;
    bool operator<(const CostPair& o) const {
      return std::tie(cost, b, t) < std::tie(o.cost, o.b, o.t);
    }
  };

  ProfileDpSpec spec_;
  StateLayout layout_;
  std::vector<int> empty_prefix_;
  std::vector<int> empty_suffix_;
  std::vector<int> rest_lower_;
  std::vector<double> region_suffix_;
  std::vector<std::vector<CostPair>> sorted_pairs_;
};

/// Runs the DP with 128-bit counters and falls back to big integers when a
/// count would overflow. The result is the same either way.
inline ProfileDpResult<BigCount> run_profile_dp(const ProfileDpSpec& spec) {
  ProfileDpResult<BigCount> out;
  try {
    ProfileDp<CheckedCount> dp(spec);
    auto fast = dp.run();
    for (auto& [key, c] : fast.finished) out.finished[key] = c.big();
    for (auto& layer : fast.layers) {
      FlatStateMap<BigCount> big(layer.size());
      layer.for_each([&](std::uint64_t k, const CheckedCount& c) { big.add(k, c.big()); });
      out.layers.push_back(std::move(big));
    }
    out.peak_states = fast.peak_states;
    out.transitions = fast.transitions;
    return out;
  } catch (const CountOverflow&) {
  }
  ProfileDp<BigCount> dp(spec);
  return dp.run();
}

}  // namespace polyldp
