#pragma once

// The constant C_X (the largest entropy integral under constraint family X)
// and the rate I(G) = C_X - integral. C_X values come from the limit-shape
// solver, are cached once per key in memory, and optionally on disk under
// $POLYLDP_CACHE_DIR.

#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <string>

#include "polyldp/curves.hpp"
#include "polyldp/entropy.hpp"
#include "polyldp/error.hpp"
#include "polyldp/limit_shape.hpp"

namespace polyldp {

/// pi sqrt(2/3) / ln 2: entropy integral of one Vershik arc bounding area 1.
inline double vershik_quadrant_constant() {
  return std::numbers::pi * std::sqrt(2.0 / 3.0) / std::numbers::ln2;
}

struct FunctionalResult {
  double entropy_integral = 0.0;
  double constant_c = 0.0;
  double rate = 0.0;
  std::array<double, 4> by_quadrant{};
  /// C_X comes from the numerical limit-shape solver, not a closed form.
  bool constant_solver_derived = true;
};

namespace detail {

class ConstantCache {
 public:
  static ConstantCache& instance() {
    static ConstantCache cache;
    return cache;
  }

  double get(const std::string& key, double (*compute)(const ShapeConstraint&), const ShapeConstraint& c) {
    std::shared_ptr<Entry> entry;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto& slot = entries_[key];
      if (!slot) slot = std::make_shared<Entry>();
      entry = slot;
    }
    std::call_once(entry->once, [&] {
      if (auto cached = read_disk(key)) {
        entry->value = *cached;
        return;
      }
      entry->value = compute(c);
      write_disk(key, entry->value);
    });
    return entry->value;
  }

  void clear() {
    std::lock_guard<std::mutex> lock(mutex_);
    entries_.clear();
  }

 private:
  struct Entry {
    std::once_flag once;
    double value = 0.0;
  };

  static std::optional<std::filesystem::path> disk_path(const std::string& key) {
    const char* dir = std::getenv("POLYLDP_CACHE_DIR");
    if (dir == nullptr || *dir == '\0') return std::nullopt;
    std::string name = "C_";
    for (char ch : key) name += std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-' ? ch : '_';
    return std::filesystem::path(dir) / (name + ".txt");
  }

  static std::optional<double> read_disk(const std::string& key) {
    const auto path = disk_path(key);
    if (!path) return std::nullopt;
    std::ifstream in(*path);
    std::string stored_key;
    double value = 0.0;
    if (in && std::getline(in, stored_key) && stored_key == key && (in >> value)) return value;
    return std::nullopt;
  }

  static void write_disk(const std::string& key, double value) {
    const auto path = disk_path(key);
    if (!path) return;
    std::error_code ec;
    std::filesystem::create_directories(path->parent_path(), ec);
    const auto tmp = path->string() + ".tmp";
    {
      std::ofstream out(tmp);
      if (!out) fail(ErrorKind::kIo, "C_X cache: cannot write " + tmp);
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", value);
      out << key << '\n' << buf << '\n';
    }
    std::filesystem::rename(tmp, *path, ec);
    if (ec) fail(ErrorKind::kIo, "C_X cache: cannot move " + tmp + " into place");
  }

  std::mutex mutex_;
  std::map<std::string, std::shared_ptr<Entry>> entries_;
};

inline double compute_constant(const ShapeConstraint& c) { return build_limit_shape(c).params.integral; }

}  // namespace detail

/// C_X for the family; concurrent callers for one key see a single value.
inline double constant_C(const ShapeConstraint& family) {
  std::ostringstream key;
  key << family.key() << ";tol=" << kLimitShapeTolerance;
  return detail::ConstantCache::instance().get(key.str(), &detail::compute_constant, family);
}

inline void clear_constant_cache() { detail::ConstantCache::instance().clear(); }

/// Relative tolerance used when checking that a curve meets its family.
inline constexpr double kConstraintTolerance = 1e-6;

inline FunctionalResult rate(const UnimodalCurve& curve, const ShapeConstraint& family) {
  if (family.area) {
    require(std::fabs(curve.area() - *family.area) <= kConstraintTolerance * *family.area,
            ErrorKind::kPrecondition,
            "rate: curve area " + std::to_string(curve.area()) + " does not match " + std::to_string(*family.area));
  }
  if (family.perimeter) {
    require(std::fabs(curve.box_perimeter() - *family.perimeter) <= kConstraintTolerance * *family.perimeter,
            ErrorKind::kPrecondition,
            "rate: curve perimeter " + std::to_string(curve.box_perimeter()) + " does not match " +
                std::to_string(*family.perimeter));
  }
  const EntropyBreakdown e = entropy_integral(curve);
  FunctionalResult out;
  out.entropy_integral = e.total;
  out.by_quadrant = e.by_quadrant;
  out.constant_c = constant_C(family);
  out.rate = out.constant_c - e.total;
  return out;
}

}  // namespace polyldp
