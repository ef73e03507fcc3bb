#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <vector>

#include "gbelab/tridiagonal.hpp"

namespace gbelab {

inline constexpr unsigned kMaxPathLength = 16;

// Closed lattice path starting (and ending) at level 0 with steps in {-1, 0, +1}.
class ClosedPath {
 public:
  ClosedPath() = default;
  explicit ClosedPath(std::vector<std::int8_t> steps) : steps_(std::move(steps)) {
    int level = 0;
    for (auto s : steps_) {
      if (s < -1 || s > 1) throw std::invalid_argument("path steps must be -1, 0 or +1");
      level += s;
      min_level_ = std::min(min_level_, level);
      max_level_ = std::max(max_level_, level);
    }
    if (level != 0) throw std::invalid_argument("path is not closed");
  }

  // Parses "U", "F", "D" letters (up, flat, down), case-insensitive.
  static ClosedPath from_string(const std::string& text) {
    std::vector<std::int8_t> steps;
    for (char c : text) {
      switch (c) {
        case 'U': case 'u': steps.push_back(1); break;
        case 'F': case 'f': steps.push_back(0); break;
        case 'D': case 'd': steps.push_back(-1); break;
        default: throw std::invalid_argument(std::string("path letters are U, F, D; got '") + c + "'");
      }
    }
    return ClosedPath(std::move(steps));
  }

  std::string to_string() const {
    std::string out;
    for (auto s : steps_) out.push_back(s > 0 ? 'U' : (s < 0 ? 'D' : 'F'));
    return out.empty() ? std::string("-") : out;
  }

  const std::vector<std::int8_t>& steps() const { return steps_; }
  std::size_t length() const { return steps_.size(); }
  int min_level() const { return min_level_; }
  int max_level() const { return max_level_; }

  // i_0 = 0, i_1, ..., i_r = 0
  std::vector<int> levels() const {
    std::vector<int> out{0};
    for (auto s : steps_) out.push_back(out.back() + s);
    return out;
  }

  bool operator==(const ClosedPath&) const = default;

 private:
  std::vector<std::int8_t> steps_;
  int min_level_ = 0;
  int max_level_ = 0;
};

// Per-site flat-step counts (alpha) and up-step counts (gamma). The weight of
// the path is prod_i a_i^alpha_i b_i^(2 gamma_i); b_i links sites i and i + 1.
struct ExponentProfile {
  int first_site = 0;
  std::vector<unsigned> alpha;
  std::vector<unsigned> gamma;

  int last_site() const { return first_site + static_cast<int>(alpha.size()) - 1; }

  unsigned alpha_at(int site) const {
    const int k = site - first_site;
    return (k < 0 || k >= static_cast<int>(alpha.size())) ? 0u : alpha[k];
  }
  unsigned gamma_at(int site) const {
    const int k = site - first_site;
    return (k < 0 || k >= static_cast<int>(gamma.size())) ? 0u : gamma[k];
  }

  // Number of matrix factors: sum alpha + 2 sum gamma.
  unsigned weight_degree() const {
    unsigned total = 0;
    for (auto x : alpha) total += x;
    for (auto x : gamma) total += 2 * x;
    return total;
  }

  auto operator<=>(const ExponentProfile&) const = default;
};

inline ExponentProfile exponent_profile(const ClosedPath& w) {
  ExponentProfile p;
  p.first_site = w.min_level();
  const std::size_t span = static_cast<std::size_t>(w.max_level() - w.min_level()) + 1;
  p.alpha.assign(span, 0);
  p.gamma.assign(span, 0);
  int level = 0;
  for (auto s : w.steps()) {
    const auto k = static_cast<std::size_t>(level - p.first_site);
    if (s == 0) ++p.alpha[k];
    if (s == 1) ++p.gamma[k];
    level += s;
  }
  return p;
}

// Site-wise sum of two profiles (the weight of a product of two paths on the
// same matrix entries).
inline ExponentProfile combine_profiles(const ExponentProfile& x, const ExponentProfile& y) {
  if (x.alpha.empty()) return y;
  if (y.alpha.empty()) return x;
  ExponentProfile out;
  out.first_site = std::min(x.first_site, y.first_site);
  const int last = std::max(x.last_site(), y.last_site());
  const auto span = static_cast<std::size_t>(last - out.first_site + 1);
  out.alpha.assign(span, 0);
  out.gamma.assign(span, 0);
  for (int site = out.first_site; site <= last; ++site) {
    const auto k = static_cast<std::size_t>(site - out.first_site);
    out.alpha[k] = x.alpha_at(site) + y.alpha_at(site);
    out.gamma[k] = x.gamma_at(site) + y.gamma_at(site);
  }
  return out;
}

namespace detail {

inline void check_path_length(unsigned r) {
  if (r > kMaxPathLength) {
    throw std::invalid_argument("path length " + std::to_string(r) + " exceeds the cap of " +
                                std::to_string(kMaxPathLength));
  }
}

// Depth-first generation; a prefix is kept only if level 0 is still
// reachable with the remaining steps.
inline void extend_paths(unsigned r, bool nonnegative, std::vector<std::int8_t>& prefix, int level,
                         std::vector<ClosedPath>& out) {
  const auto used = static_cast<unsigned>(prefix.size());
  if (used == r) {
    out.emplace_back(prefix);
    return;
  }
  const int remaining = static_cast<int>(r - used) - 1;
  for (std::int8_t s : {std::int8_t{-1}, std::int8_t{0}, std::int8_t{1}}) {
    const int next = level + s;
    if (nonnegative && next < 0) continue;
    if (std::abs(next) > remaining) continue;
    prefix.push_back(s);
    extend_paths(r, nonnegative, prefix, next, out);
    prefix.pop_back();
  }
}

}  // namespace detail

inline std::vector<ClosedPath> enumerate_closed(unsigned r) {
  detail::check_path_length(r);
  std::vector<ClosedPath> out;
  std::vector<std::int8_t> prefix;
  detail::extend_paths(r, false, prefix, 0, out);
  return out;
}

// Closed paths that never go below level 0.
inline std::vector<ClosedPath> enumerate_motzkin(unsigned r) {
  detail::check_path_length(r);
  std::vector<ClosedPath> out;
  std::vector<std::int8_t> prefix;
  detail::extend_paths(r, true, prefix, 0, out);
  return out;
}

// Start indices j (1-based) for which j + w stays inside {1, ..., n}:
// first = 1 - i_min (k1) and last = n - i_max (n - k2).
struct AdmissibleWindow {
  long first = 1;
  long last = 0;

  bool empty() const { return first > last; }
  std::size_t count() const { return empty() ? 0 : static_cast<std::size_t>(last - first + 1); }
  bool contains(long j) const { return j >= first && j <= last; }
};

inline AdmissibleWindow admissible_window(const ClosedPath& w, std::size_t n) {
  return AdmissibleWindow{1 - w.min_level(), static_cast<long>(n) - w.max_level()};
}

// prod_l T(j + i_l, j + i_{l+1})
inline double path_weight(const ClosedPath& w, long start, const TridiagonalMatrix& t) {
  if (!admissible_window(w, t.size()).contains(start)) {
    throw std::invalid_argument("path_weight: path " + w.to_string() + " at start " +
                                std::to_string(start) + " is not admissible for n = " +
                                std::to_string(t.size()));
  }
  double out = 1.0;
  long level = start;
  for (auto s : w.steps()) {
    const long next = level + s;
    out *= t(static_cast<std::size_t>(level), static_cast<std::size_t>(next));
    level = next;
  }
  return out;
}

}  // namespace gbelab
