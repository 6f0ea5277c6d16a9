#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <mutex>
#include <queue>
#include <tuple>

#include "nullcode/error.hpp"
#include "nullcode/proto.hpp"

namespace nullcode {

namespace {

constexpr double kDensityTol = 1e-12;
constexpr unsigned kMaxPartitionBits = 14;

// Violation test for a pattern hit by `count` of `total` members on |I| = k.
bool violates(std::size_t total, std::size_t count, unsigned k, double gamma) {
  return std::log2(static_cast<double>(total) / static_cast<double>(count)) < gamma * k - kDensityTol;
}

std::vector<unsigned> coords_of(std::uint32_t mask) {
  std::vector<unsigned> out;
  for (; mask; mask &= mask - 1) out.push_back(static_cast<unsigned>(std::countr_zero(mask)));
  return out;
}

std::uint32_t pow3(unsigned k) {
  std::uint32_t r = 1;
  while (k--) r *= 3;
  return r;
}

/// Ternary indices of all nonempty (I, a) over f coordinates in selection
/// order: |I| descending, then the sorted index list of I, then a, both
/// lexicographically. Digit j is 0 or 1 when coordinate j is fixed to that
/// value and 2 when it is free.
struct SelectionOrder {
  std::vector<std::uint32_t> index;
  std::vector<std::size_t> begin_of_size;  // begin_of_size[k] for k = f .. 1, plus end
};

const SelectionOrder& selection_order(unsigned f) {
  static std::mutex mu;
  static std::vector<std::unique_ptr<SelectionOrder>> cache(kMaxPartitionBits + 1);
  std::lock_guard lock(mu);
  if (cache[f]) return *cache[f];
  auto order = std::make_unique<SelectionOrder>();
  order->begin_of_size.assign(f + 2, 0);
  std::vector<std::uint32_t> p3(f + 1);
  for (unsigned j = 0; j <= f; ++j) p3[j] = pow3(j);
  const std::uint32_t all_free = p3[f] - 1;  // every digit equal to 2
  for (unsigned k = f; k >= 1; --k) {
    order->begin_of_size[k] = order->index.size();
    std::vector<unsigned> comb(k);
    for (unsigned t = 0; t < k; ++t) comb[t] = t;
    while (true) {
      std::uint32_t base = all_free;
      for (unsigned c : comb) base -= 2 * p3[c];
      for (std::uint32_t a = 0; a < (1u << k); ++a) {
        std::uint32_t idx = base;
        // The first coordinate of I is the most significant digit of a.
        for (unsigned t = 0; t < k; ++t)
          if ((a >> (k - 1 - t)) & 1) idx += p3[comb[t]];
        order->index.push_back(idx);
      }
      int t = static_cast<int>(k) - 1;
      while (t >= 0 && comb[static_cast<std::size_t>(t)] == f - k + static_cast<unsigned>(t)) --t;
      if (t < 0) break;
      ++comb[static_cast<std::size_t>(t)];
      for (unsigned u = static_cast<unsigned>(t) + 1; u < k; ++u) comb[u] = comb[u - 1] + 1;
    }
  }
  order->begin_of_size[0] = order->index.size();
  cache[f] = std::move(order);
  return *cache[f];
}

std::uint32_t compress(Input x, const std::vector<unsigned>& coords) {
  std::uint32_t out = 0;
  for (std::size_t j = 0; j < coords.size(); ++j) out |= ((x >> coords[j]) & 1u) << j;
  return out;
}

std::uint32_t bit_reverse(Input x, unsigned n_bits) {
  std::uint32_t out = 0;
  for (unsigned j = 0; j < n_bits; ++j) out |= ((x >> j) & 1u) << (n_bits - 1 - j);
  return out;
}

struct Selection {
  std::uint32_t mask = 0;
  std::uint32_t values = 0;
};

// First violating (I, a) in selection order, over the non-constant coordinates.
std::optional<Selection> find_violation(const InputSet& r, const std::vector<unsigned>& free, double gamma) {
  const auto f = static_cast<unsigned>(free.size());
  if (f == 0) return std::nullopt;
  const std::size_t total = r.size();
  if (violates(total, 1, f, gamma)) {
    // Every full pattern violates, so the choice is the lexicographically
    // smallest member.
    const auto it = std::min_element(r.begin(), r.end(), [&](Input a, Input b) {
      return bit_reverse(compress(a, free), f) < bit_reverse(compress(b, free), f);
    });
    Selection s;
    for (unsigned c : free) {
      s.mask |= 1u << c;
      s.values |= *it & (1u << c);
    }
    return s;
  }
  const std::uint32_t size = pow3(f);
  std::vector<std::uint32_t> cnt(size, 0);
  for (Input x : r) {
    std::uint32_t idx = 0, p = 1;
    for (unsigned c : free) {
      idx += ((x >> c) & 1u) * p;
      p *= 3;
    }
    ++cnt[idx];
  }
  for (std::uint32_t stride = 1; stride < size; stride *= 3)
    for (std::uint32_t hi = 0; hi < size; hi += 3 * stride)
      for (std::uint32_t lo = 0; lo < stride; ++lo) {
        const std::uint32_t b = hi + lo;
        cnt[b + 2 * stride] = cnt[b] + cnt[b + stride];
      }
  const SelectionOrder& order = selection_order(f);
  for (unsigned k = f; k >= 1; --k) {
    // Smallest count that violates at this size.
    std::size_t cutoff = static_cast<std::size_t>(
        std::max(1.0, std::floor(static_cast<double>(total) * std::exp2(-gamma * k)) - 1));
    while (cutoff <= total && !violates(total, cutoff, k, gamma)) ++cutoff;
    if (cutoff > total) continue;
    for (std::size_t e = order.begin_of_size[k]; e < order.begin_of_size[k - 1]; ++e) {
      std::uint32_t idx = order.index[e];
      if (cnt[idx] < cutoff) continue;
      Selection s;
      for (unsigned c : free) {
        const std::uint32_t digit = idx % 3;
        idx /= 3;
        if (digit == 2) continue;
        s.mask |= 1u << c;
        s.values |= digit << c;
      }
      return s;
    }
  }
  return std::nullopt;
}

bool dense_dfs(const InputSet& set, double gamma, const std::vector<unsigned>& free, std::size_t next,
               std::uint32_t mask, unsigned k, std::vector<std::uint32_t>& counts) {
  for (std::size_t j = next; j < free.size(); ++j) {
    const std::uint32_t m = mask | (1u << free[j]);
    std::uint32_t best = 0;
    for (Input x : set) best = std::max(best, ++counts[x & m]);
    for (Input x : set) counts[x & m] = 0;
    if (violates(set.size(), best, k + 1, gamma)) return false;
    // Extensions only lower the top count, so nothing below can violate once
    // even the largest extension satisfies the bound.
    const double h = std::log2(static_cast<double>(set.size()) / best);
    const auto reach = static_cast<unsigned>(k + 1 + (free.size() - j - 1));
    if (h >= gamma * reach - kDensityTol) continue;
    if (!dense_dfs(set, gamma, free, j + 1, m, k + 1, counts)) return false;
  }
  return true;
}

}  // namespace

unsigned Cube::codim() const { return static_cast<unsigned>(std::popcount(mask)); }

InputSet full_set(unsigned n_bits) {
  if (n_bits > kMaxInputBits) throw Error(Errc::InvalidArgument, "too many input bits");
  InputSet out(std::size_t{1} << n_bits);
  for (std::size_t x = 0; x < out.size(); ++x) out[x] = static_cast<Input>(x);
  return out;
}

Cube constant_coordinates(const InputSet& set, unsigned n_bits) {
  if (set.empty()) throw Error(Errc::EmptySet, "constant coordinates of an empty set");
  const std::uint32_t all = n_bits >= 32 ? ~0u : (1u << n_bits) - 1;
  std::uint32_t ones = all, zeros = all;
  for (Input x : set) {
    ones &= x;
    zeros &= ~x;
  }
  return Cube{ones | zeros, ones};
}

double min_entropy(const InputSet& set, std::uint32_t coords) {
  if (set.empty()) throw Error(Errc::EmptySet, "min-entropy of an empty set");
  std::vector<Input> proj(set.size());
  std::transform(set.begin(), set.end(), proj.begin(), [&](Input x) { return x & coords; });
  std::sort(proj.begin(), proj.end());
  std::size_t best = 0;
  for (std::size_t i = 0; i < proj.size();) {
    std::size_t j = i;
    while (j < proj.size() && proj[j] == proj[i]) ++j;
    best = std::max(best, j - i);
    i = j;
  }
  return std::log2(static_cast<double>(set.size()) / static_cast<double>(best));
}

bool is_dense(const InputSet& set, double gamma, std::uint32_t free_coords) {
  if (set.empty()) throw Error(Errc::EmptySet, "density of an empty set");
  const auto free = coords_of(free_coords);
  if (!free.empty() && free.back() >= kMaxInputBits) throw Error(Errc::InvalidArgument, "too many input bits");
  std::vector<std::uint32_t> counts(std::size_t{1} << (free.empty() ? 0 : free.back() + 1), 0);
  return dense_dfs(set, gamma, free, 0, 0, 0, counts);
}

bool is_subcube_like(const InputSet& set, const Cube& fixed, double gamma, unsigned n_bits) {
  if (set.empty()) return false;
  for (Input x : set)
    if (!fixed.contains(x)) return false;
  const std::uint32_t all = (1u << n_bits) - 1;
  return is_dense(set, gamma, all & ~fixed.mask);
}

std::vector<DrpPart> density_restoring_partition(const InputSet& set, double gamma, unsigned n_bits) {
  if (set.empty()) throw Error(Errc::EmptySet, "partition of an empty set");
  if (n_bits > kMaxPartitionBits)
    throw Error(Errc::InvalidArgument, "density-restoring partition supports at most 14 input bits");
  std::vector<DrpPart> parts;
  InputSet rest = set;
  while (!rest.empty()) {
    const Cube constant = constant_coordinates(rest, n_bits);
    const auto free = coords_of(((1u << n_bits) - 1) & ~constant.mask);
    const auto pick = find_violation(rest, free, gamma);
    if (!pick) {
      parts.push_back({std::move(rest), constant});
      break;
    }
    DrpPart part;
    InputSet remaining;
    for (Input x : rest) ((x & pick->mask) == pick->values ? part.members : remaining).push_back(x);
    part.fixed = Cube{constant.mask | pick->mask, constant.values | pick->values};
    parts.push_back(std::move(part));
    rest = std::move(remaining);
  }
  return parts;
}

double shannon_entropy(const std::vector<double>& dist) {
  double h = 0;
  for (double p : dist)
    if (p > 0) h -= p * std::log2(p);
  return h;
}

HuffmanCode huffman(const std::vector<double>& dist) {
  if (dist.empty()) throw Error(Errc::BadDistribution, "empty distribution");
  double sum = 0;
  for (double p : dist) {
    if (!(p >= 0) || !std::isfinite(p)) throw Error(Errc::BadDistribution, "negative or non-finite probability");
    sum += p;
  }
  if (std::abs(sum - 1) > 1e-9) throw Error(Errc::BadDistribution, "probabilities do not sum to 1");

  HuffmanCode code;
  code.words.assign(dist.size(), "");
  if (dist.size() == 1) return code;
  // Subtree: (weight, smallest symbol, members).
  using Entry = std::tuple<double, std::size_t, std::size_t>;
  std::vector<std::vector<std::size_t>> members(dist.size());
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    members[i] = {i};
    heap.emplace(dist[i], i, i);
  }
  while (heap.size() > 1) {
    const auto [w0, min0, id0] = heap.top();
    heap.pop();
    const auto [w1, min1, id1] = heap.top();
    heap.pop();
    for (auto s : members[id0]) code.words[s].insert(code.words[s].begin(), '0');
    for (auto s : members[id1]) code.words[s].insert(code.words[s].begin(), '1');
    members[id0].insert(members[id0].end(), members[id1].begin(), members[id1].end());
    members[id1].clear();
    heap.emplace(w0 + w1, std::min(min0, min1), id0);
  }
  return code;
}

double expected_length(const HuffmanCode& code, const std::vector<double>& dist) {
  if (code.words.size() != dist.size()) throw Error(Errc::LengthMismatch, "code and distribution sizes differ");
  double e = 0;
  for (std::size_t i = 0; i < dist.size(); ++i) e += dist[i] * static_cast<double>(code.words[i].size());
  return e;
}

}  // namespace nullcode
