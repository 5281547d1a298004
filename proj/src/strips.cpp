#include "qbethe/strips.hpp"

#include <algorithm>

namespace qbethe {

bool precedes(const Partition& mu, const Partition& lambda) {
  const int n = lambda.length();
  const int k = mu.length();
  if (k != n && k != n - 1) return false;
  for (int j = 0; j < k; ++j) {
    if (lambda[j] < mu[j]) return false;
    if (j + 1 < n && mu[j] < lambda[j + 1]) return false;
  }
  return true;
}

namespace {

// Cartesian product of [lo_j, hi_j]; emitted in lexicographic order of the parts.
void product_ranges(const std::vector<std::pair<int, int>>& ranges, std::vector<Partition>& out) {
  for (const auto& [lo, hi] : ranges) {
    if (lo > hi) return;
  }
  std::vector<int> cur;
  for (const auto& r : ranges) cur.push_back(r.first);
  while (true) {
    out.emplace_back(cur);
    int j = static_cast<int>(ranges.size()) - 1;
    while (j >= 0 && cur[static_cast<std::size_t>(j)] == ranges[static_cast<std::size_t>(j)].second) {
      cur[static_cast<std::size_t>(j)] = ranges[static_cast<std::size_t>(j)].first;
      --j;
    }
    if (j < 0) return;
    ++cur[static_cast<std::size_t>(j)];
  }
}

std::vector<int> multiplicities(const Partition& p, int top) {
  std::vector<int> mult(static_cast<std::size_t>(top + 1), 0);
  for (int x : p.parts()) ++mult[static_cast<std::size_t>(x)];
  return mult;
}

int top_part(const Partition& a, const Partition& b) {
  int top = 0;
  if (a.length() > 0) top = std::max(top, a[0]);
  if (b.length() > 0) top = std::max(top, b[0]);
  return top;
}

}  // namespace

std::vector<Partition> strips_below(const Partition& lambda, int length) {
  const int n = lambda.length();
  if (length != n && length != n - 1) throw std::invalid_argument("strips_below: bad length");
  if (length < 0) return {};
  std::vector<std::pair<int, int>> ranges;
  for (int j = 0; j < length; ++j) {
    const int lo = j + 1 < n ? lambda[j + 1] : 0;
    ranges.emplace_back(lo, lambda[j]);
  }
  std::vector<Partition> out;
  product_ranges(ranges, out);
  return out;
}

std::vector<Partition> strips_above(const Partition& mu, int length, int m) {
  const int k = mu.length();
  if (length != k && length != k + 1) throw std::invalid_argument("strips_above: bad length");
  std::vector<std::pair<int, int>> ranges;
  for (int j = 0; j < length; ++j) {
    const int lo = j < k ? mu[j] : 0;
    const int hi = j == 0 ? m : mu[j - 1];
    ranges.emplace_back(lo, hi);
  }
  std::vector<Partition> out;
  product_ranges(ranges, out);
  return out;
}

double phi_weight(const Partition& lambda, const Partition& mu, double t) {
  const int top = top_part(lambda, mu);
  const auto ml = multiplicities(lambda, top);
  const auto mm = multiplicities(mu, top);
  double acc = 1.0;
  for (std::size_t l = 0; l < ml.size(); ++l) {
    if (ml[l] == mm[l] + 1) acc *= 1.0 - ipow(t, ml[l]);
  }
  return acc;
}

double psi_weight(const Partition& lambda, const Partition& mu, double t) {
  const int top = top_part(lambda, mu);
  const auto ml = multiplicities(lambda, top);
  const auto mm = multiplicities(mu, top);
  double acc = 1.0;
  for (std::size_t l = 0; l < ml.size(); ++l) {
    if (ml[l] == mm[l] - 1) acc *= 1.0 - ipow(t, mm[l]);
  }
  return acc;
}

std::pair<double, double> phi_psi(const Partition& lambda, const Partition& mu, double t) {
  if (!precedes(mu, lambda)) {
    throw std::invalid_argument("phi_psi: " + mu.to_string() + " does not precede " + lambda.to_string());
  }
  return {phi_weight(lambda, mu, t), psi_weight(lambda, mu, t)};
}

bool strip_related(StripRelation kind, const Partition& mu, const Partition& lambda, int m) {
  const int n = lambda.length();
  switch (kind) {
    case StripRelation::precede:
      return precedes(mu, lambda);
    case StripRelation::le: {
      if (mu.length() != n - 1) return false;
      for (int len : {n, n - 1}) {
        for (const Partition& nu : strips_below(lambda, len)) {
          if (precedes(mu, nu)) return true;
        }
      }
      return false;
    }
    case StripRelation::sim_minus: {
      if (mu.length() != n) return false;
      for (int len : {n, n - 1}) {
        if (len < 0) continue;
        for (const Partition& nu : strips_below(lambda, len)) {
          if (precedes(nu, mu)) return true;
        }
      }
      return false;
    }
    case StripRelation::sim_plus: {
      if (mu.length() != n) return false;
      for (int len : {n, n + 1}) {
        for (const Partition& nu : strips_above(lambda, len, m)) {
          if (precedes(mu, nu)) return true;
        }
      }
      return false;
    }
  }
  return false;
}

}  // namespace qbethe
