// Copyright 2026 The Shardsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "shardsim/pricing.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

namespace shardsim {
namespace {

void CheckSameSize(std::size_t a, int b, const char* what) {
  if (static_cast<int>(a) != b) {
    throw ShardsimError(std::string(what) + " has length " +
                        std::to_string(a) + ", expected " + std::to_string(b));
  }
}

// Entries are >= 1/m whenever the loading sums to at most 1 - 1/m, so the
// clamp only guards against rounding.
double ClampUnit(double x) {
  assert(x >= -1e-12 && x <= 1.0 + 1e-12);
  return std::clamp(x, 0.0, 1.0);
}

SquareMatrix BalanceLikeMatrix(std::span<const double> loading,
                               double off_diagonal_scale) {
  const int m = static_cast<int>(loading.size());
  if (m < 1) throw ShardsimError("loading vector must be non-empty");
  SquareMatrix out(m);
  for (int s = 0; s < m; ++s) {
    out(s, s) = ClampUnit(1.0 - loading[s]);
    for (int t = s + 1; t < m; ++t) {
      double v =
          ClampUnit((1.0 - (loading[s] + loading[t])) * off_diagonal_scale);
      out(s, t) = v;
      out(t, s) = v;
    }
  }
  return out;
}

// |S|^-alpha. Shared by Price and BuildPriceMatrix so the two agree bit for
// bit on deterministic strategies.
double CardinalityDiscount(int cardinality, double alpha) {
  return std::exp(-alpha * std::log(static_cast<double>(cardinality)));
}

}  // namespace

void PricingParams::Validate() const {
  if (!(max_fee >= 0.0)) throw ShardsimError("max_fee must be >= 0");
  if (!(alpha >= 0.0)) throw ShardsimError("alpha must be >= 0");
  if (!(nominal_price >= 0.0)) throw ShardsimError("nominal_price must be >= 0");
}

SquareMatrix::SquareMatrix(int size, double fill)
    : size_(size), data_(static_cast<std::size_t>(size) * size, fill) {
  if (size < 0) throw ShardsimError("matrix size must be non-negative");
}

std::vector<double> SquareMatrix::Apply(std::span<const double> v) const {
  CheckSameSize(v.size(), size_, "vector");
  std::vector<double> out(size_, 0.0);
  for (int r = 0; r < size_; ++r) {
    double acc = 0.0;
    for (int c = 0; c < size_; ++c) acc += (*this)(r, c) * v[c];
    out[r] = acc;
  }
  return out;
}

std::vector<double> SquareMatrix::ApplyTransposed(
    std::span<const double> w) const {
  CheckSameSize(w.size(), size_, "vector");
  std::vector<double> out(size_, 0.0);
  for (int c = 0; c < size_; ++c) {
    double acc = 0.0;
    for (int r = 0; r < size_; ++r) acc += w[r] * (*this)(r, c);
    out[c] = acc;
  }
  return out;
}

double SquareMatrix::Bilinear(std::span<const double> w,
                              std::span<const double> v) const {
  CheckSameSize(w.size(), size_, "left vector");
  CheckSameSize(v.size(), size_, "right vector");
  double total = 0.0;
  for (int r = 0; r < size_; ++r) {
    if (w[r] == 0.0) continue;
    double acc = 0.0;
    for (int c = 0; c < size_; ++c) acc += (*this)(r, c) * v[c];
    total += w[r] * acc;
  }
  return total;
}

bool SquareMatrix::IsSymmetric() const {
  for (int r = 0; r < size_; ++r) {
    for (int c = r + 1; c < size_; ++c) {
      if ((*this)(r, c) != (*this)(c, r)) return false;
    }
  }
  return true;
}

double Price(ShardSet tx_shards, std::span<const double> loading,
             const PricingParams& params) {
  if (tx_shards.empty()) throw ShardsimError("cannot price an empty shard set");
  const double balance = ShardBalance(loading, tx_shards);
  return params.nominal_price +
         (1.0 - balance * CardinalityDiscount(tx_shards.size(), params.alpha)) *
             params.max_fee;
}

double Price(ShardSet tx_shards, const TransactionPool& pool,
             const PricingParams& params) {
  return Price(tx_shards, ShardLoading(pool), params);
}

SquareMatrix ExpectedCardinalityMatrix(int num_shards) {
  if (num_shards < 1) throw ShardsimError("shard count must be >= 1");
  SquareMatrix out(num_shards, 2.0);
  for (int s = 0; s < num_shards; ++s) out(s, s) = 1.0;
  return out;
}

SquareMatrix ExpectedBalanceMatrix(std::span<const double> loading) {
  return BalanceLikeMatrix(loading, 1.0);
}

SquareMatrix ExpectedEfficiencyMatrix(std::span<const double> loading) {
  return BalanceLikeMatrix(loading, 0.5);
}

PriceMatrix BuildPriceMatrix(std::span<const double> loading,
                             const PricingParams& params) {
  params.Validate();
  return PriceMatrix{
      BalanceLikeMatrix(loading, CardinalityDiscount(2, params.alpha)), params};
}

double ExpectedPrice(std::span<const double> request,
                     std::span<const double> send, const PriceMatrix& price) {
  CheckSimplex(request, "request distribution");
  CheckSimplex(send, "send distribution");
  return price.params.nominal_price +
         (1.0 - price.values.Bilinear(request, send)) * price.params.max_fee;
}

bool OnSimplex(std::span<const double> dist) {
  if (dist.empty()) return false;
  double sum = 0.0;
  for (double p : dist) {
    if (!(p >= 0.0)) return false;
    sum += p;
  }
  return std::abs(sum - 1.0) <= kSimplexTolerance;
}

void CheckSimplex(std::span<const double> dist, const char* what) {
  if (!OnSimplex(dist)) {
    throw ShardsimError(std::string(what) + " is not on the probability simplex");
  }
}

}  // namespace shardsim
