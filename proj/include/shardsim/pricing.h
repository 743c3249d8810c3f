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

#ifndef SHARDSIM_PRICING_H_
#define SHARDSIM_PRICING_H_

#include <span>
#include <vector>

#include "shardsim/ledger.h"
#include "shardsim/types.h"

namespace shardsim {

inline constexpr double kSimplexTolerance = 1e-9;

struct PricingParams {
  double nominal_price = 0.0;  // p0, added to every fee
  double max_fee = 1.0;        // scales the efficiency surcharge
  double alpha = 0.0;          // cardinality exponent

  void Validate() const;
};

// Dense row-major square matrix, sized for shard counts (m <= 64).
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(int size, double fill = 0.0);

  int size() const { return size_; }
  double operator()(int row, int col) const {
    return data_[static_cast<std::size_t>(row) * size_ + col];
  }
  double& operator()(int row, int col) {
    return data_[static_cast<std::size_t>(row) * size_ + col];
  }

  // M v
  std::vector<double> Apply(std::span<const double> v) const;
  // w^T M
  std::vector<double> ApplyTransposed(std::span<const double> w) const;
  // w^T M v
  double Bilinear(std::span<const double> w, std::span<const double> v) const;

  bool IsSymmetric() const;

 private:
  int size_ = 0;
  std::vector<double> data_;
};

// Matrix P of the expected-price bilinear form: diagonal 1 - lambda_s,
// off-diagonal (1 - lambda_s - lambda_t) / 2^alpha. Carries the pricing
// parameters so expected prices can be reported in fee units.
struct PriceMatrix {
  SquareMatrix values;
  PricingParams params;

  int size() const { return values.size(); }
  double operator()(int row, int col) const { return values(row, col); }
};

// f = p0 + (1 - B(S_T) / |S_T|^alpha) * p_max for a transaction using
// `tx_shards` against the given loading vector.
double Price(ShardSet tx_shards, std::span<const double> loading,
             const PricingParams& params);
double Price(ShardSet tx_shards, const TransactionPool& pool,
             const PricingParams& params);

// 1 on the diagonal, 2 elsewhere.
SquareMatrix ExpectedCardinalityMatrix(int num_shards);
// 1 - lambda_s on the diagonal, 1 - lambda_s - lambda_t elsewhere.
SquareMatrix ExpectedBalanceMatrix(std::span<const double> loading);
// Balance matrix with off-diagonal entries halved.
SquareMatrix ExpectedEfficiencyMatrix(std::span<const double> loading);

PriceMatrix BuildPriceMatrix(std::span<const double> loading,
                             const PricingParams& params);

// p0 + p_max * (1 - w^T P v). Throws unless w and v lie on the simplex.
double ExpectedPrice(std::span<const double> request,
                     std::span<const double> send, const PriceMatrix& price);

// Throws if `dist` has a negative entry or does not sum to 1 within
// kSimplexTolerance.
void CheckSimplex(std::span<const double> dist, const char* what);
bool OnSimplex(std::span<const double> dist);

}  // namespace shardsim

#endif  // SHARDSIM_PRICING_H_
