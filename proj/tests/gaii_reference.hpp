#pragma once

// Reference values for the 2023 Global AI Index analysis: the seven published
// criterion weights, the pairwise Pearson correlations of the criterion
// columns, and the interaction indices both unsupervised fits produce for
// them. Pairs are listed in lexicographic order (1,2), (1,3), ..., (6,7).

#include <array>
#include <cstddef>
#include <vector>

#include "rrank/core.hpp"

namespace gaii {

inline constexpr std::size_t kCriteria = 7;

inline constexpr std::array<const char*, kCriteria> kCriterionNames = {
    "Infrastructure",     "Operating Environment", "Talent",   "Development",
    "Research",           "Commercial Ventures",   "Government Strategy"};

inline constexpr std::array<double, kCriteria> kWeights = {0.11, 0.06, 0.15, 0.14,
                                                           0.26, 0.24, 0.04};

struct PairValue {
  int j, k;
  double rho;
  double u2;
  double u1;
};

inline constexpr std::array<PairValue, 21> kPairs = {{
    {0, 1, 0.5435, -0.0181, -0.1008},
    {0, 2, 0.3607, -0.0120, 0.0000},
    {0, 3, 0.5868, -0.0196, 0.0000},
    {0, 4, 0.6186, -0.0206, -0.0506},
    {0, 5, 0.5226, -0.0174, -0.0078},
    {0, 6, 0.5338, -0.0178, -0.0608},
    {1, 2, 0.3503, -0.0117, 0.0000},
    {1, 3, 0.3320, -0.0111, 0.0000},
    {1, 4, 0.3332, -0.0111, 0.0000},
    {1, 5, 0.2464, -0.0082, 0.0000},
    {1, 6, 0.5136, -0.0171, -0.0192},
    {2, 3, 0.6338, -0.0212, -0.0136},
    {2, 4, 0.7565, -0.0253, -0.1572},
    {2, 5, 0.6754, -0.0225, -0.1293},
    {2, 6, 0.3913, -0.0131, 0.0000},
    {3, 4, 0.8534, -0.0285, -0.1179},
    {3, 5, 0.8309, -0.0277, -0.1485},
    {3, 6, 0.3483, -0.0116, 0.0000},
    {4, 5, 0.8558, -0.0286, -0.1943},
    {4, 6, 0.3815, -0.0127, 0.0000},
    {5, 6, 0.2282, -0.0076, 0.0000},
}};

inline rrank::CorrelationMatrix correlation() {
  std::vector<double> rho(kCriteria * kCriteria, 1.0);
  for (const auto& p : kPairs) {
    rho[static_cast<std::size_t>(p.j) * kCriteria + p.k] = p.rho;
    rho[static_cast<std::size_t>(p.k) * kCriteria + p.j] = p.rho;
  }
  return rrank::validate_correlation(kCriteria, std::move(rho));
}

inline rrank::WeightVector weights() {
  return rrank::validate_weights({kWeights.begin(), kWeights.end()});
}

// preference order used for the ordinal analysis: Research, Commercial
// Ventures, Talent, Development, Infrastructure, Operating Environment,
// Government Strategy
inline const std::vector<int> kPreferenceOrder = {4, 5, 2, 3, 0, 1, 6};

}  // namespace gaii
