#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "sonmf/matrix.hpp"

namespace sonmf {

enum class ScenarioId {
  cont1,           // F ~ U(0,1), G ~ U(0,2), Gaussian noise
  cont2,           // F nonnegative orthonormal (block supports), G ~ U(0,2)
  cont3,           // F orthonormal mixed sign, G ~ U(0,2)
  binary,          // X_ij ~ Bernoulli(clamp(sigmoid(F G^T) + E, 0, 1))
  rank_deficient,  // cont3 truth of lower rank than the fitted one
};

ScenarioId scenario_from_string(const std::string& name);
std::string to_string(ScenarioId id);

struct ScenarioSpec {
  ScenarioId id = ScenarioId::cont1;
  Index p = 500;
  Index n = 500;
  Index true_rank = 10;
  double noise_sd = 0.3;  // 0.1 for the binary scenario
  std::uint64_t seed = 0;
};

struct ScenarioData {
  Matrix x;       // p x n observation
  Matrix f_true;  // p x true_rank
  Matrix g_true;  // n x true_rank
  // Pre-noise Bernoulli parameters, sigmoid(F_true G_true^T); binary only.
  std::optional<Matrix> p_true;
};

// Deterministic under spec.seed; F, G, noise and Bernoulli draws use split
// seed streams so changing one law never shifts another.
ScenarioData generate_scenario(const ScenarioSpec& spec);

}  // namespace sonmf
