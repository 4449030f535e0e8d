#include "sonmf/scenario.hpp"

#include <random>

#include "sonmf/binary.hpp"
#include "sonmf/random.hpp"

namespace sonmf {

ScenarioId scenario_from_string(const std::string& name) {
  if (name == "cont1") return ScenarioId::cont1;
  if (name == "cont2") return ScenarioId::cont2;
  if (name == "cont3") return ScenarioId::cont3;
  if (name == "binary") return ScenarioId::binary;
  if (name == "rank_deficient") return ScenarioId::rank_deficient;
  throw DimensionError("unknown scenario: " + name);
}

std::string to_string(ScenarioId id) {
  switch (id) {
    case ScenarioId::cont1: return "cont1";
    case ScenarioId::cont2: return "cont2";
    case ScenarioId::cont3: return "cont3";
    case ScenarioId::binary: return "binary";
    case ScenarioId::rank_deficient: return "rank_deficient";
  }
  return "?";
}

namespace {

// Nonnegative orthonormal basis: columns with disjoint contiguous row blocks,
// U(0,1) entries inside each block, normalized.  Disjoint supports make the
// columns exactly orthogonal.
Matrix nonneg_orthonormal(Index p, Index r, std::uint64_t seed) {
  require(r <= p, "scenario cont2: rank exceeds row count");
  Matrix f = Matrix::Zero(p, r);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (Index c = 0; c < r; ++c) {
    const Index lo = c * p / r;
    const Index hi = (c + 1) * p / r;
    for (Index i = lo; i < hi; ++i) f(i, c) = unif(rng);
    f.col(c) /= f.col(c).norm();
  }
  return f;
}

}  // namespace

ScenarioData generate_scenario(const ScenarioSpec& spec) {
  require(spec.p >= 1 && spec.n >= 1, "scenario: dimensions must be positive");
  require(spec.true_rank >= 1 &&
              spec.true_rank <= std::min(spec.p, spec.n),
          "scenario: true_rank out of range");
  require(spec.noise_sd >= 0.0, "scenario: negative noise level");

  const std::uint64_t sf = mix_seed(spec.seed, 1);
  const std::uint64_t sg = mix_seed(spec.seed, 2);
  const std::uint64_t se = mix_seed(spec.seed, 3);
  const std::uint64_t sb = mix_seed(spec.seed, 4);
  const Index p = spec.p, n = spec.n, r = spec.true_rank;

  ScenarioData data;
  switch (spec.id) {
    case ScenarioId::cont1:
      data.f_true = random_uniform(p, r, 0.0, 1.0, sf);
      break;
    case ScenarioId::cont2:
      data.f_true = nonneg_orthonormal(p, r, sf);
      break;
    case ScenarioId::cont3:
    case ScenarioId::rank_deficient:
      data.f_true = random_orthonormal(p, r, sf);
      break;
    case ScenarioId::binary:
      data.f_true = random_normal(p, r, 0.0, 1.0, sf);
      break;
  }

  if (spec.id == ScenarioId::binary) {
    data.g_true = random_uniform(n, r, 0.0, 1.0, sg);
    data.p_true = sigmoid_matrix(data.f_true * data.g_true.transpose());
    const Matrix noise = random_normal(p, n, 0.0, spec.noise_sd, se);
    std::mt19937_64 rng(sb);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    data.x.resize(p, n);
    for (Index i = 0; i < p; ++i)
      for (Index j = 0; j < n; ++j) {
        const double q =
            std::clamp((*data.p_true)(i, j) + noise(i, j), 0.0, 1.0);
        data.x(i, j) = unif(rng) < q ? 1.0 : 0.0;
      }
  } else {
    data.g_true = random_uniform(n, r, 0.0, 2.0, sg);
    data.x = data.f_true * data.g_true.transpose() +
             random_normal(p, n, 0.0, spec.noise_sd, se);
  }
  return data;
}

}  // namespace sonmf
