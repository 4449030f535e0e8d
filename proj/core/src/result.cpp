#include "sonmf/result.hpp"

#include <nlohmann/json.hpp>

namespace sonmf {

std::string to_string(Termination t) {
  switch (t) {
    case Termination::threshold: return "threshold";
    case Termination::max_iters: return "max_iters";
    case Termination::stalled: return "stalled";
  }
  return "?";
}

std::string result_stats_json(const FactorizationResult& r) {
  nlohmann::json j;
  j["iterations"] = r.iterations;
  j["termination"] = to_string(r.termination);
  j["elapsed_seconds"] = r.elapsed_seconds;
  if (r.objective_trace.empty())
    j["final_objective"] = nullptr;
  else
    j["final_objective"] = r.objective_trace.back();
  if (r.max_orth_residual)
    j["max_orth_residual"] = *r.max_orth_residual;
  else
    j["max_orth_residual"] = nullptr;
  return j.dump();
}

}  // namespace sonmf
