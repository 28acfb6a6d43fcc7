#pragma once

#include <map>
#include <string>
#include <vector>

#include "rldp/config.hpp"
#include "rldp/model.hpp"

#ifndef RLDP_MODELS_DIR
#define RLDP_MODELS_DIR "models"
#endif

namespace rldp::test {

inline RenewalModel shipped(const std::string& name) {
  return load_model(std::string(RLDP_MODELS_DIR) + "/" + name + ".json");
}

/// 1-D model with f(s) = reward(s) and v(s) = potential(s) on a finite head.
inline ModelSpec finite_spec(const std::map<long, double>& p, double p_inf = 0.0,
                             const std::map<long, double>& v = {},
                             const std::map<long, double>& f = {}) {
  ModelSpec spec;
  spec.name = "test";
  spec.waiting.head = p;
  spec.waiting.p_infinity = p_inf;
  spec.potential.head = v;
  spec.reward.dim = 1;
  for (const auto& [s, q] : p) {
    const auto it = f.find(s);
    spec.reward.head[s] = {it == f.end() ? 1.0 : it->second};
  }
  return spec;
}

inline RenewalModel finite_model(const std::map<long, double>& p, double p_inf = 0.0,
                                 const std::map<long, double>& v = {},
                                 const std::map<long, double>& f = {}) {
  return RenewalModel(finite_spec(p, p_inf, v, f));
}

}  // namespace rldp::test
