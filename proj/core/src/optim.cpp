/*
 * Copyright 2026 The WAT Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "wat/optim.hpp"

#include <cmath>

#include "wat/error.hpp"

namespace wat {

OptimizerState make_optimizer(std::span<const Parameter* const> params,
                              double lr, double momentum) {
  if (!(lr >= 0.0)) throw ConfigError("learning rate must be >= 0");
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw ConfigError("momentum must be in [0, 1)");
  }
  OptimizerState s;
  s.lr = lr;
  s.momentum = momentum;
  s.velocity.reserve(params.size());
  for (const Parameter* p : params) s.velocity.emplace_back(p->value.shape());
  return s;
}

void sgd_step(std::span<Parameter* const> params, OptimizerState& state) {
  if (state.velocity.empty()) {
    for (const Parameter* p : params) state.velocity.emplace_back(p->value.shape());
  }
  if (state.velocity.size() != params.size()) {
    throw ShapeError("sgd_step: " + std::to_string(params.size()) +
                     " parameters but " + std::to_string(state.velocity.size()) +
                     " velocity buffers");
  }
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i];
    Tensor& v = state.velocity[i];
    if (p.grad.shape() != p.value.shape() || v.shape() != p.value.shape()) {
      throw ShapeError("sgd_step: shape mismatch for " + p.name + ": value " +
                       shape_str(p.value.shape()) + ", grad " +
                       shape_str(p.grad.shape()) + ", velocity " +
                       shape_str(v.shape()));
    }
    for (std::size_t j = 0; j < v.size(); ++j) {
      v[j] = state.momentum * v[j] + p.grad[j];
      p.value[j] -= state.lr * v[j];
    }
  }
}

double clip_grad_norm(std::span<Parameter* const> params, double max_norm) {
  double sq = 0.0;
  for (const Parameter* p : params)
    for (double g : p->grad.values()) sq += g * g;
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const double c = max_norm / norm;
    for (Parameter* p : params)
      for (double& g : p->grad.values()) g *= c;
  }
  return norm;
}

void zero_grads(std::span<Parameter* const> params) {
  for (Parameter* p : params) p->zero_grad();
}

}  // namespace wat
