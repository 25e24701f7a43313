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

#pragma once

#include <span>
#include <vector>

#include "wat/autograd.hpp"

namespace wat {

// Heavy-ball momentum state: one velocity buffer per parameter.
struct OptimizerState {
  double lr = 0.001;
  double momentum = 0.9;
  std::vector<Tensor> velocity;
};

OptimizerState make_optimizer(std::span<const Parameter* const> params,
                              double lr, double momentum);

// v <- momentum * v + g;  theta <- theta - lr * v.
// The velocity buffers are created on the first call if absent.
void sgd_step(std::span<Parameter* const> params, OptimizerState& state);

// Scales all gradients so their joint L2 norm is at most max_norm.
// Returns the norm before clipping.
double clip_grad_norm(std::span<Parameter* const> params, double max_norm);

void zero_grads(std::span<Parameter* const> params);

}  // namespace wat
