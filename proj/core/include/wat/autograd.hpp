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

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "wat/hash.hpp"
#include "wat/tensor.hpp"

namespace wat {

// A named trainable tensor together with its gradient accumulator.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter(std::string n, Tensor v)
      : name(std::move(n)), value(std::move(v)), grad(value.shape()) {}
  void zero_grad() { grad.fill(0.0); }
};

class Graph;

// Handle to a node recorded on a Graph.
class Var {
 public:
  Var() = default;
  Var(Graph* graph, std::size_t id) : graph_(graph), id_(id) {}

  Graph& graph() const { return *graph_; }
  std::size_t id() const { return id_; }
  const Tensor& value() const;
  const Shape& shape() const { return value().shape(); }

 private:
  Graph* graph_ = nullptr;
  std::size_t id_ = 0;
};

// Reverse-mode tape. Nodes are appended in evaluation order, so the tape is
// already a topological order; backward walks it in reverse exactly once.
// A Graph is single-use per forward pass and is not thread-safe.
class Graph {
 public:
  using BackwardFn = std::function<void(Graph&, std::size_t self)>;

  Graph() = default;
  Graph(const Graph&) = delete;
  Graph& operator=(const Graph&) = delete;

  Var constant(Tensor value);
  Var input(Tensor value, bool requires_grad = true);
  // Leaf bound to a Parameter; backward accumulates into param.grad.
  Var param(Parameter& p);

  // Records an op node. Throws NumericError if \p value is not finite.
  Var record(const char* op, Tensor value, std::vector<std::size_t> inputs,
             BackwardFn backward);

  void backward(Var loss);

  const Tensor& value(std::size_t id) const { return nodes_[id].value; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }
  // Gradient w.r.t. a node after backward(); zeros if the node was not
  // on a path to the loss.
  Tensor grad(Var v) const;

  // Accumulation buffer for an input's gradient; allocated on first use.
  Tensor& grad_buffer(std::size_t id);

  std::size_t size() const { return nodes_.size(); }

 private:
  struct Node {
    const char* op = "leaf";
    Tensor value;
    Tensor grad;
    std::vector<std::size_t> inputs;
    BackwardFn backward;
    bool requires_grad = false;
    Parameter* param = nullptr;
  };

  std::vector<Node> nodes_;
  bool backward_done_ = false;
};

// ---- forward ops (all record onto the graph of their first operand) ----

Var matmul(Var a, Var b);                 // [m,k] x [k,n] -> [m,n]
Var transpose(Var a);                     // [m,n] -> [n,m]
Var add(Var a, Var b);                    // same shape
Var sub(Var a, Var b);                    // same shape
Var mul(Var a, Var b);                    // elementwise, same shape
Var scale(Var a, double c);
Var concat(Var a, Var b);                 // along the last axis
Var slice(Var a, std::size_t begin, std::size_t end);       // last axis
Var slice_rows(Var a, std::size_t begin, std::size_t end);  // first axis
Var tanh(Var a);
Var sigmoid(Var a);
Var relu(Var a);
Var log(Var a);
Var softmax(Var a);                       // last axis
Var mean(Var a);                          // all entries -> [1]
Var mean_rows(Var a);                     // [m,n] -> [1,n]
// Inverted dropout: kept units are scaled by 1/(1-p). Identity when
// train is false or p == 0.
Var dropout(Var a, double p, bool train, Rng& rng);
// x [m,in], weight [out,in], bias [out] -> x * weight^T + bias, [m,out].
Var linear(Var x, Var weight, Var bias);
// Normalizes each row over the last axis, then applies gain and bias [n].
Var layer_norm(Var x, Var gain, Var bias, double eps = 1e-5);
// -log softmax(logits)[label] for a single row of logits.
Var cross_entropy(Var logits, std::size_t label);

// Plain (graph-free) helpers.
std::vector<double> softmax_values(std::span<const double> logits);

}  // namespace wat
