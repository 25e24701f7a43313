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

#include "wat/autograd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wat/error.hpp"

namespace wat {

namespace {

void check_same_shape(const char* op, const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(op) + ": shape mismatch " +
                     shape_str(a.shape()) + " vs " + shape_str(b.shape()));
  }
}

void check_rank2(const char* op, const Tensor& a) {
  if (a.rank() != 2) {
    throw ShapeError(std::string(op) + ": expected rank-2 tensor, got " +
                     shape_str(a.shape()));
  }
}

// Shape of a row-wise result: keeps the leading axes of \p like and
// replaces the last extent.
Shape with_cols(const Shape& like, std::size_t cols) {
  Shape s = like;
  s.back() = cols;
  return s;
}

double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

const Tensor& Var::value() const { return graph_->value(id_); }

Var Graph::constant(Tensor value) {
  if (!value.all_finite()) throw NumericError("constant: non-finite value");
  Node n;
  n.op = "constant";
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

Var Graph::input(Tensor value, bool requires_grad) {
  if (!value.all_finite()) throw NumericError("input: non-finite value");
  Node n;
  n.op = "input";
  n.value = std::move(value);
  n.requires_grad = requires_grad;
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

Var Graph::param(Parameter& p) {
  if (!p.value.all_finite()) {
    throw NumericError("parameter " + p.name + " is not finite");
  }
  Node n;
  n.op = "param";
  n.value = p.value;
  n.requires_grad = true;
  n.param = &p;
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

Var Graph::record(const char* op, Tensor value, std::vector<std::size_t> inputs,
                  BackwardFn backward) {
  if (!value.all_finite()) {
    throw NumericError(std::string(op) + ": non-finite forward value");
  }
  Node n;
  n.op = op;
  n.value = std::move(value);
  n.requires_grad = std::any_of(inputs.begin(), inputs.end(), [&](std::size_t i) {
    return nodes_[i].requires_grad;
  });
  n.inputs = std::move(inputs);
  if (n.requires_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return {this, nodes_.size() - 1};
}

Tensor& Graph::grad_buffer(std::size_t id) {
  Node& n = nodes_[id];
  if (n.grad.empty()) n.grad = Tensor(n.value.shape());
  return n.grad;
}

Tensor Graph::grad(Var v) const {
  const Node& n = nodes_[v.id()];
  if (n.grad.empty()) return Tensor(n.value.shape());
  return n.grad;
}

void Graph::backward(Var loss) {
  if (backward_done_) throw Error("backward: graph already consumed");
  const Node& root = nodes_.at(loss.id());
  if (root.value.size() != 1) {
    throw ShapeError("backward: loss must be scalar, got " +
                     shape_str(root.value.shape()));
  }
  backward_done_ = true;
  if (!root.requires_grad) return;
  grad_buffer(loss.id()).fill(1.0);

  for (std::size_t id = loss.id() + 1; id-- > 0;) {
    Node& n = nodes_[id];
    if (!n.requires_grad || n.grad.empty()) continue;
    if (n.backward) {
      n.backward(*this, id);
      for (std::size_t in : n.inputs) {
        const Node& src = nodes_[in];
        if (!src.grad.empty() && !src.grad.all_finite()) {
          throw NumericError(std::string("backward of ") + n.op +
                             ": non-finite gradient");
        }
      }
    }
    if (n.param != nullptr) {
      auto dst = n.param->grad.values();
      auto src = n.grad.values();
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
    }
  }
}

// ---------------------------------------------------------------------------

Var matmul(Var a, Var b) {
  Graph& g = a.graph();
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  check_rank2("matmul", A);
  check_rank2("matmul", B);
  const std::size_t m = A.shape()[0], k = A.shape()[1], n = B.shape()[1];
  if (B.shape()[0] != k) {
    throw ShapeError("matmul: inner dimensions differ " + shape_str(A.shape()) +
                     " x " + shape_str(B.shape()));
  }
  Tensor C({m, n});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t p = 0; p < k; ++p) {
      const double av = A.at(i, p);
      for (std::size_t j = 0; j < n; ++j) C.at(i, j) += av * B.at(p, j);
    }
  const std::size_t ia = a.id(), ib = b.id();
  return g.record("matmul", std::move(C), {ia, ib},
                  [ia, ib, m, k, n](Graph& gr, std::size_t self) {
    const Tensor& dC = gr.grad_buffer(self);
    const Tensor& A = gr.value(ia);
    const Tensor& B = gr.value(ib);
    if (gr.requires_grad(ia)) {
      Tensor& dA = gr.grad_buffer(ia);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          double s = 0.0;
          const double* dc = &dC[i * n];
          const double* br = &B[p * n];
#pragma omp simd reduction(+ : s)
          for (std::size_t j = 0; j < n; ++j) s += dc[j] * br[j];
          dA.at(i, p) += s;
        }
    }
    if (gr.requires_grad(ib)) {
      Tensor& dB = gr.grad_buffer(ib);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t p = 0; p < k; ++p) {
          const double av = A.at(i, p);
          for (std::size_t j = 0; j < n; ++j) dB.at(p, j) += av * dC.at(i, j);
        }
    }
  });
}

Var transpose(Var a) {
  const Tensor& A = a.value();
  check_rank2("transpose", A);
  const std::size_t m = A.shape()[0], n = A.shape()[1];
  Tensor T({n, m});
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) T.at(j, i) = A.at(i, j);
  const std::size_t ia = a.id();
  return a.graph().record("transpose", std::move(T), {ia},
                          [ia, m, n](Graph& gr, std::size_t self) {
    const Tensor& dT = gr.grad_buffer(self);
    Tensor& dA = gr.grad_buffer(ia);
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < n; ++j) dA.at(i, j) += dT.at(j, i);
  });
}

namespace {

template <typename Fwd, typename DA, typename DB>
Var binary_elementwise(const char* op, Var a, Var b, Fwd fwd, DA da, DB db) {
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  check_same_shape(op, A, B);
  Tensor C(A.shape());
  for (std::size_t i = 0; i < C.size(); ++i) C[i] = fwd(A[i], B[i]);
  const std::size_t ia = a.id(), ib = b.id();
  return a.graph().record(op, std::move(C), {ia, ib},
                          [ia, ib, da, db](Graph& gr, std::size_t self) {
    const Tensor& dC = gr.grad_buffer(self);
    const Tensor& A = gr.value(ia);
    const Tensor& B = gr.value(ib);
    if (gr.requires_grad(ia)) {
      Tensor& dA = gr.grad_buffer(ia);
      for (std::size_t i = 0; i < dA.size(); ++i) dA[i] += dC[i] * da(A[i], B[i]);
    }
    if (gr.requires_grad(ib)) {
      Tensor& dB = gr.grad_buffer(ib);
      for (std::size_t i = 0; i < dB.size(); ++i) dB[i] += dC[i] * db(A[i], B[i]);
    }
  });
}

// Unary op whose derivative is expressed through input x and output y.
template <typename Fwd, typename Deriv>
Var unary_elementwise(const char* op, Var a, Fwd fwd, Deriv deriv) {
  const Tensor& A = a.value();
  Tensor Y(A.shape());
  for (std::size_t i = 0; i < Y.size(); ++i) Y[i] = fwd(A[i]);
  const std::size_t ia = a.id();
  return a.graph().record(op, std::move(Y), {ia},
                          [ia, deriv](Graph& gr, std::size_t self) {
    const Tensor& dY = gr.grad_buffer(self);
    const Tensor& X = gr.value(ia);
    const Tensor& Y = gr.value(self);
    Tensor& dX = gr.grad_buffer(ia);
    for (std::size_t i = 0; i < dX.size(); ++i) dX[i] += dY[i] * deriv(X[i], Y[i]);
  });
}

}  // namespace

Var add(Var a, Var b) {
  return binary_elementwise(
      "add", a, b, [](double x, double y) { return x + y; },
      [](double, double) { return 1.0; }, [](double, double) { return 1.0; });
}

Var sub(Var a, Var b) {
  return binary_elementwise(
      "sub", a, b, [](double x, double y) { return x - y; },
      [](double, double) { return 1.0; }, [](double, double) { return -1.0; });
}

Var mul(Var a, Var b) {
  return binary_elementwise(
      "mul", a, b, [](double x, double y) { return x * y; },
      [](double, double y) { return y; }, [](double x, double) { return x; });
}

Var scale(Var a, double c) {
  return unary_elementwise(
      "scale", a, [c](double x) { return c * x; },
      [c](double, double) { return c; });
}

Var tanh(Var a) {
  return unary_elementwise(
      "tanh", a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Var sigmoid(Var a) {
  return unary_elementwise(
      "sigmoid", a,
      [](double x) {
        if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Var relu(Var a) {
  return unary_elementwise(
      "relu", a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Var log(Var a) {
  return unary_elementwise(
      "log", a, [](double x) { return std::log(x); },
      [](double x, double) { return 1.0 / x; });
}

Var concat(Var a, Var b) {
  const Tensor& A = a.value();
  const Tensor& B = b.value();
  if (A.rank() != B.rank() || A.rows() != B.rows() ||
      !std::equal(A.shape().begin(), A.shape().end() - 1, B.shape().begin())) {
    throw ShapeError("concat: leading axes differ " + shape_str(A.shape()) +
                     " vs " + shape_str(B.shape()));
  }
  const std::size_t rows = A.rows(), na = A.cols(), nb = B.cols();
  Tensor C(with_cols(A.shape(), na + nb));
  for (std::size_t r = 0; r < rows; ++r) {
    std::copy_n(&A[r * na], na, &C[r * (na + nb)]);
    std::copy_n(&B[r * nb], nb, &C[r * (na + nb) + na]);
  }
  const std::size_t ia = a.id(), ib = b.id();
  return a.graph().record("concat", std::move(C), {ia, ib},
                          [ia, ib, rows, na, nb](Graph& gr, std::size_t self) {
    const Tensor& dC = gr.grad_buffer(self);
    if (gr.requires_grad(ia)) {
      Tensor& dA = gr.grad_buffer(ia);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < na; ++j) dA[r * na + j] += dC[r * (na + nb) + j];
    }
    if (gr.requires_grad(ib)) {
      Tensor& dB = gr.grad_buffer(ib);
      for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t j = 0; j < nb; ++j)
          dB[r * nb + j] += dC[r * (na + nb) + na + j];
    }
  });
}

Var slice(Var a, std::size_t begin, std::size_t end) {
  const Tensor& A = a.value();
  const std::size_t n = A.cols();
  if (begin >= end || end > n) {
    throw ShapeError("slice: range [" + std::to_string(begin) + ", " +
                     std::to_string(end) + ") invalid for " + shape_str(A.shape()));
  }
  const std::size_t rows = A.rows(), w = end - begin;
  Tensor S(with_cols(A.shape(), w));
  for (std::size_t r = 0; r < rows; ++r) std::copy_n(&A[r * n + begin], w, &S[r * w]);
  const std::size_t ia = a.id();
  return a.graph().record("slice", std::move(S), {ia},
                          [ia, rows, n, begin, w](Graph& gr, std::size_t self) {
    const Tensor& dS = gr.grad_buffer(self);
    Tensor& dA = gr.grad_buffer(ia);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t j = 0; j < w; ++j) dA[r * n + begin + j] += dS[r * w + j];
  });
}

Var slice_rows(Var a, std::size_t begin, std::size_t end) {
  const Tensor& A = a.value();
  check_rank2("slice_rows", A);
  if (begin >= end || end > A.shape()[0]) {
    throw ShapeError("slice_rows: range [" + std::to_string(begin) + ", " +
                     std::to_string(end) + ") invalid for " + shape_str(A.shape()));
  }
  const std::size_t n = A.cols();
  Tensor S({end - begin, n});
  std::copy(A.values().begin() + begin * n, A.values().begin() + end * n,
            S.values().begin());
  const std::size_t ia = a.id();
  return a.graph().record("slice_rows", std::move(S), {ia},
                          [ia, begin, n](Graph& gr, std::size_t self) {
    const Tensor& dS = gr.grad_buffer(self);
    Tensor& dA = gr.grad_buffer(ia);
    for (std::size_t i = 0; i < dS.size(); ++i) dA[begin * n + i] += dS[i];
  });
}

std::vector<double> softmax_values(std::span<const double> logits) {
  std::vector<double> out(logits.begin(), logits.end());
  if (out.empty()) return out;
  const double mx = *std::max_element(out.begin(), out.end());
  double sum = 0.0;
  for (double& v : out) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : out) v /= sum;
  return out;
}

Var softmax(Var a) {
  const Tensor& A = a.value();
  const std::size_t rows = A.rows(), n = A.cols();
  Tensor Y(A.shape());
  for (std::size_t r = 0; r < rows; ++r) {
    auto row = softmax_values(A.values().subspan(r * n, n));
    std::copy(row.begin(), row.end(), &Y[r * n]);
  }
  const std::size_t ia = a.id();
  return a.graph().record("softmax", std::move(Y), {ia},
                          [ia, rows, n](Graph& gr, std::size_t self) {
    const Tensor& dY = gr.grad_buffer(self);
    const Tensor& Y = gr.value(self);
    Tensor& dX = gr.grad_buffer(ia);
    for (std::size_t r = 0; r < rows; ++r) {
      double dot = 0.0;
      for (std::size_t j = 0; j < n; ++j) dot += dY[r * n + j] * Y[r * n + j];
      for (std::size_t j = 0; j < n; ++j)
        dX[r * n + j] += Y[r * n + j] * (dY[r * n + j] - dot);
    }
  });
}

Var mean(Var a) {
  const Tensor& A = a.value();
  double s = 0.0;
  for (double v : A.values()) s += v;
  const double n = static_cast<double>(A.size());
  const std::size_t ia = a.id();
  return a.graph().record("mean", Tensor::scalar(s / n), {ia},
                          [ia, n](Graph& gr, std::size_t self) {
    const double d = gr.grad_buffer(self)[0] / n;
    for (double& v : gr.grad_buffer(ia).values()) v += d;
  });
}

Var mean_rows(Var a) {
  const Tensor& A = a.value();
  const std::size_t rows = A.rows(), n = A.cols();
  Tensor M({1, n});
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t j = 0; j < n; ++j) M[j] += A[r * n + j];
  for (double& v : M.values()) v /= static_cast<double>(rows);
  const std::size_t ia = a.id();
  return a.graph().record("mean_rows", std::move(M), {ia},
                          [ia, rows, n](Graph& gr, std::size_t self) {
    const Tensor& dM = gr.grad_buffer(self);
    Tensor& dA = gr.grad_buffer(ia);
    const double inv = 1.0 / static_cast<double>(rows);
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t j = 0; j < n; ++j) dA[r * n + j] += dM[j] * inv;
  });
}

Var dropout(Var a, double p, bool train, Rng& rng) {
  if (!(p >= 0.0 && p < 1.0)) {
    throw ConfigError("dropout: p must be in [0, 1), got " + std::to_string(p));
  }
  if (!train || p == 0.0) return a;
  const Tensor& A = a.value();
  const double keep_scale = 1.0 / (1.0 - p);
  Tensor mask(A.shape());
  for (double& m : mask.values()) m = uniform01(rng) >= p ? keep_scale : 0.0;
  Tensor Y(A.shape());
  for (std::size_t i = 0; i < Y.size(); ++i) Y[i] = A[i] * mask[i];
  const std::size_t ia = a.id();
  return a.graph().record("dropout", std::move(Y), {ia},
                          [ia, mask = std::move(mask)](Graph& gr, std::size_t self) {
    const Tensor& dY = gr.grad_buffer(self);
    Tensor& dA = gr.grad_buffer(ia);
    for (std::size_t i = 0; i < dA.size(); ++i) dA[i] += dY[i] * mask[i];
  });
}

Var linear(Var x, Var weight, Var bias) {
  const Tensor& X = x.value();
  const Tensor& W = weight.value();
  const Tensor& b = bias.value();
  check_rank2("linear weight", W);
  const std::size_t out = W.shape()[0], in = W.shape()[1];
  if (X.cols() != in || b.size() != out) {
    throw ShapeError("linear: input " + shape_str(X.shape()) + ", weight " +
                     shape_str(W.shape()) + ", bias " + shape_str(b.shape()));
  }
  const std::size_t m = X.rows();
  Tensor Y(with_cols(X.shape(), out));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t o = 0; o < out; ++o) {
      double s = b[o];
      const double* xr = &X[i * in];
      const double* wr = &W[o * in];
#pragma omp simd reduction(+ : s)
      for (std::size_t k = 0; k < in; ++k) s += xr[k] * wr[k];
      Y[i * out + o] = s;
    }
  const std::size_t ix = x.id(), iw = weight.id(), ib = bias.id();
  return x.graph().record("linear", std::move(Y), {ix, iw, ib},
                          [ix, iw, ib, m, in, out](Graph& gr, std::size_t self) {
    const Tensor& dY = gr.grad_buffer(self);
    const Tensor& X = gr.value(ix);
    const Tensor& W = gr.value(iw);
    if (gr.requires_grad(ix)) {
      Tensor& dX = gr.grad_buffer(ix);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t o = 0; o < out; ++o) {
          const double d = dY[i * out + o];
          if (d == 0.0) continue;
          const double* wr = &W[o * in];
          double* dxr = &dX[i * in];
          for (std::size_t k = 0; k < in; ++k) dxr[k] += d * wr[k];
        }
    }
    if (gr.requires_grad(iw)) {
      Tensor& dW = gr.grad_buffer(iw);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t o = 0; o < out; ++o) {
          const double d = dY[i * out + o];
          if (d == 0.0) continue;
          const double* xr = &X[i * in];
          double* dwr = &dW[o * in];
          for (std::size_t k = 0; k < in; ++k) dwr[k] += d * xr[k];
        }
    }
    if (gr.requires_grad(ib)) {
      Tensor& db = gr.grad_buffer(ib);
      for (std::size_t i = 0; i < m; ++i)
        for (std::size_t o = 0; o < out; ++o) db[o] += dY[i * out + o];
    }
  });
}

Var layer_norm(Var x, Var gain, Var bias, double eps) {
  const Tensor& X = x.value();
  const Tensor& G = gain.value();
  const Tensor& B = bias.value();
  const std::size_t rows = X.rows(), n = X.cols();
  if (G.size() != n || B.size() != n) {
    throw ShapeError("layer_norm: input " + shape_str(X.shape()) + ", gain " +
                     shape_str(G.shape()) + ", bias " + shape_str(B.shape()));
  }
  Tensor Y(X.shape());
  Tensor xhat(X.shape());
  std::vector<double> rstd(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    double mu = 0.0;
    for (std::size_t j = 0; j < n; ++j) mu += X[r * n + j];
    mu /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double c = X[r * n + j] - mu;
      var += c * c;
    }
    var /= static_cast<double>(n);
    rstd[r] = 1.0 / std::sqrt(var + eps);
    for (std::size_t j = 0; j < n; ++j) {
      const double h = (X[r * n + j] - mu) * rstd[r];
      xhat[r * n + j] = h;
      Y[r * n + j] = h * G[j] + B[j];
    }
  }
  const std::size_t ix = x.id(), ig = gain.id(), ib = bias.id();
  return x.graph().record(
      "layer_norm", std::move(Y), {ix, ig, ib},
      [ix, ig, ib, rows, n, xhat = std::move(xhat),
       rstd = std::move(rstd)](Graph& gr, std::size_t self) {
        const Tensor& dY = gr.grad_buffer(self);
        const Tensor& G = gr.value(ig);
        if (gr.requires_grad(ix)) {
          Tensor& dX = gr.grad_buffer(ix);
          const double inv_n = 1.0 / static_cast<double>(n);
          for (std::size_t r = 0; r < rows; ++r) {
            double sum_d = 0.0, sum_dh = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
              const double dh = dY[r * n + j] * G[j];
              sum_d += dh;
              sum_dh += dh * xhat[r * n + j];
            }
            for (std::size_t j = 0; j < n; ++j) {
              const double dh = dY[r * n + j] * G[j];
              dX[r * n + j] += rstd[r] * (dh - sum_d * inv_n -
                                          xhat[r * n + j] * sum_dh * inv_n);
            }
          }
        }
        if (gr.requires_grad(ig)) {
          Tensor& dG = gr.grad_buffer(ig);
          for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t j = 0; j < n; ++j) dG[j] += dY[r * n + j] * xhat[r * n + j];
        }
        if (gr.requires_grad(ib)) {
          Tensor& dB = gr.grad_buffer(ib);
          for (std::size_t r = 0; r < rows; ++r)
            for (std::size_t j = 0; j < n; ++j) dB[j] += dY[r * n + j];
        }
      });
}

Var cross_entropy(Var logits, std::size_t label) {
  const Tensor& Z = logits.value();
  if (Z.rows() != 1) {
    throw ShapeError("cross_entropy: expected a single row of logits, got " +
                     shape_str(Z.shape()));
  }
  const std::size_t k = Z.cols();
  if (k < 2) throw ShapeError("cross_entropy: need at least 2 classes");
  if (label >= k) {
    throw ValidationError("cross_entropy: label " + std::to_string(label) +
                          " out of range for " + std::to_string(k) + " classes");
  }
  const double mx = *std::max_element(Z.values().begin(), Z.values().end());
  double sum = 0.0;
  for (double v : Z.values()) sum += std::exp(v - mx);
  const double lse = mx + std::log(sum);
  auto probs = softmax_values(Z.values());
  const std::size_t iz = logits.id();
  return logits.graph().record(
      "cross_entropy", Tensor::scalar(lse - Z[label]), {iz},
      [iz, label, probs = std::move(probs)](Graph& gr, std::size_t self) {
        const double d = gr.grad_buffer(self)[0];
        Tensor& dZ = gr.grad_buffer(iz);
        for (std::size_t j = 0; j < probs.size(); ++j) {
          dZ[j] += d * (probs[j] - (j == label ? 1.0 : 0.0));
        }
      });
}

}  // namespace wat
