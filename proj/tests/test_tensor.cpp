/*
 * Copyright 2026 The SSS Dialogue Authors
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

#include <cmath>
#include <functional>
#include <random>

#include "doctest.h"
#include "sss/grad_check.hpp"
#include "sss/tensor.hpp"
#include "test_util.hpp"

using namespace sss;

TEST_CASE("primitive examples") {
  const Tensor a = Tensor::matrix(2, 2, {1, 2, 3, 4});
  const Tensor eye = Tensor::matrix(2, 2, {1, 0, 0, 1});
  const Tensor c = matmul(a, eye);
  CHECK(c.shape() == Shape{2, 2});
  CHECK(std::vector<double>(c.values().begin(), c.values().end()) ==
        std::vector<double>{1, 2, 3, 4});

  CHECK(sigmoid(Tensor::scalar(0.0)).item() == 0.5);

  const Tensor p = softmax_masked(Tensor({3}, {1, 1, 1}), Tensor({3}, {1, 1, 0}));
  CHECK(p[0] == 0.5);
  CHECK(p[1] == 0.5);
  CHECK(p[2] == 0.0);
}

TEST_CASE("op_apply dispatches by name and rejects bad input") {
  const Tensor x = Tensor::matrix(1, 2, {1, 2});
  const std::array in{x, x};
  CHECK(op_apply(op_from_name("add"), in)[1] == 4.0);
  CHECK_THROWS_AS(op_from_name("conv2d"), TensorError);
  CHECK_THROWS_AS(matmul(x, x), TensorError);
  CHECK_THROWS_AS(add(x, Tensor::matrix(2, 1, {1, 2})), TensorError);
  CHECK_THROWS_AS(log(Tensor::scalar(0.0)), TensorError);
  CHECK_THROWS_AS(scalar_scale(Tensor::scalar(1e300), 1e300), TensorError);
  CHECK_THROWS_AS(softmax_masked(Tensor({2}, {1, 2}), Tensor({2}, {0, 0})), TensorError);
  CHECK_THROWS_AS(Tensor({2, 2}, {1, 2, 3}), TensorError);
}

TEST_CASE("bias row is the only broadcast") {
  const Tensor x = Tensor::matrix(2, 2, {1, 2, 3, 4});
  const Tensor b = Tensor::matrix(1, 2, {10, 20});
  const Tensor y = add(x, b);
  CHECK(y.at(1, 0) == 13.0);
  CHECK(y.at(1, 1) == 24.0);
  CHECK_THROWS_AS(elemwise_mul(x, b), TensorError);
}

TEST_CASE("backward examples") {
  {
    Tape tape;
    Tensor x = tape.leaf({3}, {0.3, -1.0, 2.0});
    Tensor loss = sum_rows(x);
    Gradients g = backward(loss);
    CHECK(g[x][0] == 1.0);
    CHECK(g[x][1] == 1.0);
    CHECK(g[x][2] == 1.0);
  }
  {
    Tape tape;
    Tensor x = tape.leaf({1}, {2.0});
    Gradients g = backward(sum_rows(elemwise_mul(x, x)));
    CHECK(g[x][0] == 4.0);
  }
  {
    Tape tape;
    Tensor x = tape.leaf({2}, {1.0, 2.0});
    CHECK_THROWS_AS(backward(x), TensorError);
    CHECK_THROWS_AS(backward(Tensor::scalar(1.0)), TensorError);
  }
}

TEST_CASE("gradient of the loss with respect to itself is one") {
  Tape tape;
  Tensor x = tape.leaf({1}, {0.7});
  Tensor loss = tanh(x);
  Gradients g = backward(loss);
  CHECK(g[loss][0] == 1.0);
}

TEST_CASE("sigmoid of a dot product matches central differences") {
  Rng rng(11);
  ParamStore store;
  const ParamId w = store.add("w", {1, 4}, test::uniform(4, rng, -0.5, 0.5));
  const ParamId x = store.add("x", {4, 1}, test::uniform(4, rng, -0.5, 0.5));
  auto f = [&](Session& s) { return sum_rows(sigmoid(matmul(s(w), s(x)))); };
  const auto report = grad_check(f, store, 1e-6, 1e-6);
  CHECK(report.passed);
  CHECK(report.max_rel_error < 1e-6);
}

TEST_CASE("grad_check on a quadratic") {
  ParamStore store;
  const ParamId x = store.add("x", {3}, {1, 2, 3});
  auto f = [&](Session& s) { return scalar_scale(sum_rows(elemwise_mul(s(x), s(x))), 0.5); };
  Tape tape;
  Session session(store, &tape);
  Gradients g = backward(f(session));
  CHECK(g[session(x)][0] == 1.0);
  CHECK(g[session(x)][2] == 3.0);
  const auto report = grad_check(f, store, 1e-5, 1e-8);
  CHECK(report.passed);
  CHECK(report.max_rel_error < 1e-8);
}

TEST_CASE("grad_check detects a non-deterministic objective") {
  ParamStore store;
  const ParamId x = store.add("x", {1}, {1.0});
  int calls = 0;
  auto f = [&](Session& s) { return scalar_scale(s(x), 1.0 + 1e-3 * ++calls); };
  CHECK_THROWS(grad_check(f, store, 1e-5, 1e-3));
  CHECK_THROWS_AS(grad_check(f, store, 0.0, 1e-3), std::invalid_argument);
}

namespace {

// Random positive weights so no output entry gets a trivially zero
// gradient (a plain sum through a softmax would).
Tensor weighted_total(const Tensor& y, Rng& rng) {
  Tensor r(y.shape(), test::uniform(y.size(), rng, 0.1, 1.0));
  Tensor prod = elemwise_mul(y, r);
  return test::total(prod);
}

using Builder = std::function<Tensor(Session&, const std::vector<ParamId>&)>;

struct PrimitiveCase {
  const char* name;
  std::vector<Shape> shapes;
  Builder build;
  double lo = -1.0;
  double hi = 1.0;
};

}  // namespace

TEST_CASE("every primitive passes finite differences on random instances") {
  const Tensor mask = Tensor::matrix(2, 4, {1, 1, 0, 1, 0, 1, 1, 1});
  const std::vector<PrimitiveCase> cases = {
      {"matmul", {{3, 4}, {4, 2}}, [](Session& s, auto& p) { return matmul(s(p[0]), s(p[1])); }},
      {"add", {{3, 4}, {3, 4}}, [](Session& s, auto& p) { return add(s(p[0]), s(p[1])); }},
      {"add_bias", {{3, 4}, {1, 4}}, [](Session& s, auto& p) { return add(s(p[0]), s(p[1])); }},
      {"sub", {{3, 4}, {3, 4}}, [](Session& s, auto& p) { return sub(s(p[0]), s(p[1])); }},
      {"elemwise_mul", {{2, 3}, {2, 3}},
       [](Session& s, auto& p) { return elemwise_mul(s(p[0]), s(p[1])); }},
      {"sigmoid", {{2, 3}}, [](Session& s, auto& p) { return sigmoid(s(p[0])); }},
      {"tanh", {{2, 3}}, [](Session& s, auto& p) { return tanh(s(p[0])); }},
      {"relu", {{2, 3}}, [](Session& s, auto& p) { return relu(s(p[0])); }},
      {"softmax_masked", {{2, 4}},
       [mask](Session& s, auto& p) { return softmax_masked(s(p[0]), mask); }},
      {"concat_last_dim", {{2, 3}, {2, 1}},
       [](Session& s, auto& p) { return concat_last_dim(s(p[0]), s(p[1])); }},
      {"concat_rows", {{2, 3}, {1, 3}},
       [](Session& s, auto& p) {
         const std::array parts{s(p[0]), s(p[1])};
         return concat_rows(parts);
       }},
      {"sum_rows", {{3, 2}}, [](Session& s, auto& p) { return sum_rows(s(p[0])); }},
      {"scalar_scale", {{2, 2}}, [](Session& s, auto& p) { return scalar_scale(s(p[0]), -1.7); }},
      {"gather_rows", {{3, 2}},
       [](Session& s, auto& p) { return gather_rows(s(p[0]), {2, 0, 2}); }},
      {"scatter_rows", {{3, 2}},
       [](Session& s, auto& p) { return scatter_rows(s(p[0]), {1, 1, 3}, 4); }},
      {"row_scale", {{3, 2}, {3, 1}},
       [](Session& s, auto& p) { return row_scale(s(p[0]), s(p[1])); }},
      {"log", {{2, 2}}, [](Session& s, auto& p) { return log(s(p[0]), 1e-12); }, 0.2, 2.0},
      {"transpose", {{2, 3}}, [](Session& s, auto& p) { return transpose(s(p[0])); }},
  };

  for (const auto& c : cases) {
    for (int trial = 0; trial < 10; ++trial) {
      CAPTURE(c.name);
      CAPTURE(trial);
      Rng rng(1000 + trial);
      ParamStore store;
      std::vector<ParamId> ids;
      for (std::size_t k = 0; k < c.shapes.size(); ++k) {
        auto values = test::uniform(numel(c.shapes[k]), rng, c.lo, c.hi);
        // Keep relu inputs away from the kink.
        for (double& v : values)
          if (std::abs(v) < 0.05) v = 0.3;
        ids.push_back(store.add("p" + std::to_string(k), c.shapes[k], values));
      }
      const std::uint64_t weight_seed = rng();
      auto f = [&](Session& s) {
        Rng wrng(weight_seed);
        return weighted_total(c.build(s, ids), wrng);
      };
      const auto report = grad_check(f, store, 1e-5, 1e-4);
      CHECK(report.passed);
    }
  }
}

TEST_CASE("softmax_masked normalises over unmasked entries and zeroes the rest") {
  Rng rng(5);
  std::bernoulli_distribution keep(0.6);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t m = 1 + trial % 9;
    auto logits = test::uniform(m, rng, -30.0, 30.0);
    std::vector<double> mask(m);
    for (double& v : mask) v = keep(rng) ? 1.0 : 0.0;
    mask[trial % m] = 1.0;
    const Tensor p = softmax_masked(Tensor({m}, logits), Tensor({m}, mask));
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      if (mask[j] == 0.0) CHECK(p[j] == 0.0);
      s += p[j];
    }
    CHECK(std::abs(s - 1.0) < 1e-12);
  }
}

TEST_CASE("forward evaluation is bit-identical across runs") {
  Rng rng(3);
  const Tensor a = Tensor::matrix(4, 5, test::uniform(20, rng));
  const Tensor b = Tensor::matrix(5, 3, test::uniform(15, rng));
  auto run = [&] { return softmax(tanh(matmul(a, b))); };
  const Tensor y1 = run();
  const Tensor y2 = run();
  for (std::size_t i = 0; i < y1.size(); ++i) CHECK(y1[i] == y2[i]);
}

TEST_CASE("tape records only when an input requires grad") {
  Tape tape;
  Tensor c = Tensor::matrix(1, 2, {1, 2});
  Tensor d = tanh(c);
  CHECK_FALSE(d.requires_grad());
  CHECK(tape.size() == 0);
  Tensor x = tape.leaf(c);
  Tensor y = add(x, d);
  CHECK(y.requires_grad());
  CHECK(tape.size() == 2);

  Tape other;
  Tensor z = other.leaf(c);
  CHECK_THROWS_AS(add(x, z), TensorError);
}
