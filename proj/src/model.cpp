// Copyright 2026 The wavecls Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wavecls/model.hpp"

#include "wavecls/error.hpp"
#include "wavecls/random.hpp"

namespace wavecls {

using nlohmann::json;

void ModelConfig::validate() const {
  encoder.validate();
  if (head.in_channels != encoder.channels) {
    throw ConfigError("model: head expects " + std::to_string(head.in_channels) +
                      " channels, encoder produces " + std::to_string(encoder.channels));
  }
  head.validate(encoder.seg_len);
}

ModelConfig default_model_config(std::size_t n_classes, std::size_t seg_len) {
  ModelConfig cfg;
  cfg.encoder.seg_len = seg_len;
  cfg.head.n_classes = n_classes;
  return cfg;
}

json to_json(const ModelConfig& cfg) {
  json blocks = json::array();
  for (const auto& b : cfg.head.blocks) {
    blocks.push_back({{"out_channels", b.out_channels},
                      {"conv_kernel", b.conv_kernel},
                      {"pool_window", b.pool_window},
                      {"pool_stride", b.pool_stride}});
  }
  return {{"encoder",
           {{"n_layers", cfg.encoder.n_layers},
            {"channels", cfg.encoder.channels},
            {"kernel", cfg.encoder.kernel},
            {"seg_len", cfg.encoder.seg_len},
            {"dilations", cfg.encoder.dilations()}}},
          {"head",
           {{"in_channels", cfg.head.in_channels},
            {"n_classes", cfg.head.n_classes},
            {"blocks", std::move(blocks)}}}};
}

ModelConfig model_config_from_json(const json& j) {
  try {
    ModelConfig cfg;
    const json& e = j.at("encoder");
    cfg.encoder.n_layers = e.at("n_layers").get<std::size_t>();
    cfg.encoder.channels = e.at("channels").get<std::size_t>();
    cfg.encoder.kernel = e.at("kernel").get<std::size_t>();
    cfg.encoder.seg_len = e.at("seg_len").get<std::size_t>();
    if (e.contains("dilations") &&
        e.at("dilations").get<std::vector<std::size_t>>() != cfg.encoder.dilations()) {
      throw ConfigError("model config: dilations must be 1, 2, 4, ... per layer");
    }
    const json& h = j.at("head");
    cfg.head.in_channels = h.at("in_channels").get<std::size_t>();
    cfg.head.n_classes = h.at("n_classes").get<std::size_t>();
    cfg.head.blocks.clear();
    for (const json& b : h.at("blocks")) {
      cfg.head.blocks.push_back({b.at("out_channels").get<std::size_t>(),
                                 b.at("conv_kernel").get<std::size_t>(),
                                 b.at("pool_window").get<std::size_t>(),
                                 b.at("pool_stride").get<std::size_t>()});
    }
    return cfg;
  } catch (const json::exception& ex) {
    throw ConfigError(std::string("model config: ") + ex.what());
  }
}

template <typename T>
std::size_t ModelParams<T>::parameter_count() const {
  std::size_t n = 0;
  visit([&](const std::string&, const BasicTensor<T>& t) { n += t.size(); });
  return n;
}

template <typename T>
std::vector<BasicTensor<T>*> ModelParams<T>::tensors() {
  std::vector<BasicTensor<T>*> out;
  visit([&](const std::string&, BasicTensor<T>& t) { out.push_back(&t); });
  return out;
}

template <typename T>
std::vector<const BasicTensor<T>*> ModelParams<T>::tensors() const {
  std::vector<const BasicTensor<T>*> out;
  visit([&](const std::string&, const BasicTensor<T>& t) { out.push_back(&t); });
  return out;
}

template <typename T>
ModelParams<T> build_model(const ModelConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  return {build_encoder<T>(cfg.encoder, mix_seed(seed, 0)),
          build_head<T>(cfg.head, mix_seed(seed, 1))};
}

template <typename T>
ModelParams<T> zeros_like(const ModelParams<T>& p) {
  return {zeros_like(p.encoder), zeros_like(p.head)};
}

template <typename To, typename From>
ModelParams<To> cast_params(const ModelParams<From>& p) {
  ModelParams<To> out = zeros_like(build_model<To>(p.config(), 0));
  auto dst = out.tensors();
  auto src = p.tensors();
  for (std::size_t i = 0; i < dst.size(); ++i) *dst[i] = src[i]->template cast<To>();
  return out;
}

template <typename T>
BasicTensor<T> model_forward(std::span<const T> segment, const ModelParams<T>& params,
                             ModelTrace<T>* trace) {
  if (!trace) {
    return head_forward(encoder_forward(segment, params.encoder), params.head);
  }
  trace->features = encoder_forward(segment, params.encoder, &trace->encoder);
  return head_forward(trace->features, params.head, &trace->head);
}

template <typename T>
void model_backward(const ModelTrace<T>& trace, const ModelParams<T>& params,
                    const BasicTensor<T>& logit_grad, ModelParams<T>& grads) {
  const BasicTensor<T> d_features = head_backward(trace.head, params.head, logit_grad, grads.head);
  encoder_backward(trace.encoder, params.encoder, d_features, grads.encoder);
}

template <typename T>
T loss_and_gradient(const ModelParams<T>& params, std::span<const T> segment,
                    std::size_t label, ModelParams<T>& grads) {
  ModelTrace<T> trace;
  const BasicTensor<T> logits = model_forward(segment, params, &trace);
  const auto loss = nn::softmax_cross_entropy(logits, label);
  model_backward(trace, params, loss.logit_grad, grads);
  return loss.loss;
}

#define WAVECLS_INSTANTIATE_MODEL(T)                                                         \
  template struct ModelParams<T>;                                                            \
  template ModelParams<T> build_model<T>(const ModelConfig&, std::uint64_t);                 \
  template ModelParams<T> zeros_like<T>(const ModelParams<T>&);                              \
  template BasicTensor<T> model_forward<T>(std::span<const T>, const ModelParams<T>&,        \
                                           ModelTrace<T>*);                                  \
  template void model_backward<T>(const ModelTrace<T>&, const ModelParams<T>&,               \
                                  const BasicTensor<T>&, ModelParams<T>&);                   \
  template T loss_and_gradient<T>(const ModelParams<T>&, std::span<const T>, std::size_t,    \
                                  ModelParams<T>&);

WAVECLS_INSTANTIATE_MODEL(float)
WAVECLS_INSTANTIATE_MODEL(double)

template ModelParams<double> cast_params<double, float>(const ModelParams<float>&);
template ModelParams<float> cast_params<float, double>(const ModelParams<double>&);
template ModelParams<float> cast_params<float, float>(const ModelParams<float>&);

#undef WAVECLS_INSTANTIATE_MODEL

}  // namespace wavecls
