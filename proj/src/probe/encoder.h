// Copyright 2026 The measkit Authors.
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

// Internal encoder math, templated on the scalar so the gradient check can
// run the same code in double precision.

#ifndef MEASKIT_PROBE_ENCODER_H_
#define MEASKIT_PROBE_ENCODER_H_

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "measkit/probe_model.h"

namespace measkit::probe_detail {

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline constexpr double kLayerNormEps = 1e-12;

template <typename T>
struct LayerParams {
  Mat<T> wq, bq, wk, bk, wv, bv, wo, bo;
  Mat<T> ln1_g, ln1_b;
  Mat<T> w1, b1, w2, b2;
  Mat<T> ln2_g, ln2_b;
};

// Weights are stored input-major (y = x W + b); vectors are 1 x n.
template <typename T>
struct Params {
  Mat<T> tok, pos, emb_ln_g, emb_ln_b;
  std::vector<LayerParams<T>> layers;
  Mat<T> scale;  // cap x hidden; row r serves index r + 1. Empty when off.
  Mat<T> head_w, head_b, head_ln_g, head_ln_b;
  Mat<T> decoder, decoder_b;
};

// Calls f(name, tensor, trainable) in the canonical order.
template <typename P, typename F>
void visit_params(P& p, F&& f) {
  f(std::string("embeddings.token"), p.tok, false);
  f(std::string("embeddings.position"), p.pos, false);
  f(std::string("embeddings.ln.gamma"), p.emb_ln_g, false);
  f(std::string("embeddings.ln.beta"), p.emb_ln_b, false);
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    auto& L = p.layers[l];
    const std::string pre = "layer" + std::to_string(l) + ".";
    f(pre + "attention.query.weight", L.wq, false);
    f(pre + "attention.query.bias", L.bq, false);
    f(pre + "attention.key.weight", L.wk, false);
    f(pre + "attention.key.bias", L.bk, false);
    f(pre + "attention.value.weight", L.wv, false);
    f(pre + "attention.value.bias", L.bv, false);
    f(pre + "attention.output.weight", L.wo, false);
    f(pre + "attention.output.bias", L.bo, false);
    f(pre + "attention.ln.gamma", L.ln1_g, false);
    f(pre + "attention.ln.beta", L.ln1_b, false);
    f(pre + "ffn.in.weight", L.w1, false);
    f(pre + "ffn.in.bias", L.b1, false);
    f(pre + "ffn.out.weight", L.w2, false);
    f(pre + "ffn.out.bias", L.b2, false);
    f(pre + "ffn.ln.gamma", L.ln2_g, false);
    f(pre + "ffn.ln.beta", L.ln2_b, false);
  }
  if (p.scale.size() > 0) f(std::string("scale_embedding"), p.scale, true);
  f(std::string("head.dense.weight"), p.head_w, true);
  f(std::string("head.dense.bias"), p.head_b, true);
  f(std::string("head.ln.gamma"), p.head_ln_g, true);
  f(std::string("head.ln.beta"), p.head_ln_b, true);
  f(std::string("head.decoder.weight"), p.decoder, true);
  f(std::string("head.decoder.bias"), p.decoder_b, true);
}

template <typename T>
Params<T> allocate_params(const ModelConfig& c, int vocab_size) {
  const int H = c.hidden;
  Params<T> p;
  p.tok.setZero(vocab_size, H);
  p.pos.setZero(c.max_sequence_length, H);
  p.emb_ln_g.setOnes(1, H);
  p.emb_ln_b.setZero(1, H);
  p.layers.resize(c.layers);
  for (auto& L : p.layers) {
    for (Mat<T>* w : {&L.wq, &L.wk, &L.wv, &L.wo}) w->setZero(H, H);
    for (Mat<T>* b : {&L.bq, &L.bk, &L.bv, &L.bo, &L.ln1_b, &L.b2, &L.ln2_b}) {
      b->setZero(1, H);
    }
    L.ln1_g.setOnes(1, H);
    L.ln2_g.setOnes(1, H);
    L.w1.setZero(H, c.ffn);
    L.b1.setZero(1, c.ffn);
    L.w2.setZero(c.ffn, H);
  }
  if (c.scale_embedding) p.scale.setZero(c.scale_cap, H);
  p.head_w.setZero(H, H);
  p.head_b.setZero(1, H);
  p.head_ln_g.setOnes(1, H);
  p.head_ln_b.setZero(1, H);
  p.decoder.setZero(vocab_size, H);
  p.decoder_b.setZero(1, vocab_size);
  return p;
}

template <typename To, typename From>
Params<To> cast_params(const Params<From>& from) {
  Params<To> to;
  auto c = [](const Mat<From>& m) { return Mat<To>(m.template cast<To>()); };
  to.tok = c(from.tok);
  to.pos = c(from.pos);
  to.emb_ln_g = c(from.emb_ln_g);
  to.emb_ln_b = c(from.emb_ln_b);
  for (const auto& L : from.layers) {
    to.layers.push_back({c(L.wq), c(L.bq), c(L.wk), c(L.bk), c(L.wv), c(L.bv),
                         c(L.wo), c(L.bo), c(L.ln1_g), c(L.ln1_b), c(L.w1),
                         c(L.b1), c(L.w2), c(L.b2), c(L.ln2_g), c(L.ln2_b)});
  }
  to.scale = c(from.scale);
  to.head_w = c(from.head_w);
  to.head_b = c(from.head_b);
  to.head_ln_g = c(from.head_ln_g);
  to.head_ln_b = c(from.head_ln_b);
  to.decoder = c(from.decoder);
  to.decoder_b = c(from.decoder_b);
  return to;
}

// ---------------------------------------------------------------------------
// Building blocks

template <typename T>
struct LnCache {
  Mat<T> xhat;
  std::vector<T> inv_std;
};

template <typename T>
Mat<T> layer_norm(const Mat<T>& x, const Mat<T>& g, const Mat<T>& b,
                  LnCache<T>& cache) {
  const Eigen::Index n = x.rows();
  const Eigen::Index d = x.cols();
  cache.xhat.resize(n, d);
  cache.inv_std.resize(n);
  Mat<T> y(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    T mean = x.row(i).sum() / T(d);
    auto centered = (x.row(i).array() - mean).eval();
    T var = centered.square().sum() / T(d);
    T inv = T(1) / std::sqrt(var + T(kLayerNormEps));
    cache.inv_std[i] = inv;
    cache.xhat.row(i) = centered * inv;
    y.row(i) = cache.xhat.row(i).array() * g.row(0).array() + b.row(0).array();
  }
  return y;
}

// dg and db are accumulated when non-null.
template <typename T>
Mat<T> layer_norm_backward(const Mat<T>& dy, const Mat<T>& g,
                           const LnCache<T>& cache, Mat<T>* dg, Mat<T>* db) {
  const Eigen::Index n = dy.rows();
  const Eigen::Index d = dy.cols();
  Mat<T> dx(n, d);
  for (Eigen::Index i = 0; i < n; ++i) {
    auto dxhat = (dy.row(i).array() * g.row(0).array()).eval();
    T mean_d = dxhat.sum() / T(d);
    T mean_dx = (dxhat * cache.xhat.row(i).array()).sum() / T(d);
    dx.row(i) = (dxhat - mean_d - cache.xhat.row(i).array() * mean_dx) *
                cache.inv_std[i];
    if (dg) dg->row(0).array() += dy.row(i).array() * cache.xhat.row(i).array();
    if (db) db->row(0) += dy.row(i);
  }
  return dx;
}

template <typename T>
T gelu(T x) {
  return T(0.5) * x * (T(1) + std::erf(x / std::sqrt(T(2))));
}

template <typename T>
T gelu_grad(T x) {
  const T cdf = T(0.5) * (T(1) + std::erf(x / std::sqrt(T(2))));
  const T pdf = std::exp(T(-0.5) * x * x) / std::sqrt(T(2) * T(M_PI));
  return cdf + x * pdf;
}

template <typename T>
Mat<T> apply_gelu(const Mat<T>& z) {
  return z.unaryExpr([](T v) { return gelu(v); });
}

template <typename T>
Mat<T> add_bias(Mat<T> x, const Mat<T>& b) {
  x.rowwise() += b.row(0);
  return x;
}

// ---------------------------------------------------------------------------
// Encoder

template <typename T>
struct LayerCache {
  Mat<T> x;        // layer input, n x H
  int row = -1;    // query row, or -1 for all rows
  Mat<T> q, k, v;  // q has one row per query row
  std::vector<Mat<T>> probs;  // per head, queries x n
  Mat<T> ctx;
  LnCache<T> ln1;
  Mat<T> x1;
  Mat<T> z1;
  LnCache<T> ln2;
};

template <typename T>
Mat<T> layer_forward(const LayerParams<T>& L, int heads, const Mat<T>& x,
                     int row, LayerCache<T>& c) {
  const Eigen::Index n = x.rows();
  const Eigen::Index H = x.cols();
  const Eigen::Index dh = H / heads;
  const T scale = T(1) / std::sqrt(T(dh));
  c.x = x;
  c.row = row;
  Mat<T> xq = row < 0 ? x : Mat<T>(x.row(row));
  c.q = add_bias<T>(xq * L.wq, L.bq);
  c.k = add_bias<T>(x * L.wk, L.bk);
  c.v = add_bias<T>(x * L.wv, L.bv);
  const Eigen::Index r = c.q.rows();
  c.ctx.resize(r, H);
  c.probs.resize(heads);
  for (int h = 0; h < heads; ++h) {
    auto qh = c.q.middleCols(h * dh, dh);
    auto kh = c.k.middleCols(h * dh, dh);
    auto vh = c.v.middleCols(h * dh, dh);
    Mat<T> s = (qh * kh.transpose()) * scale;
    for (Eigen::Index i = 0; i < r; ++i) {
      T mx = s.row(i).maxCoeff();
      s.row(i) = (s.row(i).array() - mx).exp();
      s.row(i) /= s.row(i).sum();
    }
    c.ctx.middleCols(h * dh, dh) = s * vh;
    c.probs[h] = std::move(s);
  }
  (void)n;
  Mat<T> attn = add_bias<T>(c.ctx * L.wo, L.bo);
  c.x1 = layer_norm<T>(xq + attn, L.ln1_g, L.ln1_b, c.ln1);
  c.z1 = add_bias<T>(c.x1 * L.w1, L.b1);
  Mat<T> ffn = add_bias<T>(apply_gelu<T>(c.z1) * L.w2, L.b2);
  return layer_norm<T>(c.x1 + ffn, L.ln2_g, L.ln2_b, c.ln2);
}

// Gradient with respect to the layer input only.
template <typename T>
Mat<T> layer_backward(const LayerParams<T>& L, int heads, const LayerCache<T>& c,
                      const Mat<T>& dy) {
  const Eigen::Index H = c.x.cols();
  const Eigen::Index dh = H / heads;
  const T scale = T(1) / std::sqrt(T(dh));
  Mat<T> ds2 = layer_norm_backward<T>(dy, L.ln2_g, c.ln2, nullptr, nullptr);
  Mat<T> dz1 = (ds2 * L.w2.transpose()).cwiseProduct(
      c.z1.unaryExpr([](T v) { return gelu_grad(v); }));
  Mat<T> dx1 = ds2 + dz1 * L.w1.transpose();
  Mat<T> ds1 = layer_norm_backward<T>(dx1, L.ln1_g, c.ln1, nullptr, nullptr);
  Mat<T> dctx = ds1 * L.wo.transpose();
  Mat<T> dq(c.q.rows(), H), dk(c.k.rows(), H), dv(c.v.rows(), H);
  for (int h = 0; h < heads; ++h) {
    const Mat<T>& p = c.probs[h];
    auto qh = c.q.middleCols(h * dh, dh);
    auto kh = c.k.middleCols(h * dh, dh);
    auto vh = c.v.middleCols(h * dh, dh);
    auto dctx_h = dctx.middleCols(h * dh, dh);
    Mat<T> dp = dctx_h * vh.transpose();
    dv.middleCols(h * dh, dh) = p.transpose() * dctx_h;
    Mat<T> dsc(p.rows(), p.cols());
    for (Eigen::Index i = 0; i < p.rows(); ++i) {
      T dot = p.row(i).dot(dp.row(i));
      dsc.row(i) = p.row(i).array() * (dp.row(i).array() - dot);
    }
    dsc *= scale;
    dq.middleCols(h * dh, dh) = dsc * kh;
    dk.middleCols(h * dh, dh) = dsc.transpose() * qh;
  }
  Mat<T> dx = dk * L.wk.transpose() + dv * L.wv.transpose();
  Mat<T> dxq = ds1 + dq * L.wq.transpose();
  if (c.row < 0) {
    dx += dxq;
  } else {
    dx.row(c.row) += dxq.row(0);
  }
  return dx;
}

template <typename T>
struct EncoderCache {
  LnCache<T> emb_ln;
  std::vector<LayerCache<T>> layers;
};

// Hidden state (1 x H) of the last layer at the mask position.
template <typename T>
Mat<T> encoder_forward(const Params<T>& p, const ModelConfig& config,
                       const EncodedInput& in, EncoderCache<T>& cache) {
  const Eigen::Index n = static_cast<Eigen::Index>(in.ids.size());
  Mat<T> e(n, config.hidden);
  const bool use_scale = p.scale.size() > 0;
  for (Eigen::Index t = 0; t < n; ++t) {
    e.row(t) = p.tok.row(in.ids[t]) + p.pos.row(t);
    if (use_scale && in.scale_indices[t] > 0) {
      e.row(t) += p.scale.row(in.scale_indices[t] - 1);
    }
  }
  Mat<T> x = layer_norm<T>(e, p.emb_ln_g, p.emb_ln_b, cache.emb_ln);
  cache.layers.resize(p.layers.size());
  for (std::size_t l = 0; l < p.layers.size(); ++l) {
    const bool last = l + 1 == p.layers.size();
    x = layer_forward<T>(p.layers[l], config.heads, x,
                         last ? in.mask_position : -1, cache.layers[l]);
  }
  if (p.layers.empty()) return Mat<T>(x.row(in.mask_position));
  return x;
}

// Accumulates into dscale (cap x H) the gradient of dh (1 x H).
template <typename T>
void encoder_backward_scale(const Params<T>& p, const ModelConfig& config,
                            const EncodedInput& in,
                            const EncoderCache<T>& cache, const Mat<T>& dh,
                            Mat<T>& dscale) {
  const Eigen::Index n = static_cast<Eigen::Index>(in.ids.size());
  Mat<T> dx;
  if (p.layers.empty()) {
    dx.setZero(n, config.hidden);
    dx.row(in.mask_position) = dh.row(0);
  } else {
    dx = dh;
    for (std::size_t l = p.layers.size(); l-- > 0;) {
      dx = layer_backward<T>(p.layers[l], config.heads, cache.layers[l], dx);
    }
  }
  Mat<T> de = layer_norm_backward<T>(dx, p.emb_ln_g, cache.emb_ln, nullptr,
                                     nullptr);
  for (Eigen::Index t = 0; t < n; ++t) {
    if (in.scale_indices[t] > 0) dscale.row(in.scale_indices[t] - 1) += de.row(t);
  }
}

// ---------------------------------------------------------------------------
// Head

template <typename T>
struct HeadCache {
  Mat<T> h, z;
  LnCache<T> ln;
  Mat<T> u;
};

template <typename T>
void head_forward(const Params<T>& p, const Mat<T>& h, HeadCache<T>& c) {
  c.h = h;
  c.z = add_bias<T>(h * p.head_w, p.head_b);
  c.u = layer_norm<T>(apply_gelu<T>(c.z), p.head_ln_g, p.head_ln_b, c.ln);
}

template <typename T>
T decoder_score(const Params<T>& p, const Mat<T>& u, int id) {
  return p.decoder.row(id).dot(u.row(0)) + p.decoder_b(0, id);
}

// Candidate-restricted cross-entropy with the gold class marginalized.
// Returns the loss; fills dscore (one entry per candidate).
template <typename T>
T class_cross_entropy(const std::vector<T>& scores,
                      const std::vector<char>& gold, std::vector<T>& dscore) {
  T mx = scores[0];
  for (T s : scores) mx = std::max(mx, s);
  std::vector<T> prob(scores.size());
  T total = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    prob[i] = std::exp(scores[i] - mx);
    total += prob[i];
  }
  T gold_mass = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    prob[i] /= total;
    if (gold[i]) gold_mass += prob[i];
  }
  dscore.resize(scores.size());
  for (std::size_t i = 0; i < scores.size(); ++i) {
    dscore[i] = prob[i] - (gold[i] ? prob[i] / gold_mass : T(0));
  }
  return -std::log(gold_mass);
}

// Trainable-parameter gradient of one sample in compact form.
template <typename T>
struct CompactGrad {
  T loss = 0;
  std::vector<int> ids;     // candidate vocabulary ids
  std::vector<T> dscore;    // aligned with ids
  Mat<T> u;                 // decoder input
  Mat<T> h;                 // head input
  Mat<T> dz;                // head pre-activation gradient
  Mat<T> dln_g, dln_b;
  std::vector<std::pair<int, Mat<T>>> scale_rows;  // (row, gradient)
};

// Candidates with gold-class flags, resolved against the vocabulary.
struct Target {
  std::vector<int> ids;
  std::vector<char> gold;
};

template <typename T>
CompactGrad<T> head_gradient(const Params<T>& p, const Mat<T>& h,
                             const Target& target) {
  CompactGrad<T> g;
  HeadCache<T> hc;
  head_forward<T>(p, h, hc);
  std::vector<T> scores;
  for (int id : target.ids) scores.push_back(decoder_score<T>(p, hc.u, id));
  g.loss = class_cross_entropy<T>(scores, target.gold, g.dscore);
  g.ids = target.ids;
  g.u = hc.u;
  g.h = h;
  Mat<T> du = Mat<T>::Zero(1, h.cols());
  for (std::size_t i = 0; i < g.ids.size(); ++i) {
    du.row(0) += g.dscore[i] * p.decoder.row(g.ids[i]);
  }
  g.dln_g.setZero(1, h.cols());
  g.dln_b.setZero(1, h.cols());
  Mat<T> dgelu = layer_norm_backward<T>(du, p.head_ln_g, hc.ln, &g.dln_g,
                                        &g.dln_b);
  g.dz = dgelu.cwiseProduct(hc.z.unaryExpr([](T v) { return gelu_grad(v); }));
  return g;
}

template <typename T>
CompactGrad<T> full_gradient(const Params<T>& p, const ModelConfig& config,
                             const EncodedInput& in, const Target& target) {
  EncoderCache<T> cache;
  Mat<T> h = encoder_forward<T>(p, config, in, cache);
  CompactGrad<T> g = head_gradient<T>(p, h, target);
  if (p.scale.size() == 0) return g;
  bool indexed = false;
  for (int idx : in.scale_indices) indexed = indexed || idx > 0;
  if (!indexed) return g;
  Mat<T> dh = g.dz * p.head_w.transpose();
  Mat<T> dscale = Mat<T>::Zero(p.scale.rows(), p.scale.cols());
  encoder_backward_scale<T>(p, config, in, cache, dh, dscale);
  std::vector<char> seen(p.scale.rows(), 0);
  for (int idx : in.scale_indices) {
    if (idx > 0 && !seen[idx - 1]) {
      seen[idx - 1] = 1;
      g.scale_rows.emplace_back(idx - 1, Mat<T>(dscale.row(idx - 1)));
    }
  }
  std::sort(g.scale_rows.begin(), g.scale_rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  return g;
}

// Adds a compact gradient into dense per-tensor buffers shaped like the
// trainable tensors of `p` (same order as visit_params, trainable only).
template <typename T>
struct TrainableGrads {
  Mat<T> scale, head_w, head_b, head_ln_g, head_ln_b, decoder, decoder_b;

  explicit TrainableGrads(const Params<T>& p) {
    scale.setZero(p.scale.rows(), p.scale.cols());
    head_w.setZero(p.head_w.rows(), p.head_w.cols());
    head_b.setZero(1, p.head_b.cols());
    head_ln_g.setZero(1, p.head_ln_g.cols());
    head_ln_b.setZero(1, p.head_ln_b.cols());
    decoder.setZero(p.decoder.rows(), p.decoder.cols());
    decoder_b.setZero(1, p.decoder_b.cols());
  }

  void add(const CompactGrad<T>& g) {
    for (std::size_t i = 0; i < g.ids.size(); ++i) {
      decoder.row(g.ids[i]) += g.dscore[i] * g.u.row(0);
      decoder_b(0, g.ids[i]) += g.dscore[i];
    }
    head_ln_g += g.dln_g;
    head_ln_b += g.dln_b;
    head_b += g.dz;
    head_w.noalias() += g.h.transpose() * g.dz;
    for (const auto& [row, grad] : g.scale_rows) scale.row(row) += grad.row(0);
  }

  template <typename F>
  void visit(F&& f) {
    if (scale.size() > 0) f(scale);
    f(head_w);
    f(head_b);
    f(head_ln_g);
    f(head_ln_b);
    f(decoder);
    f(decoder_b);
  }
};

}  // namespace measkit::probe_detail

#endif  // MEASKIT_PROBE_ENCODER_H_
