// Copyright 2026 The Tiers Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TIERS_THALAMO_HPP_
#define TIERS_THALAMO_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tiers/error.hpp"
#include "tiers/rng.hpp"

namespace tiers::thalamo {

using Vector = std::vector<double>;

inline double dot(const Vector& a, const Vector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double distance(const Vector& a, const Vector& b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// Category prototypes (rows of W) and the learning rate k.
class CategoryBank {
 public:
  CategoryBank(std::vector<Vector> rows, double k) : rows_(std::move(rows)), k_(k) {
    if (rows_.empty()) throw Error(ErrorKind::kNoData, "category bank has no rows");
    if (!(k >= 0 && k <= 1)) throw Error(ErrorKind::kValidation, "learning rate outside [0, 1]");
    for (const Vector& r : rows_) {
      if (r.size() != rows_.front().size()) throw Error(ErrorKind::kDimension, "ragged rows");
      for (double v : r) {
        if (!std::isfinite(v)) throw Error(ErrorKind::kValidation, "non-finite weight");
      }
    }
  }

  // Rows drawn uniformly from the box [lo, hi].
  static CategoryBank from_box(std::size_t count, const Vector& lo, const Vector& hi, double k,
                               std::uint64_t seed) {
    if (lo.size() != hi.size()) throw Error(ErrorKind::kDimension, "box bounds differ in size");
    Rng rng(mix_seed(seed));
    std::vector<Vector> rows(count, Vector(lo.size()));
    for (Vector& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) r[i] = lo[i] + (hi[i] - lo[i]) * rng.uniform01();
    }
    return CategoryBank(std::move(rows), k);
  }

  // Box covering `data`.
  static CategoryBank from_data_box(std::size_t count, const std::vector<Vector>& data, double k,
                                    std::uint64_t seed) {
    if (data.empty()) throw Error(ErrorKind::kNoData, "no data for the bounding box");
    Vector lo = data.front();
    Vector hi = data.front();
    for (const Vector& x : data) {
      if (x.size() != lo.size()) throw Error(ErrorKind::kDimension, "ragged data");
      for (std::size_t i = 0; i < x.size(); ++i) {
        lo[i] = std::min(lo[i], x[i]);
        hi[i] = std::max(hi[i], x[i]);
      }
    }
    return from_box(count, lo, hi, k, seed);
  }

  std::size_t size() const { return rows_.size(); }
  std::size_t dim() const { return rows_.front().size(); }
  double k() const { return k_; }
  const std::vector<Vector>& rows() const { return rows_; }
  Vector& row(std::size_t j) { return rows_.at(j); }
  const Vector& row(std::size_t j) const { return rows_.at(j); }

 private:
  std::vector<Vector> rows_;
  double k_;
};

struct CoreStep {
  std::vector<std::size_t> responders;  // every row tied for the top score
  Vector residual;                      // x minus the mean updated responder
};

// Rows with the maximal dot product respond; each moves toward x by k;
// the residual subtracts the mean of the updated responders from x.
inline std::vector<std::size_t> responders(const CategoryBank& bank, const Vector& x) {
  if (x.size() != bank.dim()) {
    throw Error(ErrorKind::kDimension, "input has " + std::to_string(x.size()) +
                                           " components, bank rows have " +
                                           std::to_string(bank.dim()));
  }
  std::vector<std::size_t> out;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < bank.size(); ++j) {
    const double score = dot(x, bank.row(j));
    if (score > best) {
      best = score;
      out.assign(1, j);
    } else if (score == best) {
      out.push_back(j);
    }
  }
  return out;
}

inline CoreStep core_step(CategoryBank& bank, const Vector& x) {
  CoreStep out;
  out.responders = responders(bank, x);
  for (std::size_t j : out.responders) {
    Vector& w = bank.row(j);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += bank.k() * (x[i] - w[i]);
  }
  out.residual = x;
  const double share = 1.0 / static_cast<double>(out.responders.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double mean = 0;
    for (std::size_t j : out.responders) mean += bank.row(j)[i];
    out.residual[i] = x[i] - mean * share;
  }
  return out;
}

// Presents `data` for `epochs` passes, reshuffled each pass.
inline void train_core(CategoryBank& bank, const std::vector<Vector>& data, std::size_t epochs,
                       std::uint64_t seed) {
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  Rng rng(mix_seed(seed ^ 0x5eedULL));
  for (std::size_t e = 0; e < epochs; ++e) {
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.index(i)]);
    for (std::size_t i : order) core_step(bank, data[i]);
  }
}

// Lowest-index responder, without learning.
inline std::size_t winner(const CategoryBank& bank, const Vector& x) {
  return responders(bank, x).front();
}

// Transition weights between columns, potentiated by a fixed increment.
class SequenceMemory {
 public:
  explicit SequenceMemory(double increment = 1.0) : increment_(increment) {
    if (!(increment > 0)) throw Error(ErrorKind::kValidation, "increment must be positive");
  }

  void potentiate(std::size_t prev, std::size_t curr) { weights_[{prev, curr}] += increment_; }

  double weight(std::size_t prev, std::size_t curr) const {
    const auto it = weights_.find({prev, curr});
    return it == weights_.end() ? 0.0 : it->second;
  }

  // Strongest successor of `prev`; ties go to the lowest column id.
  std::optional<std::size_t> recall(std::size_t prev) const {
    std::optional<std::size_t> best;
    double best_weight = 0;
    for (auto it = weights_.lower_bound({prev, 0}); it != weights_.end() && it->first.first == prev;
         ++it) {
      if (it->second > best_weight) {
        best_weight = it->second;
        best = it->first.second;
      }
    }
    return best;
  }

  const std::map<std::pair<std::size_t, std::size_t>, double>& transitions() const {
    return weights_;
  }

 private:
  double increment_;
  std::map<std::pair<std::size_t, std::size_t>, double> weights_;
};

inline void matrix_step(SequenceMemory& memory, std::size_t prev, std::size_t curr) {
  memory.potentiate(prev, curr);
}

// Potentiates every consecutive pair; a single element changes nothing.
inline void train_sequence(SequenceMemory& memory, const std::vector<std::size_t>& columns) {
  for (std::size_t l = 1; l < columns.size(); ++l) matrix_step(memory, columns[l - 1], columns[l]);
}

struct DemoOptions {
  std::size_t prototypes = 16;
  double learning_rate = 0.1;
  std::uint64_t seed = 0;
  std::size_t epochs = 50;
  bool one_hot = true;         // otherwise a random embedding per token
  std::size_t random_dim = 16;
};

struct DemoResult {
  std::vector<std::string> vocabulary;  // first-appearance order
  std::vector<std::size_t> categories;  // winning row per stream token
  SequenceMemory transitions;
  CategoryBank bank;

  std::string labels() const {
    std::string out;
    for (std::size_t i = 0; i < categories.size(); ++i) {
      out += (i ? " C" : "C") + std::to_string(categories[i]);
    }
    return out;
  }
};

// Level 1 categorises each token with the core loop (trained, then frozen);
// level 2 learns the category transitions with the matrix loop.
inline DemoResult nested_demo(const std::vector<std::string>& stream, const DemoOptions& options) {
  if (stream.empty()) throw Error(ErrorKind::kNoData, "empty token stream");
  if (options.prototypes == 0) throw Error(ErrorKind::kValidation, "need at least one prototype");
  std::vector<std::string> vocabulary;
  std::map<std::string, std::size_t> index;
  for (const std::string& t : stream) {
    if (index.emplace(t, vocabulary.size()).second) vocabulary.push_back(t);
  }
  std::vector<Vector> embedding;
  Rng rng(mix_seed(options.seed ^ 0xe3bedULL));
  for (std::size_t v = 0; v < vocabulary.size(); ++v) {
    if (options.one_hot) {
      Vector e(vocabulary.size(), 0.0);
      e[v] = 1.0;
      embedding.push_back(std::move(e));
    } else {
      Vector e(options.random_dim);
      for (double& c : e) c = 2 * rng.uniform01() - 1;
      embedding.push_back(std::move(e));
    }
  }
  CategoryBank bank = CategoryBank::from_data_box(options.prototypes, embedding,
                                                  options.learning_rate, options.seed);
  for (std::size_t e = 0; e < options.epochs; ++e) {
    for (const std::string& t : stream) core_step(bank, embedding[index.at(t)]);
  }
  DemoResult out{vocabulary, {}, SequenceMemory(), bank};
  for (const std::string& t : stream) out.categories.push_back(winner(bank, embedding[index.at(t)]));
  train_sequence(out.transitions, out.categories);
  return out;
}

// Word classes and words of the small example grammar
// S -> NP VP, NP -> N | ADJ N, VP -> V | V ADV.
inline const std::map<std::string, std::vector<std::string>>& toy_word_classes() {
  static const std::map<std::string, std::vector<std::string>> classes = {
      {"N", {"time", "dogs", "ideas"}},
      {"V", {"passed", "jump", "slept"}},
      {"ADJ", {"happy", "his", "green"}},
      {"ADV", {"quickly", "furiously"}},
  };
  return classes;
}

struct ToyToken {
  std::string word;
  std::string word_class;
};

inline std::vector<ToyToken> toy_stream(std::size_t sentences, std::uint64_t seed) {
  Rng rng(mix_seed(seed));
  const auto& classes = toy_word_classes();
  const auto pick = [&](const std::string& c) {
    const auto& words = classes.at(c);
    return ToyToken{words[rng.index(words.size())], c};
  };
  std::vector<ToyToken> out;
  for (std::size_t s = 0; s < sentences; ++s) {
    if (rng.index(2) == 1) out.push_back(pick("ADJ"));
    out.push_back(pick("N"));
    out.push_back(pick("V"));
    if (rng.index(2) == 1) out.push_back(pick("ADV"));
  }
  return out;
}

struct Clusters {
  std::vector<Vector> points;
  std::vector<std::size_t> labels;
  std::vector<Vector> centers;
  double radius = 0;
};

// Three clusters of points uniform in balls of `radius`, centred on
// orthogonal axes at distance 10 * radius from the origin.
inline Clusters synthetic_clusters(std::size_t per_cluster, std::size_t dim, double radius,
                                   std::uint64_t seed) {
  if (dim < 3) throw Error(ErrorKind::kDimension, "clusters need at least 3 dimensions");
  Clusters c;
  c.radius = radius;
  for (std::size_t k = 0; k < 3; ++k) {
    Vector center(dim, 0.0);
    center[k] = 10 * radius;
    c.centers.push_back(center);
  }
  Rng rng(mix_seed(seed));
  for (std::size_t k = 0; k < c.centers.size(); ++k) {
    for (std::size_t n = 0; n < per_cluster; ++n) {
      Vector offset(dim);
      do {
        for (double& v : offset) v = (2 * rng.uniform01() - 1) * radius;
      } while (distance(offset, Vector(dim, 0.0)) > radius);
      Vector p = c.centers[k];
      for (std::size_t i = 0; i < dim; ++i) p[i] += offset[i];
      c.points.push_back(std::move(p));
      c.labels.push_back(k);
    }
  }
  return c;
}

}  // namespace tiers::thalamo

#endif  // TIERS_THALAMO_HPP_
