// Copyright 2026 The vground Authors.
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

#include "vground/dataset/synth.h"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"
#include "vground/util/error.h"
#include "vground/util/rng.h"

namespace vground::dataset {
namespace {

using nlohmann::json;

constexpr std::size_t kMaxVerbsPerClass = 3;

std::string numbered(const char* stem, std::size_t i, std::size_t count) {
  const std::size_t width = std::max<std::size_t>(2, std::to_string(count - 1).size());
  std::string digits = std::to_string(i);
  return stem + std::string(width - digits.size(), '0') + digits;
}

std::vector<double> random_unit(std::size_t dim, Rng& rng) {
  std::vector<double> v(dim);
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (double& x : v) {
      x = rng.normal();
      norm2 += x * x;
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (double& x : v) x *= inv;
  return v;
}

}  // namespace

std::string SynthSpec::to_json() const {
  json j;
  j["n_verbs"] = n_verbs;
  j["n_classes"] = n_classes;
  j["instances_per_class"] = instances_per_class;
  j["dim"] = dim;
  j["cluster_separation"] = cluster_separation;
  j["noise_sigma"] = noise_sigma;
  j["seed"] = seed;
  return j.dump(2) + "\n";
}

SynthSpec SynthSpec::from_json(std::string_view text) {
  SynthSpec s;
  try {
    const json j = json::parse(text);
    if (!j.is_object()) throw DataError("synth spec must be a JSON object");
    for (const auto& [key, value] : j.items()) {
      if (key == "n_verbs") s.n_verbs = value.get<std::size_t>();
      else if (key == "n_classes") s.n_classes = value.get<std::size_t>();
      else if (key == "instances_per_class") s.instances_per_class = value.get<std::size_t>();
      else if (key == "dim") s.dim = value.get<std::uint32_t>();
      else if (key == "cluster_separation") s.cluster_separation = value.get<double>();
      else if (key == "noise_sigma") s.noise_sigma = value.get<double>();
      else if (key == "seed") s.seed = value.get<std::uint64_t>();
      else throw ConfigError("synth spec: unknown field '" + key + "'");
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("synth spec: ") + e.what());
  }
  return s;
}

SynthData synth_features(const SynthSpec& spec) {
  if (spec.n_verbs < 2 || spec.n_classes < spec.n_verbs) {
    throw ConfigError("synth needs n_classes >= n_verbs >= 2");
  }
  if (spec.dim < 8) throw ConfigError("synth needs dim >= 8");
  if (spec.instances_per_class < 1) throw ConfigError("synth needs instances_per_class >= 1");
  if (spec.noise_sigma < 0.0 || spec.cluster_separation <= 0.0) {
    throw ConfigError("synth needs cluster_separation > 0 and noise_sigma >= 0");
  }

  Rng rng(spec.seed);
  std::vector<std::vector<double>> directions;
  for (std::size_t v = 0; v < spec.n_verbs; ++v) directions.push_back(random_unit(spec.dim, rng));

  SynthData out{FeatureStore(spec.dim), {}};
  std::vector<std::size_t> verb_ids(spec.n_verbs);
  for (std::size_t c = 0; c < spec.n_classes; ++c) {
    const std::string name = numbered("object", c, spec.n_classes);
    const std::size_t want = std::min(1 + rng.uniform_index(kMaxVerbsPerClass), spec.n_verbs);
    std::set<std::size_t> verbs;
    if (c < spec.n_verbs) verbs.insert(c);
    // Partial Fisher-Yates over the verb ids.
    for (std::size_t i = 0; i < spec.n_verbs; ++i) verb_ids[i] = i;
    for (std::size_t i = 0; verbs.size() < want; ++i) {
      const std::size_t j = i + rng.uniform_index(spec.n_verbs - i);
      std::swap(verb_ids[i], verb_ids[j]);
      verbs.insert(verb_ids[i]);
    }

    std::vector<double> centroid(spec.dim, 0.0);
    for (std::size_t v : verbs) {
      for (std::size_t d = 0; d < spec.dim; ++d) centroid[d] += directions[v][d];
      out.pairs.push_back({numbered("verb", v, spec.n_verbs), name});
    }
    double norm2 = 0.0;
    for (double x : centroid) norm2 += x * x;
    const double scale = spec.cluster_separation / std::sqrt(norm2);
    for (double& x : centroid) x *= scale;

    for (std::size_t k = 0; k < spec.instances_per_class; ++k) {
      FeatureRecord rec{{name, static_cast<std::uint32_t>(k)}, std::vector<float>(spec.dim)};
      for (std::size_t d = 0; d < spec.dim; ++d) {
        rec.values[d] = static_cast<float>(centroid[d] + spec.noise_sigma * rng.normal());
      }
      out.store.add(std::move(rec));
    }
  }
  std::sort(out.pairs.begin(), out.pairs.end());
  return out;
}

}  // namespace vground::dataset
