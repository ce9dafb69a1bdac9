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

#include "vground/dataset/sampling.h"

#include <limits>
#include <utility>

#include "vground/util/binio.h"
#include "vground/util/error.h"

namespace vground::dataset {

NegativeSampler::NegativeSampler(const PairSet& pairs, const FeatureStore& store)
    : pairs_(pairs), store_(store) {}

const std::vector<std::size_t>& NegativeSampler::eligible(const std::string& verb) {
  auto it = cache_.find(verb);
  if (it != cache_.end()) return it->second;
  std::vector<std::size_t> slots;
  for (std::size_t i = 0; i < store_.size(); ++i) {
    if (!pairs_.contains(verb, store_.record(i).ref.object_class)) slots.push_back(i);
  }
  return cache_.emplace(verb, std::move(slots)).first->second;
}

const FeatureRecord& NegativeSampler::sample(const std::string& verb, Rng& rng) {
  const std::vector<std::size_t>& slots = eligible(verb);
  if (slots.empty()) {
    throw DataError("verb '" + verb + "' pairs with every class in the store; no negative exists");
  }
  return store_.record(slots[rng.uniform_index(slots.size())]);
}

const FeatureRecord& negative_sample(const std::string& verb, const PairSet& pairs,
                                     const FeatureStore& store, Rng& rng) {
  NegativeSampler sampler(pairs, store);
  return sampler.sample(verb, rng);
}

std::vector<TrainingSample> generate_training_set(const SplitManifest& manifest,
                                                  std::span<const CommandTemplate> templates,
                                                  const FeatureStore& store,
                                                  std::size_t target_size, std::uint64_t seed,
                                                  CommandMode mode) {
  if (mode == CommandMode::kVerbUnknownNoun) {
    throw ConfigError("training commands cannot use verb+unknown-noun mode");
  }
  const std::vector<VerbObjectPair>& pairs = manifest.train_pairs;
  if (pairs.empty()) throw DataError("manifest has no train pairs");
  if (target_size < pairs.size()) {
    throw DataError("target size " + std::to_string(target_size) + " is below the " +
                    std::to_string(pairs.size()) + " train pairs");
  }
  const FeatureStore train_store = store.subset(manifest.train_classes);
  for (const auto& p : pairs) {
    if (train_store.instances_of(p.object_class).empty()) {
      throw DataError("feature store has no instance of train class '" + p.object_class + "'");
    }
  }
  if (train_store.classes().size() < 2) {
    throw DataError("feature store has fewer than 2 train classes");
  }
  const std::vector<CommandTemplate> usable = templates_for(templates, mode);
  if (usable.empty()) {
    throw DataError(std::string("no template applies to mode ") + to_string(mode));
  }

  Rng rng(seed);
  const std::size_t n = pairs.size();
  std::vector<std::size_t> uses(n, target_size / n);
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(order.begin(), order.end());
  for (std::size_t i = 0; i < target_size % n; ++i) ++uses[order[i]];

  const PairSet pair_set(manifest.all_pairs());
  NegativeSampler negatives(pair_set, train_store);
  std::vector<TrainingSample> samples;
  samples.reserve(2 * target_size);
  for (std::size_t i = 0; i < n; ++i) {
    const VerbObjectPair& pair = pairs[i];
    const std::vector<std::size_t>& instances = train_store.instances_of(pair.object_class);
    for (std::size_t k = 0; k < uses[i]; ++k) {
      const CommandTemplate& tmpl = usable[rng.uniform_index(usable.size())];
      const FeatureRecord& pos = train_store.record(instances[rng.uniform_index(instances.size())]);
      std::vector<std::string> tokens = tokenize(tmpl.render(pair.verb, pair.object_class));
      const FeatureRecord& neg = negatives.sample(pair.verb, rng);
      samples.push_back({tokens, pair.verb, pos.ref, pos.values, +1});
      samples.push_back({std::move(tokens), pair.verb, neg.ref, neg.values, -1});
    }
  }
  rng.shuffle(samples.begin(), samples.end());
  return samples;
}

namespace {

constexpr std::string_view kSamplesMagic = "VGSMPL01";

void put_string(ByteWriter& w, std::string_view s) {
  if (s.size() > std::numeric_limits<std::uint16_t>::max()) {
    throw DataError("string too long for samples file");
  }
  w.u16(static_cast<std::uint16_t>(s.size()));
  w.bytes(s);
}

std::string get_string(ByteReader& r) { return std::string(r.bytes(r.u16())); }

}  // namespace

std::string serialize_samples(std::span<const TrainingSample> samples) {
  const std::uint32_t dim = samples.empty() ? 0 : static_cast<std::uint32_t>(samples[0].feature.size());
  ByteWriter w;
  w.bytes(kSamplesMagic);
  w.u32(dim);
  w.u32(static_cast<std::uint32_t>(samples.size()));
  for (const TrainingSample& s : samples) {
    if (s.feature.size() != dim) throw DataError("samples have inconsistent feature dims");
    w.u8(static_cast<std::uint8_t>(static_cast<std::int8_t>(s.label)));
    put_string(w, s.verb);
    put_string(w, s.object.object_class);
    w.u32(s.object.instance_id);
    w.u16(static_cast<std::uint16_t>(s.tokens.size()));
    for (const auto& t : s.tokens) put_string(w, t);
    w.f32s(s.feature);
  }
  return w.take();
}

std::vector<TrainingSample> deserialize_samples(std::string_view bytes) {
  ByteReader r(bytes, "samples");
  if (r.remaining() < kSamplesMagic.size() || r.bytes(kSamplesMagic.size()) != kSamplesMagic) {
    throw DataError("samples: bad magic");
  }
  const std::uint32_t dim = r.u32();
  const std::uint32_t count = r.u32();
  std::vector<TrainingSample> out;
  out.reserve(count);
  for (std::uint32_t i = 0; i < count; ++i) {
    TrainingSample s;
    s.label = static_cast<std::int8_t>(r.u8());
    if (s.label != 1 && s.label != -1) {
      throw DataError("samples: record " + std::to_string(i) + " has label " + std::to_string(s.label));
    }
    s.verb = get_string(r);
    s.object.object_class = get_string(r);
    s.object.instance_id = r.u32();
    const std::uint16_t n_tokens = r.u16();
    for (std::uint16_t k = 0; k < n_tokens; ++k) s.tokens.push_back(get_string(r));
    s.feature.resize(dim);
    r.f32s(s.feature);
    out.push_back(std::move(s));
  }
  if (!r.at_end()) throw DataError("samples: trailing bytes");
  return out;
}

void save_samples(const std::string& path, std::span<const TrainingSample> samples) {
  write_file(path, serialize_samples(samples));
}

std::vector<TrainingSample> load_samples(const std::string& path) {
  try {
    return deserialize_samples(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace vground::dataset
