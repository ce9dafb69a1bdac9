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

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "vground/dataset/commands.h"
#include "vground/dataset/split.h"
#include "vground/dataset/synth.h"
#include "vground/train/checkpoint.h"
#include "vground/train/trainer.h"
#include "vground/util/binio.h"
#include "vground/util/error.h"
#include "vground/util/rng.h"

using namespace vground;
using namespace vground::train;
using nlohmann::json;

namespace {

std::vector<dataset::TrainingSample> small_samples(std::size_t n_positive = 120) {
  dataset::SynthSpec spec;
  spec.n_verbs = 6;
  spec.n_classes = 16;
  spec.instances_per_class = 4;
  spec.dim = 16;
  spec.seed = 3;
  const auto data = dataset::synth_features(spec);
  const auto m = dataset::split_by_object(data.pairs, 0.25, 1);
  const auto templates =
      dataset::load_templates(std::string(VGROUND_SHIPPED_DATA_DIR) + "/templates.txt");
  return dataset::generate_training_set(m, templates, data.store, n_positive, 2);
}

TrainConfig small_config() {
  TrainConfig c;
  c.epochs = 3;
  c.lr = 1e-3;
  c.word_dim = 8;
  c.hidden_dim = 12;
  c.output_dim = 16;
  c.seed = 5;
  return c;
}

struct Parts {
  json header;
  std::string payload;
};

Parts split_checkpoint(const std::string& bytes) {
  ByteReader r(bytes.substr(8, 8), "len");
  const std::uint64_t n = r.u64();
  return {json::parse(bytes.substr(16, n)), bytes.substr(16 + n)};
}

std::string join_checkpoint(const Parts& p) {
  const std::string text = p.header.dump();
  ByteWriter w;
  w.bytes(kCheckpointMagic);
  w.u64(text.size());
  w.bytes(text);
  w.bytes(p.payload);
  return w.take();
}

CheckpointError::Kind load_error_kind(const std::string& bytes) {
  try {
    deserialize_checkpoint(bytes);
  } catch (const CheckpointError& e) {
    return e.kind();
  }
  FAIL("checkpoint loaded without error");
  return CheckpointError::Kind::kBadMagic;
}

}  // namespace

TEST_CASE("TrainConfig JSON round trip and validation") {
  TrainConfig c = small_config();
  c.cell = core::CellType::kGated;
  c.unk_policy = dataset::UnkPolicy::kReservedUnk;
  c.early_stop_patience = 4;
  c.validation_fraction = 0.1;
  CHECK(TrainConfig::from_json(c.to_json()) == c);
  CHECK(TrainConfig::from_json(json::object()) == TrainConfig{});
  CHECK_THROWS_AS(TrainConfig::from_json(json{{"learning_rate", 0.1}}), ConfigError);
  CHECK_THROWS_AS(TrainConfig::from_json(json{{"cell", "lstm"}}), ConfigError);

  TrainConfig bad = small_config();
  bad.lr = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = small_config();
  bad.epochs = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = small_config();
  bad.validation_fraction = 1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = small_config();
  bad.lr = 0.0;
  CHECK_NOTHROW(bad.validate());
}

TEST_CASE("lr = 0 for one epoch returns the initial parameters") {
  const auto samples = small_samples();
  TrainConfig c = small_config();
  c.epochs = 1;
  c.lr = 0.0;
  const ModelCheckpoint m = train::train(c, samples);
  const core::EncoderDims dims{m.vocab.size(), c.word_dim, c.hidden_dim, c.output_dim, c.cell};
  CHECK(m.params == core::init_params(dims, c.seed));
  CHECK(m.metadata.epochs_run == 1);
  CHECK(m.metadata.n_samples == samples.size());
}

TEST_CASE("training loss decreases over the first five epochs") {
  const auto samples = small_samples();
  TrainConfig c = small_config();
  c.epochs = 5;
  std::vector<EpochLog> logs;
  const ModelCheckpoint m = train::train(c, samples, [&](const EpochLog& l) { logs.push_back(l); });
  REQUIRE(logs.size() == 5);
  REQUIRE(m.metadata.epoch_losses.size() == 5);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(logs[i].epoch == i + 1);
    CHECK(logs[i].mean_loss == m.metadata.epoch_losses[i]);
  }
  for (std::size_t i = 1; i < 5; ++i) CHECK(m.metadata.epoch_losses[i] < m.metadata.epoch_losses[i - 1]);
  const json line = json::parse(logs[0].to_json_line());
  CHECK(line.contains("epoch"));
  CHECK(line.contains("mean_loss"));
  CHECK(line.contains("wall_ms"));
}

TEST_CASE("identical runs produce byte-identical checkpoints") {
  const auto samples = small_samples();
  for (std::size_t batch : {1u, 4u}) {
    TrainConfig c = small_config();
    c.batch_size = batch;
    const std::string a = serialize_checkpoint(train::train(c, samples));
    const std::string b = serialize_checkpoint(train::train(c, samples));
    CHECK(a == b);
    c.seed += 1;
    CHECK(serialize_checkpoint(train::train(c, samples)) != a);
  }
}

TEST_CASE("checkpoint round trip preserves every field and forward pass") {
  const auto samples = small_samples();
  const ModelCheckpoint m = train::train(small_config(), samples);
  const std::string bytes = serialize_checkpoint(m);
  CHECK(bytes.substr(0, 8) == "VGCKPT01");
  const ModelCheckpoint back = deserialize_checkpoint(bytes);
  CHECK(back.config == m.config);
  CHECK(back.vocab == m.vocab);
  CHECK(back.params == m.params);
  CHECK(back.metadata == m.metadata);
  CHECK(serialize_checkpoint(back) == bytes);
  CHECK(checkpoint_fingerprint(back) == checkpoint_fingerprint(m));

  const auto& words = m.vocab.tokens();
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    std::vector<std::string> cmd;
    const std::size_t len = 1 + rng.uniform_index(8);
    for (std::size_t k = 0; k < len; ++k) {
      cmd.push_back(rng.uniform01() < 0.1 ? "nonce" + std::to_string(k)
                                           : words[2 + rng.uniform_index(words.size() - 2)]);
    }
    CHECK(back.embed(cmd) == m.embed(cmd));
  }

  const std::string path =
      (std::filesystem::temp_directory_path() / "vground_train_test.ckpt").string();
  save_checkpoint(m, path);
  CHECK(serialize_checkpoint(load_checkpoint(path)) == bytes);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_checkpoint(path), DataError);
}

TEST_CASE("checkpoint load errors are distinct") {
  const std::string bytes = serialize_checkpoint(train::train(small_config(), small_samples()));

  std::string magic = bytes;
  magic[3] = 'X';
  CHECK(load_error_kind(magic) == CheckpointError::Kind::kBadMagic);
  CHECK(load_error_kind("VGC") == CheckpointError::Kind::kBadMagic);

  CHECK(load_error_kind(bytes.substr(0, 12)) == CheckpointError::Kind::kBadHeader);
  Parts garbled = split_checkpoint(bytes);
  garbled.header["format_version"] = 2;
  CHECK(load_error_kind(join_checkpoint(garbled)) == CheckpointError::Kind::kBadHeader);
  Parts wrong_shape = split_checkpoint(bytes);
  wrong_shape.header["config"]["hidden_dim"] = 13;
  CHECK(load_error_kind(join_checkpoint(wrong_shape)) == CheckpointError::Kind::kBadHeader);

  CHECK(load_error_kind(bytes.substr(0, bytes.size() - 4)) ==
        CheckpointError::Kind::kTruncatedTensor);
  CHECK(load_error_kind(bytes + "pad") == CheckpointError::Kind::kTrailingData);

  Parts vocab = split_checkpoint(bytes);
  vocab.header["vocabulary"]["tokens"].push_back("zzzextra");
  CHECK(load_error_kind(join_checkpoint(vocab)) == CheckpointError::Kind::kVocabMismatch);

  Parts nonfinite = split_checkpoint(bytes);
  const float inf = std::numeric_limits<float>::infinity();
  std::memcpy(nonfinite.payload.data() + 4, &inf, 4);
  CHECK(load_error_kind(join_checkpoint(nonfinite)) == CheckpointError::Kind::kNonFinite);

  try {
    deserialize_checkpoint(bytes + "pad");
  } catch (const CheckpointError& e) {
    CHECK(std::string(e.what()).rfind("checkpoint: trailing data", 0) == 0);
  }
}

TEST_CASE("non-finite features abort training with a numerical error") {
  auto samples = small_samples();
  samples[7].feature[2] = std::numeric_limits<float>::infinity();
  TrainConfig c = small_config();
  c.epochs = 1;
  CHECK_THROWS_AS(train::train(c, samples), NumericalError);
}

TEST_CASE("training rejects mismatched dims, bad labels and empty input") {
  auto samples = small_samples();
  TrainConfig c = small_config();
  c.output_dim = 32;
  CHECK_THROWS_AS(train::train(c, samples), DataError);
  c = small_config();
  CHECK_THROWS_AS(train::train(c, std::vector<dataset::TrainingSample>{}), DataError);
  samples[0].label = 0;
  CHECK_THROWS_AS(train::train(c, samples), DataError);
}

TEST_CASE("early stopping with a validation split") {
  const auto samples = small_samples();
  TrainConfig c = small_config();
  c.epochs = 40;
  c.lr = 0.05;
  c.validation_fraction = 0.2;
  c.early_stop_patience = 1;
  const ModelCheckpoint m = train::train(c, samples);
  CHECK(m.metadata.validation_losses.size() == m.metadata.epochs_run);
  CHECK(m.metadata.epoch_losses.size() == m.metadata.epochs_run);
  CHECK(m.metadata.epochs_run >= 2);
  CHECK(m.metadata.epochs_run < 40);
  const std::size_t n = m.metadata.validation_losses.size();
  CHECK(m.metadata.validation_losses[n - 1] >= m.metadata.validation_losses[n - 2]);

  c.early_stop_patience = 0;
  c.epochs = 3;
  CHECK(train::train(c, samples).metadata.epochs_run == 3);
}
