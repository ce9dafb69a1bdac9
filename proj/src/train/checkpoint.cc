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

#include "vground/train/checkpoint.h"

#include <cmath>

#include "json.hpp"
#include "vground/util/binio.h"
#include "vground/util/hash.h"

namespace vground::train {
namespace {

using nlohmann::json;
using Kind = CheckpointError::Kind;

constexpr int kFormatVersion = 1;

json vocab_to_json(const dataset::Vocabulary& v) {
  return json{{"policy", dataset::to_string(v.policy())}, {"seed", v.seed()}, {"tokens", v.tokens()}};
}

json metadata_to_json(const TrainingMetadata& m) {
  return json{{"epoch_losses", m.epoch_losses},
              {"validation_losses", m.validation_losses},
              {"epochs_run", m.epochs_run},
              {"n_samples", m.n_samples},
              {"data_fingerprint", m.data_fingerprint}};
}

TrainingMetadata metadata_from_json(const json& j) {
  TrainingMetadata m;
  m.epoch_losses = j.at("epoch_losses").get<std::vector<double>>();
  m.validation_losses = j.at("validation_losses").get<std::vector<double>>();
  m.epochs_run = j.at("epochs_run").get<std::size_t>();
  m.n_samples = j.at("n_samples").get<std::size_t>();
  m.data_fingerprint = j.at("data_fingerprint").get<std::string>();
  return m;
}

}  // namespace

CheckpointError::CheckpointError(Kind kind, const std::string& what)
    : DataError(std::string("checkpoint: ") + kind_name(kind) + ": " + what), kind_(kind) {}

const char* CheckpointError::kind_name(Kind kind) {
  switch (kind) {
    case Kind::kBadMagic: return "bad magic";
    case Kind::kBadHeader: return "bad header";
    case Kind::kTruncatedTensor: return "truncated tensor";
    case Kind::kTrailingData: return "trailing data";
    case Kind::kVocabMismatch: return "vocabulary/embedding mismatch";
    case Kind::kNonFinite: return "non-finite value";
  }
  return "unknown";
}

std::string serialize_checkpoint(const ModelCheckpoint& ckpt) {
  json manifest = json::array();
  std::uint64_t offset = 0;
  ckpt.params.for_each_tensor([&](const char* name, const core::Tensor& t) {
    manifest.push_back(json{{"name", name}, {"shape", t.shape}, {"offset", offset}});
    offset += 4 * static_cast<std::uint64_t>(t.size());
  });
  json header;
  header["format_version"] = kFormatVersion;
  header["config"] = ckpt.config.to_json();
  header["vocabulary"] = vocab_to_json(ckpt.vocab);
  header["oov_seed"] = ckpt.params.oov_seed;
  header["metadata"] = metadata_to_json(ckpt.metadata);
  header["tensors"] = manifest;
  const std::string text = header.dump();

  ByteWriter w;
  w.bytes(kCheckpointMagic);
  w.u64(text.size());
  w.bytes(text);
  ckpt.params.for_each_tensor([&](const char*, const core::Tensor& t) { w.f32s(t.values); });
  return w.take();
}

ModelCheckpoint deserialize_checkpoint(std::string_view bytes) {
  if (bytes.size() < kCheckpointMagic.size() ||
      bytes.substr(0, kCheckpointMagic.size()) != kCheckpointMagic) {
    throw CheckpointError(Kind::kBadMagic, "expected \"VGCKPT01\"");
  }
  bytes.remove_prefix(kCheckpointMagic.size());
  if (bytes.size() < 8) throw CheckpointError(Kind::kBadHeader, "missing header length");
  ByteReader len_reader(bytes.substr(0, 8), "checkpoint");
  const std::uint64_t header_len = len_reader.u64();
  bytes.remove_prefix(8);
  if (header_len > bytes.size()) {
    throw CheckpointError(Kind::kBadHeader, "header length " + std::to_string(header_len) +
                                                " exceeds file size");
  }

  ModelCheckpoint ckpt;
  std::vector<std::pair<std::string, std::vector<std::size_t>>> manifest;
  std::vector<std::uint64_t> offsets;
  try {
    const json header = json::parse(bytes.substr(0, header_len));
    if (header.at("format_version").get<int>() != kFormatVersion) {
      throw CheckpointError(Kind::kBadHeader, "unsupported format_version");
    }
    ckpt.config = TrainConfig::from_json(header.at("config"));
    const json& v = header.at("vocabulary");
    ckpt.vocab = dataset::Vocabulary::from_tokens(v.at("tokens").get<std::vector<std::string>>(),
                                                  dataset::parse_unk_policy(v.at("policy").get<std::string>()),
                                                  v.at("seed").get<std::uint64_t>());
    ckpt.params.oov_seed = header.at("oov_seed").get<std::uint64_t>();
    ckpt.metadata = metadata_from_json(header.at("metadata"));
    for (const json& t : header.at("tensors")) {
      manifest.emplace_back(t.at("name").get<std::string>(),
                            t.at("shape").get<std::vector<std::size_t>>());
      offsets.push_back(t.at("offset").get<std::uint64_t>());
    }
  } catch (const CheckpointError&) {
    throw;
  } catch (const json::exception& e) {
    throw CheckpointError(Kind::kBadHeader, e.what());
  } catch (const DataError& e) {
    throw CheckpointError(Kind::kBadHeader, e.what());
  }
  bytes.remove_prefix(header_len);

  const core::EncoderDims dims{ckpt.vocab.size(), ckpt.config.word_dim, ckpt.config.hidden_dim,
                               ckpt.config.output_dim, ckpt.config.cell};
  ckpt.params.dims = dims;
  std::size_t slot = 0;
  std::uint64_t expected_offset = 0;
  ckpt.params.for_each_tensor([&](const char* name, core::Tensor& t) {
    if (slot >= manifest.size() || manifest[slot].first != name) {
      throw CheckpointError(Kind::kBadHeader, std::string("manifest does not list ") + name +
                                                  " in position " + std::to_string(slot));
    }
    const auto& shape = manifest[slot].second;
    if (slot == 0 && (shape.size() != 2 || shape[0] != dims.vocab_size)) {
      throw CheckpointError(Kind::kVocabMismatch,
                            std::to_string(dims.vocab_size) + " vocabulary entries but " +
                                (shape.empty() ? std::string("no") : std::to_string(shape[0])) +
                                " embedding rows");
    }
    if (shape != core::tensor_shape(dims, name)) {
      throw CheckpointError(Kind::kBadHeader, std::string("shape of ") + name +
                                                  " does not match the config");
    }
    if (offsets[slot] != expected_offset) {
      throw CheckpointError(Kind::kBadHeader, std::string("offset of ") + name);
    }
    t = core::Tensor(shape);
    const std::uint64_t n_bytes = 4 * static_cast<std::uint64_t>(t.size());
    const std::uint64_t available = bytes.size() > expected_offset ? bytes.size() - expected_offset : 0;
    if (available < n_bytes) {
      throw CheckpointError(Kind::kTruncatedTensor,
                            std::string(name) + " needs " + std::to_string(n_bytes) +
                                " bytes at offset " + std::to_string(expected_offset) + ", " +
                                std::to_string(available) + " available");
    }
    ByteReader r(bytes.substr(expected_offset, n_bytes), name);
    r.f32s(t.values);
    for (float x : t.values) {
      if (!std::isfinite(x)) throw CheckpointError(Kind::kNonFinite, name);
    }
    expected_offset += n_bytes;
    ++slot;
  });
  if (slot != manifest.size()) {
    throw CheckpointError(Kind::kBadHeader, "manifest lists unexpected tensors");
  }
  if (bytes.size() != expected_offset) {
    throw CheckpointError(Kind::kTrailingData,
                          std::to_string(bytes.size() - expected_offset) + " bytes after tensors");
  }
  return ckpt;
}

void save_checkpoint(const ModelCheckpoint& ckpt, const std::string& path) {
  write_file(path, serialize_checkpoint(ckpt));
}

ModelCheckpoint load_checkpoint(const std::string& path) {
  return deserialize_checkpoint(read_file(path));
}

std::string checkpoint_fingerprint(const ModelCheckpoint& ckpt) {
  return hex64(fnv1a64(serialize_checkpoint(ckpt)));
}

}  // namespace vground::train
