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

#ifndef VGROUND_TRAIN_CHECKPOINT_H_
#define VGROUND_TRAIN_CHECKPOINT_H_

#include <string>
#include <string_view>

#include "vground/train/trainer.h"
#include "vground/util/error.h"

namespace vground::train {

// Checkpoint layout:
//   "VGCKPT01" | u64 header_len | JSON header (header_len bytes) |
//   tensors as row-major little-endian f32, in manifest order.
// The header holds the config, vocabulary, oov seed, training metadata and
// a manifest of {name, shape, offset} with offsets relative to the start
// of the tensor section.
inline constexpr std::string_view kCheckpointMagic = "VGCKPT01";

class CheckpointError : public DataError {
 public:
  enum class Kind {
    kBadMagic,
    kBadHeader,
    kTruncatedTensor,
    kTrailingData,
    kVocabMismatch,
    kNonFinite,
  };

  CheckpointError(Kind kind, const std::string& what);

  Kind kind() const { return kind_; }
  static const char* kind_name(Kind kind);

 private:
  Kind kind_;
};

std::string serialize_checkpoint(const ModelCheckpoint& ckpt);
// Throws CheckpointError.
ModelCheckpoint deserialize_checkpoint(std::string_view bytes);

void save_checkpoint(const ModelCheckpoint& ckpt, const std::string& path);
ModelCheckpoint load_checkpoint(const std::string& path);

// FNV-1a over the serialized checkpoint, hex.
std::string checkpoint_fingerprint(const ModelCheckpoint& ckpt);

}  // namespace vground::train

#endif  // VGROUND_TRAIN_CHECKPOINT_H_
