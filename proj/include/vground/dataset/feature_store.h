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

#ifndef VGROUND_DATASET_FEATURE_STORE_H_
#define VGROUND_DATASET_FEATURE_STORE_H_

#include <compare>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vground::dataset {

// Identifies one object instance (one image) in a store.
struct ObjectRef {
  std::string object_class;
  std::uint32_t instance_id = 0;

  friend auto operator<=>(const ObjectRef&, const ObjectRef&) = default;
};

struct FeatureRecord {
  ObjectRef ref;
  std::vector<float> values;
};

// Frozen image-side embeddings. Records keep insertion order; every vector
// has length dim() and nonzero norm, and refs are unique.
//
// On-disk "FEAT" layout (little-endian):
//   "VGFEAT01" | u32 dim | u32 count |
//   count x ( u16 name_len | name bytes | u32 instance_id | dim x f32 )
class FeatureStore {
 public:
  static constexpr std::string_view kMagic = "VGFEAT01";

  explicit FeatureStore(std::uint32_t dim = 0) : dim_(dim) {}

  // Throws DataError on dim mismatch, zero/non-finite vector or duplicate ref.
  void add(FeatureRecord record);

  std::uint32_t dim() const { return dim_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }
  const std::vector<FeatureRecord>& records() const { return records_; }
  const FeatureRecord& record(std::size_t i) const { return records_[i]; }

  const FeatureRecord* find(const ObjectRef& ref) const;
  // Throws DataError naming the ref when absent.
  const FeatureRecord& at(const ObjectRef& ref) const;

  // Sorted distinct classes.
  std::vector<std::string> classes() const;
  bool has_class(std::string_view object_class) const;
  // Record indices of a class, in insertion order; empty if unknown.
  const std::vector<std::size_t>& instances_of(std::string_view object_class) const;

  // Records whose class is in `classes`, insertion order preserved.
  FeatureStore subset(std::span<const std::string> classes) const;

  std::string serialize() const;
  static FeatureStore deserialize(std::string_view bytes);
  void save(const std::string& path) const;
  static FeatureStore load(const std::string& path);

 private:
  std::uint32_t dim_;
  std::vector<FeatureRecord> records_;
  std::map<ObjectRef, std::size_t> index_;
  std::map<std::string, std::vector<std::size_t>, std::less<>> by_class_;
};

}  // namespace vground::dataset

#endif  // VGROUND_DATASET_FEATURE_STORE_H_
