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

#include "vground/dataset/feature_store.h"

#include <cmath>
#include <limits>
#include <set>
#include <utility>

#include "vground/util/binio.h"
#include "vground/util/error.h"

namespace vground::dataset {
namespace {

std::string describe(const ObjectRef& ref) {
  return "'" + ref.object_class + "'#" + std::to_string(ref.instance_id);
}

}  // namespace

void FeatureStore::add(FeatureRecord record) {
  if (record.values.size() != dim_) {
    throw DataError("feature " + describe(record.ref) + " has length " +
                    std::to_string(record.values.size()) + ", store dim is " + std::to_string(dim_));
  }
  if (record.ref.object_class.empty()) throw DataError("feature record with empty class name");
  double norm2 = 0.0;
  for (float v : record.values) {
    if (!std::isfinite(v)) throw DataError("feature " + describe(record.ref) + " is not finite");
    norm2 += static_cast<double>(v) * v;
  }
  if (norm2 == 0.0) throw DataError("feature " + describe(record.ref) + " has zero norm");
  const std::size_t slot = records_.size();
  if (!index_.try_emplace(record.ref, slot).second) {
    throw DataError("duplicate feature record " + describe(record.ref));
  }
  by_class_[record.ref.object_class].push_back(slot);
  records_.push_back(std::move(record));
}

const FeatureRecord* FeatureStore::find(const ObjectRef& ref) const {
  auto it = index_.find(ref);
  return it == index_.end() ? nullptr : &records_[it->second];
}

const FeatureRecord& FeatureStore::at(const ObjectRef& ref) const {
  if (const FeatureRecord* r = find(ref)) return *r;
  throw DataError("no feature record for " + describe(ref));
}

std::vector<std::string> FeatureStore::classes() const {
  std::vector<std::string> out;
  out.reserve(by_class_.size());
  for (const auto& [name, slots] : by_class_) out.push_back(name);
  return out;
}

bool FeatureStore::has_class(std::string_view object_class) const {
  return by_class_.find(object_class) != by_class_.end();
}

const std::vector<std::size_t>& FeatureStore::instances_of(std::string_view object_class) const {
  static const std::vector<std::size_t> kNone;
  auto it = by_class_.find(object_class);
  return it == by_class_.end() ? kNone : it->second;
}

FeatureStore FeatureStore::subset(std::span<const std::string> classes) const {
  const std::set<std::string, std::less<>> keep(classes.begin(), classes.end());
  FeatureStore out(dim_);
  for (const FeatureRecord& r : records_) {
    if (keep.contains(r.ref.object_class)) out.add(r);
  }
  return out;
}

std::string FeatureStore::serialize() const {
  ByteWriter w;
  w.bytes(kMagic);
  w.u32(dim_);
  w.u32(static_cast<std::uint32_t>(records_.size()));
  for (const FeatureRecord& r : records_) {
    if (r.ref.object_class.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw DataError("class name too long for FEAT: " + r.ref.object_class.substr(0, 32) + "...");
    }
    w.u16(static_cast<std::uint16_t>(r.ref.object_class.size()));
    w.bytes(r.ref.object_class);
    w.u32(r.ref.instance_id);
    w.f32s(r.values);
  }
  return w.take();
}

FeatureStore FeatureStore::deserialize(std::string_view bytes) {
  ByteReader r(bytes, "FEAT");
  if (r.remaining() < kMagic.size() || r.bytes(kMagic.size()) != kMagic) {
    throw DataError("FEAT: bad magic");
  }
  const std::uint32_t dim = r.u32();
  const std::uint32_t count = r.u32();
  FeatureStore store(dim);
  for (std::uint32_t i = 0; i < count; ++i) {
    FeatureRecord rec;
    const std::uint16_t len = r.u16();
    rec.ref.object_class = std::string(r.bytes(len));
    rec.ref.instance_id = r.u32();
    rec.values.resize(dim);
    r.f32s(rec.values);
    store.add(std::move(rec));
  }
  if (!r.at_end()) {
    throw DataError("FEAT: " + std::to_string(r.remaining()) + " trailing bytes after " +
                    std::to_string(count) + " records");
  }
  return store;
}

void FeatureStore::save(const std::string& path) const { write_file(path, serialize()); }

FeatureStore FeatureStore::load(const std::string& path) {
  try {
    return deserialize(read_file(path));
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

}  // namespace vground::dataset
