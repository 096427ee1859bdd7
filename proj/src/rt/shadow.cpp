// Copyright 2026 The SafeIR Authors
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

#include "safeir/rt/shadow.hpp"

#include "safeir/ir/errors.hpp"

namespace safeir::rt {

std::string_view to_string(AllocKind kind) {
  switch (kind) {
    case AllocKind::kHeap: return "HEAP";
    case AllocKind::kStack: return "STACK";
    case AllocKind::kGlobal: return "GLOBAL";
  }
  return "?";
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kTagMismatch: return "TAG_MISMATCH";
    case ViolationKind::kNullDeref: return "NULL_DEREF";
    case ViolationKind::kDoubleFree: return "DOUBLE_FREE";
    case ViolationKind::kInvalidFree: return "INVALID_FREE";
  }
  return "?";
}

ShadowState::ShadowState(ShadowConfig config)
    : config_(config),
      global_top_(config.global_base),
      heap_top_(config.heap_base),
      stack_top_(config.stack_base) {
  const std::uint64_t g = config_.granule;
  if (g == 0 || (g & (g - 1)) != 0) {
    throw Error("granule size must be a power of two, got " + std::to_string(g));
  }
  for (std::uint64_t base : {config.global_base, config.heap_base, config.stack_base}) {
    if (base % g != 0 || base == 0 || base > kAddressMask) {
      throw Error("region base must be a nonzero granule-aligned address");
    }
  }
}

std::uint8_t ShadowState::next_tag() {
  last_tag_ = static_cast<std::uint8_t>(last_tag_ == 255 ? 1 : last_tag_ + 1);
  return last_tag_;
}

std::uint64_t ShadowState::reserved(std::uint64_t size) const {
  const std::uint64_t g = config_.granule;
  return size == 0 ? g : (size + g - 1) / g * g;
}

void ShadowState::retag(const Allocation& a, std::uint8_t tag, std::size_t id) {
  const std::uint64_t g = config_.granule;
  const std::uint64_t first = a.base / g;
  const std::uint64_t count = reserved(a.size) / g;
  for (std::uint64_t i = 0; i < count; ++i) granules_[first + i] = Granule{tag, id};
}

std::uint64_t ShadowState::allocate(std::uint64_t size, AllocKind kind) {
  std::uint64_t* top = nullptr;
  switch (kind) {
    case AllocKind::kHeap: top = &heap_top_; break;
    case AllocKind::kStack: top = &stack_top_; break;
    case AllocKind::kGlobal: top = &global_top_; break;
  }
  const std::uint64_t span = reserved(size);
  if (span > kAddressMask - *top) throw Error("synthetic address space exhausted");
  Allocation a;
  a.base = *top;
  a.size = size;
  a.tag = next_tag();
  a.alive = true;
  a.kind = kind;
  *top += span;
  const std::size_t id = allocations_.size();
  allocations_.push_back(a);
  retag(a, a.tag, id);
  if (kind == AllocKind::kHeap) heap_bases_[a.base] = id;
  if (kind == AllocKind::kStack) live_stack_.push_back(id);
  allocated_bytes_ += size;
  return make_tagged(a.base, a.tag);
}

std::optional<std::size_t> ShadowState::allocation_at(std::uint64_t address) const {
  auto it = granules_.find(address_of(address) / config_.granule);
  if (it == granules_.end()) return std::nullopt;
  return it->second.alloc;
}

std::uint8_t ShadowState::granule_tag(std::uint64_t address) const {
  auto it = granules_.find(address_of(address) / config_.granule);
  return it == granules_.end() ? 0 : it->second.tag;
}

std::optional<Fault> ShadowState::check(std::uint64_t tagged, std::uint64_t size) const {
  const std::uint64_t addr = address_of(tagged);
  const std::uint8_t tag = tag_of(tagged);
  if (addr == 0) return Fault{ViolationKind::kNullDeref, tagged, tag, 0};
  const std::uint64_t g = config_.granule;
  const std::uint64_t last = size == 0 ? addr : addr + size - 1;
  if (last < addr || last > kAddressMask) {
    return Fault{ViolationKind::kTagMismatch, tagged, tag, 0};
  }
  for (std::uint64_t gi = addr / g; gi <= last / g; ++gi) {
    auto it = granules_.find(gi);
    const std::uint8_t found = it == granules_.end() ? 0 : it->second.tag;
    const bool alive = it != granules_.end() && allocations_[it->second.alloc].alive;
    if (found != tag || !alive) return Fault{ViolationKind::kTagMismatch, tagged, tag, found};
  }
  return std::nullopt;
}

void ShadowState::kill(std::size_t id) {
  Allocation& a = allocations_[id];
  a.alive = false;
  released_bytes_ += a.size;
  retag(a, next_tag(), id);
}

std::optional<Fault> ShadowState::intercept_free(std::uint64_t tagged) {
  const std::uint64_t addr = address_of(tagged);
  const std::uint8_t tag = tag_of(tagged);
  auto it = heap_bases_.find(addr);
  if (it == heap_bases_.end()) {
    return Fault{ViolationKind::kInvalidFree, tagged, tag, granule_tag(addr)};
  }
  const Allocation& a = allocations_[it->second];
  if (!a.alive) return Fault{ViolationKind::kDoubleFree, tagged, tag, granule_tag(addr)};
  if (a.tag != tag) return Fault{ViolationKind::kInvalidFree, tagged, tag, a.tag};
  kill(it->second);
  return std::nullopt;
}

void ShadowState::release_stack_to(std::uint64_t top) {
  while (!live_stack_.empty() && allocations_[live_stack_.back()].base >= top) {
    kill(live_stack_.back());
    live_stack_.pop_back();
  }
  stack_top_ = top;
}

std::uint64_t ShadowState::live_bytes() const {
  std::uint64_t n = 0;
  for (const auto& a : allocations_) {
    if (a.alive) n += a.size;
  }
  return n;
}

}  // namespace safeir::rt
