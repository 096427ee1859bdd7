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

// Tag-based shadow memory. Pointers carry an 8-bit tag in their top byte;
// every granule of memory carries the tag of the allocation that owns it.
// Tags come from a deterministic counter so that neighbouring allocations
// always differ.

#ifndef SAFEIR_RT_SHADOW_HPP_
#define SAFEIR_RT_SHADOW_HPP_

#include <cstdint>
#include <optional>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace safeir::rt {

inline constexpr int kTagShift = 56;
inline constexpr std::uint64_t kAddressMask = (std::uint64_t{1} << kTagShift) - 1;

inline std::uint8_t tag_of(std::uint64_t tagged) {
  return static_cast<std::uint8_t>(tagged >> kTagShift);
}
inline std::uint64_t address_of(std::uint64_t tagged) { return tagged & kAddressMask; }
inline std::uint64_t make_tagged(std::uint64_t address, std::uint8_t tag) {
  return (std::uint64_t{tag} << kTagShift) | (address & kAddressMask);
}

enum class AllocKind : std::uint8_t { kHeap, kStack, kGlobal };

std::string_view to_string(AllocKind kind);

struct Allocation {
  std::uint64_t base = 0;  // untagged
  std::uint64_t size = 0;  // requested bytes
  std::uint8_t tag = 0;
  bool alive = false;
  AllocKind kind = AllocKind::kHeap;
};

enum class ViolationKind : std::uint8_t { kTagMismatch, kNullDeref, kDoubleFree, kInvalidFree };

std::string_view to_string(ViolationKind kind);

/// Result of a failed predicate, before the interpreter attaches the
/// instruction that triggered it.
struct Fault {
  ViolationKind kind = ViolationKind::kTagMismatch;
  std::uint64_t address = 0;  // tagged, as seen by the program
  std::uint8_t expected_tag = 0;
  std::uint8_t found_tag = 0;

  friend bool operator==(const Fault&, const Fault&) = default;
};

struct ShadowConfig {
  std::uint64_t granule = 16;
  std::uint64_t global_base = 0x10000;
  std::uint64_t heap_base = 0x100000000;
  std::uint64_t stack_base = 0x700000000000;
};

class ShadowState {
 public:
  explicit ShadowState(ShadowConfig config = {});

  const ShadowConfig& config() const { return config_; }

  /// Reserves `size` bytes (at least one granule) in the region of `kind`
  /// and returns a tagged pointer to it. Stack allocations are placed at
  /// the current stack top.
  std::uint64_t allocate(std::uint64_t size, AllocKind kind);

  /// ok iff every granule overlapping [addr, addr+size) carries the
  /// pointer's tag and belongs to a live allocation. Requires size >= 1.
  std::optional<Fault> check(std::uint64_t tagged, std::uint64_t size) const;

  /// Heap deallocation through the interceptor. On success the allocation
  /// dies and its granules receive a fresh tag.
  std::optional<Fault> intercept_free(std::uint64_t tagged);

  /// Current stack top, used to pop a frame with release_stack_to().
  std::uint64_t stack_top() const { return stack_top_; }
  /// Kills and retags every stack allocation at or above `top`.
  void release_stack_to(std::uint64_t top);

  std::uint8_t next_tag();

  const std::vector<Allocation>& allocations() const { return allocations_; }
  std::optional<std::size_t> allocation_at(std::uint64_t address) const;

  /// Sum of the sizes of live allocations, recomputed from the table.
  std::uint64_t live_bytes() const;
  std::uint64_t allocated_bytes() const { return allocated_bytes_; }
  std::uint64_t released_bytes() const { return released_bytes_; }

  /// Tag of the granule containing `address`; 0 when never allocated.
  std::uint8_t granule_tag(std::uint64_t address) const;

 private:
  struct Granule {
    std::uint8_t tag = 0;
    std::size_t alloc = 0;
  };

  std::uint64_t reserved(std::uint64_t size) const;
  void retag(const Allocation& a, std::uint8_t tag, std::size_t id);
  void kill(std::size_t id);

  ShadowConfig config_;
  std::uint64_t global_top_;
  std::uint64_t heap_top_;
  std::uint64_t stack_top_;
  std::uint8_t last_tag_ = 0;
  std::vector<Allocation> allocations_;
  std::unordered_map<std::uint64_t, Granule> granules_;
  std::unordered_map<std::uint64_t, std::size_t> heap_bases_;
  std::vector<std::size_t> live_stack_;
  std::uint64_t allocated_bytes_ = 0;
  std::uint64_t released_bytes_ = 0;
};

}  // namespace safeir::rt

#endif  // SAFEIR_RT_SHADOW_HPP_
