#include "gradsol/jet_arena.hpp"

namespace gradsol::detail {

namespace {
constexpr std::size_t kBlockDoubles = 1 << 17;  // 1 MiB blocks
}

JetArena::State& JetArena::state() {
  thread_local State s;
  return s;
}

bool JetArena::active() { return state().depth > 0; }

double* JetArena::try_alloc(std::size_t n) {
  State& s = state();
  if (s.depth == 0) return nullptr;
  if (n > kBlockDoubles) return nullptr;  // oversized: fall back to the heap
  if (s.blocks.empty()) s.blocks.emplace_back(kBlockDoubles);
  if (s.offset + n > s.blocks[s.block].size()) {
    ++s.block;
    if (s.block == s.blocks.size()) s.blocks.emplace_back(kBlockDoubles);
    s.offset = 0;
  }
  double* p = s.blocks[s.block].data() + s.offset;
  s.offset += n;
  return p;
}

ArenaScope::ArenaScope() {
  JetArena::State& s = JetArena::state();
  saved_block_ = s.block;
  saved_offset_ = s.offset;
  ++s.depth;
}

ArenaScope::~ArenaScope() {
  JetArena::State& s = JetArena::state();
  s.block = saved_block_;
  s.offset = saved_offset_;
  --s.depth;
}

}  // namespace gradsol::detail
