#pragma once

#include <cstddef>
#include <vector>

namespace gradsol {

namespace detail {

/// Thread-local bump allocator for transient jet coefficient blocks. A scope
/// activates it; destruction rewinds to the enclosing state. Jets allocated
/// inside a scope must not outlive it (the quadrature and suite loops keep
/// one scope per node/point).
class JetArena {
public:
  static double* try_alloc(std::size_t n);
  static bool active();

private:
  friend class ArenaScope;
  struct State {
    std::vector<std::vector<double>> blocks;
    std::size_t block = 0;
    std::size_t offset = 0;
    int depth = 0;
  };
  static State& state();
};

class ArenaScope {
public:
  ArenaScope();
  ~ArenaScope();
  ArenaScope(const ArenaScope&) = delete;
  ArenaScope& operator=(const ArenaScope&) = delete;

private:
  std::size_t saved_block_;
  std::size_t saved_offset_;
};

}  // namespace detail

using JetArenaScope = detail::ArenaScope;

}  // namespace gradsol
