#include "fso/sonspace.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "fso/error.hpp"

namespace fso {

CapabilityMatrix::CapabilityMatrix(std::vector<NodeId> n, std::vector<Role> r)
    : nodes(std::move(n)), roles(std::move(r)), can_play(nodes.size() * roles.size(), 0) {}

std::size_t CapabilityMatrix::role_index(const Role& r) const {
  auto it = std::find(roles.begin(), roles.end(), r);
  if (it == roles.end()) throw Error(ErrorKind::UnknownRole, "role '" + r + "' not in capability matrix");
  return static_cast<std::size_t>(it - roles.begin());
}

CapabilityMatrix capability_matrix(const Hierarchy& h) {
  std::set<Role> roles;
  for (const auto& n : h.spec().nodes) roles.insert(n.capabilities.begin(), n.capabilities.end());
  CapabilityMatrix m(h.node_ids(), {roles.begin(), roles.end()});
  for (std::size_t i = 0; i < m.nodes.size(); ++i) {
    for (const auto& r : h.node(m.nodes[i]).capabilities) m.set(i, m.role_index(r));
  }
  return m;
}

Assignment to_assignment(const CapabilityMatrix& m, const SpaceAssignment& a) {
  Assignment out;
  for (const auto& [role, nodes] : a.blocks) {
    for (auto n : nodes) out.emplace_back(m.roles[role], m.nodes[n]);
  }
  canonicalize(out);
  return out;
}

namespace {

struct Block {
  std::size_t role;
  int k;
  std::vector<std::size_t> capable;
};

std::vector<Block> make_blocks(const CapabilityMatrix& m, const RoleMultiset& roles) {
  std::vector<Block> blocks;
  for (const auto& [role, k] : roles) {
    const auto r = m.role_index(role);
    if (k <= 0) continue;
    Block b{r, k, {}};
    for (std::size_t n = 0; n < m.nodes.size(); ++n) {
      if (m.at(n, r)) b.capable.push_back(n);
    }
    blocks.push_back(std::move(b));
  }
  std::sort(blocks.begin(), blocks.end(), [](const Block& a, const Block& b) { return a.role < b.role; });
  return blocks;
}

// Calls fn for every k-subset of `pool` in lexicographic order.
template <typename Fn>
void for_each_combination(const std::vector<std::size_t>& pool, int k, Fn&& fn) {
  const int n = static_cast<int>(pool.size());
  if (k > n) return;
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  std::vector<std::size_t> pick(k);
  while (true) {
    for (int i = 0; i < k; ++i) pick[i] = pool[idx[i]];
    fn(pick);
    int i = k - 1;
    while (i >= 0 && idx[i] == n - k + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r;
  if (__builtin_add_overflow(a, b, &r)) throw std::overflow_error("SON-space count exceeds 64 bits");
  return r;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
    if (r > UINT64_MAX) throw std::overflow_error("SON-space count exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(r);
}

class Used {
 public:
  explicit Used(std::size_t n) : words_((n + 63) / 64, 0) {}
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1u; }
  void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }
  Used masked(const Used& keep) const {
    Used out = *this;
    for (std::size_t w = 0; w < words_.size(); ++w) out.words_[w] &= keep.words_[w];
    return out;
  }
  friend bool operator<(const Used& a, const Used& b) { return a.words_ < b.words_; }

 private:
  std::vector<std::uint64_t> words_;
};

std::vector<std::size_t> available(const Block& b, const Used& used) {
  std::vector<std::size_t> out;
  for (auto n : b.capable) {
    if (!used.test(n)) out.push_back(n);
  }
  return out;
}

void enumerate_from(const std::vector<Block>& blocks, std::size_t b, Used& used, SpaceAssignment& cur,
                    std::vector<SpaceAssignment>& out) {
  if (b == blocks.size()) {
    out.push_back(cur);
    return;
  }
  for_each_combination(available(blocks[b], used), blocks[b].k, [&](const std::vector<std::size_t>& pick) {
    for (auto n : pick) used.flip(n);
    cur.blocks.emplace_back(blocks[b].role, pick);
    enumerate_from(blocks, b + 1, used, cur, out);
    cur.blocks.pop_back();
    for (auto n : pick) used.flip(n);
  });
}

// Memoized count of completions from block b given the nodes already used.
// Only nodes capable of some block >= b matter for the memo key.
class Counter {
 public:
  Counter(const std::vector<Block>& blocks, std::size_t n_nodes) : blocks_(blocks) {
    relevant_.assign(blocks.size() + 1, Used(n_nodes));
    for (std::size_t b = blocks.size(); b-- > 0;) {
      relevant_[b] = relevant_[b + 1];
      for (auto n : blocks[b].capable) {
        if (!relevant_[b].test(n)) relevant_[b].flip(n);
      }
    }
  }

  std::uint64_t from(std::size_t b, Used& used) {
    if (b == blocks_.size()) return 1;
    const auto avail = available(blocks_[b], used);
    if (b + 1 == blocks_.size()) return binomial(avail.size(), blocks_[b].k);

    auto key = std::make_pair(b, used.masked(relevant_[b]));
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    std::uint64_t total = 0;
    for_each_combination(avail, blocks_[b].k, [&](const std::vector<std::size_t>& pick) {
      for (auto n : pick) used.flip(n);
      total = checked_add(total, from(b + 1, used));
      for (auto n : pick) used.flip(n);
    });
    memo_.emplace(std::move(key), total);
    return total;
  }

 private:
  const std::vector<Block>& blocks_;
  std::vector<Used> relevant_;
  std::map<std::pair<std::size_t, Used>, std::uint64_t> memo_;
};

std::vector<std::vector<std::size_t>> first_choices(const std::vector<Block>& blocks) {
  std::vector<std::vector<std::size_t>> out;
  for_each_combination(blocks[0].capable, blocks[0].k,
                       [&](const std::vector<std::size_t>& pick) { out.push_back(pick); });
  return out;
}

}  // namespace

std::vector<SpaceAssignment> enumerate_serial(const CapabilityMatrix& m, const RoleMultiset& roles) {
  const auto blocks = make_blocks(m, roles);
  std::vector<SpaceAssignment> out;
  Used used(m.nodes.size());
  SpaceAssignment cur;
  enumerate_from(blocks, 0, used, cur, out);
  return out;
}

std::uint64_t count_serial(const CapabilityMatrix& m, const RoleMultiset& roles) {
  const auto blocks = make_blocks(m, roles);
  Counter counter(blocks, m.nodes.size());
  Used used(m.nodes.size());
  return counter.from(0, used);
}

std::vector<SpaceAssignment> enumerate(const CapabilityMatrix& m, const RoleMultiset& roles) {
  const auto blocks = make_blocks(m, roles);
  if (blocks.empty()) return {SpaceAssignment{}};
  const auto firsts = first_choices(blocks);
  std::vector<std::vector<SpaceAssignment>> parts(firsts.size());

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(firsts.size()); ++i) {
    Used used(m.nodes.size());
    for (auto n : firsts[i]) used.flip(n);
    SpaceAssignment cur;
    cur.blocks.emplace_back(blocks[0].role, firsts[i]);
    enumerate_from(blocks, 1, used, cur, parts[i]);
  }

  std::vector<SpaceAssignment> out;
  for (auto& p : parts) {
    out.insert(out.end(), std::make_move_iterator(p.begin()), std::make_move_iterator(p.end()));
  }
  return out;
}

std::uint64_t count(const CapabilityMatrix& m, const RoleMultiset& roles) {
  const auto blocks = make_blocks(m, roles);
  if (blocks.size() <= 1) return count_serial(m, roles);
  const auto firsts = first_choices(blocks);
  std::vector<std::uint64_t> partial(firsts.size(), 0);
  bool overflow = false;

#pragma omp parallel
  {
    // Per-thread memo; the serial Counter is reused unchanged.
    Counter counter(blocks, m.nodes.size());
#pragma omp for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(firsts.size()); ++i) {
      Used used(m.nodes.size());
      for (auto n : firsts[i]) used.flip(n);
      try {
        partial[i] = counter.from(1, used);
      } catch (const std::overflow_error&) {
#pragma omp atomic write
        overflow = true;
      }
    }
  }
  if (overflow) throw std::overflow_error("SON-space count exceeds 64 bits");

  std::uint64_t total = 0;
  for (auto p : partial) total = checked_add(total, p);
  return total;
}

std::vector<std::pair<std::size_t, std::size_t>> son_space_edges(
    const std::vector<SpaceAssignment>& space) {
  // Flatten each assignment to a sorted list of (role, node) pairs.
  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> flat;
  flat.reserve(space.size());
  for (const auto& a : space) {
    std::vector<std::pair<std::size_t, std::size_t>> f;
    for (const auto& [role, nodes] : a.blocks) {
      for (auto n : nodes) f.emplace_back(role, n);
    }
    std::sort(f.begin(), f.end());
    flat.push_back(std::move(f));
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    for (std::size_t j = i + 1; j < flat.size(); ++j) {
      if (flat[i].size() != flat[j].size()) continue;
      std::vector<std::pair<std::size_t, std::size_t>> diff;
      std::set_difference(flat[i].begin(), flat[i].end(), flat[j].begin(), flat[j].end(),
                          std::back_inserter(diff));
      if (diff.size() == 1) edges.emplace_back(i, j);
    }
  }
  return edges;
}

}  // namespace fso
