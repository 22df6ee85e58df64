#include <algorithm>
#include <string>

#include "percolab/error.hpp"
#include "percolab/graph.hpp"

namespace percolab {

namespace {

constexpr std::uint8_t kTreeTag = 0x02;
constexpr std::uint8_t kGraphTag = 0x01;
constexpr long kLeafBudget = 200'000;

std::string tree_code(const FiniteGraph& g, int v, int from) {
  std::vector<std::string> children;
  for (auto [w, e] : g.incident(v))
    if (w != from) children.push_back(tree_code(g, w, v));
  std::sort(children.begin(), children.end());
  std::string s = "(";
  for (auto& c : children) s += c;
  s += ')';
  return s;
}

using Cells = std::vector<std::vector<int>>;

// Equitable refinement of an ordered partition; cell order and splits depend
// only on isomorphism-invariant data.
void refine(const FiniteGraph& g, Cells& cells) {
  const int n = g.vertex_count();
  std::vector<int> cell_of(static_cast<std::size_t>(n));
  for (;;) {
    for (std::size_t c = 0; c < cells.size(); ++c)
      for (int v : cells[c]) cell_of[static_cast<std::size_t>(v)] = static_cast<int>(c);
    Cells next;
    next.reserve(cells.size());
    bool changed = false;
    for (auto& cell : cells) {
      if (cell.size() == 1) {
        next.push_back(cell);
        continue;
      }
      std::vector<std::pair<std::vector<int>, int>> sig;
      sig.reserve(cell.size());
      for (int v : cell) {
        std::vector<int> s;
        for (auto [w, e] : g.incident(v)) s.push_back(cell_of[static_cast<std::size_t>(w)]);
        std::sort(s.begin(), s.end());
        sig.emplace_back(std::move(s), v);
      }
      std::stable_sort(sig.begin(), sig.end(),
                       [](const auto& a, const auto& b) { return a.first < b.first; });
      std::vector<int> current{sig[0].second};
      for (std::size_t i = 1; i < sig.size(); ++i) {
        if (sig[i].first != sig[i - 1].first) {
          next.push_back(std::move(current));
          current.clear();
          changed = true;
        }
        current.push_back(sig[i].second);
      }
      next.push_back(std::move(current));
    }
    cells = std::move(next);
    if (!changed) return;
  }
}

std::vector<std::uint8_t> encode(const FiniteGraph& g, const Cells& cells) {
  const int n = g.vertex_count();
  std::vector<int> pos(static_cast<std::size_t>(n));
  for (std::size_t i = 0; i < cells.size(); ++i) pos[static_cast<std::size_t>(cells[i][0])] = static_cast<int>(i);
  std::vector<std::uint8_t> out{kGraphTag, static_cast<std::uint8_t>(n)};
  std::vector<std::uint64_t> rows(static_cast<std::size_t>(n), 0);
  for (const auto& e : g.edges()) {
    const int a = pos[static_cast<std::size_t>(e.u)];
    const int b = pos[static_cast<std::size_t>(e.v)];
    rows[static_cast<std::size_t>(a)] |= 1ULL << b;
    rows[static_cast<std::size_t>(b)] |= 1ULL << a;
  }
  std::uint8_t acc = 0;
  int nbits = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      acc = static_cast<std::uint8_t>((acc << 1) | ((rows[static_cast<std::size_t>(i)] >> j) & 1));
      if (++nbits == 8) {
        out.push_back(acc);
        acc = 0;
        nbits = 0;
      }
    }
  }
  if (nbits) out.push_back(static_cast<std::uint8_t>(acc << (8 - nbits)));
  return out;
}

void search(const FiniteGraph& g, Cells cells, std::vector<std::uint8_t>& best,
            long& leaves) {
  refine(g, cells);
  std::size_t target = cells.size();
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (cells[i].size() > 1 &&
        (target == cells.size() || cells[i].size() < cells[target].size()))
      target = i;
  }
  if (target == cells.size()) {
    if (++leaves > kLeafBudget)
      throw BudgetError("canonicalization search exceeded its leaf budget");
    auto code = encode(g, cells);
    if (best.empty() || code < best) best = std::move(code);
    return;
  }
  for (int v : cells[target]) {
    Cells branch;
    branch.reserve(cells.size() + 1);
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i != target) {
        branch.push_back(cells[i]);
        continue;
      }
      branch.push_back({v});
      std::vector<int> rest;
      for (int w : cells[i])
        if (w != v) rest.push_back(w);
      branch.push_back(std::move(rest));
    }
    search(g, std::move(branch), best, leaves);
  }
}

}  // namespace

CanonicalCode canonical_code(const FiniteGraph& g, int root) {
  const int n = g.vertex_count();
  if (n > kCanonicalCap)
    throw BudgetError("graph exceeds the canonicalization cap of 64 vertices");
  if (root < 0 || root >= n) throw ValidationError("root outside graph");
  CanonicalCode code;
  if (g.is_connected() && g.is_forest()) {
    const auto s = tree_code(g, root, -1);
    code.bytes.reserve(s.size() + 1);
    code.bytes.push_back(kTreeTag);
    for (char c : s) code.bytes.push_back(static_cast<std::uint8_t>(c));
    return code;
  }
  const auto d = g.distances_from(root);
  std::vector<std::tuple<int, int, int, int>> keys;
  for (int v = 0; v < n; ++v)
    keys.emplace_back(v == root ? 0 : 1, d[static_cast<std::size_t>(v)] < 0 ? n + 1 : d[static_cast<std::size_t>(v)],
                      g.degree(v), v);
  std::sort(keys.begin(), keys.end());
  Cells cells;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    const auto& [r, dd, deg, v] = keys[i];
    if (i == 0 || std::get<0>(keys[i - 1]) != r || std::get<1>(keys[i - 1]) != dd ||
        std::get<2>(keys[i - 1]) != deg)
      cells.emplace_back();
    cells.back().push_back(v);
  }
  long leaves = 0;
  search(g, std::move(cells), code.bytes, leaves);
  return code;
}

CanonicalCode canonical_code(const Ball& b) {
  return canonical_code(b.graph(), 0);
}

}  // namespace percolab
