#include "percolab/generators.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "percolab/error.hpp"
#include "percolab/rng.hpp"

namespace percolab {

using nlohmann::json;

namespace {

// Stream tags for keyed uniforms.
constexpr std::uint64_t kRootStream = 0x2001;
constexpr std::uint64_t kPickStream = 0x2002;
constexpr std::uint64_t kChildStream = 0x2003;
constexpr std::uint64_t kColumnStream = 0x2004;
constexpr std::uint64_t kRowStream = 0x2005;
constexpr std::uint64_t kLabelStream = 0x2006;
constexpr std::uint64_t kOpenStream = 0x2007;
constexpr std::uint64_t kRetryStream = 0x2008;

constexpr double kTailCut = 1e-9;

void check_keys(const json& params, std::initializer_list<const char*> allowed,
                const std::string& kind) {
  if (!params.is_object()) throw ValidationError(kind + ": params must be an object");
  for (const auto& [key, _] : params.items()) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* a) { return key == a; }) == allowed.end())
      throw ValidationError(kind + ": unknown parameter '" + key + "'");
  }
}

int get_int(const json& params, const char* key, const std::string& kind) {
  if (!params.contains(key)) throw ValidationError(kind + ": missing parameter '" + key + "'");
  const auto& v = params.at(key);
  if (!v.is_number_integer()) throw ValidationError(kind + ": '" + key + "' must be an integer");
  return v.get<int>();
}

double get_double(const json& params, const char* key, const std::string& kind) {
  if (!params.contains(key)) throw ValidationError(kind + ": missing parameter '" + key + "'");
  const auto& v = params.at(key);
  if (!v.is_number()) throw ValidationError(kind + ": '" + key + "' must be a number");
  return v.get<double>();
}

}  // namespace

std::uint64_t GraphSource::descriptor_hash() const {
  return hash_string(descriptor().dump());
}

// ---------------------------------------------------------------- canopy

double canopy_sphere_count(int level, int d) {
  if (d == 0) return 1.0;
  double c = 1.0;  // the ancestor d levels up
  if (d <= level) c += std::ldexp(1.0, d);
  for (int j = 1; j <= d - 1; ++j)
    if (d - j <= level + j) c += std::ldexp(1.0, d - j - 1);
  return c;
}

namespace {

// Vertex = (k steps up to the ancestor A_k, then a down path). Child 0 of
// A_{k+1} is A_k, so canonical paths from A_k (k >= 1) start with bit 1.
struct CanopyNode {
  std::int32_t k = 0;
  std::int32_t len = 0;
  std::array<std::uint64_t, 2> bits{0, 0};

  int bit(int i) const { return static_cast<int>((bits[i >> 6] >> (i & 63)) & 1U); }
  void push(int b) {
    if (len >= 128) throw BudgetError("canopy address longer than 128 steps");
    if (b) bits[len >> 6] |= (1ULL << (len & 63));
    ++len;
  }
  void pop() {
    --len;
    bits[len >> 6] &= ~(1ULL << (len & 63));
  }
  void canonicalize() {
    while (k >= 1 && len >= 1 && bit(0) == 0) {
      // drop the leading 0 step: A_k's child 0 is A_{k-1}
      CanopyNode out;
      out.k = k - 1;
      for (int i = 1; i < len; ++i) out.push(bit(i));
      *this = out;
    }
  }
  VertexId id() const {
    if (k == 0 && len == 0) return VertexId{0};
    return VertexId{hash_combine(
        hash_combine(hash_combine(static_cast<std::uint64_t>(k) << 8 | 0xca, static_cast<std::uint64_t>(len)),
                     bits[0]),
        bits[1])};
  }
};

class CanopyGraph final : public LocalGraph {
 public:
  CanopyGraph(std::uint64_t seed, int root_level)
      : LocalGraph(seed, VertexId{0}), n_(root_level) {
    nodes_.emplace(VertexId{0}, CanopyNode{});
  }
  bool is_tree() const override { return true; }
  std::optional<std::int64_t> label(VertexId v) override {
    const auto& nd = node(v);
    return n_ + nd.k - nd.len;
  }
  std::optional<VertexId> parent(VertexId v) override {
    return remember(up(node(v)));
  }
  std::string address(VertexId v) const override {
    const auto& nd = nodes_.at(v);
    std::string s = "up" + std::to_string(nd.k) + ":";
    for (int i = 0; i < nd.len; ++i) s += static_cast<char>('0' + nd.bit(i));
    return s;
  }

 protected:
  std::vector<VertexId> compute_neighbors(VertexId v) override {
    const CanopyNode nd = node(v);
    std::vector<VertexId> out;
    out.push_back(remember(up(nd)));
    if (n_ + nd.k - nd.len > 0) {
      for (int b = 0; b < 2; ++b) {
        CanopyNode c = nd;
        c.push(b);
        c.canonicalize();
        out.push_back(remember(c));
      }
    }
    return out;
  }

 private:
  const CanopyNode& node(VertexId v) const {
    auto it = nodes_.find(v);
    if (it == nodes_.end()) throw ValidationError("unknown canopy vertex");
    return it->second;
  }
  static CanopyNode up(const CanopyNode& nd) {
    CanopyNode u = nd;
    if (u.len == 0) {
      ++u.k;
    } else {
      u.pop();
    }
    return u;
  }
  VertexId remember(const CanopyNode& nd) {
    const VertexId id = nd.id();
    nodes_.emplace(id, nd);
    return id;
  }

  int n_;
  VertexMap<CanopyNode> nodes_;
};

DiscreteLaw geometric_level_law(double decay) {
  if (!(decay > 1.0)) throw ValidationError("canopy: decay must exceed 1");
  // P(n) = (1 - 1/decay) decay^-n, truncated once the tail drops below 1e-9.
  std::vector<double> pmf;
  const double r = 1.0 / decay;
  double tail = 1.0;
  for (int n = 0; tail >= kTailCut; ++n) {
    const double pn = (1.0 - r) * std::pow(r, n);
    pmf.push_back(pn);
    tail -= pn;
  }
  return DiscreteLaw(std::move(pmf), std::max(0.0, tail));
}

}  // namespace

CanopySource::CanopySource(double decay)
    : decay_(decay), level_law_(geometric_level_law(decay)) {}

std::unique_ptr<LocalGraph> CanopySource::sample(std::uint64_t seed) const {
  const int level = static_cast<int>(level_law_.sample(keyed_uniform(seed, kRootStream, 0)));
  return std::make_unique<CanopyGraph>(seed, level);
}

std::unique_ptr<LocalGraph> CanopySource::sample_at_level(int level) const {
  if (level < 0) throw ValidationError("canopy level must be nonnegative");
  return std::make_unique<CanopyGraph>(0, level);
}

json CanopySource::descriptor() const {
  json params = json::object();
  if (decay_ != 2.0) params["decay"] = decay_;
  return {{"kind", "canopy"}, {"params", params}};
}

// ---------------------------------------------------------------- UGW

namespace {

enum class UgwType : std::uint8_t { kPlain, kSurvivor, kDoomed };

// Joint law of (children k, surviving children j), flattened.
struct JointLaw {
  DiscreteLaw law;
  std::vector<std::pair<int, int>> cells;

  std::pair<int, int> sample(double u) const { return cells[law.sample(u)]; }
};

JointLaw survivor_joint(const std::vector<double>& weights, double q) {
  // weight(k) * P(Bin(k, 1-q) = j), j >= 1
  JointLaw out;
  std::vector<double> pmf;
  for (std::size_t k = 1; k < weights.size(); ++k) {
    if (weights[k] == 0.0) continue;
    double binom = 1.0;
    for (std::size_t j = 1; j <= k; ++j) {
      binom = binom * static_cast<double>(k - j + 1) / static_cast<double>(j);
      const double w = weights[k] * binom * std::pow(1.0 - q, static_cast<double>(j)) *
                       std::pow(q, static_cast<double>(k - j));
      if (w <= 0.0) continue;
      pmf.push_back(w);
      out.cells.emplace_back(static_cast<int>(k), static_cast<int>(j));
    }
  }
  out.law = DiscreteLaw(std::move(pmf));
  return out;
}

}  // namespace

struct UgwSource::Impl {
  OffspringLaw plain;
  DiscreteLaw root_plain;
  DiscreteLaw doomed;       // offspring of a doomed vertex
  JointLaw survivor;        // (children, survivors) of a surviving non-root
  JointLaw root_survivor;   // same for the root under conditioning
  bool conditioned = false;
};

namespace {

struct UgwNode {
  VertexId parent;
  bool has_parent = false;
  UgwType type = UgwType::kPlain;
};

class UgwGraph final : public LocalGraph {
 public:
  UgwGraph(std::uint64_t seed, std::shared_ptr<const UgwSource::Impl> impl)
      : LocalGraph(seed, VertexId{hash_combine(seed, 0x06)}), impl_(std::move(impl)) {
    nodes_.emplace(root(), UgwNode{VertexId{}, false,
                                   impl_->conditioned ? UgwType::kSurvivor : UgwType::kPlain});
  }
  bool is_tree() const override { return true; }

 protected:
  std::vector<VertexId> compute_neighbors(VertexId v) override {
    const UgwNode nd = nodes_.at(v);
    const bool is_root = !nd.has_parent;
    const double u = keyed_uniform(seed(), kChildStream, v.value);
    int k = 0;
    int survivors = 0;
    switch (nd.type) {
      case UgwType::kPlain:
        k = static_cast<int>(is_root ? impl_->root_plain.sample(u) : impl_->plain.sample(u));
        break;
      case UgwType::kDoomed:
        k = static_cast<int>(impl_->doomed.sample(u));
        break;
      case UgwType::kSurvivor: {
        const auto kj = is_root ? impl_->root_survivor.sample(u) : impl_->survivor.sample(u);
        k = kj.first;
        survivors = kj.second;
        break;
      }
    }
    std::vector<VertexId> out;
    out.reserve(static_cast<std::size_t>(k) + 1);
    if (nd.has_parent) out.push_back(nd.parent);
    for (int i = 0; i < k; ++i) {
      const VertexId c{hash_combine(v.value, static_cast<std::uint64_t>(i) + 1)};
      UgwType t = UgwType::kPlain;
      if (nd.type == UgwType::kDoomed) t = UgwType::kDoomed;
      if (nd.type == UgwType::kSurvivor) t = i < survivors ? UgwType::kSurvivor : UgwType::kDoomed;
      nodes_.emplace(c, UgwNode{v, true, t});
      out.push_back(c);
    }
    return out;
  }

 private:
  std::shared_ptr<const UgwSource::Impl> impl_;
  VertexMap<UgwNode> nodes_;
};

}  // namespace

UgwSource::UgwSource(OffspringLaw law, bool conditioned)
    : law_(std::move(law)), conditioned_(conditioned),
      decomp_(extinction_probability(law_)), root_law_(ugw_root_degree_law(law_)) {
  auto impl = std::make_shared<Impl>();
  impl->plain = law_;
  impl->root_plain = root_law_;
  impl->conditioned = conditioned;
  if (conditioned) {
    const bool degenerate_one = law_.prob(1) == 1.0;
    if (law_.mean() <= 1.0 && !degenerate_one)
      throw ValidationError("ugw: conditioning on survival requires mean offspring > 1");
    const double q = decomp_.q;
    if (q > 0.0) impl->doomed = decomp_.bar_law;
    else impl->doomed = DiscreteLaw(std::vector<double>{1.0});
    std::vector<double> w(law_.pmf());
    for (std::size_t k = 0; k < w.size(); ++k) w[k] /= (1.0 - q);
    impl->survivor = survivor_joint(w, q);
    impl->root_survivor = survivor_joint(root_law_.pmf(), q);
  }
  impl_ = std::move(impl);
}

std::unique_ptr<LocalGraph> UgwSource::sample(std::uint64_t seed) const {
  return std::make_unique<UgwGraph>(seed, impl_);
}

json UgwSource::descriptor() const {
  return {{"kind", "ugw"},
          {"params", {{"law", to_json(law_)}, {"conditioned", conditioned_}}}};
}

// ---------------------------------------------------------------- G_{k,l}

namespace {

enum class GklType : std::uint8_t { kRootA, kRootB, kAviaA, kAviaB, kB };

struct GklNode {
  VertexId parent;
  GklType type;
};

class GklGraph final : public LocalGraph {
 public:
  GklGraph(std::uint64_t seed, int k, int l, bool root_is_b)
      : LocalGraph(seed, VertexId{1}), k_(k), l_(l) {
    nodes_.emplace(root(), GklNode{VertexId{0}, root_is_b ? GklType::kRootB : GklType::kRootA});
  }
  bool is_tree() const override { return true; }

 protected:
  std::vector<VertexId> compute_neighbors(VertexId v) override {
    const GklNode nd = nodes_.at(v);
    int a_children = 0;  // branching children via a direct edge
    int b_children = 0;  // degree-2 children
    int ab_children = 0; // branching children of a degree-2 vertex
    switch (nd.type) {
      case GklType::kRootA: a_children = l_ + 1; b_children = k_; break;
      case GklType::kAviaA: a_children = l_; b_children = k_; break;
      case GklType::kAviaB: a_children = l_ + 1; b_children = k_ - 1; break;
      case GklType::kB: ab_children = 1; break;
      case GklType::kRootB: ab_children = 2; break;
    }
    std::vector<VertexId> out;
    if (nd.type != GklType::kRootA && nd.type != GklType::kRootB) out.push_back(nd.parent);
    std::uint64_t idx = 0;
    auto add = [&](GklType t) {
      const VertexId c{hash_combine(v.value, ++idx)};
      nodes_.emplace(c, GklNode{v, t});
      out.push_back(c);
    };
    for (int i = 0; i < a_children; ++i) add(GklType::kAviaA);
    for (int i = 0; i < b_children; ++i) add(GklType::kB);
    for (int i = 0; i < ab_children; ++i) add(GklType::kAviaB);
    return out;
  }

 private:
  int k_, l_;
  VertexMap<GklNode> nodes_;
};

}  // namespace

GklSource::GklSource(int k, int l) : k_(k), l_(l) {
  if (k < 1 || l < 1) throw ValidationError("gkl: k and l must be >= 1");
}

std::unique_ptr<LocalGraph> GklSource::sample(std::uint64_t seed) const {
  const bool root_b = keyed_uniform(seed, kRootStream, 0) < static_cast<double>(k_) / (k_ + 2);
  return std::make_unique<GklGraph>(seed, k_, l_, root_b);
}

json GklSource::descriptor() const {
  return {{"kind", "gkl"}, {"params", {{"k", k_}, {"l", l_}}}};
}

// ---------------------------------------------------------------- lattices

VertexId pack_xy(std::int32_t x, std::int32_t y) {
  return VertexId{(static_cast<std::uint64_t>(static_cast<std::uint32_t>(x)) << 32) |
                  static_cast<std::uint32_t>(y)};
}

std::pair<std::int32_t, std::int32_t> unpack_xy(VertexId v) {
  return {static_cast<std::int32_t>(static_cast<std::uint32_t>(v.value >> 32)),
          static_cast<std::int32_t>(static_cast<std::uint32_t>(v.value & 0xffffffffULL))};
}

namespace {

// Induced subgraph of Z^2 (or Z when one_dim) given by a membership test.
template <class Contains>
class LatticeGraph final : public LocalGraph {
 public:
  LatticeGraph(std::uint64_t seed, VertexId root, Contains contains, bool one_dim)
      : LocalGraph(seed, root), contains_(std::move(contains)), one_dim_(one_dim) {}
  bool is_tree() const override { return one_dim_; }
  std::string address(VertexId v) const override {
    const auto [x, y] = unpack_xy(v);
    return "(" + std::to_string(x) + "," + std::to_string(y) + ")";
  }

 protected:
  std::vector<VertexId> compute_neighbors(VertexId v) override {
    const auto [x, y] = unpack_xy(v);
    static constexpr int dx[4] = {1, -1, 0, 0};
    static constexpr int dy[4] = {0, 0, 1, -1};
    std::vector<VertexId> out;
    const int dirs = one_dim_ ? 2 : 4;
    for (int d = 0; d < dirs; ++d) {
      const std::int64_t nx = static_cast<std::int64_t>(x) + dx[d];
      const std::int64_t ny = static_cast<std::int64_t>(y) + dy[d];
      if (nx > INT32_MAX || nx < INT32_MIN || ny > INT32_MAX || ny < INT32_MIN)
        throw BudgetError("lattice coordinate overflow");
      const auto xi = static_cast<std::int32_t>(nx);
      const auto yi = static_cast<std::int32_t>(ny);
      if (contains_(xi, yi)) out.push_back(pack_xy(xi, yi));
    }
    return out;
  }

 private:
  Contains contains_;
  bool one_dim_;
};

template <class Contains>
std::unique_ptr<LocalGraph> make_lattice(std::uint64_t seed, VertexId root, Contains c,
                                         bool one_dim) {
  return std::make_unique<LatticeGraph<Contains>>(seed, root, std::move(c), one_dim);
}

std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  const std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

}  // namespace

std::unique_ptr<LocalGraph> PathSource::sample(std::uint64_t seed) const {
  return make_lattice(seed, pack_xy(0, 0), [](std::int32_t, std::int32_t y) { return y == 0; }, true);
}

std::unique_ptr<LocalGraph> Z2Source::sample(std::uint64_t seed) const {
  return make_lattice(seed, pack_xy(0, 0), [](std::int32_t, std::int32_t) { return true; }, false);
}

BoxSource::BoxSource(int n) : n_(n) {
  if (n < 1) throw ValidationError("box: n must be >= 1");
}

std::unique_ptr<LocalGraph> BoxSource::sample(std::uint64_t seed) const {
  const int side = 2 * n_ + 1;
  const auto idx = static_cast<int>(keyed_uniform(seed, kRootStream, 0) * side * side);
  const int x = idx % side - n_;
  const int y = idx / side - n_;
  const int n = n_;
  return make_lattice(
      seed, pack_xy(x, y),
      [n](std::int32_t a, std::int32_t b) { return std::abs(a) <= n && std::abs(b) <= n; },
      false);
}

json BoxSource::descriptor() const {
  return {{"kind", "box"}, {"params", {{"n", n_}}}};
}

BoxSequenceSource::BoxSequenceSource(int n, int connector) : n_(n), connector_(connector) {
  if (n < 1) throw ValidationError("box_seq: n must be >= 1");
  if (connector < 1) throw ValidationError("box_seq: connector must be >= 1");
}

std::unique_ptr<LocalGraph> BoxSequenceSource::sample(std::uint64_t seed) const {
  // One period: the box [0, 2n]^2 plus connector-1 interior vertices to the
  // east and to the north.
  const int side = 2 * n_ + 1;
  const int period = side + connector_ - 1;
  const int box_count = side * side;
  const int extra = connector_ - 1;
  const int total = box_count + 2 * extra;
  auto idx = static_cast<int>(keyed_uniform(seed, kRootStream, 0) * total);
  int x = 0, y = 0;
  if (idx < box_count) {
    x = idx % side;
    y = idx / side;
  } else if (idx < box_count + extra) {
    x = side + (idx - box_count);
    y = n_;
  } else {
    x = n_;
    y = side + (idx - box_count - extra);
  }
  const int n = n_;
  return make_lattice(
      seed, pack_xy(x, y),
      [n, side, period](std::int32_t a, std::int32_t b) {
        const auto xm = floor_mod(a, period);
        const auto ym = floor_mod(b, period);
        if (xm < side && ym < side) return true;
        if (xm >= side && ym == n) return true;
        if (ym >= side && xm == n) return true;
        return false;
      },
      false);
}

json BoxSequenceSource::descriptor() const {
  return {{"kind", "box_seq"}, {"params", {{"n", n_}, {"connector", connector_}}}};
}

// ---------------------------------------------------------------- finite

namespace {

class FiniteInstance final : public LocalGraph {
 public:
  FiniteInstance(std::uint64_t seed, std::shared_ptr<const FiniteGraph> g, int root, bool tree)
      : LocalGraph(seed, VertexId{static_cast<std::uint64_t>(root)}), g_(std::move(g)), tree_(tree) {}
  bool is_tree() const override { return tree_; }

 protected:
  std::vector<VertexId> compute_neighbors(VertexId v) override {
    std::vector<VertexId> out;
    for (const auto& [w, _] : g_->incident(static_cast<int>(v.value)))
      out.push_back(VertexId{static_cast<std::uint64_t>(w)});
    return out;
  }

 private:
  std::shared_ptr<const FiniteGraph> g_;
  bool tree_;
};

}  // namespace

FiniteSource::FiniteSource(FiniteGraph g, std::optional<int> fixed_root)
    : graph_(std::make_shared<const FiniteGraph>(std::move(g))), fixed_root_(fixed_root) {
  if (graph_->vertex_count() == 0) throw ValidationError("finite: graph has no vertices");
  if (fixed_root && (*fixed_root < 0 || *fixed_root >= graph_->vertex_count()))
    throw ValidationError("finite: root out of range");
}

std::unique_ptr<LocalGraph> FiniteSource::sample(std::uint64_t seed) const {
  int root = fixed_root_.value_or(0);
  if (!fixed_root_)
    root = static_cast<int>(keyed_uniform(seed, kRootStream, 0) * graph_->vertex_count());
  return std::make_unique<FiniteInstance>(seed, graph_, root, graph_->is_forest());
}

std::optional<int> FiniteSource::max_degree() const {
  int d = 0;
  for (int v = 0; v < graph_->vertex_count(); ++v) d = std::max(d, graph_->degree(v));
  return d;
}

json FiniteSource::descriptor() const {
  json edges = json::array();
  for (const auto& e : graph_->edges()) edges.push_back({e.u, e.v});
  json params = {{"n", graph_->vertex_count()}, {"edges", edges}};
  if (fixed_root_) params["root"] = *fixed_root_;
  return {{"kind", "finite"}, {"params", params}};
}

// ---------------------------------------------------------------- edge replacement

namespace {

std::shared_ptr<const EdgeKit> path_kit(int length) {
  auto kit = std::make_shared<EdgeKit>();
  kit->graph = FiniteGraph(length + 1);
  for (int i = 0; i < length; ++i) kit->graph.add_edge(i, i + 1);
  kit->a = 0;
  kit->b = length;
  return kit;
}

// Q_m with anchors (0, -m) and (0, m).
std::shared_ptr<const EdgeKit> box_kit(int m) {
  const int side = 2 * m + 1;
  auto kit = std::make_shared<EdgeKit>();
  kit->graph = FiniteGraph(side * side);
  auto id = [side](int x, int y) { return x + y * side; };
  for (int y = 0; y < side; ++y)
    for (int x = 0; x < side; ++x) {
      if (x + 1 < side) kit->graph.add_edge(id(x, y), id(x + 1, y));
      if (y + 1 < side) kit->graph.add_edge(id(x, y), id(x, y + 1));
    }
  kit->a = id(m, 0);
  kit->b = id(m, side - 1);
  return kit;
}

}  // namespace

struct EdgeReplacementSource::Impl {
  std::string type;
  int cap = 0;
  std::vector<std::shared_ptr<const EdgeKit>> kits;  // by level for box_by_level
  int max_kit_size = 2;
  // Exact root law when the base is the canopy.
  const CanopySource* canopy = nullptr;
  DiscreteLaw canopy_level_law;

  const EdgeKit& kit_for(LocalGraph& base, VertexId u, VertexId v) const {
    if (type != "box_by_level") return *kits.front();
    const auto lu = base.label(u);
    const auto lv = base.label(v);
    if (!lu || !lv) throw ValidationError("edge_repl: box_by_level needs a leveled base");
    const auto level = static_cast<int>(std::min(*lu, *lv));
    return *kits[static_cast<std::size_t>(std::min(level, cap))];
  }

  // Root weight 1 + sum (|K_e| - 2)/2 over base edges at o.
  double weight(LocalGraph& base, VertexId o) const {
    double w = 1.0;
    for (VertexId x : base.neighbors(o))
      w += (kit_for(base, o, x).graph.vertex_count() - 2) / 2.0;
    return w;
  }
};

namespace {

struct ENode {
  bool interior = false;
  VertexId base;       // base vertex (when not interior)
  VertexId lo, hi;     // oriented base edge (when interior)
  int t = 0;           // kit vertex index
  const EdgeKit* kit = nullptr;
};

class EdgeReplacedGraph final : public LocalGraph {
 public:
  EdgeReplacedGraph(std::uint64_t seed, std::unique_ptr<LocalGraph> base,
                    std::shared_ptr<const EdgeReplacementSource::Impl> impl, bool tree)
      : LocalGraph(seed, VertexId{}), base_(std::move(base)), impl_(std::move(impl)), tree_(tree) {}

  bool is_tree() const override { return tree_; }

  VertexId base_vertex(VertexId b) {
    const VertexId id{hash_combine(0xba5eULL, b.value)};
    ENode nd;
    nd.base = b;
    nodes_.emplace(id, nd);
    return id;
  }
  VertexId interior_vertex(VertexId lo, VertexId hi, int t, const EdgeKit* kit) {
    const VertexId id{hash_combine(hash_combine(unordered_pair_key(lo.value, hi.value), 0x1e), static_cast<std::uint64_t>(t))};
    ENode nd;
    nd.interior = true;
    nd.lo = lo;
    nd.hi = hi;
    nd.t = t;
    nd.kit = kit;
    nodes_.emplace(id, nd);
    return id;
  }

  // Places the root on o or inside a kit at o, with u uniform on [0,1).
  void choose_root(double u) {
    LocalGraph& b = *base_;
    const VertexId o = b.root();
    double x = u * impl_->weight(b, o);
    if (x < 1.0) {
      set_root(base_vertex(o));
      return;
    }
    x -= 1.0;
    const auto nbrs = b.neighbors(o);
    for (VertexId w : nbrs) {
      const EdgeKit& kit = impl_->kit_for(b, o, w);
      const int inner = kit.graph.vertex_count() - 2;
      const double s = inner / 2.0;
      if (inner > 0 && (x < s || w == nbrs.back())) {
        int pick = std::min(inner - 1, static_cast<int>(x / s * inner));
        // interior indices skip the two anchors
        int t = 0;
        for (;; ++t) {
          if (t == kit.a || t == kit.b) continue;
          if (pick-- == 0) break;
        }
        const VertexId lo = std::min(o, w), hi = std::max(o, w);
        set_root(interior_vertex(lo, hi, t, &kit));
        return;
      }
      x -= s;
    }
    set_root(base_vertex(o));
  }

 protected:
  std::vector<VertexId> compute_neighbors(VertexId v) override {
    const ENode nd = nodes_.at(v);
    std::vector<VertexId> out;
    if (!nd.interior) {
      for (VertexId w : base_->neighbors(nd.base)) {
        const EdgeKit& kit = impl_->kit_for(*base_, nd.base, w);
        const VertexId lo = std::min(nd.base, w), hi = std::max(nd.base, w);
        const int mine = nd.base == lo ? kit.a : kit.b;
        const int other = nd.base == lo ? kit.b : kit.a;
        for (const auto& [t, _] : kit.graph.incident(mine)) {
          if (t == other) out.push_back(base_vertex(w));
          else out.push_back(interior_vertex(lo, hi, t, &kit));
        }
      }
    } else {
      for (const auto& [s, _] : nd.kit->graph.incident(nd.t)) {
        if (s == nd.kit->a) out.push_back(base_vertex(nd.lo));
        else if (s == nd.kit->b) out.push_back(base_vertex(nd.hi));
        else out.push_back(interior_vertex(nd.lo, nd.hi, s, nd.kit));
      }
    }
    return out;
  }

 private:
  std::unique_ptr<LocalGraph> base_;
  std::shared_ptr<const EdgeReplacementSource::Impl> impl_;
  bool tree_;
  VertexMap<ENode> nodes_;
};

}  // namespace

EdgeReplacementSource::EdgeReplacementSource(SourcePtr base, json kit)
    : base_(std::move(base)), kit_(std::move(kit)) {
  if (!base_) throw ValidationError("edge_repl: missing base");
  if (!kit_.is_object() || !kit_.contains("type") || !kit_.at("type").is_string())
    throw ValidationError("edge_repl: kit needs a string 'type'");
  auto impl = std::make_shared<Impl>();
  impl->type = kit_.at("type").get<std::string>();
  const std::string k = "edge_repl kit";
  if (impl->type == "edge") {
    check_keys(kit_, {"type"}, k);
    impl->kits.push_back(path_kit(1));
  } else if (impl->type == "path") {
    check_keys(kit_, {"type", "length"}, k);
    const int len = get_int(kit_, "length", k);
    if (len < 1) throw ValidationError("edge_repl: path length must be >= 1");
    impl->kits.push_back(path_kit(len));
  } else if (impl->type == "box") {
    check_keys(kit_, {"type", "m"}, k);
    const int m = get_int(kit_, "m", k);
    if (m < 1) throw ValidationError("edge_repl: box m must be >= 1");
    impl->kits.push_back(box_kit(m));
  } else if (impl->type == "box_by_level") {
    check_keys(kit_, {"type", "cap"}, k);
    impl->cap = get_int(kit_, "cap", k);
    if (impl->cap < 0 || impl->cap > 8) throw ValidationError("edge_repl: cap must be in [0, 8]");
    impl->canopy = dynamic_cast<const CanopySource*>(base_.get());
    if (!impl->canopy) throw ValidationError("edge_repl: box_by_level requires a canopy base");
    for (int n = 0; n <= impl->cap; ++n) impl->kits.push_back(box_kit(1 << n));
  } else {
    throw ValidationError("edge_repl: unknown kit type '" + impl->type + "'");
  }
  for (const auto& kp : impl->kits)
    impl->max_kit_size = std::max(impl->max_kit_size, kp->graph.vertex_count());

  if (auto* canopy = dynamic_cast<const CanopySource*>(base_.get())) {
    // The canopy is determined by its root level, so the biased level law
    // is exact: P'(n) proportional to P(n) w(n).
    impl->canopy = canopy;
    std::vector<double> pmf(canopy->level_law().pmf());
    for (std::size_t n = 0; n < pmf.size(); ++n) {
      auto g = canopy->sample_at_level(static_cast<int>(n));
      pmf[n] *= impl->weight(*g, g->root());
    }
    impl->canopy_level_law = DiscreteLaw(std::move(pmf), canopy->level_law().tail_mass());
  } else if (impl->max_kit_size > 2 && !base_->max_degree()) {
    throw ValidationError("edge_repl: base needs bounded degree for root re-biasing");
  }
  impl_ = std::move(impl);
}

std::unique_ptr<LocalGraph> EdgeReplacementSource::sample(std::uint64_t seed) const {
  std::unique_ptr<LocalGraph> base;
  if (impl_->canopy) {
    const auto n = impl_->canopy_level_law.sample(keyed_uniform(seed, kRootStream, 0));
    base = impl_->canopy->sample_at_level(static_cast<int>(n));
  } else {
    const double wmax = 1.0 + base_->max_degree().value_or(0) * (impl_->max_kit_size - 2) / 2.0;
    for (std::uint64_t t = 0;; ++t) {
      if (t > 1'000'000) throw BudgetError("edge_repl: root rejection sampling did not terminate");
      auto candidate = base_->sample(hash_combine(seed, t));
      const double w = impl_->weight(*candidate, candidate->root());
      if (w > wmax + 1e-9) throw ValidationError("edge_repl: base degree exceeds declared bound");
      if (keyed_uniform(seed, kRetryStream, t) * wmax < w) {
        base = std::move(candidate);
        break;
      }
    }
  }
  auto g = std::make_unique<EdgeReplacedGraph>(seed, std::move(base), impl_, tree_instances());
  g->choose_root(keyed_uniform(seed, kPickStream, 0));
  return g;
}

json EdgeReplacementSource::descriptor() const {
  return {{"kind", "edge_repl"}, {"params", {{"base", base_->descriptor()}, {"kit", kit_}}}};
}

bool EdgeReplacementSource::tree_instances() const {
  return base_->tree_instances() && (impl_->type == "edge" || impl_->type == "path");
}

// ---------------------------------------------------------------- vertex replacement

namespace {

constexpr std::int64_t kGridOffset = 512;
constexpr std::uint64_t kInnerMax = (1ULL << 22) - 1;

// Boxes [0, 2a_m] x [0, 2b_n] at the sites (m, n) of Z^2, joined at side
// midpoints directly (connector 1) or through one extra vertex (connector 2).
class BoxGridGraph final : public LocalGraph {
 public:
  BoxGridGraph(std::uint64_t seed, std::shared_ptr<const DiscreteLaw> side, int a0, int b0,
               int connector)
      : LocalGraph(seed, VertexId{}), side_(std::move(side)), connector_(connector) {
    cols_[0] = a0;
    rows_[0] = b0;
  }

  std::pair<int, int> root_box() const { return {cols_.at(0), rows_.at(0)}; }
  void place_root(std::uint64_t i, std::uint64_t j) { set_root(encode(0, 0, i, j)); }

  std::string address(VertexId v) const override {
    const auto c = decode(v);
    return "box(" + std::to_string(c.m) + "," + std::to_string(c.n) + ")[" +
           std::to_string(c.i) + "," + std::to_string(c.j) + "]";
  }

  static constexpr std::uint64_t kEast = 1, kNorth = 2;

  static VertexId encode(std::int64_t m, std::int64_t n, std::uint64_t i, std::uint64_t j) {
    if (m <= -kGridOffset + 1 || m >= kGridOffset - 1 || n <= -kGridOffset + 1 || n >= kGridOffset - 1)
      throw BudgetError("vertex_repl: exploration left the addressable box grid");
    return VertexId{(static_cast<std::uint64_t>(m + kGridOffset) << 54) |
                    (static_cast<std::uint64_t>(n + kGridOffset) << 44) | (i << 22) | j};
  }

 protected:
  std::vector<VertexId> compute_neighbors(VertexId v) override {
    const auto c = decode(v);
    std::vector<VertexId> out;
    if (c.i == kInnerMax) {  // connector vertex
      const std::int64_t a = col(c.m), b = row(c.n);
      if (c.j == kEast) {
        out.push_back(encode(c.m, c.n, 2 * a, b));
        out.push_back(encode(c.m + 1, c.n, 0, b));
      } else {
        out.push_back(encode(c.m, c.n, a, 2 * b));
        out.push_back(encode(c.m, c.n + 1, a, 0));
      }
      return out;
    }
    const std::uint64_t a = col(c.m), b = row(c.n);
    if (c.i + 1 <= 2 * a) out.push_back(encode(c.m, c.n, c.i + 1, c.j));
    if (c.i >= 1) out.push_back(encode(c.m, c.n, c.i - 1, c.j));
    if (c.j + 1 <= 2 * b) out.push_back(encode(c.m, c.n, c.i, c.j + 1));
    if (c.j >= 1) out.push_back(encode(c.m, c.n, c.i, c.j - 1));
    const bool direct = connector_ == 1;
    if (c.i == 2 * a && c.j == b)
      out.push_back(direct ? encode(c.m + 1, c.n, 0, b) : encode(c.m, c.n, kInnerMax, kEast));
    if (c.i == 0 && c.j == b)
      out.push_back(direct ? encode(c.m - 1, c.n, 2 * col(c.m - 1), b)
                           : encode(c.m - 1, c.n, kInnerMax, kEast));
    if (c.j == 2 * b && c.i == a)
      out.push_back(direct ? encode(c.m, c.n + 1, a, 0) : encode(c.m, c.n, kInnerMax, kNorth));
    if (c.j == 0 && c.i == a)
      out.push_back(direct ? encode(c.m, c.n - 1, a, 2 * row(c.n - 1))
                           : encode(c.m, c.n - 1, kInnerMax, kNorth));
    return out;
  }

 private:
  struct Coord {
    std::int64_t m, n;
    std::uint64_t i, j;
  };
  static Coord decode(VertexId v) {
    return {static_cast<std::int64_t>(v.value >> 54) - kGridOffset,
            static_cast<std::int64_t>((v.value >> 44) & 0x3ff) - kGridOffset,
            (v.value >> 22) & kInnerMax, v.value & kInnerMax};
  }
  std::uint64_t col(std::int64_t m) { return side_at(cols_, m, kColumnStream); }
  std::uint64_t row(std::int64_t n) { return side_at(rows_, n, kRowStream); }
  std::uint64_t side_at(std::unordered_map<std::int64_t, int>& memo, std::int64_t idx,
                        std::uint64_t stream) {
    auto it = memo.find(idx);
    if (it != memo.end()) return static_cast<std::uint64_t>(it->second);
    const int s = static_cast<int>(side_->sample(keyed_uniform(seed(), stream, static_cast<std::uint64_t>(idx))));
    memo.emplace(idx, s);
    return static_cast<std::uint64_t>(s);
  }

  std::shared_ptr<const DiscreteLaw> side_;
  int connector_;
  std::unordered_map<std::int64_t, int> cols_, rows_;
};

double box_side_weight(std::size_t k) { return 2.0 * static_cast<double>(k) + 1.0; }

}  // namespace

VertexReplacementSource::VertexReplacementSource(json kit) : kit_(std::move(kit)) {
  const std::string k = "vertex_repl kit";
  if (!kit_.is_object() || !kit_.contains("type") || !kit_.at("type").is_string())
    throw ValidationError("vertex_repl: kit needs a string 'type'");
  const auto type = kit_.at("type").get<std::string>();
  bool size_bias = true;
  if (type == "single") {
    check_keys(kit_, {"type"}, k);
    side_law_ = DiscreteLaw(std::vector<double>{1.0});
  } else if (type == "box_const") {
    check_keys(kit_, {"type", "n", "connector"}, k);
    const int n = get_int(kit_, "n", k);
    if (n < 0) throw ValidationError("vertex_repl: n must be >= 0");
    if (kit_.contains("connector")) {
      const int c = get_int(kit_, "connector", k);
      if (c != 1 && c != 2) throw ValidationError("vertex_repl: connector must be 1 or 2");
    }
    std::vector<double> pmf(static_cast<std::size_t>(n) + 1, 0.0);
    pmf.back() = 1.0;
    side_law_ = DiscreteLaw(std::move(pmf));
  } else if (type == "box_law") {
    check_keys(kit_, {"type", "law", "size_bias"}, k);
    if (kit_.contains("size_bias")) {
      if (!kit_.at("size_bias").is_boolean()) throw ValidationError("vertex_repl: size_bias must be boolean");
      size_bias = kit_.at("size_bias").get<bool>();
    }
    if (!kit_.contains("law")) throw ValidationError("vertex_repl: box_law needs 'law'");
    const auto& law = kit_.at("law");
    if (law.is_object() && law.contains("power")) {
      check_keys(law, {"power"}, "vertex_repl law");
      power_ = PowerLaw::make(get_double(law, "power", "vertex_repl law"), kTailCut);
      side_law_ = power_->law;
      tail_mass_ = power_->tail_mass;
    } else {
      side_law_ = offspring_law_from_json(law);
    }
    if (side_law_.support_size() >= (1U << 20))
      throw ValidationError("vertex_repl: box sides beyond 2^20 are not addressable");
  } else {
    throw ValidationError("vertex_repl: unknown kit type '" + type + "'");
  }
  if (size_bias) {
    if (power_) {
      root_side_law_ = power_->biased(&box_side_weight);
      biased_tail_mass_ = power_->biased_tail_mass(&box_side_weight);
    } else {
      std::vector<double> pmf(side_law_.pmf());
      for (std::size_t i = 0; i < pmf.size(); ++i) pmf[i] *= box_side_weight(i);
      root_side_law_ = DiscreteLaw(std::move(pmf));
    }
  } else {
    root_side_law_ = side_law_;
  }
  side_ptr_ = std::make_shared<const DiscreteLaw>(side_law_);
}

std::unique_ptr<LocalGraph> VertexReplacementSource::sample(std::uint64_t seed) const {
  const int connector = kit_.value("connector", 1);
  const int a0 = static_cast<int>(root_side_law_.sample(keyed_uniform(seed, kRootStream, 0)));
  const int b0 = static_cast<int>(root_side_law_.sample(keyed_uniform(seed, kRootStream, 1)));
  auto g = std::make_unique<BoxGridGraph>(seed, side_ptr_, a0, b0, connector);
  const std::uint64_t w = 2 * static_cast<std::uint64_t>(a0) + 1;
  const std::uint64_t h = 2 * static_cast<std::uint64_t>(b0) + 1;
  const std::uint64_t extra = connector == 2 ? 2 : 0;
  const auto idx = static_cast<std::uint64_t>(keyed_uniform(seed, kPickStream, 0) *
                                              static_cast<double>(w * h + extra));
  if (idx < w * h) {
    g->place_root(idx % w, idx / w);
  } else {
    g->place_root(kInnerMax, idx - w * h == 0 ? BoxGridGraph::kEast : BoxGridGraph::kNorth);
  }
  return g;
}

json VertexReplacementSource::descriptor() const {
  return {{"kind", "vertex_repl"}, {"params", {{"base", {{"kind", "z2"}, {"params", json::object()}}}, {"kit", kit_}}}};
}

std::pair<int, int> VertexReplacementSource::root_box(const LocalGraph& g) {
  const auto* grid = dynamic_cast<const BoxGridGraph*>(&g);
  if (!grid) throw ValidationError("root_box: not a vertex replacement instance");
  return grid->root_box();
}

// ---------------------------------------------------------------- contraction

struct ContractionSource::Impl {
  std::string type;
  double q = 0.0;
  std::set<std::pair<std::uint64_t, std::uint64_t>> explicit_edges;
};

namespace {

class ContractedGraph final : public LocalGraph {
 public:
  ContractedGraph(std::uint64_t seed, std::unique_ptr<LocalGraph> base,
                  std::shared_ptr<const ContractionSource::Impl> impl, std::uint64_t label_seed,
                  int shift)
      : LocalGraph(seed, VertexId{}), base_(std::move(base)), impl_(std::move(impl)),
        label_seed_(label_seed), shift_(shift) {}

  bool labeled(VertexId u, VertexId v) const {
    const std::string& t = impl_->type;
    if (t == "none") return false;
    if (t == "bernoulli")
      return keyed_uniform(label_seed_, kLabelStream, unordered_pair_key(u.value, v.value)) < impl_->q;
    if (t == "alternating") {
      const auto x = std::min(unpack_xy(u).first, unpack_xy(v).first);
      return floor_mod(static_cast<std::int64_t>(x) + shift_, 2) == 0;
    }
    const auto key = std::minmax(u.value, v.value);
    return impl_->explicit_edges.count({key.first, key.second}) > 0;
  }

  VertexId rep(VertexId v) {
    auto it = rep_of_.find(v);
    if (it != rep_of_.end()) return it->second;
    const std::size_t cap = std::min<std::size_t>(exploration_budget(), 1'000'000);
    std::vector<VertexId> members{v};
    VertexMap<char> seen{{v, 1}};
    for (std::size_t i = 0; i < members.size(); ++i) {
      const VertexId x = members[i];
      for (VertexId w : base_->neighbors(x)) {
        if (seen.count(w) || !labeled(x, w)) continue;
        seen.emplace(w, 1);
        members.push_back(w);
        if (members.size() > cap) throw BudgetError("contraction: label-1 component exceeds cap");
      }
    }
    const VertexId r = *std::min_element(members.begin(), members.end());
    for (VertexId x : members) rep_of_[x] = r;
    members_[r] = std::move(members);
    return r;
  }

  std::size_t component_size(VertexId v) { return members_.at(rep(v)).size(); }
  void place_root(VertexId base_root) { set_root(rep(base_root)); }

 protected:
  std::vector<VertexId> compute_neighbors(VertexId v) override {
    const VertexId r = rep(v);
    std::vector<VertexId> out;
    std::unordered_set<VertexId, VertexIdHash> seen;
    const auto& members = members_.at(r);  // node references survive rehashing
    for (VertexId x : members) {
      for (VertexId w : base_->neighbors(x)) {
        if (labeled(x, w)) continue;
        const VertexId rw = rep(w);
        if (rw == r || !seen.insert(rw).second) continue;
        out.push_back(rw);
      }
    }
    return out;
  }

 private:
  std::unique_ptr<LocalGraph> base_;
  std::shared_ptr<const ContractionSource::Impl> impl_;
  std::uint64_t label_seed_;
  int shift_;
  VertexMap<VertexId> rep_of_;
  VertexMap<std::vector<VertexId>> members_;
};

}  // namespace

ContractionSource::ContractionSource(SourcePtr base, json labels)
    : base_(std::move(base)), labels_(std::move(labels)) {
  if (!base_) throw ValidationError("contraction: missing base");
  if (!labels_.is_object() || !labels_.contains("type") || !labels_.at("type").is_string())
    throw ValidationError("contraction: labels need a string 'type'");
  const auto type = labels_.at("type").get<std::string>();
  const std::string k = "contraction labels";
  if (type == "none" || type == "alternating") {
    check_keys(labels_, {"type"}, k);
    if (type == "alternating" && !dynamic_cast<const PathSource*>(base_.get()))
      throw ValidationError("contraction: alternating labels require a path base");
  } else if (type == "bernoulli") {
    check_keys(labels_, {"type", "q"}, k);
    const double q = get_double(labels_, "q", k);
    if (!(q >= 0.0 && q <= 1.0)) throw ValidationError("contraction: q must be in [0, 1]");
  } else if (type == "explicit") {
    check_keys(labels_, {"type", "edges"}, k);
    if (!dynamic_cast<const FiniteSource*>(base_.get()))
      throw ValidationError("contraction: explicit labels require a finite base");
  } else {
    throw ValidationError("contraction: unknown label type '" + type + "'");
  }
  auto impl = std::make_shared<Impl>();
  impl->type = labels_.at("type").get<std::string>();
  if (impl->type == "bernoulli") impl->q = labels_.at("q").get<double>();
  if (impl->type == "explicit") {
    const auto* fin = dynamic_cast<const FiniteSource*>(base_.get());
    for (const auto& e : labels_.at("edges")) {
      const auto uv = e.get<std::vector<int>>();
      if (uv.size() != 2 || !fin->graph().has_edge(uv[0], uv[1]))
        throw ValidationError("contraction: labeled edge is not an edge of the base");
      const auto lo = static_cast<std::uint64_t>(std::min(uv[0], uv[1]));
      const auto hi = static_cast<std::uint64_t>(std::max(uv[0], uv[1]));
      impl->explicit_edges.insert({lo, hi});
    }
  }
  impl_ = std::move(impl);
}

std::unique_ptr<LocalGraph> ContractionSource::sample(std::uint64_t seed) const {
  // Re-bias by 1/|C_o| through rejection.
  for (std::uint64_t t = 0; t <= 1'000'000; ++t) {
    const std::uint64_t s = hash_combine(seed, t);
    auto base = base_->sample(s);
    const VertexId o = base->root();
    const int shift = keyed_uniform(s, kLabelStream, 1) < 0.5 ? 0 : 1;
    auto g = std::make_unique<ContractedGraph>(seed, std::move(base), impl_, s, shift);
    const auto size = g->component_size(o);
    if (keyed_uniform(seed, kRetryStream, t) * static_cast<double>(size) < 1.0) {
      g->place_root(o);
      return g;
    }
  }
  throw BudgetError("contraction: root rejection sampling did not terminate");
}

json ContractionSource::descriptor() const {
  return {{"kind", "contraction"}, {"params", {{"base", base_->descriptor()}, {"labels", labels_}}}};
}

// ---------------------------------------------------------------- percolation cluster

namespace {

class OpenClusterGraph final : public LocalGraph {
 public:
  OpenClusterGraph(std::uint64_t seed, std::unique_ptr<LocalGraph> base, double p,
                   std::uint64_t open_seed)
      : LocalGraph(seed, base->root()), base_(std::move(base)), p_(p), open_seed_(open_seed) {}
  bool is_tree() const override { return base_->is_tree(); }

  // Whether the open cluster of the root reaches chemical distance r.
  bool reaches(int r) {
    if (r <= 0) return true;
    VertexMap<int> dist{{root(), 0}};
    std::deque<VertexId> queue{root()};
    const std::size_t cap = exploration_budget();
    while (!queue.empty()) {
      const VertexId x = queue.front();
      queue.pop_front();
      const int d = dist.at(x);
      for (VertexId w : neighbors(x)) {
        if (dist.count(w)) continue;
        if (d + 1 >= r) return true;
        dist.emplace(w, d + 1);
        queue.push_back(w);
        if (dist.size() > cap) throw BudgetError("perc_cluster: conditioning exploration exceeds budget");
      }
    }
    return false;
  }

 protected:
  std::vector<VertexId> compute_neighbors(VertexId v) override {
    std::vector<VertexId> out;
    for (VertexId w : base_->neighbors(v))
      if (keyed_uniform(open_seed_, kOpenStream, unordered_pair_key(v.value, w.value)) < p_)
        out.push_back(w);
    return out;
  }

 private:
  std::unique_ptr<LocalGraph> base_;
  double p_;
  std::uint64_t open_seed_;
};

}  // namespace

PercClusterSource::PercClusterSource(SourcePtr base, double p, int condition_radius,
                                     int max_retries)
    : base_(std::move(base)), p_(p), condition_radius_(condition_radius), max_retries_(max_retries) {
  if (!base_) throw ValidationError("perc_cluster: missing base");
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("perc_cluster: p must be in [0, 1]");
  if (condition_radius < 0) throw ValidationError("perc_cluster: condition_radius must be >= 0");
  if (max_retries < 1) throw ValidationError("perc_cluster: max_retries must be >= 1");
}

std::unique_ptr<LocalGraph> PercClusterSource::sample(std::uint64_t seed) const {
  for (int t = 0; t < max_retries_; ++t) {
    const std::uint64_t s = hash_combine(seed, static_cast<std::uint64_t>(t));
    auto g = std::make_unique<OpenClusterGraph>(seed, base_->sample(s), p_, s);
    if (g->reaches(condition_radius_)) return g;
  }
  throw BudgetError("perc_cluster: retry cap reached; p is likely subcritical");
}

json PercClusterSource::descriptor() const {
  return {{"kind", "perc_cluster"},
          {"params", {{"base", base_->descriptor()}, {"p", p_},
                      {"condition_radius", condition_radius_}, {"max_retries", max_retries_}}}};
}

// ---------------------------------------------------------------- descriptors

SourcePtr make_source(const json& d) {
  if (!d.is_object() || !d.contains("kind") || !d.at("kind").is_string())
    throw ValidationError("source descriptor needs a string 'kind'");
  for (const auto& [key, _] : d.items())
    if (key != "kind" && key != "params")
      throw ValidationError("source descriptor: unknown field '" + key + "'");
  const auto kind = d.at("kind").get<std::string>();
  const json params = d.value("params", json::object());
  if (kind == "canopy") {
    check_keys(params, {"decay"}, kind);
    return std::make_shared<CanopySource>(params.contains("decay") ? get_double(params, "decay", kind) : 2.0);
  }
  if (kind == "ugw") {
    check_keys(params, {"law", "conditioned"}, kind);
    if (!params.contains("law")) throw ValidationError("ugw: missing parameter 'law'");
    bool cond = false;
    if (params.contains("conditioned")) {
      if (!params.at("conditioned").is_boolean()) throw ValidationError("ugw: 'conditioned' must be boolean");
      cond = params.at("conditioned").get<bool>();
    }
    return std::make_shared<UgwSource>(offspring_law_from_json(params.at("law")), cond);
  }
  if (kind == "gkl") {
    check_keys(params, {"k", "l"}, kind);
    return std::make_shared<GklSource>(get_int(params, "k", kind), get_int(params, "l", kind));
  }
  if (kind == "path") {
    check_keys(params, {}, kind);
    return std::make_shared<PathSource>();
  }
  if (kind == "z2") {
    check_keys(params, {}, kind);
    return std::make_shared<Z2Source>();
  }
  if (kind == "box") {
    check_keys(params, {"n"}, kind);
    return std::make_shared<BoxSource>(get_int(params, "n", kind));
  }
  if (kind == "box_seq") {
    check_keys(params, {"n", "connector"}, kind);
    const int c = params.contains("connector") ? get_int(params, "connector", kind) : 2;
    return std::make_shared<BoxSequenceSource>(get_int(params, "n", kind), c);
  }
  if (kind == "finite") {
    check_keys(params, {"n", "edges", "root"}, kind);
    const int n = get_int(params, "n", kind);
    if (n < 1) throw ValidationError("finite: n must be >= 1");
    FiniteGraph g(n);
    if (params.contains("edges")) {
      for (const auto& e : params.at("edges")) {
        const auto uv = e.get<std::vector<int>>();
        if (uv.size() != 2) throw ValidationError("finite: edges must be pairs");
        g.add_edge(uv[0], uv[1]);
      }
    }
    std::optional<int> root;
    if (params.contains("root")) root = get_int(params, "root", kind);
    return std::make_shared<FiniteSource>(std::move(g), root);
  }
  if (kind == "edge_repl") {
    check_keys(params, {"base", "kit"}, kind);
    if (!params.contains("base") || !params.contains("kit"))
      throw ValidationError("edge_repl: needs 'base' and 'kit'");
    return std::make_shared<EdgeReplacementSource>(make_source(params.at("base")), params.at("kit"));
  }
  if (kind == "vertex_repl") {
    check_keys(params, {"base", "kit"}, kind);
    if (params.contains("base") && make_source(params.at("base"))->kind() != "z2")
      throw ValidationError("vertex_repl: only a z2 base is supported");
    if (!params.contains("kit")) throw ValidationError("vertex_repl: needs 'kit'");
    return std::make_shared<VertexReplacementSource>(params.at("kit"));
  }
  if (kind == "contraction") {
    check_keys(params, {"base", "labels"}, kind);
    if (!params.contains("base") || !params.contains("labels"))
      throw ValidationError("contraction: needs 'base' and 'labels'");
    return std::make_shared<ContractionSource>(make_source(params.at("base")), params.at("labels"));
  }
  if (kind == "perc_cluster") {
    check_keys(params, {"base", "p", "condition_radius", "max_retries"}, kind);
    if (!params.contains("base")) throw ValidationError("perc_cluster: needs 'base'");
    return std::make_shared<PercClusterSource>(
        make_source(params.at("base")), get_double(params, "p", kind),
        params.contains("condition_radius") ? get_int(params, "condition_radius", kind) : 0,
        params.contains("max_retries") ? get_int(params, "max_retries", kind) : 1000);
  }
  throw ValidationError("unknown source kind '" + kind + "'");
}

}  // namespace percolab
