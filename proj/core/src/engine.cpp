#include "engine.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <queue>

namespace moat::detail {

namespace {

// Keyed by a double; exact times are recomputed from the live state when
// items are popped.
struct HeapItem {
  double key;
  std::int32_t id;  // arc, or ~edge for undirected-tight events
  std::uint32_t version;
  bool operator>(const HeapItem& o) const { return key != o.key ? key > o.key : id > o.id; }
};

double tolerance(double x) { return 1e-9 * (std::fabs(x) + 1); }

// Radix heap over the bit patterns of nonnegative doubles. Keys below the
// last extracted minimum go to a binary side heap, which therefore always
// holds the smallest items.
class RadixHeap {
 public:
  bool empty() const { return size_ == 0 && low_.empty(); }

  void push(const HeapItem& it) {
    std::uint64_t x = bits(it.key);
    if (x < last_) {
      low_.push(it);
      return;
    }
    buckets_[bucket(x)].push_back(it);
    ++size_;
  }

  const HeapItem& top() {
    if (!low_.empty()) return low_.top();
    if (buckets_[0].empty()) pull();
    return buckets_[0].back();
  }

  // Smallest key without moving the floor.
  double min_key() const {
    if (!low_.empty()) return low_.top().key;
    if (!buckets_[0].empty()) return std::bit_cast<double>(last_);
    int i = 1;
    while (buckets_[i].empty()) ++i;
    std::uint64_t m = bits(buckets_[i][0].key);
    for (const HeapItem& it : buckets_[i]) m = std::min(m, bits(it.key));
    return std::bit_cast<double>(m);
  }

  void pop() {
    if (!low_.empty()) {
      low_.pop();
      return;
    }
    if (buckets_[0].empty()) pull();
    buckets_[0].pop_back();
    --size_;
  }

 private:
  static std::uint64_t bits(double k) { return std::bit_cast<std::uint64_t>(k); }
  int bucket(std::uint64_t x) const { return x == last_ ? 0 : 64 - __builtin_clzll(x ^ last_); }

  void pull() {
    int i = 1;
    while (buckets_[i].empty()) ++i;
    std::vector<HeapItem>& b = buckets_[i];
    std::uint64_t m = bits(b[0].key);
    for (const HeapItem& it : b) m = std::min(m, bits(it.key));
    last_ = m;
    for (const HeapItem& it : b) buckets_[bucket(bits(it.key))].push_back(it);
    b.clear();
  }

  std::vector<HeapItem> buckets_[65];
  std::priority_queue<HeapItem, std::vector<HeapItem>, std::greater<>> low_;
  std::uint64_t last_ = 0;
  std::size_t size_ = 0;
};

class Engine {
 public:
  Engine(const Instance& inst, const MergePlan& plan, const EngineOptions& opt)
      : inst_(inst), plan_(plan), opt_(opt) {}

  EngineResult run() {
    const Dendrogram& d = plan_.dendrogram();
    std::size_t n = inst_.num_vertices(), arcs = inst_.num_arcs(), edges = inst_.num_edges();
    std::size_t nsets = d.sets.size();
    int k = int(plan_.size());
    if (plan_.size() != inst_.num_terminals()) throw InvalidInput("plan and instance terminal sets differ");
    if (k > 64) throw CapacityError("growth engine supports at most 64 terminals");
    res_.plan_vertex.resize(k);
    for (int i = 0; i < k; ++i) {
      auto v = inst_.find(plan_.labels()[i]);
      if (!v || !inst_.is_terminal(*v)) throw InvalidInput("plan terminal '" + plan_.labels()[i] + "' is not a terminal");
      res_.plan_vertex[i] = *v;
      if (*v == opt_.root) res_.root_terminal = i;
    }
    if (res_.root_terminal < 0) throw InvalidInput("root must be a terminal");
    root_ = opt_.root;

    mask_.assign(n, 0);
    rate_.assign(arcs, 0);
    version_.assign(arcs, 0);
    beta_.assign(arcs, Rational(0));
    res_.tight.assign(arcs, kNever);
    und_.assign(edges, !opt_.continuous);
    if (opt_.continuous) {
      edge_version_.assign(edges, 0);
      res_.und_tight.assign(edges, kNever);
      res_.load_at_und.assign(arcs, Rational(0));
    }
    if (opt_.record_contributions) open_.assign(arcs, {});
    res_.set_start.assign(nsets, kNever);
    res_.set_end.assign(nsets, kNever);
    res_.root_reach.assign(nsets, kNever);
    watch_slot_.assign(n, -1);
    for (std::size_t i = 0; i < opt_.watch.size(); ++i) watch_slot_[opt_.watch[i]] = int(i);
    res_.watch_reach.assign(nsets, std::vector<int>(opt_.watch.size(), kNever));
    stamp_.assign(n, 0);
    edge_stamp_.assign(edges, 0);
    open_deg_.assign(n, 0);
    for (VertexId v = 0; v < VertexId(n); ++v) open_deg_[v] = std::uint32_t(2 * inst_.out_arcs(v).size());
    horizon_ = plan_.max_time();

    std::map<Rational, std::vector<int>> merges;
    for (std::size_t s = 0; s < nsets; ++s)
      if (!d.sets[s].children.empty()) merges[d.sets[s].activation].push_back(int(s));
    auto next_merge = merges.begin();

    res_.times.push_back(Rational(0));
    node_of_slot_.assign(64, -1);
    for (int i = 0; i < k; ++i) {
      node_of_slot_[i] = d.leaf(i);
      res_.set_start[d.leaf(i)] = 0;
      VertexId v = res_.plan_vertex[i];
      mask_[v] |= std::uint64_t(1) << i;
      note_gain(v, std::uint64_t(1) << i, 0);
    }
    active_ = k;
    if (next_merge != merges.end() && next_merge->first.is_zero()) {
      apply_merges(next_merge->second, 0);
      ++next_merge;
    }
    for (ArcId a = 0; a < ArcId(arcs); ++a) update_arc(a, Rational(0));

    Rational now(0);
    while (active_ > 1) {
      if (opt_.stop_when_all_reach_root && __builtin_popcountll(mask_[root_]) == active_) {
        res_.truncated = true;
        break;
      }
      std::optional<Rational> t = next_heap_time();
      bool has_merge = next_merge != merges.end();
      bool heap_due = true;
      if (has_merge && (!t || next_merge->first < *t)) {
        t = next_merge->first;
        heap_due = false;
      }
      if (!t) throw Error("growth: no further event although several sets remain active");
      int growing = active_ - __builtin_popcountll(mask_[root_]);
      res_.objective += (*t - now) * Rational(growing);
      now = *t;
      res_.times.push_back(now);
      int idx = int(res_.times.size()) - 1;
      ++epoch_;
      changed_.clear();
      touched_edges_.clear();

      std::vector<ArcId> newly;
      if (!heap_due) batch_cache_.swap(batch_);
      for (const HeapItem& it : batch_) {
        if (it.id >= 0) {
          if (it.version != version_[it.id]) continue;
          ArcId a = it.id;
          mark_und(edge_of(a), idx, now);
          res_.tight[a] = idx;
          --open_deg_[inst_.tail(a)];
          --open_deg_[inst_.head(a)];
          ++version_[a];
          newly.push_back(a);
          if (opt_.record_events) res_.events.push_back(GrowthEvent{idx, EventKind::kEdgeTight, a, -1});
        } else {
          EdgeId e = ~it.id;
          if (it.version != edge_version_[e] || und_[e]) continue;
          mark_und(e, idx, now);
        }
      }
      for (ArcId a : newly) {
        if (opt_.record_contributions) touch_contrib(a, now);
        rate_[a] = 0;
        VertexId v = inst_.tail(a), w = inst_.head(a);
        std::uint64_t nb = mask_[v] & ~mask_[w];
        if (nb) {
          mask_[w] |= nb;
          note_gain(w, nb, idx);
          propagate(w, idx);
        }
      }
      bool merged = has_merge && next_merge->first == now;
      if (merged) {
        apply_merges(next_merge->second, idx);
        ++next_merge;
      }
      if (merged && opt_.record_contributions) {
        for (ArcId a = 0; a < ArcId(arcs); ++a) update_arc(a, now);
      } else {
        for (EdgeId e : touched_edges_) update_edge(e, now);
        for (VertexId v : changed_)
          for (const Arc& arc : inst_.out_arcs(v)) update_edge(edge_of(arc.id), now);
      }
    }
    res_.end = int(res_.times.size()) - 1;
    if (opt_.continuous) {
      res_.final_load.resize(arcs);
      for (ArcId a = 0; a < ArcId(arcs); ++a)
        res_.final_load[a] = res_.tight[a] != kNever ? inst_.cost(a) : load(a, now);
    }
    if (opt_.record_contributions)
      for (ArcId a = 0; a < ArcId(arcs); ++a)
        for (auto& [node, since] : open_[a]) add_contrib(node, a, now - since);
    return std::move(res_);
  }

 private:
  Rational load(ArcId a, const Rational& t) const { return Rational(int(rate_[a])) * t + beta_[a]; }

  bool live(const HeapItem& it) const {
    return it.id >= 0 ? it.version == version_[it.id] && res_.tight[it.id] == kNever
                      : it.version == edge_version_[~it.id] && !und_[~it.id];
  }

  Rational exact_time(const HeapItem& it) const {
    if (it.id >= 0) return (inst_.cost(it.id) - beta_[it.id]) / Rational(int(rate_[it.id]));
    EdgeId e = ~it.id;
    return (inst_.cost(2 * e) - beta_[2 * e] - beta_[2 * e + 1]) / Rational(int(rate_[2 * e] + rate_[2 * e + 1]));
  }

  // Earliest exact time among live items; batch_ holds the items due then.
  // Items left over from a batch preempted by a merge are kept in
  // batch_cache_ and revalidated here.
  std::optional<Rational> next_heap_time() {
    batch_.clear();
    std::optional<Rational> best;
    for (const HeapItem& it : batch_cache_)
      if (live(it)) batch_.push_back(it);
    batch_cache_.clear();
    if (!batch_.empty()) best = exact_time(batch_.front());
    while (!heap_.empty() && !live(heap_.top())) heap_.pop();
    if (heap_.empty()) return best;
    double top = heap_.min_key();
    if (best) top = std::min(top, batch_.front().key);
    double limit = top + tolerance(top);
    later_.clear();
    while (!heap_.empty() && heap_.min_key() <= limit) {
      HeapItem it = heap_.top();
      heap_.pop();
      if (!live(it)) continue;
      Rational t = exact_time(it);
      if (!best || t < *best) {
        later_.insert(later_.end(), batch_.begin(), batch_.end());
        batch_.assign(1, it);
        best = std::move(t);
      } else if (t == *best) {
        batch_.push_back(it);
      } else {
        later_.push_back(it);
      }
    }
    for (const HeapItem& it : later_) heap_.push(it);
    return best;
  }

  void mark_und(EdgeId e, int idx, const Rational& now) {
    if (und_[e]) return;
    und_[e] = true;
    res_.und_tight[e] = idx;
    res_.load_at_und[2 * e] = load(2 * e, now);
    res_.load_at_und[2 * e + 1] = load(2 * e + 1, now);
    touched_edges_.push_back(e);
  }

  // Vertices whose incident arcs are all tight have nothing left to update.
  void mark_changed(VertexId v) {
    if (stamp_[v] != epoch_ && open_deg_[v] > 0) {
      stamp_[v] = epoch_;
      changed_.push_back(v);
    }
  }

  void note_gain(VertexId v, std::uint64_t bits, int idx) {
    mark_changed(v);
    bool is_root = v == root_;
    int ws = watch_slot_[v];
    if (!is_root && ws < 0 && !opt_.record_reach_events) return;
    for (std::uint64_t b = bits; b; b &= b - 1) {
      int node = node_of_slot_[__builtin_ctzll(b)];
      if (is_root && res_.root_reach[node] == kNever) res_.root_reach[node] = idx;
      if (ws >= 0 && res_.watch_reach[node][ws] == kNever) res_.watch_reach[node][ws] = idx;
      if (opt_.record_reach_events) res_.events.push_back(GrowthEvent{idx, EventKind::kReach, node, v});
    }
  }

  void propagate(VertexId start, int idx) {
    auto& stack = stack_;
    stack.assign(1, start);
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (const Arc& arc : inst_.out_arcs(v)) {
        if (res_.tight[arc.id] == kNever) continue;
        std::uint64_t nb = mask_[v] & ~mask_[arc.head];
        if (!nb) continue;
        mask_[arc.head] |= nb;
        note_gain(arc.head, nb, idx);
        stack.push_back(arc.head);
      }
    }
  }

  // Both arcs of e, once per event.
  void update_edge(EdgeId e, const Rational& now) {
    if (edge_stamp_[e] == epoch_) return;
    edge_stamp_[e] = epoch_;
    update_arc(2 * e, now);
    update_arc(2 * e + 1, now);
  }

  // d * now, cached per event.
  const Rational& times_now(int d, const Rational& now) {
    auto& slot = scaled_now_[d + 64];
    if (scaled_stamp_[d + 64] != epoch_) {
      scaled_stamp_[d + 64] = epoch_;
      slot = Rational(d) * now;
    }
    return slot;
  }

  std::uint64_t charging(ArcId a) const {
    VertexId v = inst_.tail(a), w = inst_.head(a);
    return und_[edge_of(a)] ? mask_[v] & ~mask_[w] : mask_[v];
  }

  void update_arc(ArcId a, const Rational& now) {
    if (res_.tight[a] != kNever) return;
    if (opt_.record_contributions) touch_contrib(a, now);
    int r = __builtin_popcountll(charging(a));
    if (r == rate_[a]) return;
    if (!now.is_zero()) beta_[a] += times_now(int(rate_[a]) - r, now);
    rate_[a] = std::uint8_t(r);
    ++version_[a];
    if (r > 0) {
      Rational t = (inst_.cost(a) - beta_[a]) / Rational(r);
      if (t <= horizon_) heap_.push(HeapItem{t.to_double(), a, version_[a]});
    }
    if (opt_.continuous) {
      EdgeId e = edge_of(a);
      if (und_[e]) return;
      ++edge_version_[e];
      int rs = rate_[2 * e] + rate_[2 * e + 1];
      if (rs > 0) {
        Rational t = (inst_.cost(a) - beta_[2 * e] - beta_[2 * e + 1]) / Rational(rs);
        if (t <= horizon_) heap_.push(HeapItem{t.to_double(), ~e, edge_version_[e]});
      }
    }
  }

  void add_contrib(int node, ArcId a, const Rational& amount) {
    if (amount.is_zero()) return;
    res_.contribution[{node, a}] += amount;
  }

  void touch_contrib(ArcId a, const Rational& now) {
    std::uint64_t bits = res_.tight[a] != kNever ? 0 : charging(a);
    std::vector<int> nodes;
    for (std::uint64_t b = bits; b; b &= b - 1) nodes.push_back(node_of_slot_[__builtin_ctzll(b)]);
    auto& open = open_[a];
    std::vector<std::pair<int, Rational>> kept;
    for (auto& [node, since] : open) {
      if (std::find(nodes.begin(), nodes.end(), node) != nodes.end()) kept.emplace_back(node, since);
      else add_contrib(node, a, now - since);
    }
    for (int node : nodes) {
      bool present = false;
      for (auto& p : kept) present |= p.first == node;
      if (!present) kept.emplace_back(node, now);
    }
    open = std::move(kept);
  }

  void apply_merges(const std::vector<int>& nodes, int idx) {
    const Dendrogram& d = plan_.dendrogram();
    std::uint64_t moved = 0;
    int target[64];
    for (int& x : target) x = -1;
    for (int node : nodes) {
      const PlanSet& s = d.sets[node];
      int keep = 64;
      for (int c : s.children) keep = std::min(keep, slot_of(c));
      for (int c : s.children) {
        int sl = slot_of(c);
        res_.set_end[c] = idx;
        res_.root_reach[node] = std::min(res_.root_reach[node], res_.root_reach[c]);
        for (std::size_t w = 0; w < opt_.watch.size(); ++w)
          res_.watch_reach[node][w] = std::min(res_.watch_reach[node][w], res_.watch_reach[c][w]);
        if (sl != keep) {
          moved |= std::uint64_t(1) << sl;
          target[sl] = keep;
          node_of_slot_[sl] = -1;
        }
      }
      node_of_slot_[keep] = node;
      res_.set_start[node] = idx;
      active_ -= int(s.children.size()) - 1;
      if (opt_.record_events) res_.events.push_back(GrowthEvent{idx, EventKind::kPartitionChange, node, -1});
    }
    if (!moved) return;
    for (VertexId v = 0; v < VertexId(mask_.size()); ++v) {
      std::uint64_t m = mask_[v];
      if (!(m & moved)) continue;
      std::uint64_t nm = m & ~moved;
      for (std::uint64_t b = m & moved; b; b &= b - 1) nm |= std::uint64_t(1) << target[__builtin_ctzll(b)];
      mask_[v] = nm;
      mark_changed(v);
    }
  }

  int slot_of(int node) const {
    for (int s = 0; s < 64; ++s)
      if (node_of_slot_[s] == node) return s;
    throw Error("growth: set without slot");
  }

  const Instance& inst_;
  const MergePlan& plan_;
  const EngineOptions& opt_;
  EngineResult res_;
  VertexId root_ = -1;
  std::vector<std::uint64_t> mask_;
  std::vector<std::uint8_t> rate_;
  std::vector<std::uint32_t> version_, edge_version_;
  std::vector<char> und_;
  std::vector<Rational> beta_;
  std::vector<int> watch_slot_;
  std::vector<std::uint32_t> stamp_, edge_stamp_, open_deg_;
  std::uint32_t epoch_ = 1;
  std::vector<VertexId> changed_, stack_;
  std::vector<HeapItem> batch_, later_, batch_cache_;
  Rational scaled_now_[129];
  std::uint32_t scaled_stamp_[129] = {};
  std::vector<EdgeId> touched_edges_;
  std::vector<int> node_of_slot_;
  std::vector<std::vector<std::pair<int, Rational>>> open_;
  int active_ = 0;
  Rational horizon_;
  RadixHeap heap_;
};

}  // namespace

EngineResult run_engine(const Instance& inst, const MergePlan& plan, const EngineOptions& opt) {
  return Engine(inst, plan, opt).run();
}

std::vector<int> bottleneck(const Instance& inst, std::span<const VertexId> sources, const std::vector<int>& tight,
                            std::vector<ArcId>* parent) {
  std::size_t n = inst.num_vertices();
  std::vector<int> best(n, kNever);
  if (parent) parent->assign(n, -1);
  using Item = std::pair<int, VertexId>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
  for (VertexId v : sources) {
    best[v] = 0;
    pq.emplace(0, v);
  }
  while (!pq.empty()) {
    auto [d, v] = pq.top();
    pq.pop();
    if (d != best[v]) continue;
    for (const Arc& arc : inst.out_arcs(v)) {
      int tt = tight[arc.id];
      if (tt == kNever) continue;
      int cand = std::max(d, tt);
      if (cand < best[arc.head]) {
        best[arc.head] = cand;
        if (parent) (*parent)[arc.head] = arc.id;
        pq.emplace(cand, arc.head);
      }
    }
  }
  return best;
}

}  // namespace moat::detail
