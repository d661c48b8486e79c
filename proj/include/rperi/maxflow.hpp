#pragma once

#include <cstdint>
#include <vector>

// Dinic max-flow on integer capacities: exact, deterministic, terminates.
// Arcs are stored in pairs, rev(i) = i ^ 1; adjacency is materialized as a
// CSR table on the first max_flow call (the arc lists are append-only until
// then, so building once is enough).

namespace rperi {

class MaxFlow {
 public:
  explicit MaxFlow(int64_t node_hint = 0, int64_t arc_hint = 0) {
    to_.reserve((size_t)arc_hint * 2);
    cap_.reserve((size_t)arc_hint * 2);
    from_.reserve((size_t)arc_hint * 2);
    (void)node_hint;
  }

  int add_node() { return nodes_++; }
  void add_nodes(int n) { nodes_ += n; }
  int node_count() const { return nodes_; }
  int64_t arc_count() const { return (int64_t)to_.size() / 2; }

  // directed arc u -> v with capacity cap (reverse capacity 0)
  void add_arc(int u, int v, int64_t cap) {
    from_.push_back(u);
    to_.push_back(v);
    cap_.push_back(cap);
    from_.push_back(v);
    to_.push_back(u);
    cap_.push_back(0);
  }

  int64_t max_flow(int s, int t);

  // after max_flow: source side of the cut nearest the source
  std::vector<uint8_t> min_cut_source_side(int s) const;
  // sink side of the cut nearest the sink
  std::vector<uint8_t> min_cut_sink_side(int t) const;

 private:
  void build_csr();
  bool bfs(int s, int t);
  int64_t dfs(int u, int t, int64_t limit);

  int nodes_ = 0;
  std::vector<int32_t> from_, to_;
  std::vector<int64_t> cap_;
  // CSR arc storage, slots start_[u]..start_[u+1); rev_ pairs the slots
  std::vector<int32_t> start_, csr_to_, rev_;
  std::vector<int64_t> csr_cap_;
  std::vector<int32_t> level_, iter_;
};

}  // namespace rperi
