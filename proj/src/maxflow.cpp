#include "rperi/maxflow.hpp"

#include <algorithm>
#include <limits>

namespace rperi {

void MaxFlow::build_csr() {
  const size_t m = to_.size();
  start_.assign((size_t)nodes_ + 1, 0);
  for (int32_t f : from_) ++start_[(size_t)f + 1];
  for (int u = 0; u < nodes_; ++u) start_[(size_t)u + 1] += start_[(size_t)u];
  // arcs stored contiguously per node; pos maps arc id -> slot so the paired
  // reverse arc stays reachable through rev_
  std::vector<int32_t> pos(m);
  {
    std::vector<int32_t> fill(start_.begin(), start_.end() - 1);
    for (size_t i = 0; i < m; ++i) pos[i] = fill[(size_t)from_[i]]++;
  }
  csr_to_.resize(m);
  csr_cap_.resize(m);
  rev_.resize(m);
  for (size_t i = 0; i < m; ++i) {
    csr_to_[(size_t)pos[i]] = to_[i];
    csr_cap_[(size_t)pos[i]] = cap_[i];
    rev_[(size_t)pos[i]] = pos[i ^ 1];
  }
  from_.clear();
  from_.shrink_to_fit();
  to_.clear();
  to_.shrink_to_fit();
  cap_.clear();
  cap_.shrink_to_fit();
}

bool MaxFlow::bfs(int s, int t) {
  level_.assign((size_t)nodes_, -1);
  std::vector<int32_t> q;
  q.reserve((size_t)nodes_);
  level_[(size_t)s] = 0;
  q.push_back(s);
  for (size_t h = 0; h < q.size(); ++h) {
    int u = q[h];
    int32_t lu = level_[(size_t)u];
    for (int32_t p = start_[(size_t)u]; p < start_[(size_t)u + 1]; ++p) {
      int v = csr_to_[(size_t)p];
      if (csr_cap_[(size_t)p] > 0 && level_[(size_t)v] < 0) {
        level_[(size_t)v] = lu + 1;
        if (v == t) return true;
        q.push_back(v);
      }
    }
  }
  return level_[(size_t)t] >= 0;
}

int64_t MaxFlow::dfs(int u, int t, int64_t limit) {
  if (u == t) return limit;
  int64_t pushed = 0;
  for (int32_t& p = iter_[(size_t)u]; p < start_[(size_t)u + 1]; ++p) {
    int v = csr_to_[(size_t)p];
    if (csr_cap_[(size_t)p] <= 0 || level_[(size_t)v] != level_[(size_t)u] + 1)
      continue;
    int64_t got = dfs(v, t, std::min(limit - pushed, csr_cap_[(size_t)p]));
    if (got > 0) {
      csr_cap_[(size_t)p] -= got;
      csr_cap_[(size_t)rev_[(size_t)p]] += got;
      pushed += got;
      if (pushed == limit) return pushed;
    } else {
      level_[(size_t)v] = -1;  // dead end in this phase
    }
  }
  return pushed;
}

int64_t MaxFlow::max_flow(int s, int t) {
  build_csr();
  int64_t total = 0;
  const int64_t kInf = std::numeric_limits<int64_t>::max();
  while (bfs(s, t)) {
    iter_.assign(start_.begin(), start_.end() - 1);
    int64_t f;
    while ((f = dfs(s, t, kInf)) > 0) total += f;
  }
  return total;
}

std::vector<uint8_t> MaxFlow::min_cut_source_side(int s) const {
  std::vector<uint8_t> side((size_t)nodes_, 0);
  std::vector<int32_t> q;
  side[(size_t)s] = 1;
  q.push_back(s);
  for (size_t h = 0; h < q.size(); ++h) {
    int u = q[h];
    for (int32_t p = start_[(size_t)u]; p < start_[(size_t)u + 1]; ++p) {
      int v = csr_to_[(size_t)p];
      if (csr_cap_[(size_t)p] > 0 && !side[(size_t)v]) {
        side[(size_t)v] = 1;
        q.push_back(v);
      }
    }
  }
  return side;
}

std::vector<uint8_t> MaxFlow::min_cut_sink_side(int t) const {
  // u is on the sink side iff the residual graph has a path u -> t: walk
  // residual arcs backwards, the residual into v along the arc in v's slot p
  // is the capacity left on its paired reverse slot
  std::vector<uint8_t> side((size_t)nodes_, 0);
  std::vector<int32_t> q;
  side[(size_t)t] = 1;
  q.push_back(t);
  for (size_t h = 0; h < q.size(); ++h) {
    int v = q[h];
    for (int32_t p = start_[(size_t)v]; p < start_[(size_t)v + 1]; ++p) {
      int u = csr_to_[(size_t)p];
      if (csr_cap_[(size_t)rev_[(size_t)p]] > 0 && !side[(size_t)u]) {
        side[(size_t)u] = 1;
        q.push_back(u);
      }
    }
  }
  return side;
}

}  // namespace rperi
