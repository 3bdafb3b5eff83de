// Copyright (c) 2026 the ectsim authors. All rights reserved.
// SPDX-License-Identifier: Apache-2.0

#include "ectsim/partition.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <set>
#include <sstream>

namespace ectsim {

DualGraph build_dual_graph(const Mesh& mesh) {
  const int n = mesh.tet_count();
  std::vector<std::pair<int, int>> edges;
  for (const auto& inc : build_face_incidence(mesh)) {
    if (inc.tet1 >= 0) {
      edges.emplace_back(inc.tet0, inc.tet1);
      edges.emplace_back(inc.tet1, inc.tet0);
    }
  }
  std::sort(edges.begin(), edges.end());
  DualGraph g;
  g.offsets.assign(n + 1, 0);
  for (const auto& e : edges) g.offsets[e.first + 1]++;
  for (int t = 0; t < n; ++t) g.offsets[t + 1] += g.offsets[t];
  g.neighbors.resize(edges.size());
  for (size_t i = 0; i < edges.size(); ++i) g.neighbors[i] = edges[i].second;
  return g;
}

namespace {

std::vector<int> bfs_distances(const DualGraph& g, const std::vector<int>& sources, int n) {
  std::vector<int> dist(n, -1);
  std::deque<int> queue;
  for (int s : sources) {
    dist[s] = 0;
    queue.push_back(s);
  }
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int i = g.offsets[u]; i < g.offsets[u + 1]; ++i) {
      int v = g.neighbors[i];
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

// Farthest-point seeding: start from seed-derived tet, then repeatedly take
// the tet maximizing distance to the current seed set (lowest index on ties).
std::vector<int> pick_seeds(const DualGraph& g, int n, int parts, unsigned seed) {
  std::vector<int> seeds;
  if (parts >= n) {
    seeds.resize(n);
    std::iota(seeds.begin(), seeds.end(), 0);
    return seeds;
  }
  if (parts > 64) {
    // Many small parts: evenly index-spaced seeds keep this O(n).
    for (int p = 0; p < parts; ++p) {
      seeds.push_back(static_cast<int>(static_cast<long long>(p) * n / parts));
    }
    std::sort(seeds.begin(), seeds.end());
    seeds.erase(std::unique(seeds.begin(), seeds.end()), seeds.end());
    for (int t = 0; static_cast<int>(seeds.size()) < parts && t < n; ++t) {
      if (!std::binary_search(seeds.begin(), seeds.end(), t)) seeds.push_back(t);
    }
    return seeds;
  }
  seeds.push_back(static_cast<int>(seed % static_cast<unsigned>(n)));
  while (static_cast<int>(seeds.size()) < parts) {
    auto dist = bfs_distances(g, seeds, n);
    int best = -1, best_dist = -1;
    for (int t = 0; t < n; ++t) {
      int d = dist[t] < 0 ? n + 1 : dist[t];  // unreachable components first
      if (d > best_dist && std::find(seeds.begin(), seeds.end(), t) == seeds.end()) {
        best = t;
        best_dist = d;
      }
    }
    seeds.push_back(best);
  }
  return seeds;
}

bool removal_keeps_connected(const DualGraph& g, const std::vector<int>& part_of, int part,
                             int removed, int part_size) {
  if (part_size <= 2) return true;
  int start = -1;
  for (int i = g.offsets[removed]; i < g.offsets[removed + 1]; ++i) {
    int v = g.neighbors[i];
    if (part_of[v] == part) {
      start = v;
      break;
    }
  }
  if (start < 0) return false;
  std::set<int> visited{start};
  std::deque<int> queue{start};
  while (!queue.empty()) {
    int u = queue.front();
    queue.pop_front();
    for (int i = g.offsets[u]; i < g.offsets[u + 1]; ++i) {
      int v = g.neighbors[i];
      if (v == removed || part_of[v] != part || visited.count(v)) continue;
      visited.insert(v);
      queue.push_back(v);
    }
  }
  return static_cast<int>(visited.size()) == part_size - 1;
}

}  // namespace

PartitionMap partition_tets(const Mesh& mesh, int parts, unsigned seed) {
  if (parts < 1) throw MeshError("partition_tets: part count must be >= 1");
  const int n = mesh.tet_count();
  PartitionMap map;
  map.parts = parts;
  map.part_of.assign(n, -1);
  if (parts == 1) {
    std::fill(map.part_of.begin(), map.part_of.end(), 0);
    return map;
  }
  if (parts >= n) {
    for (int t = 0; t < n; ++t) map.part_of[t] = t;
    return map;
  }

  DualGraph g = build_dual_graph(mesh);
  std::vector<int> seeds = pick_seeds(g, n, parts, seed);

  const int cap = (n + parts - 1) / parts;
  std::vector<std::set<int>> frontier(parts);
  std::vector<int> size(parts, 0);
  int claimed = 0;
  for (int p = 0; p < parts && p < static_cast<int>(seeds.size()); ++p) {
    frontier[p].insert(seeds[p]);
  }

  // Round-robin growth; each part claims its lowest-index frontier tet.
  bool progress = true;
  while (claimed < n && progress) {
    progress = false;
    for (int p = 0; p < parts; ++p) {
      if (size[p] >= cap) continue;
      int take = -1;
      while (!frontier[p].empty()) {
        int t = *frontier[p].begin();
        frontier[p].erase(frontier[p].begin());
        if (map.part_of[t] < 0) {
          take = t;
          break;
        }
      }
      if (take < 0) continue;
      map.part_of[take] = p;
      ++size[p];
      ++claimed;
      progress = true;
      for (int i = g.offsets[take]; i < g.offsets[take + 1]; ++i) {
        int v = g.neighbors[i];
        if (map.part_of[v] < 0) frontier[p].insert(v);
      }
    }
  }

  // Orphans (pockets walled in by capped parts, or tets unreachable from any
  // seed): attach to the smallest adjacent part, or the globally smallest.
  for (int t = 0; t < n; ++t) {
    if (map.part_of[t] >= 0) continue;
    int best = -1;
    for (int i = g.offsets[t]; i < g.offsets[t + 1]; ++i) {
      int p = map.part_of[g.neighbors[i]];
      if (p >= 0 && (best < 0 || size[p] < size[best])) best = p;
    }
    if (best < 0) {
      best = static_cast<int>(std::min_element(size.begin(), size.end()) - size.begin());
    }
    map.part_of[t] = best;
    ++size[best];
  }

  // Balancing pass: shave boundary tets off overfull parts while keeping
  // every part connected.
  const double mean = static_cast<double>(n) / parts;
  for (int iter = 0; iter < 2 * n; ++iter) {
    int big = static_cast<int>(std::max_element(size.begin(), size.end()) - size.begin());
    if (size[big] <= 1.05 * mean) break;
    int move_tet = -1, move_to = -1;
    for (int t = 0; t < n && move_tet < 0; ++t) {
      if (map.part_of[t] != big) continue;
      for (int i = g.offsets[t]; i < g.offsets[t + 1]; ++i) {
        int p = map.part_of[g.neighbors[i]];
        if (p != big && size[p] < mean &&
            removal_keeps_connected(g, map.part_of, big, t, size[big])) {
          move_tet = t;
          move_to = p;
          break;
        }
      }
    }
    if (move_tet < 0) break;
    map.part_of[move_tet] = move_to;
    --size[big];
    ++size[move_to];
  }
  return map;
}

PartitionStats partition_stats(const PartitionMap& map, const Mesh& mesh) {
  if (static_cast<int>(map.part_of.size()) != mesh.tet_count()) {
    throw MeshError("partition_stats: map does not match mesh");
  }
  PartitionStats stats;
  stats.parts = map.parts;
  stats.sizes.assign(map.parts, 0);
  for (int p : map.part_of) {
    if (p < 0 || p >= map.parts) throw MeshError("partition_stats: part id out of range");
    stats.sizes[p]++;
  }
  double mean = static_cast<double>(mesh.tet_count()) / std::max(1, map.parts);
  int max_size = *std::max_element(stats.sizes.begin(), stats.sizes.end());
  stats.imbalance = mean > 0.0 ? max_size / mean : 0.0;

  DualGraph g = build_dual_graph(mesh);
  for (int t = 0; t < mesh.tet_count(); ++t) {
    for (int i = g.offsets[t]; i < g.offsets[t + 1]; ++i) {
      int v = g.neighbors[i];
      if (v > t && map.part_of[v] != map.part_of[t]) stats.edge_cut++;
    }
  }
  return stats;
}

std::string PartitionStats::to_string() const {
  std::ostringstream os;
  os << "# parts " << parts << "\n# sizes";
  for (int s : sizes) os << ' ' << s;
  os << "\n# imbalance " << imbalance << "\n# edge_cut " << edge_cut << "\n";
  return os.str();
}

bool parts_connected(const PartitionMap& map, const Mesh& mesh) {
  DualGraph g = build_dual_graph(mesh);
  const int n = mesh.tet_count();
  std::vector<char> seen(n, 0);
  for (int p = 0; p < map.parts; ++p) {
    int start = -1, count = 0;
    for (int t = 0; t < n; ++t) {
      if (map.part_of[t] == p) {
        ++count;
        if (start < 0) start = t;
      }
    }
    if (count == 0) continue;
    std::deque<int> queue{start};
    seen[start] = 1;
    int reached = 1;
    while (!queue.empty()) {
      int u = queue.front();
      queue.pop_front();
      for (int i = g.offsets[u]; i < g.offsets[u + 1]; ++i) {
        int v = g.neighbors[i];
        if (!seen[v] && map.part_of[v] == p) {
          seen[v] = 1;
          ++reached;
          queue.push_back(v);
        }
      }
    }
    if (reached != count) return false;
  }
  return true;
}

}  // namespace ectsim
