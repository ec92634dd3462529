#pragma once

#include <functional>
#include <vector>

namespace rv {

using Adjacency = std::vector<std::vector<int>>;

// Strongly connected components of the subgraph induced by `alive` (all if empty).
// comp[v] = -1 for vertices outside the subgraph.
std::vector<int> scc(const Adjacency& adj, std::vector<int>& comp, const std::vector<char>& alive = {});

// Breadth-first search restricted to `alive`; parent[v] = -1 at sources, -2 if unreached.
std::vector<int> bfs(const Adjacency& adj, const std::vector<int>& sources,
                     const std::vector<char>& alive = {});

std::vector<int> path_to(const std::vector<int>& parent, int v);

// True when the component has a cycle (more than one vertex, or a self-loop).
bool nontrivial(const Adjacency& adj, const std::vector<int>& comp, int c, int representative);

// Closed walk starting at `start` visiting every vertex of `members` once at least,
// using only vertices inside `inside`.
std::vector<int> covering_cycle(const Adjacency& adj, const std::vector<char>& inside,
                                const std::vector<int>& members, int start);

}  // namespace rv
