#include "rv/graph.hpp"

#include <algorithm>
#include <deque>
#include <stdexcept>

namespace rv {

std::vector<int> scc(const Adjacency& adj, std::vector<int>& comp, const std::vector<char>& alive)
{
    const int n = static_cast<int>(adj.size());
    auto in = [&](int v) { return alive.empty() || alive[v]; };
    std::vector<int> index(n, -1), low(n, 0), stack, roots;
    std::vector<char> on_stack(n, 0);
    comp.assign(n, -1);
    int counter = 0, ncomp = 0;
    std::vector<std::pair<int, size_t>> call;
    for (int s = 0; s < n; ++s) {
        if (!in(s) || index[s] >= 0)
            continue;
        call.push_back({s, 0});
        index[s] = low[s] = counter++;
        stack.push_back(s);
        on_stack[s] = 1;
        while (!call.empty()) {
            auto& [v, k] = call.back();
            if (k < adj[v].size()) {
                int w = adj[v][k++];
                if (!in(w))
                    continue;
                if (index[w] < 0) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    call.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                int w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = 0;
                    comp[w] = ncomp;
                } while (w != v);
                roots.push_back(v);
                ++ncomp;
            }
            int done = v;
            call.pop_back();
            if (!call.empty())
                low[call.back().first] = std::min(low[call.back().first], low[done]);
        }
    }
    return roots;
}

std::vector<int> bfs(const Adjacency& adj, const std::vector<int>& sources,
                     const std::vector<char>& alive)
{
    const int n = static_cast<int>(adj.size());
    std::vector<int> parent(n, -2);
    std::deque<int> queue;
    for (int s : sources)
        if ((alive.empty() || alive[s]) && parent[s] == -2) {
            parent[s] = -1;
            queue.push_back(s);
        }
    while (!queue.empty()) {
        int v = queue.front();
        queue.pop_front();
        for (int w : adj[v])
            if ((alive.empty() || alive[w]) && parent[w] == -2) {
                parent[w] = v;
                queue.push_back(w);
            }
    }
    return parent;
}

std::vector<int> path_to(const std::vector<int>& parent, int v)
{
    if (parent[v] == -2)
        throw std::logic_error("path_to: vertex not reached");
    std::vector<int> p;
    for (int x = v; x >= 0; x = parent[x])
        p.push_back(x);
    std::reverse(p.begin(), p.end());
    return p;
}

bool nontrivial(const Adjacency& adj, const std::vector<int>& comp, int c, int representative)
{
    int members = 0;
    for (int x : comp)
        members += x == c;
    if (members > 1)
        return true;
    const auto& a = adj[representative];
    return std::find(a.begin(), a.end(), representative) != a.end();
}

std::vector<int> covering_cycle(const Adjacency& adj, const std::vector<char>& inside,
                                const std::vector<int>& members, int start)
{
    std::vector<int> walk{start};
    int cur = start;
    auto hop = [&](int target) {
        std::vector<int> parent(adj.size(), -2);
        std::deque<int> queue;
        for (int w : adj[cur])
            if (inside[w] && parent[w] == -2) {
                parent[w] = -1;
                queue.push_back(w);
            }
        while (!queue.empty() && parent[target] == -2) {
            int v = queue.front();
            queue.pop_front();
            for (int w : adj[v])
                if (inside[w] && parent[w] == -2) {
                    parent[w] = v;
                    queue.push_back(w);
                }
        }
        if (parent[target] == -2)
            throw std::logic_error("covering_cycle: component not strongly connected");
        auto p = path_to(parent, target);
        walk.insert(walk.end(), p.begin(), p.end());
        cur = target;
    };
    for (int m : members)
        if (m != start && std::find(walk.begin(), walk.end(), m) == walk.end())
            hop(m);
    hop(start);
    walk.pop_back();
    return walk;
}

}  // namespace rv
