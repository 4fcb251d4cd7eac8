#include "nettrack/graph.hpp"

#include <algorithm>
#include <queue>
#include <sstream>

#include "nettrack/errors.hpp"
#include "nettrack/linalg.hpp"

namespace nettrack {

namespace {

Graph normalized(int N, std::vector<std::pair<int, int>> edges) {
    for (auto& [i, j] : edges) {
        if (i == j) throw BadParams("graph: self-loop at vertex " + std::to_string(i));
        if (i < 0 || j < 0 || i >= N || j >= N) throw BadParams("graph: vertex id out of range");
        if (i > j) std::swap(i, j);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    return Graph{N, std::move(edges)};
}

}  // namespace

Graph circulant(int N, int m) {
    if (N < 2 || m < 1 || m > N - 1) throw BadParams("circulant: need N >= 2, 1 <= m <= N-1");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < N; ++i)
        for (int s = 1; s <= m; ++s) edges.emplace_back(i, (i + s) % N);
    return normalized(N, std::move(edges));
}

Graph complete(int N) {
    if (N < 2) throw BadParams("complete: need N >= 2");
    std::vector<std::pair<int, int>> edges;
    for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) edges.emplace_back(i, j);
    return Graph{N, std::move(edges)};
}

Graph from_edges(int N, std::vector<std::pair<int, int>> edges) {
    if (N < 1) throw BadParams("from_edges: need N >= 1");
    return normalized(N, std::move(edges));
}

namespace {

int parse_int(const std::string& s, const std::string& what) {
    try {
        size_t pos = 0;
        const int v = std::stoi(s, &pos);
        if (pos != s.size()) throw BadParams("");
        return v;
    } catch (...) {
        throw BadParams("graph grammar: bad integer for " + what + ": '" + s + "'");
    }
}

// key=value pairs after the kind prefix, comma separated
std::vector<std::pair<std::string, std::string>> parse_kv(const std::string& body) {
    std::vector<std::pair<std::string, std::string>> kv;
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw BadParams("graph grammar: expected key=value, got '" + item + "'");
        kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    return kv;
}

}  // namespace

Graph parse_graph(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw BadParams("graph grammar: missing ':' in '" + s + "'");
    const std::string kind = s.substr(0, colon);
    const std::string body = s.substr(colon + 1);
    if (kind == "circulant") {
        int N = -1, m = -1;
        for (const auto& [k, v] : parse_kv(body)) {
            if (k == "N") N = parse_int(v, "N");
            else if (k == "m") m = parse_int(v, "m");
            else throw BadParams("graph grammar: unknown key '" + k + "'");
        }
        if (N < 0 || m < 0) throw BadParams("graph grammar: circulant needs N= and m=");
        return circulant(N, m);
    }
    if (kind == "complete") {
        int N = -1;
        for (const auto& [k, v] : parse_kv(body)) {
            if (k == "N") N = parse_int(v, "N");
            else throw BadParams("graph grammar: unknown key '" + k + "'");
        }
        if (N < 0) throw BadParams("graph grammar: complete needs N=");
        return complete(N);
    }
    if (kind == "edges") {
        std::vector<std::pair<int, int>> edges;
        std::stringstream ss(body);
        std::string item;
        int maxv = -1;
        while (std::getline(ss, item, ',')) {
            const auto dash = item.find('-');
            if (dash == std::string::npos) throw BadParams("graph grammar: expected i-j, got '" + item + "'");
            const int i = parse_int(item.substr(0, dash), "edge endpoint");
            const int j = parse_int(item.substr(dash + 1), "edge endpoint");
            maxv = std::max({maxv, i, j});
            edges.emplace_back(i, j);
        }
        if (edges.empty()) throw BadParams("graph grammar: empty edge list");
        return from_edges(maxv + 1, std::move(edges));
    }
    throw BadParams("graph grammar: unknown kind '" + kind + "'");
}

std::string format_graph(const Graph& g) {
    std::string s = "edges:";
    for (size_t k = 0; k < g.edges.size(); ++k) {
        if (k) s += ',';
        s += std::to_string(g.edges[k].first) + "-" + std::to_string(g.edges[k].second);
    }
    return s;
}

Matrix adjacency(const Graph& g) {
    Matrix A(g.N, g.N);
    for (const auto& [i, j] : g.edges) {
        A(i, j) = 1.0;
        A(j, i) = 1.0;
    }
    return A;
}

Matrix laplacian(const Graph& g) {
    Matrix L(g.N, g.N);
    for (const auto& [i, j] : g.edges) {
        L(i, j) -= 1.0;
        L(j, i) -= 1.0;
        L(i, i) += 1.0;
        L(j, j) += 1.0;
    }
    return L;
}

bool has_edge(const Graph& g, int i, int j) {
    if (i > j) std::swap(i, j);
    return std::binary_search(g.edges.begin(), g.edges.end(), std::make_pair(i, j));
}

std::vector<int> degrees(const Graph& g) {
    std::vector<int> d(g.N, 0);
    for (const auto& [i, j] : g.edges) {
        ++d[i];
        ++d[j];
    }
    return d;
}

std::vector<std::vector<int>> closed_neighborhoods(const Graph& g) {
    std::vector<std::vector<int>> nb(g.N);
    for (int i = 0; i < g.N; ++i) nb[i].push_back(i);
    for (const auto& [i, j] : g.edges) {
        nb[i].push_back(j);
        nb[j].push_back(i);
    }
    for (auto& v : nb) std::sort(v.begin(), v.end());
    return nb;
}

bool is_connected(const Graph& g) {
    if (g.N == 0) return false;
    std::vector<std::vector<int>> adj(g.N);
    for (const auto& [i, j] : g.edges) {
        adj[i].push_back(j);
        adj[j].push_back(i);
    }
    std::vector<char> seen(g.N, 0);
    std::queue<int> q;
    q.push(0);
    seen[0] = 1;
    int cnt = 1;
    while (!q.empty()) {
        const int v = q.front();
        q.pop();
        for (int w : adj[v])
            if (!seen[w]) {
                seen[w] = 1;
                ++cnt;
                q.push(w);
            }
    }
    return cnt == g.N;
}

double algebraic_connectivity(const Graph& g) {
    const Spectrum s = sym_eigen(laplacian(g));
    return g.N >= 2 ? s.eigenvalues[1] : 0.0;
}

bool verify_circulant_isomorphism(const Graph& g, int m, const std::vector<int>& perm) {
    if (static_cast<int>(perm.size()) != g.N) return false;
    std::vector<char> used(g.N, 0);
    for (int v : perm) {
        if (v < 0 || v >= g.N || used[v]) return false;
        used[v] = 1;
    }
    const Graph target = circulant(g.N, m);
    if (g.edges.size() != target.edges.size()) return false;
    for (const auto& [i, j] : g.edges)
        if (!has_edge(target, perm[i], perm[j])) return false;
    return true;
}

namespace {

// Backtracking assignment of new labels; adjacency must match the target
// circulant exactly on every decided pair.
bool iso_search(const Graph& g, const Graph& target, std::vector<int>& perm,
                std::vector<char>& used, int v) {
    const int N = g.N;
    if (v == N) return true;
    for (int cand = 0; cand < N; ++cand) {
        if (used[cand]) continue;
        bool ok = true;
        for (int w = 0; w < v; ++w) {
            if (has_edge(g, v, w) != has_edge(target, cand, perm[w])) {
                ok = false;
                break;
            }
        }
        if (ok) {
            perm[v] = cand;
            used[cand] = 1;
            if (iso_search(g, target, perm, used, v + 1)) return true;
            used[cand] = 0;
        }
    }
    return false;
}

}  // namespace

std::optional<std::vector<int>> circulant_isomorphism(const Graph& g, int m) {
    if (g.N > 10) throw TooLarge("circulant_isomorphism: exhaustive search limited to N <= 10");
    if (m < 1 || m > g.N - 1) throw BadParams("circulant_isomorphism: bad m");
    const Graph target = circulant(g.N, m);
    if (g.edges.size() != target.edges.size()) return std::nullopt;
    std::vector<int> perm(g.N, -1);
    std::vector<char> used(g.N, 0);
    if (iso_search(g, target, perm, used, 0)) return perm;
    return std::nullopt;
}

CycleDecomposition cycle_decompose(const Graph& g, const std::vector<int>& cycle_order) {
    if (static_cast<int>(cycle_order.size()) != g.N || g.N < 3)
        throw NotACycle("cycle_decompose: order must list every vertex once, N >= 3");
    std::vector<char> used(g.N, 0);
    for (int v : cycle_order) {
        if (v < 0 || v >= g.N || used[v]) throw NotACycle("cycle_decompose: not a permutation");
        used[v] = 1;
    }
    std::vector<std::pair<int, int>> cyc_edges;
    for (int k = 0; k < g.N; ++k) {
        const int u = cycle_order[k];
        const int v = cycle_order[(k + 1) % g.N];
        if (!has_edge(g, u, v))
            throw NotACycle("cycle_decompose: (" + std::to_string(u) + "," + std::to_string(v) +
                            ") is not an edge");
        cyc_edges.emplace_back(u, v);
    }
    const Graph cyc = from_edges(g.N, cyc_edges);
    if (cyc.edges.size() != static_cast<size_t>(g.N))
        throw NotACycle("cycle_decompose: repeated edge in cycle");

    CycleDecomposition d;
    d.cycle_order = cycle_order;
    d.L_cycle = laplacian(cyc);
    std::vector<std::pair<int, int>> rest;
    for (const auto& e : g.edges)
        if (!has_edge(cyc, e.first, e.second)) rest.push_back(e);
    d.L1 = laplacian(from_edges(g.N, rest));
    return d;
}

}  // namespace nettrack
