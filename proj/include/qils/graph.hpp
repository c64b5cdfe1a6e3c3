// Copyright 2026 The qils Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qils/rng.hpp"

namespace qils {

/// Thrown on malformed graph files. Carries the 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

struct Edge {
  int u;
  int v;
  double w;
};

/// One spin assignment per vertex, values in {0, 1}.
using Bitstring = std::vector<std::uint8_t>;

/// Weighted undirected MaxCut instance. Immutable once built; safe to share
/// across threads.
class Graph {
 public:
  Graph() = default;

  /// Builds the adjacency index from an edge list. Enforces: no self-loops,
  /// no duplicate pairs, finite nonzero weights, valid endpoints.
  Graph(int n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
    if (n_ < 0) throw std::invalid_argument("negative vertex count");
    std::set<std::pair<int, int>> seen;
    total_weight_ = 0.0;
    for (auto& e : edges_) {
      if (e.u > e.v) std::swap(e.u, e.v);
      if (e.u < 0 || e.v >= n_)
        throw std::invalid_argument("edge endpoint out of range");
      if (e.u == e.v) throw std::invalid_argument("self-loop");
      if (!std::isfinite(e.w) || e.w == 0.0)
        throw std::invalid_argument("edge weight must be finite and nonzero");
      if (!seen.insert({e.u, e.v}).second)
        throw std::invalid_argument("duplicate edge");
      total_weight_ += e.w;
    }
    build_adjacency();
  }

  int n() const noexcept { return n_; }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  const std::vector<Edge>& edges() const noexcept { return edges_; }
  double total_weight() const noexcept { return total_weight_; }

  struct Neighbor {
    int vertex;
    double weight;
  };

  /// Neighbors of j with coupling weights, CSR layout.
  std::span<const Neighbor> neighbors(int j) const {
    return {adj_.data() + offsets_[j],
            adj_.data() + offsets_[static_cast<std::size_t>(j) + 1]};
  }

  int degree(int j) const {
    return static_cast<int>(offsets_[static_cast<std::size_t>(j) + 1] -
                            offsets_[j]);
  }

 private:
  void build_adjacency() {
    offsets_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[static_cast<std::size_t>(e.u) + 1];
      ++offsets_[static_cast<std::size_t>(e.v) + 1];
    }
    for (std::size_t j = 1; j < offsets_.size(); ++j)
      offsets_[j] += offsets_[j - 1];
    adj_.resize(2 * edges_.size());
    std::vector<std::size_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const auto& e : edges_) {
      adj_[cursor[static_cast<std::size_t>(e.u)]++] = {e.v, e.w};
      adj_[cursor[static_cast<std::size_t>(e.v)]++] = {e.u, e.w};
    }
  }

  int n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<Neighbor> adj_;
  double total_weight_ = 0.0;
};

namespace detail {

inline bool parse_int(const std::string& tok, long long& out) {
  errno = 0;
  char* end = nullptr;
  out = std::strtoll(tok.c_str(), &end, 10);
  return errno == 0 && end == tok.c_str() + tok.size() && !tok.empty();
}

inline bool parse_real(const std::string& tok, double& out) {
  errno = 0;
  char* end = nullptr;
  out = std::strtod(tok.c_str(), &end);
  return errno == 0 && end == tok.c_str() + tok.size() && !tok.empty();
}

}  // namespace detail

/// Parses the Gset edge-list format: a header "n m" followed by m lines
/// "u v w" with 1-indexed vertices. Blank lines and trailing whitespace are
/// tolerated; vertices are stored 0-indexed.
inline Graph parse_gset(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  long long n = -1, m = -1;

  auto next_tokens = [&](std::vector<std::string>& toks) -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      toks.clear();
      std::istringstream ls(line);
      std::string t;
      while (ls >> t) toks.push_back(t);
      if (!toks.empty()) return true;
    }
    return false;
  };

  std::vector<std::string> toks;
  if (!next_tokens(toks)) throw ParseError(lineno + 1, "missing header");
  if (toks.size() != 2 || !detail::parse_int(toks[0], n) ||
      !detail::parse_int(toks[1], m) || n < 0 || m < 0)
    throw ParseError(lineno, "expected header \"n m\"");
  if (n > (1LL << 30) || m > (1LL << 30))
    throw ParseError(lineno, "header dimensions out of range");

  std::vector<Edge> edges;
  edges.reserve(static_cast<std::size_t>(m));
  std::set<std::pair<int, int>> seen;
  for (long long i = 0; i < m; ++i) {
    if (!next_tokens(toks))
      throw ParseError(lineno + 1, "expected " + std::to_string(m) +
                                       " edges, found " + std::to_string(i));
    long long u, v;
    double w;
    if (toks.size() != 3 || !detail::parse_int(toks[0], u) ||
        !detail::parse_int(toks[1], v) || !detail::parse_real(toks[2], w))
      throw ParseError(lineno, "expected edge \"u v w\"");
    if (u < 1 || u > n || v < 1 || v > n)
      throw ParseError(lineno, "vertex id out of range");
    if (u == v) throw ParseError(lineno, "self-loop");
    if (!std::isfinite(w) || w == 0.0)
      throw ParseError(lineno, "weight must be finite and nonzero");
    int a = static_cast<int>(u - 1), b = static_cast<int>(v - 1);
    if (a > b) std::swap(a, b);
    if (!seen.insert({a, b}).second) throw ParseError(lineno, "duplicate edge");
    edges.push_back({a, b, w});
  }
  if (next_tokens(toks))
    throw ParseError(lineno, "trailing data after " + std::to_string(m) +
                                 " edges");
  return Graph(static_cast<int>(n), std::move(edges));
}

inline Graph parse_gset(const std::string& text) {
  std::istringstream in(text);
  return parse_gset(in);
}

/// Writes the Gset format back out. Integer weights are printed without a
/// decimal point, so integer-weighted files round-trip byte-for-byte modulo
/// whitespace.
inline void serialize_gset(const Graph& g, std::ostream& out) {
  out << g.n() << ' ' << g.edge_count() << '\n';
  char buf[64];
  for (const auto& e : g.edges()) {
    out << (e.u + 1) << ' ' << (e.v + 1) << ' ';
    if (e.w == std::floor(e.w) && std::abs(e.w) < 1e15) {
      out << static_cast<long long>(e.w);
    } else {
      std::snprintf(buf, sizeof buf, "%.17g", e.w);
      out << buf;
    }
    out << '\n';
  }
}

inline std::string serialize_gset(const Graph& g) {
  std::ostringstream out;
  serialize_gset(g, out);
  return out.str();
}

/// Random simple d-regular graph via the pairing model: pair up n*d stubs and
/// restart whenever a self-loop or multi-edge shows up. Weights are 1 for the
/// unweighted family, i.i.d. uniform on (0,1] otherwise. Deterministic given
/// the seed.
inline Graph gen_regular(int n, int d, bool weighted, std::uint64_t seed) {
  if (n <= 0 || d < 0) throw std::invalid_argument("n must be positive, d >= 0");
  if (d >= n) throw std::invalid_argument("regular graph needs d < n");
  if ((static_cast<long long>(n) * d) % 2 != 0)
    throw std::invalid_argument("n*d must be even");

  Rng rng(seed);
  const long long max_attempts = 10LL * n;
  std::vector<int> stubs(static_cast<std::size_t>(n) * d);
  for (long long attempt = 0; attempt < max_attempts; ++attempt) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < d; ++k)
        stubs[static_cast<std::size_t>(j) * d + k] = j;
    shuffle(std::span<int>(stubs), rng);

    std::set<std::pair<int, int>> pairs;
    bool ok = true;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      int u = stubs[i], v = stubs[i + 1];
      if (u == v) {
        ok = false;
        break;
      }
      if (u > v) std::swap(u, v);
      if (!pairs.insert({u, v}).second) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;

    std::vector<Edge> edges;
    edges.reserve(pairs.size());
    for (const auto& [u, v] : pairs)
      edges.push_back({u, v, weighted ? uniform_unit_open_below(rng) : 1.0});
    return Graph(n, std::move(edges));
  }
  throw std::runtime_error("gen_regular: retry limit exceeded");
}

/// Cut value C(b): total weight of edges whose endpoints get different bits.
inline double cut_value(const Graph& g, const Bitstring& b) {
  if (b.size() != static_cast<std::size_t>(g.n()))
    throw std::invalid_argument("bitstring length mismatch");
  double cut = 0.0;
  for (const auto& e : g.edges())
    if (b[static_cast<std::size_t>(e.u)] != b[static_cast<std::size_t>(e.v)])
      cut += e.w;
  return cut;
}

/// Classical Ising energy E = sum w_jk z_j z_k with z = 1 - 2b.
/// Satisfies C(b) = (total_weight - E) / 2 exactly.
inline double ising_energy(const Graph& g, const Bitstring& b) {
  if (b.size() != static_cast<std::size_t>(g.n()))
    throw std::invalid_argument("bitstring length mismatch");
  double e = 0.0;
  for (const auto& edge : g.edges()) {
    const int zu = 1 - 2 * static_cast<int>(b[static_cast<std::size_t>(edge.u)]);
    const int zv = 1 - 2 * static_cast<int>(b[static_cast<std::size_t>(edge.v)]);
    e += edge.w * zu * zv;
  }
  return e;
}

inline double cut_from_energy(const Graph& g, double ising) {
  return (g.total_weight() - ising) / 2.0;
}

/// Approximation ratio r = cut / best_known. Relative error is 1 - r.
inline double approximation_ratio(double cut, double best_known) {
  if (!(best_known > 0.0))
    throw std::invalid_argument("best_known must be positive");
  return cut / best_known;
}

}  // namespace qils
