/*
 * Copyright 2026 The spikenoc Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spikenoc/core.hpp"

namespace spikenoc {

struct LinkTiming {
    std::uint32_t service_time_ticks = 1;   // o in tick units
    std::uint32_t pipeline_latency_ticks = 0;

    friend bool operator==(const LinkTiming &, const LinkTiming &) = default;
};

struct Link {
    RouterId src = 0;
    RouterId dst = 0;
    LinkTiming timing;

    friend bool operator==(const Link &, const Link &) = default;
};

// Neurons hosted at an endpoint router; external_neurons is the N_c of the
// per-link analysis (neurons that communicate outside the cluster).
struct ClusterInfo {
    std::uint64_t neurons = 0;
    std::uint64_t external_neurons = 0;

    friend bool operator==(const ClusterInfo &, const ClusterInfo &) = default;
};

enum class TopologyKind {
    mesh,         // 2D mesh (TrueNorth-style)
    torus,        // 2D torus, optionally with diagonals (SpiNNaker-style)
    tree,         // multicast tree (Neurogrid-style)
    hierarchical, // tree plus a cluster layer
};

// Immutable after construction; share freely across concurrent runs.
struct Topology {
    TopologyKind kind = TopologyKind::mesh;

    // mesh/torus geometry
    std::uint32_t width = 0;
    std::uint32_t height = 0;
    bool diagonals = false;

    // tree geometry
    std::uint32_t fanout = 0;
    std::uint32_t leaf_count = 0;
    std::uint32_t tree_depth = 0;
    std::uint32_t unused_leaves = 0; // padding when leaves don't fill the bottom level

    std::uint32_t n_routers = 0;
    std::vector<Link> links;
    std::vector<std::vector<std::uint32_t>> outgoing; // per router: indices into links
    std::vector<ClusterInfo> clusters;                // per router; zero on pure routers

    std::uint32_t degree(RouterId r) const { return static_cast<std::uint32_t>(outgoing[r].size()); }

    // Index of the directed link src->dst, or -1.
    std::int64_t find_link(RouterId src, RouterId dst) const;

    // mesh/torus coordinates (row-major ids)
    std::uint32_t x_of(RouterId r) const { return r % width; }
    std::uint32_t y_of(RouterId r) const { return r / width; }
    RouterId router_at(std::uint32_t x, std::uint32_t y) const { return y * width + x; }

    // tree structure (level-order ids, root = 0)
    RouterId parent_of(RouterId r) const { return (r - 1) / fanout; }
    std::uint32_t level_of(RouterId r) const;
    bool is_tree_leaf(RouterId r) const;
    bool is_used_leaf(RouterId r) const; // leaf that is not bottom-level padding
    RouterId leaf_router(std::uint32_t leaf_index) const;

    // Routers that may host clusters: every router on mesh/torus, used leaves
    // on trees.
    std::vector<RouterId> endpoints() const;

    friend bool operator==(const Topology &, const Topology &) = default;
};

Topology build_mesh(std::uint32_t width, std::uint32_t height, LinkTiming timing = {});
Topology build_torus(std::uint32_t width, std::uint32_t height, bool diagonals, LinkTiming timing = {});
Topology build_tree(std::uint32_t fanout, std::uint32_t leaves, LinkTiming timing = {});
Topology build_hierarchical(std::uint32_t fanout, std::uint32_t clusters, LinkTiming timing = {});

// Assigns neurons_per_endpoint to every endpoint; all of them count as
// externally communicating unless a fraction is given.
void host_neurons(Topology &t, std::uint64_t neurons_per_endpoint, double external_fraction = 1.0);

// Full invariant check: ids valid, src != dst, service >= 1, no duplicate
// directed links, connected graph, clusters only on endpoints.
void validate_topology(const Topology &t);

// Canonical median cut: true for the left/first half.  Mesh/torus: columns
// [0, width/2).  Tree: the subtrees of the first ceil(fanout/2) root children.
std::vector<bool> left_half_mask(const Topology &t);

// One-directional count of links crossing the median cut (left to right).
std::uint32_t bisection_links(const Topology &t);

// Hop count of the deterministic route between two routers: Manhattan on the
// mesh, wrap-aware Manhattan on the torus (diagonal links are capacity, not
// part of dimension-order routes), up-down path length on trees.
std::uint32_t routing_distance(const Topology &t, RouterId a, RouterId b);

struct TrafficMatrix {
    std::size_t n = 0;
    std::vector<double> weights; // row-major n*n

    static TrafficMatrix zeros(std::size_t n) { return {n, std::vector<double>(n * n, 0.0)}; }
    double &at(std::size_t src, std::size_t dst) { return weights[src * n + dst]; }
    double at(std::size_t src, std::size_t dst) const { return weights[src * n + dst]; }
};

// Unit weight on every ordered pair of distinct routers.
TrafficMatrix uniform_all_pairs(const Topology &t);

// Traffic-weighted mean hop count over the matrix.
double mean_hops(const Topology &t, const TrafficMatrix &m);

// Text export/import; round-trips bit-exactly.
std::string save_topology(const Topology &t);
void save_topology(const Topology &t, std::ostream &out);
Topology load_topology(std::istream &in);

} // namespace spikenoc
