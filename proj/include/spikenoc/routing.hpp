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
#include <utility>
#include <vector>

#include "spikenoc/core.hpp"
#include "spikenoc/topology.hpp"

namespace spikenoc {

// A packet's path at the router level.  For unicast, links form the hop
// sequence; for multicast, links are the route tree's directed edges in
// preorder, each carried at most once.
struct Route {
    RouterId source = 0;
    std::vector<RouterId> destinations;
    std::vector<std::pair<RouterId, RouterId>> links;

    // Routers visited after the source, in order (unicast routes).
    std::vector<RouterId> hop_routers() const;

    friend bool operator==(const Route &, const Route &) = default;
};

// Dimension-ordered route: X fully resolved before Y.  On the torus the
// shorter wrap direction wins, ties going to the positive direction.
Route xy_route(const Topology &t, RouterId src, RouterId dst);

// Multicast route: ascend to the lowest common ancestor of src and the
// destination leaves, then branch down; each link carries the packet once.
Route tree_multicast_route(const Topology &t, RouterId src, const std::vector<RouterId> &dsts);

// Per-source-neuron fanout lists with split destination addressing:
// cluster id bits plus local synapse bits (0 cluster bits for flat tables).
struct RoutingTable {
    std::vector<std::vector<NeuronId>> destinations;
    std::uint32_t cluster_address_bits = 0;
    std::uint32_t local_address_bits = 0;

    std::uint32_t address_width_bits() const { return cluster_address_bits + local_address_bits; }
};

std::uint32_t ceil_log2(std::uint64_t value);

// Flat table with uniform fanout: every neuron stores `fanout` destinations
// addressed with ceil(lg(N * fanout)) bits.
RoutingTable make_uniform_table(std::uint64_t n_neurons, std::uint64_t fanout);

// Table over explicit fanout lists, addresses split into
// ceil(lg(n_clusters)) + ceil(lg(local_slots)) bits.
RoutingTable make_split_table(std::vector<std::vector<NeuronId>> fanout_lists, std::uint64_t n_clusters,
        std::uint64_t local_slots);

// Total storage: sum over sources of fanout length times address width.
double routing_table_bits(const RoutingTable &table);

// Every destination must name an existing neuron.
void validate_table(const RoutingTable &table, std::uint64_t n_neurons);

// One line per source neuron listing destination neuron ids (whitespace or
// comma separated); a blank line is an empty fanout.
std::vector<std::vector<NeuronId>> load_connectivity(std::istream &in, std::uint64_t n_neurons);

} // namespace spikenoc
