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

#include "spikenoc/routing.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

namespace spikenoc {

namespace {

// Signed step toward the target; torus picks the shorter wrap, ties positive.
std::int32_t dimension_step(std::uint32_t from, std::uint32_t to, std::uint32_t size, bool wrap)
{
    if (from == to)
    {
        return 0;
    }
    if (!wrap)
    {
        return to > from ? 1 : -1;
    }
    const std::uint32_t forward = (to + size - from) % size;
    const std::uint32_t backward = size - forward;
    return forward <= backward ? 1 : -1;
}

std::uint32_t step_coord(std::uint32_t coord, std::int32_t step, std::uint32_t size)
{
    return (coord + size + static_cast<std::uint32_t>(step)) % size;
}

} // namespace

std::vector<RouterId> Route::hop_routers() const
{
    std::vector<RouterId> hops;
    hops.reserve(links.size());
    for (const auto &[from, to] : links)
    {
        hops.push_back(to);
    }
    return hops;
}

Route xy_route(const Topology &t, RouterId src, RouterId dst)
{
    if (t.kind != TopologyKind::mesh && t.kind != TopologyKind::torus)
    {
        throw std::invalid_argument("xy_route: topology is not a mesh or torus");
    }
    if (src >= t.n_routers || dst >= t.n_routers)
    {
        throw std::invalid_argument("xy_route: router id out of range");
    }

    Route route;
    route.source = src;
    route.destinations = {dst};

    const bool wrap = t.kind == TopologyKind::torus;
    std::uint32_t x = t.x_of(src);
    std::uint32_t y = t.y_of(src);
    RouterId here = src;

    const std::int32_t x_step = dimension_step(x, t.x_of(dst), t.width, wrap);
    while (x != t.x_of(dst))
    {
        x = step_coord(x, x_step, t.width);
        const RouterId next = t.router_at(x, y);
        route.links.emplace_back(here, next);
        here = next;
    }
    const std::int32_t y_step = dimension_step(y, t.y_of(dst), t.height, wrap);
    while (y != t.y_of(dst))
    {
        y = step_coord(y, y_step, t.height);
        const RouterId next = t.router_at(x, y);
        route.links.emplace_back(here, next);
        here = next;
    }
    return route;
}

Route tree_multicast_route(const Topology &t, RouterId src, const std::vector<RouterId> &dsts)
{
    if (t.kind != TopologyKind::tree && t.kind != TopologyKind::hierarchical)
    {
        throw std::invalid_argument("tree_multicast_route: topology is not a tree");
    }
    if (dsts.empty())
    {
        throw std::invalid_argument("tree_multicast_route: destination set is empty");
    }
    if (!t.is_used_leaf(src))
    {
        throw std::invalid_argument("tree_multicast_route: source " + std::to_string(src) + " is not a leaf");
    }
    for (const RouterId dst : dsts)
    {
        if (dst >= t.n_routers || !t.is_used_leaf(dst))
        {
            throw std::invalid_argument("tree_multicast_route: destination " + std::to_string(dst) + " is not a leaf");
        }
    }

    Route route;
    route.source = src;
    route.destinations = dsts;
    std::sort(route.destinations.begin(), route.destinations.end());
    route.destinations.erase(std::unique(route.destinations.begin(), route.destinations.end()),
            route.destinations.end());

    // Self delivery is local; only the remaining leaves need links.
    std::vector<RouterId> targets;
    for (const RouterId dst : route.destinations)
    {
        if (dst != src)
        {
            targets.push_back(dst);
        }
    }
    if (targets.empty())
    {
        return route;
    }

    // Each target branches off the up path at its own lowest common
    // ancestor with the source, so the route is the union of the up-down
    // unicast paths.  Down edges are deduplicated where targets share a
    // subtree.
    RouterId highest = src;
    std::uint32_t highest_level = t.level_of(src);
    std::map<RouterId, std::set<RouterId>> children_to_visit;
    for (const RouterId target : targets)
    {
        RouterId a = src;
        RouterId b = target;
        std::uint32_t level_a = t.level_of(a);
        std::uint32_t level_b = t.level_of(b);
        while (level_a > level_b)
        {
            a = t.parent_of(a);
            --level_a;
        }
        while (level_b > level_a)
        {
            b = t.parent_of(b);
            --level_b;
        }
        while (a != b)
        {
            a = t.parent_of(a);
            b = t.parent_of(b);
            --level_a;
        }
        if (level_a < highest_level)
        {
            highest = a;
            highest_level = level_a;
        }
        RouterId node = target;
        while (node != a)
        {
            const RouterId parent = t.parent_of(node);
            children_to_visit[parent].insert(node);
            node = parent;
        }
    }

    // Ascend to the highest branch point, then emit every branch's subtree
    // in deterministic depth-first order, source-side branches first.
    std::vector<RouterId> up_path{src};
    RouterId walk = src;
    while (walk != highest)
    {
        const RouterId parent = t.parent_of(walk);
        route.links.emplace_back(walk, parent);
        up_path.push_back(parent);
        walk = parent;
    }
    for (const RouterId branch : up_path)
    {
        std::vector<RouterId> dfs{branch};
        while (!dfs.empty())
        {
            const RouterId node = dfs.back();
            dfs.pop_back();
            const auto it = children_to_visit.find(node);
            if (it == children_to_visit.end())
            {
                continue;
            }
            for (const RouterId child : it->second)
            {
                route.links.emplace_back(node, child);
            }
            for (auto child = it->second.rbegin(); child != it->second.rend(); ++child)
            {
                dfs.push_back(*child);
            }
        }
    }
    return route;
}

std::uint32_t ceil_log2(std::uint64_t value)
{
    std::uint32_t bits = 0;
    while ((1ULL << bits) < value)
    {
        ++bits;
    }
    return bits;
}

RoutingTable make_uniform_table(std::uint64_t n_neurons, std::uint64_t fanout)
{
    RoutingTable table;
    table.local_address_bits = ceil_log2(n_neurons * fanout);
    table.destinations.resize(n_neurons);
    for (std::uint64_t source = 0; source < n_neurons; ++source)
    {
        auto &list = table.destinations[source];
        list.reserve(fanout);
        for (std::uint64_t j = 0; j < fanout; ++j)
        {
            list.push_back((source + j + 1) % n_neurons);
        }
    }
    return table;
}

RoutingTable make_split_table(std::vector<std::vector<NeuronId>> fanout_lists, std::uint64_t n_clusters,
        std::uint64_t local_slots)
{
    if (n_clusters == 0 || local_slots == 0)
    {
        throw std::invalid_argument("make_split_table: cluster and slot counts must be nonzero");
    }
    RoutingTable table;
    table.destinations = std::move(fanout_lists);
    table.cluster_address_bits = ceil_log2(n_clusters);
    table.local_address_bits = ceil_log2(local_slots);
    return table;
}

double routing_table_bits(const RoutingTable &table)
{
    double total = 0.0;
    for (const auto &list : table.destinations)
    {
        total += static_cast<double>(list.size()) * table.address_width_bits();
    }
    return total;
}

void validate_table(const RoutingTable &table, std::uint64_t n_neurons)
{
    for (std::size_t source = 0; source < table.destinations.size(); ++source)
    {
        for (const NeuronId dst : table.destinations[source])
        {
            if (dst >= n_neurons)
            {
                throw std::invalid_argument("routing table: source " + std::to_string(source) +
                        " names destination " + std::to_string(dst) + " outside the population");
            }
        }
    }
}

std::vector<std::vector<NeuronId>> load_connectivity(std::istream &in, std::uint64_t n_neurons)
{
    std::vector<std::vector<NeuronId>> lists;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line))
    {
        ++line_no;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream fields(line);
        std::vector<NeuronId> fanout;
        NeuronId dst = 0;
        while (fields >> dst)
        {
            if (dst >= n_neurons)
            {
                throw std::invalid_argument("connectivity line " + std::to_string(line_no) + ": destination " +
                        std::to_string(dst) + " outside the population");
            }
            fanout.push_back(dst);
        }
        if (!fields.eof())
        {
            throw std::invalid_argument("connectivity line " + std::to_string(line_no) + ": malformed id");
        }
        lists.push_back(std::move(fanout));
    }
    if (lists.size() > n_neurons)
    {
        throw std::invalid_argument("connectivity file: more source lines than neurons");
    }
    lists.resize(n_neurons);
    return lists;
}

} // namespace spikenoc
