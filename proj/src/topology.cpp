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

#include "spikenoc/topology.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace spikenoc {

namespace {

void check_timing(const LinkTiming &timing)
{
    if (timing.service_time_ticks < 1)
    {
        throw std::invalid_argument("link service_time_ticks must be >= 1");
    }
}

void add_link_pair(Topology &t, RouterId a, RouterId b, const LinkTiming &timing)
{
    t.outgoing[a].push_back(static_cast<std::uint32_t>(t.links.size()));
    t.links.push_back({a, b, timing});
    t.outgoing[b].push_back(static_cast<std::uint32_t>(t.links.size()));
    t.links.push_back({b, a, timing});
}

std::uint32_t wrap_distance(std::uint32_t a, std::uint32_t b, std::uint32_t size)
{
    const std::uint32_t forward = (b + size - a) % size;
    return std::min(forward, size - forward);
}

const char *kind_name(TopologyKind kind)
{
    switch (kind)
    {
    case TopologyKind::mesh: return "mesh";
    case TopologyKind::torus: return "torus";
    case TopologyKind::tree: return "tree";
    case TopologyKind::hierarchical: return "hierarchical";
    }
    return "?";
}

TopologyKind kind_from_name(const std::string &name)
{
    if (name == "mesh") return TopologyKind::mesh;
    if (name == "torus") return TopologyKind::torus;
    if (name == "tree") return TopologyKind::tree;
    if (name == "hierarchical") return TopologyKind::hierarchical;
    throw std::invalid_argument("unknown topology kind: " + name);
}

} // namespace

std::int64_t Topology::find_link(RouterId src, RouterId dst) const
{
    for (const std::uint32_t index : outgoing[src])
    {
        if (links[index].dst == dst)
        {
            return index;
        }
    }
    return -1;
}

std::uint32_t Topology::level_of(RouterId r) const
{
    std::uint32_t level = 0;
    std::uint64_t level_size = 1;
    std::uint64_t level_start = 0;
    while (r >= level_start + level_size)
    {
        level_start += level_size;
        level_size *= fanout;
        ++level;
    }
    return level;
}

bool Topology::is_tree_leaf(RouterId r) const { return level_of(r) == tree_depth; }

bool Topology::is_used_leaf(RouterId r) const
{
    if (!is_tree_leaf(r))
    {
        return false;
    }
    std::uint64_t level_start = 0;
    std::uint64_t level_size = 1;
    for (std::uint32_t level = 0; level < tree_depth; ++level)
    {
        level_start += level_size;
        level_size *= fanout;
    }
    return r - level_start < leaf_count;
}

RouterId Topology::leaf_router(std::uint32_t leaf_index) const
{
    std::uint64_t level_start = 0;
    std::uint64_t level_size = 1;
    for (std::uint32_t level = 0; level < tree_depth; ++level)
    {
        level_start += level_size;
        level_size *= fanout;
    }
    return static_cast<RouterId>(level_start + leaf_index);
}

std::vector<RouterId> Topology::endpoints() const
{
    std::vector<RouterId> result;
    if (kind == TopologyKind::mesh || kind == TopologyKind::torus)
    {
        result.reserve(n_routers);
        for (RouterId r = 0; r < n_routers; ++r)
        {
            result.push_back(r);
        }
    }
    else
    {
        for (std::uint32_t leaf = 0; leaf < leaf_count; ++leaf)
        {
            result.push_back(leaf_router(leaf));
        }
    }
    return result;
}

Topology build_mesh(std::uint32_t width, std::uint32_t height, LinkTiming timing)
{
    if (width < 1 || height < 1)
    {
        throw std::invalid_argument("build_mesh: width and height must be >= 1");
    }
    check_timing(timing);
    if (static_cast<std::uint64_t>(width) * height > kInvalidRouter)
    {
        throw std::invalid_argument("build_mesh: dimensions overflow router id space");
    }

    Topology t;
    t.kind = TopologyKind::mesh;
    t.width = width;
    t.height = height;
    t.n_routers = width * height;
    t.outgoing.resize(t.n_routers);
    t.clusters.resize(t.n_routers);

    for (std::uint32_t y = 0; y < height; ++y)
    {
        for (std::uint32_t x = 0; x < width; ++x)
        {
            const RouterId here = t.router_at(x, y);
            if (x + 1 < width)
            {
                add_link_pair(t, here, t.router_at(x + 1, y), timing);
            }
            if (y + 1 < height)
            {
                add_link_pair(t, here, t.router_at(x, y + 1), timing);
            }
        }
    }
    return t;
}

Topology build_torus(std::uint32_t width, std::uint32_t height, bool diagonals, LinkTiming timing)
{
    if (width < 3 || height < 3)
    {
        throw std::invalid_argument("build_torus: wraparound needs width and height >= 3");
    }
    check_timing(timing);

    Topology t;
    t.kind = TopologyKind::torus;
    t.width = width;
    t.height = height;
    t.diagonals = diagonals;
    t.n_routers = width * height;
    t.outgoing.resize(t.n_routers);
    t.clusters.resize(t.n_routers);

    for (std::uint32_t y = 0; y < height; ++y)
    {
        for (std::uint32_t x = 0; x < width; ++x)
        {
            const RouterId here = t.router_at(x, y);
            add_link_pair(t, here, t.router_at((x + 1) % width, y), timing);
            add_link_pair(t, here, t.router_at(x, (y + 1) % height), timing);
            if (diagonals)
            {
                // One diagonal axis (+x+y and, implicitly, its reverse),
                // giving the degree-6 arrangement.
                add_link_pair(t, here, t.router_at((x + 1) % width, (y + 1) % height), timing);
            }
        }
    }
    return t;
}

Topology build_tree(std::uint32_t fanout, std::uint32_t leaves, LinkTiming timing)
{
    if (fanout < 2)
    {
        throw std::invalid_argument("build_tree: fanout must be >= 2");
    }
    if (leaves < 1)
    {
        throw std::invalid_argument("build_tree: leaves must be >= 1");
    }
    check_timing(timing);

    std::uint32_t depth = 0;
    std::uint64_t slots = 1;
    while (slots < leaves)
    {
        slots *= fanout;
        ++depth;
    }

    std::uint64_t total = 1;
    std::uint64_t level_size = 1;
    for (std::uint32_t level = 1; level <= depth; ++level)
    {
        level_size *= fanout;
        total += level_size;
    }
    if (total > kInvalidRouter)
    {
        throw std::invalid_argument("build_tree: dimensions overflow router id space");
    }

    Topology t;
    t.kind = TopologyKind::tree;
    t.fanout = fanout;
    t.leaf_count = leaves;
    t.tree_depth = depth;
    t.unused_leaves = static_cast<std::uint32_t>(slots - leaves);
    t.n_routers = static_cast<std::uint32_t>(total);
    t.outgoing.resize(t.n_routers);
    t.clusters.resize(t.n_routers);

    for (RouterId r = 1; r < t.n_routers; ++r)
    {
        add_link_pair(t, t.parent_of(r), r, timing);
    }
    return t;
}

Topology build_hierarchical(std::uint32_t fanout, std::uint32_t clusters, LinkTiming timing)
{
    Topology t = build_tree(fanout, clusters, timing);
    t.kind = TopologyKind::hierarchical;
    return t;
}

void host_neurons(Topology &t, std::uint64_t neurons_per_endpoint, double external_fraction)
{
    if (external_fraction < 0.0 || external_fraction > 1.0)
    {
        throw std::invalid_argument("host_neurons: external_fraction must be in [0,1]");
    }
    for (const RouterId r : t.endpoints())
    {
        t.clusters[r].neurons = neurons_per_endpoint;
        t.clusters[r].external_neurons =
                static_cast<std::uint64_t>(std::llround(external_fraction * static_cast<double>(neurons_per_endpoint)));
    }
}

void validate_topology(const Topology &t)
{
    if (t.n_routers < 1)
    {
        throw std::invalid_argument("topology: must have at least one router");
    }
    if (t.outgoing.size() != t.n_routers || t.clusters.size() != t.n_routers)
    {
        throw std::invalid_argument("topology: per-router tables sized inconsistently");
    }
    if (t.kind == TopologyKind::mesh || t.kind == TopologyKind::torus)
    {
        if (static_cast<std::uint64_t>(t.width) * t.height != t.n_routers)
        {
            throw std::invalid_argument("topology: router count does not match dimensions");
        }
    }
    else if (t.fanout < 2 && t.n_routers > 1)
    {
        throw std::invalid_argument("topology: tree fanout must be >= 2");
    }

    std::set<std::pair<RouterId, RouterId>> seen;
    for (const Link &link : t.links)
    {
        if (link.src >= t.n_routers || link.dst >= t.n_routers)
        {
            throw std::invalid_argument("topology: link endpoint out of range");
        }
        if (link.src == link.dst)
        {
            throw std::invalid_argument("topology: self-links are not allowed");
        }
        if (link.timing.service_time_ticks < 1)
        {
            throw std::invalid_argument("topology: link service_time_ticks must be >= 1");
        }
        if (!seen.emplace(link.src, link.dst).second)
        {
            throw std::invalid_argument("topology: duplicate directed link");
        }
    }

    for (RouterId r = 0; r < t.n_routers; ++r)
    {
        for (const std::uint32_t index : t.outgoing[r])
        {
            if (index >= t.links.size() || t.links[index].src != r)
            {
                throw std::invalid_argument("topology: adjacency table inconsistent with link list");
            }
        }
    }

    // Weak connectivity over the link set.
    if (t.n_routers > 1)
    {
        std::vector<bool> visited(t.n_routers, false);
        std::vector<std::vector<RouterId>> undirected(t.n_routers);
        for (const Link &link : t.links)
        {
            undirected[link.src].push_back(link.dst);
            undirected[link.dst].push_back(link.src);
        }
        std::deque<RouterId> frontier{0};
        visited[0] = true;
        std::uint32_t reached = 1;
        while (!frontier.empty())
        {
            const RouterId here = frontier.front();
            frontier.pop_front();
            for (const RouterId next : undirected[here])
            {
                if (!visited[next])
                {
                    visited[next] = true;
                    ++reached;
                    frontier.push_back(next);
                }
            }
        }
        if (reached != t.n_routers)
        {
            throw std::invalid_argument("topology: graph is not connected");
        }
    }

    for (RouterId r = 0; r < t.n_routers; ++r)
    {
        if (t.clusters[r].external_neurons > t.clusters[r].neurons)
        {
            throw std::invalid_argument("topology: cluster external count exceeds hosted neurons");
        }
        if (t.clusters[r].neurons > 0 &&
                (t.kind == TopologyKind::tree || t.kind == TopologyKind::hierarchical) && !t.is_used_leaf(r))
        {
            throw std::invalid_argument("topology: tree clusters may only attach to used leaves");
        }
    }
}

std::vector<bool> left_half_mask(const Topology &t)
{
    std::vector<bool> mask(t.n_routers, false);
    if (t.kind == TopologyKind::mesh || t.kind == TopologyKind::torus)
    {
        const std::uint32_t cut = t.width / 2;
        for (RouterId r = 0; r < t.n_routers; ++r)
        {
            mask[r] = t.x_of(r) < cut;
        }
    }
    else
    {
        // First ceil(fanout/2) root-child subtrees form the left half; the
        // root itself stays on the right.
        if (t.n_routers == 1)
        {
            return mask;
        }
        const std::uint32_t left_children = (t.fanout + 1) / 2;
        for (RouterId r = 1; r < t.n_routers; ++r)
        {
            RouterId walk = r;
            while (walk > t.fanout)
            {
                walk = t.parent_of(walk);
            }
            mask[r] = (walk - 1) < left_children;
        }
    }
    return mask;
}

std::uint32_t bisection_links(const Topology &t)
{
    if (t.n_routers < 2)
    {
        throw std::invalid_argument("bisection_links: undefined for single-router topologies");
    }
    const std::vector<bool> mask = left_half_mask(t);
    std::uint32_t crossing = 0;
    for (const Link &link : t.links)
    {
        if (mask[link.src] && !mask[link.dst])
        {
            ++crossing;
        }
    }
    return crossing;
}

std::uint32_t routing_distance(const Topology &t, RouterId a, RouterId b)
{
    if (a >= t.n_routers || b >= t.n_routers)
    {
        throw std::invalid_argument("routing_distance: router " + std::to_string(a) + "->" + std::to_string(b) +
                " out of range");
    }
    switch (t.kind)
    {
    case TopologyKind::mesh: {
        const std::int64_t dx = static_cast<std::int64_t>(t.x_of(a)) - t.x_of(b);
        const std::int64_t dy = static_cast<std::int64_t>(t.y_of(a)) - t.y_of(b);
        return static_cast<std::uint32_t>(std::llabs(dx) + std::llabs(dy));
    }
    case TopologyKind::torus:
        return wrap_distance(t.x_of(a), t.x_of(b), t.width) + wrap_distance(t.y_of(a), t.y_of(b), t.height);
    case TopologyKind::tree:
    case TopologyKind::hierarchical: {
        std::uint32_t level_a = t.level_of(a);
        std::uint32_t level_b = t.level_of(b);
        std::uint32_t hops = 0;
        while (level_a > level_b)
        {
            a = t.parent_of(a);
            --level_a;
            ++hops;
        }
        while (level_b > level_a)
        {
            b = t.parent_of(b);
            --level_b;
            ++hops;
        }
        while (a != b)
        {
            a = t.parent_of(a);
            b = t.parent_of(b);
            hops += 2;
        }
        return hops;
    }
    }
    throw std::logic_error("routing_distance: unhandled topology kind");
}

TrafficMatrix uniform_all_pairs(const Topology &t)
{
    TrafficMatrix m = TrafficMatrix::zeros(t.n_routers);
    for (std::size_t i = 0; i < t.n_routers; ++i)
    {
        for (std::size_t j = 0; j < t.n_routers; ++j)
        {
            if (i != j)
            {
                m.at(i, j) = 1.0;
            }
        }
    }
    return m;
}

double mean_hops(const Topology &t, const TrafficMatrix &m)
{
    if (m.n != t.n_routers)
    {
        throw std::invalid_argument("mean_hops: traffic matrix size does not match topology");
    }
    double weighted = 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < m.n; ++i)
    {
        for (std::size_t j = 0; j < m.n; ++j)
        {
            const double w = m.at(i, j);
            if (w < 0.0)
            {
                throw std::invalid_argument("mean_hops: negative traffic weight");
            }
            if (w > 0.0)
            {
                weighted += w * routing_distance(t, static_cast<RouterId>(i), static_cast<RouterId>(j));
                total += w;
            }
        }
    }
    if (total <= 0.0)
    {
        throw std::invalid_argument("mean_hops: traffic matrix has no positive weight");
    }
    return weighted / total;
}

std::string save_topology(const Topology &t)
{
    std::ostringstream out;
    save_topology(t, out);
    return out.str();
}

void save_topology(const Topology &t, std::ostream &out)
{
    out << "spikenoc-topology v1\n";
    out << "kind " << kind_name(t.kind) << "\n";
    if (t.kind == TopologyKind::mesh || t.kind == TopologyKind::torus)
    {
        out << "width " << t.width << "\n";
        out << "height " << t.height << "\n";
        out << "diagonals " << (t.diagonals ? 1 : 0) << "\n";
    }
    else
    {
        out << "fanout " << t.fanout << "\n";
        out << "leaves " << t.leaf_count << "\n";
        out << "depth " << t.tree_depth << "\n";
        out << "unused " << t.unused_leaves << "\n";
    }
    out << "routers " << t.n_routers << "\n";
    for (const Link &link : t.links)
    {
        out << "link " << link.src << " " << link.dst << " " << link.timing.service_time_ticks << " "
            << link.timing.pipeline_latency_ticks << "\n";
    }
    for (RouterId r = 0; r < t.n_routers; ++r)
    {
        if (t.clusters[r].neurons > 0 || t.clusters[r].external_neurons > 0)
        {
            out << "cluster " << r << " " << t.clusters[r].neurons << " " << t.clusters[r].external_neurons << "\n";
        }
    }
    out << "end\n";
}

Topology load_topology(std::istream &in)
{
    std::string header;
    if (!std::getline(in, header) || header != "spikenoc-topology v1")
    {
        throw std::invalid_argument("topology file: missing 'spikenoc-topology v1' header");
    }

    Topology t;
    t.n_routers = 0;
    bool saw_end = false;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line))
    {
        ++line_no;
        if (line.empty() || line[0] == '#')
        {
            continue;
        }
        std::istringstream fields(line);
        std::string keyword;
        fields >> keyword;
        const auto fail = [&](const std::string &what) {
            throw std::invalid_argument("topology file line " + std::to_string(line_no) + ": " + what);
        };

        if (keyword == "kind")
        {
            std::string name;
            if (!(fields >> name)) fail("kind needs a value");
            t.kind = kind_from_name(name);
        }
        else if (keyword == "width") { if (!(fields >> t.width)) fail("bad width"); }
        else if (keyword == "height") { if (!(fields >> t.height)) fail("bad height"); }
        else if (keyword == "diagonals")
        {
            int flag = 0;
            if (!(fields >> flag)) fail("bad diagonals flag");
            t.diagonals = flag != 0;
        }
        else if (keyword == "fanout") { if (!(fields >> t.fanout)) fail("bad fanout"); }
        else if (keyword == "leaves") { if (!(fields >> t.leaf_count)) fail("bad leaves"); }
        else if (keyword == "depth") { if (!(fields >> t.tree_depth)) fail("bad depth"); }
        else if (keyword == "unused") { if (!(fields >> t.unused_leaves)) fail("bad unused"); }
        else if (keyword == "routers")
        {
            if (!(fields >> t.n_routers)) fail("bad router count");
            t.outgoing.assign(t.n_routers, {});
            t.clusters.assign(t.n_routers, {});
        }
        else if (keyword == "link")
        {
            if (t.n_routers == 0) fail("link before routers line");
            Link link;
            if (!(fields >> link.src >> link.dst >> link.timing.service_time_ticks >>
                        link.timing.pipeline_latency_ticks))
            {
                fail("bad link fields");
            }
            if (link.src >= t.n_routers || link.dst >= t.n_routers) fail("link endpoint out of range");
            t.outgoing[link.src].push_back(static_cast<std::uint32_t>(t.links.size()));
            t.links.push_back(link);
        }
        else if (keyword == "cluster")
        {
            if (t.n_routers == 0) fail("cluster before routers line");
            RouterId r = 0;
            ClusterInfo info;
            if (!(fields >> r >> info.neurons >> info.external_neurons)) fail("bad cluster fields");
            if (r >= t.n_routers) fail("cluster router out of range");
            t.clusters[r] = info;
        }
        else if (keyword == "end")
        {
            saw_end = true;
            break;
        }
        else
        {
            fail("unknown keyword '" + keyword + "'");
        }
    }
    if (!saw_end)
    {
        throw std::invalid_argument("topology file: missing 'end' line");
    }
    validate_topology(t);
    return t;
}

} // namespace spikenoc
