#pragma once

#include <cctype>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "swarmlab/errors.hpp"

namespace swarmlab {

struct GraphEdge {
    int from{};
    int to{};
    double cost{};
};

/**
 * Directed graph with positive edge costs.
 *
 * Node ids are free-form tokens except that they may not be empty, contain
 * whitespace, or contain '-'. The last rule keeps the dash-joined path
 * encoding used by the routing tables injective.
 *
 * Nodes are declared implicitly by the first edge that mentions them (the
 * text format infers its node set the same way) or explicitly through
 * add_node. The per-edge heuristic weight is eta = 1 / cost.
 */
class Graph {
public:
    int add_node(std::string_view id) {
        validate_id(id);
        if (auto it = index_.find(std::string(id)); it != index_.end()) {
            return it->second;
        }
        int n = static_cast<int>(ids_.size());
        ids_.emplace_back(id);
        index_.emplace(ids_.back(), n);
        out_.emplace_back();
        return n;
    }

    int add_edge(std::string_view from, std::string_view to, double cost) {
        if (!(cost > 0.0) || !std::isfinite(cost)) {
            throw ValidationError("edge " + std::string(from) + " -> " + std::string(to) +
                                  ": cost must be a positive finite real, got " + std::to_string(cost));
        }
        int f = add_node(from);
        int t = add_node(to);
        if (f == t) {
            throw ValidationError("self edge on node " + std::string(from) + " is not allowed");
        }
        if (edge_index_.count(key(f, t)) != 0) {
            throw ValidationError("duplicate edge " + std::string(from) + " -> " + std::string(to));
        }
        int e = static_cast<int>(edges_.size());
        edges_.push_back(GraphEdge{f, t, cost});
        edge_index_.emplace(key(f, t), e);
        out_[static_cast<std::size_t>(f)].push_back(e);
        return e;
    }

    [[nodiscard]] int node_count() const { return static_cast<int>(ids_.size()); }
    [[nodiscard]] int edge_count() const { return static_cast<int>(edges_.size()); }

    [[nodiscard]] const std::string& node_id(int node) const { return ids_.at(static_cast<std::size_t>(node)); }
    [[nodiscard]] const GraphEdge& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }

    [[nodiscard]] std::optional<int> find_node(std::string_view id) const {
        auto it = index_.find(std::string(id));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    [[nodiscard]] int require_node(std::string_view id) const {
        auto n = find_node(id);
        if (!n) throw ValidationError("unknown node id: " + std::string(id));
        return *n;
    }

    [[nodiscard]] std::optional<int> find_edge(int from, int to) const {
        auto it = edge_index_.find(key(from, to));
        if (it == edge_index_.end()) return std::nullopt;
        return it->second;
    }

    [[nodiscard]] std::span<const int> out_edges(int node) const {
        return out_.at(static_cast<std::size_t>(node));
    }

    // Heuristic attractiveness of an edge, the reciprocal of its cost.
    [[nodiscard]] double eta(int e) const { return 1.0 / edge(e).cost; }

private:
    static void validate_id(std::string_view id) {
        if (id.empty()) throw ValidationError("node id must be non-empty");
        for (char c : id) {
            if (c == '-' || c == ',' || c == '#' || std::isspace(static_cast<unsigned char>(c))) {
                throw ValidationError("node id '" + std::string(id) +
                                      "' may not contain '-', ',', '#', or whitespace");
            }
        }
    }

    [[nodiscard]] static std::uint64_t key(int from, int to) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(from)) << 32) |
               static_cast<std::uint32_t>(to);
    }

    std::vector<std::string> ids_;
    std::unordered_map<std::string, int> index_;
    std::vector<GraphEdge> edges_;
    std::unordered_map<std::uint64_t, int> edge_index_;
    std::vector<std::vector<int>> out_;
};

// Text format: one edge per line as "from_id to_id cost", tokens separated
// by whitespace. '#' starts a comment that runs to end of line. Blank lines
// are skipped. The node set is inferred from edge endpoints in order of
// first appearance.
inline Graph parse_graph(std::istream& in, const std::string& source_name = "<stream>") {
    Graph g;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream ls(line);
        std::string from, to, cost_tok;
        if (!(ls >> from)) continue; // blank or comment-only line
        if (!(ls >> to >> cost_tok)) {
            throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                  ": expected 'from_id to_id cost'");
        }
        std::string extra;
        if (ls >> extra) {
            throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                  ": trailing token '" + extra + "'");
        }
        double cost = 0.0;
        try {
            std::size_t pos = 0;
            cost = std::stod(cost_tok, &pos);
            if (pos != cost_tok.size()) throw std::invalid_argument(cost_tok);
        } catch (const std::exception&) {
            throw ValidationError(source_name + ":" + std::to_string(line_no) +
                                  ": cost '" + cost_tok + "' is not a number");
        }
        try {
            g.add_edge(from, to, cost);
        } catch (const ValidationError& e) {
            throw ValidationError(source_name + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return g;
}

inline Graph load_graph(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open graph file: " + path.string());
    return parse_graph(in, path.filename().string());
}

} // namespace swarmlab
