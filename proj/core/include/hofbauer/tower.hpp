#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "hofbauer/symbolic.hpp"

namespace hofbauer {

struct CutPoint {
    int age = 1;
    int origin = 0;
    std::vector<Angle> angles; // sorted, distinct

    friend bool operator==(const CutPoint&, const CutPoint&) = default;
};

struct Domain {
    int id = -1;
    ArcSet arcset;
    std::vector<CutPoint> cutpoints; // sorted by (age, origin)
    int level = 0;
    bool base = false;

    /// Identification key: arc set plus the (age, origin, angles) list.
    std::string key() const;
    /// Number of cutpoints of the given age.
    int count_age(int age) const;
};

struct Edge {
    int from;
    Symbol symbol;
    int to;
};

/// Successor above the expansion limit, kept as a detached domain.
struct FrontierEdge {
    int from;
    Symbol symbol;
    Domain marker;
};

Domain build_base(const PartitionP1& p);

/// One step of the extension on the piece of D over symbol z; nullopt when empty.
std::optional<Domain> step(const Domain& d, Symbol z, const PartitionP1& p);

class TowerGraph {
public:
    static constexpr int kEmpty = -1;
    static constexpr int kFrontier = -2;

    TowerGraph(PartitionP1 p, int R, int extra_levels);

    const PartitionP1& partition() const { return partition_; }
    int R() const { return R_; }
    int expand_limit() const { return R_ + extra_; }
    int extra_levels() const { return extra_; }

    const std::vector<Domain>& domains() const { return domains_; }
    const Domain& domain(int id) const { return domains_.at(static_cast<std::size_t>(id)); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<FrontierEdge>& frontier_edges() const { return frontier_; }
    /// Ids with at least one unexpanded successor.
    std::vector<int> frontier_ids() const;

    /// Successor id over a symbol, kEmpty, or kFrontier.
    int successor(int id, Symbol s) const {
        return succ_[static_cast<std::size_t>(id) * partition_.size() + static_cast<std::size_t>(s)];
    }
    const FrontierEdge& frontier_edge(int id, Symbol s) const;

    /// Existing id with this key, or -1.
    int find(const std::string& key) const;
    /// Identification: existing id, or -1 if the candidate is not a graph domain.
    int identify(const Domain& candidate) const { return find(candidate.key()); }

    int max_level() const;

private:
    PartitionP1 partition_;
    int R_;
    int extra_;
    std::vector<Domain> domains_;
    std::vector<Edge> edges_;
    std::vector<FrontierEdge> frontier_;
    std::vector<int> succ_;
    std::unordered_map<std::string, int> index_;
    std::unordered_map<long long, std::size_t> frontier_index_;
};

TowerGraph build_tower(const RayChoice& rc, int R, int extra_levels = 0);

struct StructuralReport {
    std::vector<int> level_counts;  // index = level
    int level_bound = 0;            // #critical points times kappa
    std::vector<Edge> sideways;
    std::vector<std::string> violations;
    int base_in_edges = 0;

    bool ok() const { return violations.empty(); }
};

StructuralReport structural_checks(const TowerGraph& g);

/// Follows lifts of angles through the graph and beyond it.
///
/// Off-graph domains are built on demand and cached per tracer, so a tracer
/// must not be shared between threads. Nodes >= 0 are graph ids; nodes <= -2
/// are detached domains.
class Tracer {
public:
    explicit Tracer(const TowerGraph& g);

    int next(int node, Symbol s);
    int level(int node) const;
    bool in_graph(int node) const { return node >= 0; }
    const Domain& domain(int node) const;
    const TowerGraph& graph() const { return *g_; }

private:
    int intern(Domain d);

    const TowerGraph* g_;
    std::vector<Domain> extra_;
    std::vector<std::vector<int>> extra_succ_; // node, or a sentinel for unknown / empty
    std::unordered_map<std::string, int> extra_index_;
};

struct TraceStep {
    int node;
    int level;
};

struct TraceResult {
    std::vector<TraceStep> path; // n + 1 entries, path[0] is the start
    int exit_time = -1;          // first k with level > R, or -1
    int exit_level = -1;
};

TraceResult trace(const Angle& a, const TowerGraph& g, std::size_t n, int start_id = 0);

struct MergeResult {
    bool merged = false;
    int time = -1;
    bool climbed = false; // one lift kept its level above R at the horizon with increasing ages
    std::string diagnosis;
};

MergeResult fiber_merge(const Angle& a, const TowerGraph& g, int d1, int d2, std::size_t horizon);

} // namespace hofbauer
