#include "hofbauer/tower.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <stdexcept>

namespace hofbauer {

std::string Domain::key() const {
    std::string k = arcset.key();
    for (const CutPoint& c : cutpoints) {
        k += ';';
        k += std::to_string(c.age);
        k += ':';
        k += std::to_string(c.origin);
        k += ':';
        for (std::size_t i = 0; i < c.angles.size(); ++i) {
            if (i) k += ',';
            k += c.angles[i].to_string();
        }
    }
    return k;
}

int Domain::count_age(int age) const {
    return static_cast<int>(std::count_if(cutpoints.begin(), cutpoints.end(),
                                          [age](const CutPoint& c) { return c.age == age; }));
}

Domain build_base(const PartitionP1&) {
    Domain d;
    d.arcset = ArcSet::full();
    d.level = 0;
    d.base = true;
    return d;
}

namespace {

void sort_unique(std::vector<Angle>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

} // namespace

std::optional<Domain> step(const Domain& d, Symbol z, const PartitionP1& p) {
    const ArcSet& zarc = p.arc(z);
    ArcSet piece = d.arcset.intersect(zarc);
    if (piece.empty()) return std::nullopt;
    const unsigned deg = p.degree();

    Domain out;
    out.arcset = piece.times(deg);

    for (const CutPoint& c : d.cutpoints) {
        CutPoint moved{c.age + 1, c.origin, {}};
        for (const Angle& a : c.angles)
            if (piece.closure_contains(a)) moved.angles.push_back(a.times(deg));
        if (moved.angles.empty()) continue;
        sort_unique(moved.angles);
        out.cutpoints.push_back(std::move(moved));
    }

    // The critical point sits at the ends of each partition arc.
    CutPoint fresh{1, 0, {}};
    const Arc& za = zarc.components().front();
    for (const Angle& b : {za.start, za.end()})
        if (piece.closure_contains(b)) fresh.angles.push_back(b.times(deg));
    if (!fresh.angles.empty()) {
        sort_unique(fresh.angles);
        out.cutpoints.push_back(std::move(fresh));
    }

    std::sort(out.cutpoints.begin(), out.cutpoints.end(), [](const CutPoint& a, const CutPoint& b) {
        return a.age != b.age ? a.age < b.age : a.origin < b.origin;
    });
    out.level = out.cutpoints.empty() ? 0 : out.cutpoints.back().age;
    return out;
}

TowerGraph::TowerGraph(PartitionP1 p, int R, int extra_levels)
    : partition_(std::move(p)), R_(R), extra_(extra_levels) {
    if (R < 0) throw std::invalid_argument("truncation level R must be >= 0");
    if (extra_levels < 0) throw std::invalid_argument("extra_levels must be >= 0");
    const std::size_t N = partition_.size();
    const int limit = R_ + extra_;

    Domain base = build_base(partition_);
    base.id = 0;
    index_.emplace(base.key(), 0);
    domains_.push_back(std::move(base));
    succ_.assign(N, kEmpty);

    std::deque<int> queue{0};
    while (!queue.empty()) {
        const int id = queue.front();
        queue.pop_front();
        for (Symbol s = 0; s < static_cast<Symbol>(N); ++s) {
            auto cand = step(domains_[static_cast<std::size_t>(id)], s, partition_);
            const std::size_t slot = static_cast<std::size_t>(id) * N + static_cast<std::size_t>(s);
            if (!cand) {
                succ_[slot] = kEmpty;
                continue;
            }
            const std::string k = cand->key();
            auto it = index_.find(k);
            if (it != index_.end()) {
                succ_[slot] = it->second;
                edges_.push_back({id, s, it->second});
            } else if (cand->level <= limit) {
                const int nid = static_cast<int>(domains_.size());
                cand->id = nid;
                index_.emplace(k, nid);
                domains_.push_back(std::move(*cand));
                succ_.resize(domains_.size() * N, kEmpty);
                succ_[slot] = nid;
                edges_.push_back({id, s, nid});
                queue.push_back(nid);
            } else {
                succ_[slot] = kFrontier;
                frontier_index_.emplace(static_cast<long long>(slot), frontier_.size());
                frontier_.push_back({id, s, std::move(*cand)});
            }
        }
    }
}

const FrontierEdge& TowerGraph::frontier_edge(int id, Symbol s) const {
    const long long slot =
        static_cast<long long>(id) * static_cast<long long>(partition_.size()) + s;
    auto it = frontier_index_.find(slot);
    if (it == frontier_index_.end()) throw std::out_of_range("no frontier edge at this slot");
    return frontier_[it->second];
}

std::vector<int> TowerGraph::frontier_ids() const {
    std::vector<int> ids;
    for (const FrontierEdge& f : frontier_) ids.push_back(f.from);
    std::sort(ids.begin(), ids.end());
    ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
    return ids;
}

int TowerGraph::find(const std::string& key) const {
    auto it = index_.find(key);
    return it == index_.end() ? -1 : it->second;
}

int TowerGraph::max_level() const {
    int m = 0;
    for (const Domain& d : domains_) m = std::max(m, d.level);
    return m;
}

TowerGraph build_tower(const RayChoice& rc, int R, int extra_levels) {
    return TowerGraph(build_partition(rc), R, extra_levels);
}

StructuralReport structural_checks(const TowerGraph& g) {
    StructuralReport rep;
    const PartitionP1& p = g.partition();
    rep.level_bound = static_cast<int>(p.rays().kappa()); // one critical point
    rep.level_counts.assign(static_cast<std::size_t>(g.max_level()) + 1, 0);
    for (const Domain& d : g.domains()) ++rep.level_counts[static_cast<std::size_t>(d.level)];
    for (std::size_t l = 1; l < rep.level_counts.size(); ++l)
        if (rep.level_counts[l] > rep.level_bound)
            rep.violations.push_back("level " + std::to_string(l) + " has " +
                                     std::to_string(rep.level_counts[l]) + " domains, bound " +
                                     std::to_string(rep.level_bound));

    auto check_edge = [&](const Domain& from, Symbol s, const Domain& to) {
        const std::string where = "edge " + std::to_string(from.id) + " -" + std::to_string(s) +
                                  "-> " + (to.id >= 0 ? std::to_string(to.id) : "frontier");
        if (to.level > from.level + 1)
            rep.violations.push_back(where + ": level jumps from " + std::to_string(from.level) +
                                     " to " + std::to_string(to.level));
        ArcSet img = from.arcset.intersect(p.arc(s)).times(p.degree());
        if (!(img == to.arcset))
            rep.violations.push_back(where + ": image " + img.key() + " differs from target " +
                                     to.arcset.key());
    };
    for (const Edge& e : g.edges()) {
        const Domain& from = g.domain(e.from);
        const Domain& to = g.domain(e.to);
        check_edge(from, e.symbol, to);
        if (from.level == to.level) rep.sideways.push_back(e);
        if (to.base) ++rep.base_in_edges;
    }
    for (const FrontierEdge& f : g.frontier_edges()) check_edge(g.domain(f.from), f.symbol, f.marker);
    if (rep.base_in_edges > 0)
        rep.violations.push_back("base has " + std::to_string(rep.base_in_edges) + " in-edges");

    for (const Domain& d : g.domains()) {
        std::map<std::pair<int, int>, int> mult;
        for (const CutPoint& c : d.cutpoints) {
            if (c.angles.empty())
                rep.violations.push_back("domain " + std::to_string(d.id) + ": cutpoint without angles");
            if (++mult[{c.age, c.origin}] > 1)
                rep.violations.push_back("domain " + std::to_string(d.id) + ": repeated age " +
                                         std::to_string(c.age));
        }
        const int lvl = d.cutpoints.empty() ? 0 : d.cutpoints.back().age;
        if (lvl != d.level)
            rep.violations.push_back("domain " + std::to_string(d.id) + ": level mismatch");
    }
    return rep;
}

namespace {
// Virtual nodes count down from -2, so the cache sentinels sit far below them.
constexpr int kUnknown = std::numeric_limits<int>::min();
constexpr int kNone = kUnknown + 1;
} // namespace

Tracer::Tracer(const TowerGraph& g) : g_(&g) {}

int Tracer::intern(Domain d) {
    const std::string k = d.key();
    const int gid = g_->find(k);
    if (gid >= 0) return gid;
    auto it = extra_index_.find(k);
    if (it != extra_index_.end()) return it->second;
    const int node = -2 - static_cast<int>(extra_.size());
    extra_index_.emplace(k, node);
    extra_.push_back(std::move(d));
    extra_succ_.emplace_back(g_->partition().size(), kUnknown);
    return node;
}

int Tracer::next(int node, Symbol s) {
    if (node >= 0) {
        const int nx = g_->successor(node, s);
        if (nx >= 0) return nx;
        if (nx == TowerGraph::kEmpty)
            throw std::logic_error("trace left the domain's arc set (empty successor)");
        return intern(g_->frontier_edge(node, s).marker);
    }
    const std::size_t k = static_cast<std::size_t>(-2 - node);
    int cached = extra_succ_[k][static_cast<std::size_t>(s)];
    if (cached == kNone) throw std::logic_error("trace left the domain's arc set (empty successor)");
    if (cached != kUnknown) return cached;
    auto cand = step(extra_[k], s, g_->partition());
    if (!cand) {
        extra_succ_[k][static_cast<std::size_t>(s)] = kNone;
        throw std::logic_error("trace left the domain's arc set (empty successor)");
    }
    const int nx = intern(std::move(*cand));
    extra_succ_[k][static_cast<std::size_t>(s)] = nx;
    return nx;
}

const Domain& Tracer::domain(int node) const {
    if (node >= 0) return g_->domain(node);
    return extra_.at(static_cast<std::size_t>(-2 - node));
}

int Tracer::level(int node) const { return domain(node).level; }

TraceResult trace(const Angle& a, const TowerGraph& g, std::size_t n, int start_id) {
    Tracer tr(g);
    TraceResult res;
    AngleCursor cur(a, g.partition().degree());
    int node = start_id;
    res.path.push_back({node, tr.level(node)});
    for (std::size_t k = 1; k <= n; ++k) {
        node = tr.next(node, g.partition().symbol(cur));
        cur.advance();
        const int lvl = tr.level(node);
        res.path.push_back({node, lvl});
        if (res.exit_time < 0 && lvl > g.R()) {
            res.exit_time = static_cast<int>(k);
            res.exit_level = lvl;
        }
    }
    return res;
}

MergeResult fiber_merge(const Angle& a, const TowerGraph& g, int d1, int d2, std::size_t horizon) {
    if (!g.domain(d1).arcset.contains(a) || !g.domain(d2).arcset.contains(a))
        throw std::invalid_argument("angle " + a.to_string() + " is not in both domains");
    MergeResult res;
    if (d1 == d2) {
        res.merged = true;
        res.time = 0;
        res.diagnosis = "identical domains";
        return res;
    }
    Tracer tr(g);
    AngleCursor cur(a, g.partition().degree());
    int x = d1, y = d2;
    int lx = tr.level(x), ly = tr.level(y);
    std::size_t x_streak = 0, y_streak = 0; // consecutive one-level climbs
    for (std::size_t k = 1; k <= horizon; ++k) {
        const Symbol s = g.partition().symbol(cur);
        cur.advance();
        x = tr.next(x, s);
        y = tr.next(y, s);
        const int nlx = tr.level(x), nly = tr.level(y);
        x_streak = nlx == lx + 1 ? x_streak + 1 : 0;
        y_streak = nly == ly + 1 ? y_streak + 1 : 0;
        lx = nlx;
        ly = nly;
        if (x == y) {
            res.merged = true;
            res.time = static_cast<int>(k);
            res.diagnosis = "merged";
            return res;
        }
    }
    const std::size_t need = std::min<std::size_t>(horizon, static_cast<std::size_t>(g.R()) + 1);
    res.climbed = (lx > g.R() && x_streak >= need) || (ly > g.R() && y_streak >= need);
    res.diagnosis = res.climbed ? "a lift climbed out of the truncated tower"
                                : "no merge within horizon";
    return res;
}

} // namespace hofbauer
