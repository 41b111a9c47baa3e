#include "hofbauer/symbolic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hofbauer {

void RayChoice::validate() const {
    if (degree < 2) throw std::invalid_argument("degree must be at least 2");
    if (angles.empty() || angles.size() > 2)
        throw std::invalid_argument("kappa must be 1 or 2, got " + std::to_string(angles.size()));
    for (std::size_t i = 0; i < angles.size(); ++i) {
        const OrbitShape sh = orbit_shape(angles[i], degree);
        if (sh.preperiod == 0)
            throw std::invalid_argument("angle " + angles[i].to_string() +
                                        " is periodic, not strictly preperiodic");
        for (std::size_t j = 0; j < i; ++j)
            if (angles[j] == angles[i])
                throw std::invalid_argument("duplicate critical value angle " +
                                            angles[i].to_string());
    }
}

PartitionP1::PartitionP1(const RayChoice& rc) : rays_(rc), degree_(rc.degree) {
    rc.validate();
    for (const Angle& t : rc.angles)
        for (unsigned j = 0; j < degree_; ++j)
            boundary_.push_back(Angle((t.value() + j) / degree_));
    std::sort(boundary_.begin(), boundary_.end());
    boundary_.erase(std::unique(boundary_.begin(), boundary_.end()), boundary_.end());
    const std::size_t n = boundary_.size();
    for (std::size_t k = 0; k < n; ++k) {
        boundary_approx_.push_back(boundary_[k].to_double());
        arcs_.push_back(ArcSet::arc(boundary_[k], boundary_[(k + 1) % n]));
    }
}

Symbol PartitionP1::symbol(const Angle& a) const {
    auto it = std::upper_bound(boundary_.begin(), boundary_.end(), a);
    if (it == boundary_.begin()) return static_cast<Symbol>(boundary_.size() - 1);
    return static_cast<Symbol>(std::distance(boundary_.begin(), it) - 1);
}

Symbol PartitionP1::symbol(const AngleCursor& cur) const {
    const double x = cur.approx();
    constexpr double eps = 1e-9;
    bool near = false;
    for (double b : boundary_approx_) {
        double gap = std::fabs(x - b);
        gap = std::min(gap, 1.0 - gap);
        if (gap < eps) {
            near = true;
            break;
        }
    }
    if (near) {
        Symbol s = static_cast<Symbol>(boundary_.size() - 1);
        for (std::size_t k = 0; k < boundary_.size(); ++k)
            if (cur.compare(boundary_[k]) >= 0) s = static_cast<Symbol>(k);
        return s;
    }
    auto it = std::upper_bound(boundary_approx_.begin(), boundary_approx_.end(), x);
    if (it == boundary_approx_.begin()) return static_cast<Symbol>(boundary_.size() - 1);
    return static_cast<Symbol>(std::distance(boundary_approx_.begin(), it) - 1);
}

bool PartitionP1::is_boundary(const Angle& a) const {
    return std::binary_search(boundary_.begin(), boundary_.end(), a);
}

PartitionP1 build_partition(const RayChoice& rc) { return PartitionP1(rc); }

Word itinerary(const Angle& a, const PartitionP1& p, std::size_t n) {
    Word w;
    w.reserve(n);
    Angle x = a;
    for (std::size_t k = 0; k < n; ++k) {
        w.push_back(p.symbol(x));
        x = x.times(p.degree());
    }
    return w;
}

ArcSet cylinder_arcset(const Word& w, const PartitionP1& p) {
    if (w.empty()) throw std::invalid_argument("cylinder of an empty word");
    // Pull back from the last symbol; the degree map is injective on each arc.
    ArcSet s = p.arc(w.back());
    for (std::size_t k = w.size() - 1; k-- > 0;) {
        s = p.arc(w[k]).intersect(s.preimage(p.degree()));
        if (s.empty()) return s;
    }
    return s;
}

namespace {

void extend(const PartitionP1& p, std::size_t m, Word& w, const ArcSet& image,
            std::vector<Word>& out) {
    if (w.size() == m) {
        out.push_back(w);
        return;
    }
    for (Symbol s = 0; s < static_cast<Symbol>(p.size()); ++s) {
        ArcSet piece = image.intersect(p.arc(s));
        if (piece.empty()) continue;
        w.push_back(s);
        extend(p, m, w, piece.times(p.degree()), out);
        w.pop_back();
    }
}

} // namespace

std::vector<Word> admissible_words(const PartitionP1& p, std::size_t m) {
    std::vector<Word> out;
    Word w;
    extend(p, m, w, ArcSet::full(), out);
    return out;
}

bool hits_boundary(const Angle& a, const PartitionP1& p, std::size_t horizon) {
    AngleCursor cur(a, p.degree());
    for (std::size_t k = 0; k < horizon; ++k) {
        const double x = cur.approx();
        for (std::size_t j = 0; j < p.boundary().size(); ++j) {
            double gap = std::fabs(x - p.boundary()[j].to_double());
            gap = std::min(gap, 1.0 - gap);
            if (gap < 1e-9 && cur.compare(p.boundary()[j]) == 0) return true;
        }
        cur.advance();
    }
    return false;
}

std::string word_string(const Word& w) {
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(w[i]);
    }
    return s;
}

} // namespace hofbauer
