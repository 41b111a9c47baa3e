#pragma once

#include <string>
#include <vector>

#include "hofbauer/angle.hpp"

namespace hofbauer {

/// Half-open circle arc [start, start + length), 0 < length <= 1.
struct Arc {
    Angle start;
    mpq_class length;

    Angle end() const { return start.shifted(length); }
    bool contains(const Angle& x) const;
    bool closure_contains(const Angle& x) const;

    friend bool operator==(const Arc& a, const Arc& b) {
        return a.start == b.start && a.length == b.length;
    }
};

/// Finite disjoint union of half-open arcs, kept in canonical form:
/// components sorted by start, adjacent components merged (also across 0),
/// and the full circle stored as the single arc [0, 1).
class ArcSet {
public:
    ArcSet() = default;

    static ArcSet full();
    static ArcSet from_arcs(std::vector<Arc> arcs);
    static ArcSet arc(const Angle& start, const Angle& end);

    const std::vector<Arc>& components() const { return arcs_; }
    bool empty() const { return arcs_.empty(); }
    bool is_full() const { return full_; }
    mpq_class total_length() const;

    bool contains(const Angle& x) const;
    bool closure_contains(const Angle& x) const;
    /// Double-precision membership, for hot loops over sampled angles.
    bool contains_approx(double x) const;
    /// Membership of a cursor's current point; exact only near an endpoint.
    bool contains(const AngleCursor& cur) const;

    ArcSet intersect(const ArcSet& other) const;
    ArcSet unite(const ArcSet& other) const;
    ArcSet complement() const;
    ArcSet minus(const ArcSet& other) const;

    /// Image under multiplication by d. Components of length >= 1/d cover
    /// the circle; shorter ones map affinely. Callers supply arcs on which
    /// the map is injective.
    ArcSet times(unsigned degree) const;
    /// Full preimage under multiplication by d.
    ArcSet preimage(unsigned degree) const;

    /// All component endpoints (starts and ends), sorted.
    std::vector<Angle> endpoints() const;

    /// Canonical serialization, e.g. "[1/4,3/4)|[7/8,1/8)"; "[0/1,1/1)" for the circle.
    std::string key() const;

    /// Midpoint of the longest component (first in circular order on ties).
    Angle longest_component_midpoint() const;

    friend bool operator==(const ArcSet& a, const ArcSet& b) {
        return a.full_ == b.full_ && a.arcs_ == b.arcs_;
    }

private:
    std::vector<Arc> arcs_;
    bool full_ = false;
};

} // namespace hofbauer
