#pragma once

#include <cstdint>
#include <vector>

#include "hofbauer/angle.hpp"
#include "hofbauer/arcset.hpp"

namespace hofbauer {

using Symbol = int;
using Word = std::vector<Symbol>;

/// Degree plus the external angles chosen at the critical value.
struct RayChoice {
    unsigned degree = 2;
    std::vector<Angle> angles;

    std::size_t kappa() const { return angles.size(); }
    /// Throws std::invalid_argument when an angle is periodic or kappa is not 1 or 2.
    void validate() const;
};

/// The circle cut at all d-th preimages of the chosen angles.
///
/// Arc k is [boundary[k], boundary[k+1]) with the last one wrapping through 0.
class PartitionP1 {
public:
    explicit PartitionP1(const RayChoice& rc);

    unsigned degree() const { return degree_; }
    std::size_t size() const { return boundary_.size(); }
    const std::vector<Angle>& boundary() const { return boundary_; }
    const ArcSet& arc(Symbol s) const { return arcs_.at(static_cast<std::size_t>(s)); }
    const RayChoice& rays() const { return rays_; }

    Symbol symbol(const Angle& a) const;
    /// Same as symbol() but on a cursor; exact comparison only near a boundary.
    Symbol symbol(const AngleCursor& cur) const;

    bool is_boundary(const Angle& a) const;

private:
    RayChoice rays_;
    unsigned degree_;
    std::vector<Angle> boundary_;
    std::vector<double> boundary_approx_;
    std::vector<ArcSet> arcs_;
};

PartitionP1 build_partition(const RayChoice& rc);

Word itinerary(const Angle& a, const PartitionP1& p, std::size_t n);

/// Angles whose itinerary starts with w. Empty for non-admissible words.
ArcSet cylinder_arcset(const Word& w, const PartitionP1& p);

/// All words of length m with nonempty cylinder, in lexicographic order.
std::vector<Word> admissible_words(const PartitionP1& p, std::size_t m);

/// True when some iterate d^k a (k < horizon) lands on a partition boundary.
bool hits_boundary(const Angle& a, const PartitionP1& p, std::size_t horizon);

std::string word_string(const Word& w);

} // namespace hofbauer
