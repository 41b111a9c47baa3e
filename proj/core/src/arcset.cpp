#include "hofbauer/arcset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hofbauer {
namespace {

// Real half-open interval inside [0, 1].
struct Piece {
    mpq_class lo;
    mpq_class hi;
};

// Splits arcs at 0 into pieces of [0, 1).
std::vector<Piece> unroll(const std::vector<Arc>& arcs) {
    std::vector<Piece> out;
    out.reserve(arcs.size() + 1);
    for (const Arc& a : arcs) {
        const mpq_class& s = a.start.value();
        mpq_class e = s + a.length;
        if (e <= 1) {
            out.push_back({s, e});
        } else {
            out.push_back({s, mpq_class(1)});
            out.push_back({mpq_class(0), e - 1});
        }
    }
    return out;
}

std::vector<Piece> merge(std::vector<Piece> ps) {
    std::erase_if(ps, [](const Piece& p) { return p.hi <= p.lo; });
    std::sort(ps.begin(), ps.end(), [](const Piece& a, const Piece& b) { return a.lo < b.lo; });
    std::vector<Piece> out;
    for (auto& p : ps) {
        if (!out.empty() && p.lo <= out.back().hi) {
            if (p.hi > out.back().hi) out.back().hi = p.hi;
        } else {
            out.push_back(std::move(p));
        }
    }
    return out;
}

} // namespace

bool Arc::contains(const Angle& x) const {
    if (length >= 1) return true;
    return frac(x.value() - start.value()) < length;
}

bool Arc::closure_contains(const Angle& x) const {
    if (length >= 1) return true;
    return frac(x.value() - start.value()) <= length;
}

ArcSet ArcSet::full() {
    ArcSet s;
    s.arcs_.push_back({Angle(), mpq_class(1)});
    s.full_ = true;
    return s;
}

ArcSet ArcSet::arc(const Angle& start, const Angle& end) {
    mpq_class len = frac(end.value() - start.value());
    if (len == 0) return full();
    return from_arcs({Arc{start, len}});
}

ArcSet ArcSet::from_arcs(std::vector<Arc> arcs) {
    for (Arc& a : arcs) {
        a.length.canonicalize(); // callers may build lengths as mpq_class(p, q)
        if (a.length < 0) throw std::invalid_argument("arc with negative length");
        if (a.length >= 1) return full();
    }
    std::vector<Piece> ps = merge(unroll(arcs));
    ArcSet out;
    if (ps.empty()) return out;
    if (ps.size() == 1 && ps[0].lo == 0 && ps[0].hi == 1) return full();
    const bool wraps = ps.size() > 1 && ps.front().lo == 0 && ps.back().hi == 1;
    std::size_t first = 0;
    std::size_t last = ps.size();
    if (wraps) {
        first = 1;
        last = ps.size() - 1;
    }
    for (std::size_t i = first; i < last; ++i)
        out.arcs_.push_back({Angle(ps[i].lo), ps[i].hi - ps[i].lo});
    if (wraps) {
        const Piece& tail = ps.back();
        const Piece& head = ps.front();
        out.arcs_.push_back({Angle(tail.lo), (tail.hi - tail.lo) + (head.hi - head.lo)});
    }
    return out;
}

mpq_class ArcSet::total_length() const {
    mpq_class s = 0;
    for (const Arc& a : arcs_) s += a.length;
    return s;
}

bool ArcSet::contains(const Angle& x) const {
    return std::any_of(arcs_.begin(), arcs_.end(), [&](const Arc& a) { return a.contains(x); });
}

bool ArcSet::closure_contains(const Angle& x) const {
    return std::any_of(arcs_.begin(), arcs_.end(),
                       [&](const Arc& a) { return a.closure_contains(x); });
}

bool ArcSet::contains_approx(double x) const {
    if (full_) return true;
    for (const Arc& a : arcs_) {
        double d = x - a.start.to_double();
        if (d < 0) d += 1.0;
        if (d < a.length.get_d()) return true;
    }
    return false;
}

bool ArcSet::contains(const AngleCursor& cur) const {
    if (full_) return true;
    const double x = cur.approx();
    constexpr double eps = 1e-9;
    for (const Arc& a : arcs_) {
        double d = x - a.start.to_double();
        if (d < 0) d += 1.0;
        const double len = a.length.get_d();
        if (d < eps || std::fabs(d - len) < eps || d > 1.0 - eps) return contains(cur.exact());
        if (d < len) return true;
    }
    return false;
}

ArcSet ArcSet::intersect(const ArcSet& other) const {
    if (full_) return other;
    if (other.full_) return *this;
    const auto a = merge(unroll(arcs_));
    const auto b = merge(unroll(other.arcs_));
    std::vector<Arc> out;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        const mpq_class& lo = a[i].lo > b[j].lo ? a[i].lo : b[j].lo;
        const mpq_class& hi = a[i].hi < b[j].hi ? a[i].hi : b[j].hi;
        if (lo < hi) out.push_back({Angle(lo), hi - lo});
        if (a[i].hi < b[j].hi) ++i; else ++j;
    }
    return from_arcs(std::move(out));
}

ArcSet ArcSet::unite(const ArcSet& other) const {
    std::vector<Arc> all = arcs_;
    all.insert(all.end(), other.arcs_.begin(), other.arcs_.end());
    return from_arcs(std::move(all));
}

ArcSet ArcSet::complement() const {
    if (arcs_.empty()) return full();
    if (full_) return {};
    const auto ps = merge(unroll(arcs_));
    std::vector<Arc> out;
    mpq_class cursor = 0;
    for (const Piece& p : ps) {
        if (p.lo > cursor) out.push_back({Angle(cursor), p.lo - cursor});
        cursor = p.hi;
    }
    if (cursor < 1) out.push_back({Angle(cursor), 1 - cursor});
    return from_arcs(std::move(out));
}

ArcSet ArcSet::minus(const ArcSet& other) const { return intersect(other.complement()); }

ArcSet ArcSet::times(unsigned degree) const {
    std::vector<Arc> out;
    out.reserve(arcs_.size());
    for (const Arc& a : arcs_) {
        mpq_class len = a.length * degree;
        if (len >= 1) return full();
        out.push_back({a.start.times(degree), len});
    }
    return from_arcs(std::move(out));
}

ArcSet ArcSet::preimage(unsigned degree) const {
    if (full_) return full();
    std::vector<Arc> out;
    out.reserve(arcs_.size() * degree);
    for (const Arc& a : arcs_) {
        for (unsigned j = 0; j < degree; ++j) {
            mpq_class s = (a.start.value() + j) / degree;
            out.push_back({Angle(s), a.length / degree});
        }
    }
    return from_arcs(std::move(out));
}

std::vector<Angle> ArcSet::endpoints() const {
    std::vector<Angle> out;
    if (full_) return out;
    for (const Arc& a : arcs_) {
        out.push_back(a.start);
        out.push_back(a.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::string ArcSet::key() const {
    if (full_) return "[0/1,1/1)";
    std::string k;
    for (const Arc& a : arcs_) {
        if (!k.empty()) k += '|';
        k += '[' + a.start.to_string() + ',' + a.end().to_string() + ')';
    }
    return k;
}

Angle ArcSet::longest_component_midpoint() const {
    if (arcs_.empty()) throw std::logic_error("midpoint of an empty arc set");
    const Arc* best = &arcs_.front();
    for (const Arc& a : arcs_)
        if (a.length > best->length) best = &a;
    return best->start.shifted(best->length / 2);
}

} // namespace hofbauer
