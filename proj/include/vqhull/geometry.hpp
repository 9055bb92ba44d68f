#ifndef VQHULL_GEOMETRY_HPP
#define VQHULL_GEOMETRY_HPP

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <new>
#include <span>
#include <utility>
#include <vector>

namespace vqhull {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point& a, const Point& b) {
        return a.x == b.x && a.y == b.y;
    }
};

/// Ordered point pair (p -> q); the open half-plane to its left drives all
/// classification. p == q is allowed (degenerate bootstrap edge).
struct DirectedEdge {
    Point p;
    Point q;
};

/// Strict left-of test: (p_x - u_x)(q_y - u_y) > (p_y - u_y)(q_x - u_x).
/// Collinear points are never "left". Error-free for integer coordinates of
/// magnitude below 2^25, where every product is exactly representable.
inline bool is_left_of(Point u, const DirectedEdge& e) {
    return (e.p.x - u.x) * (e.q.y - u.y) > (e.p.y - u.y) * (e.q.x - u.x);
}

/// Strict farther-from-line test for two points on the left side of e:
/// (q_y - p_y)(u_x - u'_x) < (q_x - p_x)(u_y - u'_y).
inline bool is_farther(Point u, Point u_prime, const DirectedEdge& e) {
    return (e.q.y - e.p.y) * (u.x - u_prime.x) <
           (e.q.x - e.p.x) * (u.y - u_prime.y);
}

/// Signed lateral offset used by the fused farthest-point tracking. For two
/// points on the left of e, lateral_offset(u) < lateral_offset(u') is
/// algebraically is_farther(u, u', e); on integer coordinates < 2^25 the two
/// agree exactly. Both products must stay uncontracted (no FMA) so the scalar
/// and vector paths round identically.
inline double lateral_offset(Point u, const DirectedEdge& e) {
    return (e.q.y - e.p.y) * u.x - (e.q.x - e.p.x) * u.y;
}

namespace detail {

// 64-byte aligned allocation keeps point indices and cachelines in phase:
// element i starts a cacheline exactly when i % 8 == 0.
template <class T, std::size_t Align>
struct AlignedAllocator {
    using value_type = T;

    // The non-type Align parameter defeats automatic rebinding.
    template <class U>
    struct rebind {
        using other = AlignedAllocator<U, Align>;
    };

    AlignedAllocator() = default;
    template <class U>
    AlignedAllocator(const AlignedAllocator<U, Align>&) {}

    T* allocate(std::size_t n) {
        if (n == 0) return nullptr;
        void* p = ::operator new(n * sizeof(T), std::align_val_t(Align));
        return static_cast<T*>(p);
    }
    void deallocate(T* p, std::size_t) noexcept {
        ::operator delete(p, std::align_val_t(Align));
    }

    template <class U>
    bool operator==(const AlignedAllocator<U, Align>&) const { return true; }
};

}  // namespace detail

using CoordVec = std::vector<double, detail::AlignedAllocator<double, 64>>;

/// Structure-of-arrays planar point container: x and y live in two separate
/// cacheline-aligned arrays of equal length.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(std::size_t n) : xs_(n, 0.0), ys_(n, 0.0) {}

    std::size_t size() const { return xs_.size(); }
    bool empty() const { return xs_.empty(); }

    void reserve(std::size_t n) { xs_.reserve(n); ys_.reserve(n); }
    void resize(std::size_t n) { xs_.resize(n); ys_.resize(n); }
    void clear() { xs_.clear(); ys_.clear(); }

    void push_back(Point p) {
        xs_.push_back(p.x);
        ys_.push_back(p.y);
    }

    Point operator[](std::size_t i) const { return {xs_[i], ys_[i]}; }
    void set(std::size_t i, Point p) { xs_[i] = p.x; ys_[i] = p.y; }

    double* xs() { return xs_.data(); }
    double* ys() { return ys_.data(); }
    const double* xs() const { return xs_.data(); }
    const double* ys() const { return ys_.data(); }

    std::span<const double> xs_span() const { return {xs_.data(), xs_.size()}; }
    std::span<const double> ys_span() const { return {ys_.data(), ys_.size()}; }

    friend bool operator==(const PointSet& a, const PointSet& b) {
        return a.xs_ == b.xs_ && a.ys_ == b.ys_;
    }

private:
    CoordVec xs_;
    CoordVec ys_;
};

/// Indices of the leftmost and rightmost points. Ties on x are broken by
/// minimal y for the leftmost and maximal y for the rightmost, so the result
/// does not depend on scan order, worker count, or lane width.
/// Throws std::invalid_argument on an empty set.
std::pair<std::size_t, std::size_t> find_extremes(const PointSet& points);

/// Same as above on raw coordinate arrays; `reads` (when non-null) counts
/// coordinate loads for traffic accounting.
std::pair<std::size_t, std::size_t> find_extremes(const double* xs,
                                                  const double* ys,
                                                  std::size_t n,
                                                  std::uint64_t* reads = nullptr);

}  // namespace vqhull

#endif  // VQHULL_GEOMETRY_HPP
