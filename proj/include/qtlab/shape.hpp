#ifndef QTLAB_SHAPE_HPP
#define QTLAB_SHAPE_HPP

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace qtlab {

// A multi-index (j_1,...,j_m); entries are 1-based per factor for
// column selection, 0-based labels are used for vertices.
using MultiIndex = std::vector<int>;

// The tuple (n_1,...,n_m) describing a product of simplices.
class Shape {
public:
    explicit Shape(std::vector<int> dims) : dims_(std::move(dims)) {
        if (dims_.empty()) throw std::invalid_argument("Shape: need at least one factor");
        for (int d : dims_)
            if (d < 1) throw std::invalid_argument("Shape: factor dimensions must be >= 1");
    }

    const std::vector<int>& dims() const { return dims_; }
    int dim(std::size_t i) const { return dims_[i]; }
    int factors() const { return static_cast<int>(dims_.size()); }  // m
    int total() const {                                             // n
        int n = 0;
        for (int d : dims_) n += d;
        return n;
    }
    int facet_count() const { return total() + factors(); }
    std::uint64_t vertex_count() const {
        std::uint64_t c = 1;
        for (int d : dims_) c *= static_cast<std::uint64_t>(d) + 1;
        return c;
    }
    std::uint64_t multi_index_count() const {
        std::uint64_t c = 1;
        for (int d : dims_) c *= static_cast<std::uint64_t>(d);
        return c;
    }

    bool operator==(const Shape& o) const { return dims_ == o.dims_; }
    bool operator!=(const Shape& o) const { return dims_ != o.dims_; }

private:
    std::vector<int> dims_;
};

namespace detail {

// Lazy odometer over tuples lo_i <= x_i <= hi_i, lexicographic order.
class OdometerRange {
public:
    class iterator {
    public:
        using value_type = std::vector<int>;

        iterator() : done_(true) {}
        iterator(std::vector<int> lo, std::vector<int> hi)
            : lo_(std::move(lo)), hi_(std::move(hi)), cur_(lo_), done_(false) {}

        const std::vector<int>& operator*() const { return cur_; }
        iterator& operator++() {
            int i = static_cast<int>(cur_.size()) - 1;
            while (i >= 0) {
                if (cur_[i] < hi_[i]) {
                    ++cur_[i];
                    return *this;
                }
                cur_[i] = lo_[i];
                --i;
            }
            done_ = true;
            return *this;
        }
        bool operator==(const iterator& o) const {
            if (done_ != o.done_) return false;
            return done_ || cur_ == o.cur_;
        }
        bool operator!=(const iterator& o) const { return !(*this == o); }

    private:
        std::vector<int> lo_, hi_, cur_;
        bool done_;
    };

    OdometerRange(std::vector<int> lo, std::vector<int> hi)
        : lo_(std::move(lo)), hi_(std::move(hi)) {}

    iterator begin() const { return iterator(lo_, hi_); }
    iterator end() const { return iterator(); }

private:
    std::vector<int> lo_, hi_;
};

}  // namespace detail

// Vertex labels (j_1,...,j_m) with 0 <= j_i <= n_i.
inline detail::OdometerRange vertices(const Shape& s) {
    std::vector<int> lo(s.dims().size(), 0);
    return detail::OdometerRange(lo, s.dims());
}

// Multi-indices (j_1,...,j_m) with 1 <= j_i <= n_i, lexicographic.
inline detail::OdometerRange multi_indices(const Shape& s) {
    std::vector<int> lo(s.dims().size(), 1);
    return detail::OdometerRange(lo, s.dims());
}

}  // namespace qtlab

#endif
