#pragma once

#include <algorithm>
#include <span>
#include <stdexcept>
#include <vector>

namespace ageing {

// Right-continuous empirical distribution function F_n(x) = #{X_i <= x}/n,
// kept as a sorted copy of the sample. Prefix sums of the sorted values are
// stored alongside so tail sums like sum{X_i > x} X_i are O(log n).
class Ecdf {
public:
    explicit Ecdf(std::span<const double> sample) : sorted_(sample.begin(), sample.end()) {
        if (sorted_.empty()) {
            throw std::invalid_argument("Ecdf: sample must be non-empty");
        }
        std::sort(sorted_.begin(), sorted_.end());
        prefix_.resize(sorted_.size() + 1, 0.0);
        for (std::size_t i = 0; i < sorted_.size(); ++i) {
            prefix_[i + 1] = prefix_[i] + sorted_[i];
        }
    }

    double operator()(double x) const {
        return static_cast<double>(count_le(x)) / static_cast<double>(sorted_.size());
    }

    double survival(double x) const { return 1.0 - (*this)(x); }

    // Number of observations <= x (right continuity comes from upper_bound).
    std::size_t count_le(double x) const {
        return static_cast<std::size_t>(
            std::upper_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin());
    }

    // Number of observations strictly below x; also the first sorted index
    // with value >= x.
    std::size_t count_lt(double x) const {
        return static_cast<std::size_t>(
            std::lower_bound(sorted_.begin(), sorted_.end(), x) - sorted_.begin());
    }

    // Sum of observations strictly greater than x.
    double tail_sum(double x) const { return prefix_.back() - prefix_[count_le(x)]; }

    double mean() const { return prefix_.back() / static_cast<double>(sorted_.size()); }
    std::size_t size() const { return sorted_.size(); }
    double min() const { return sorted_.front(); }
    double max() const { return sorted_.back(); }
    const std::vector<double>& sorted() const { return sorted_; }

private:
    std::vector<double> sorted_;
    std::vector<double> prefix_;
};

} // namespace ageing
