#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace betasparse {

/// Data vector y with its support I = {i : y_i > 0}.
///
/// Observations are non-negative. The one exception is signed data for the
/// Euclidean case (beta = 2), where d_2 extends to all reals; such
/// observations must be built with Observation::signed_data and are rejected
/// by every routine that needs y >= 0.
class Observation {
public:
    explicit Observation(std::vector<double> y);
    static Observation signed_data(std::vector<double> y);

    std::span<const double> values() const noexcept { return y_; }
    std::size_t size() const noexcept { return y_.size(); }
    double operator[](std::size_t i) const { return y_[i]; }
    const std::vector<std::size_t>& support() const noexcept { return support_; }
    bool is_nonnegative() const noexcept { return nonnegative_; }

private:
    Observation(std::vector<double> y, bool allow_negative);

    std::vector<double> y_;
    std::vector<std::size_t> support_;
    bool nonnegative_ = true;
};

}  // namespace betasparse
