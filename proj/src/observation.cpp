#include "betasparse/observation.hpp"

#include <cmath>
#include <string>

#include "betasparse/errors.hpp"

namespace betasparse {

Observation::Observation(std::vector<double> y) : Observation(std::move(y), false) {}

Observation Observation::signed_data(std::vector<double> y) { return Observation(std::move(y), true); }

Observation::Observation(std::vector<double> y, bool allow_negative) : y_(std::move(y)) {
    for (std::size_t i = 0; i < y_.size(); ++i) {
        if (!std::isfinite(y_[i])) throw InvalidArgument("Observation: non-finite entry");
        if (y_[i] < 0.0) {
            if (!allow_negative) {
                throw InvalidArgument("Observation: entry " + std::to_string(i) + " is negative");
            }
            nonnegative_ = false;
        }
        if (y_[i] > 0.0) support_.push_back(i);
    }
}

}  // namespace betasparse
