#pragma once

#include "vortlab/errors.hpp"
#include "vortlab/field.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace vortlab {

/// Fields sampled on a uniform time lattice.
template <class Field>
struct Trajectory {
    std::vector<double> times;
    std::vector<Field> fields;

    std::size_t size() const { return times.size(); }
    double dt() const { return times.size() > 1 ? times[1] - times[0] : 0.0; }

    /// Throws PreconditionError unless times are strictly increasing and uniform.
    void validate() const
    {
        if (times.size() != fields.size()) {
            throw PreconditionError("trajectory has mismatched times and fields");
        }
        if (times.size() < 2) {
            return;
        }
        const double step = times[1] - times[0];
        for (std::size_t i = 1; i < times.size(); ++i) {
            const double d = times[i] - times[i - 1];
            if (!(d > 0.0) || std::abs(d - step) > 1e-9 * std::max(step, std::abs(times[i]))) {
                throw PreconditionError("trajectory times must be strictly increasing and uniform");
            }
        }
    }
};

using ScalarTrajectory = Trajectory<ScalarField>;
using VectorTrajectory = Trajectory<VectorField>;

/// Uniform lattice of `count` times from 0 to t_end inclusive.
std::vector<double> uniform_times(double t_end, int count);

} // namespace vortlab
