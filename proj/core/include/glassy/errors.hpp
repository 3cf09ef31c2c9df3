#pragma once

#include <stdexcept>
#include <string>

namespace glassy {

// Geometry packing gave up: the rejection budget was exhausted before all
// spins were placed.  Carries enough context to report the offending request.
class PackingFailure : public std::runtime_error {
public:
    PackingFailure(std::size_t placed, std::size_t requested, std::size_t attempts)
        : std::runtime_error("packing failed: placed " + std::to_string(placed) + " of "
                             + std::to_string(requested) + " spins after "
                             + std::to_string(attempts) + " rejected proposals"),
          placed_(placed), requested_(requested), attempts_(attempts) {}
    std::size_t placed() const { return placed_; }
    std::size_t requested() const { return requested_; }
    std::size_t attempts() const { return attempts_; }

private:
    std::size_t placed_, requested_, attempts_;
};

struct DegenerateGeometry : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientSpins : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Exact state-vector reference requested beyond its size cap.
struct TooLarge : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Closed-form expressions are only defined for interaction exponents
// alpha >= d; below that the relevant integrals diverge.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct QuadratureFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DegenerateCurve : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NonPositiveValue : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

} // namespace glassy
