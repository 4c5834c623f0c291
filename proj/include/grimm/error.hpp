#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace grimm {

// Raised when a PrimeTable does not reach far enough for the requested
// computation. Carries the smallest limit that would have worked.
class table_too_small : public std::out_of_range {
public:
    table_too_small(std::uint64_t required, std::uint64_t available)
        : std::out_of_range("prime table limit " + std::to_string(available) +
                            " too small; need at least " + std::to_string(required)),
          required_(required) {}

    std::uint64_t required_limit() const noexcept { return required_; }

private:
    std::uint64_t required_;
};

// The g / g1 searches ran past their loop cap without terminating.
class cap_exceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace grimm
