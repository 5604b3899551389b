#ifndef MULTARR_ERRORS_HPP
#define MULTARR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace multarr {

// Bad user input: unreadable file, malformed data, violated precondition.
// The CLI maps this to exit code 1.
struct input_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A consistency check that can only fail if the implementation (or the
// mathematics it relies on) is broken. The CLI maps this to exit code 2.
struct internal_error : std::logic_error {
    using std::logic_error::logic_error;
};

inline void require_input(bool cond, const std::string& msg) {
    if (!cond) throw input_error(msg);
}

inline void require_internal(bool cond, const std::string& msg) {
    if (!cond) throw internal_error(msg);
}

} // namespace multarr

#endif
