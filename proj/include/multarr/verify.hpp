#ifndef MULTARR_VERIFY_HPP
#define MULTARR_VERIFY_HPP

#include <string>
#include <vector>

namespace multarr {

struct VerifyItem {
    std::string id;
    bool pass = false;
    std::string detail;
    long ms = 0;
};

/// Names of the verification items, in execution order.
std::vector<std::string> verify_item_names();

/// Runs the verification suite (all items, or the subset whose ids contain
/// one of the `only` substrings). Each item runs exact checks and never
/// throws; failures come back as pass = false with diagnostics.
std::vector<VerifyItem> verify_paper(const std::vector<std::string>& only = {});

} // namespace multarr

#endif
